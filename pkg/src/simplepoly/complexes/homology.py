"""Integral chain complexes and their homology."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NotAComplex
from .snf import sparse_smith


@dataclass
class ChainComplex:
    """``boundaries[k]`` maps C_k -> C_{k-1}; column ``j`` is ``{row: coeff}``."""

    dims: list
    boundaries: dict = field(default_factory=dict)

    def check(self):
        for k in sorted(self.boundaries):
            if k - 1 not in self.boundaries:
                continue
            lower = self.boundaries[k - 1]
            for col in self.boundaries[k]:
                acc = {}
                for i, v in col.items():
                    for r, w in lower[i].items():
                        acc[r] = acc.get(r, 0) + v * w
                if any(acc.values()):
                    raise NotAComplex(f"d{k - 1} o d{k} != 0")


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple = ()

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyResult:
    groups: tuple

    def __getitem__(self, k):
        if k < len(self.groups):
            return self.groups[k]
        return HomologyGroup(0)

    def betti(self):
        return tuple(g.rank for g in self.groups)

    def euler_characteristic(self):
        return sum((-1) ** k * g.rank for k, g in enumerate(self.groups))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.groups) + ")"


def homology(c, check=True):
    if check:
        c.check()
    top = len(c.dims) - 1
    ranks = {}
    torsion = {}
    for k in range(1, top + 1):
        d = c.boundaries.get(k, [{} for _ in range(c.dims[k])])
        res = sparse_smith(d, c.dims[k - 1])
        ranks[k] = res.rank
        torsion[k - 1] = res.torsion
    groups = []
    for k in range(top + 1):
        rank = c.dims[k] - ranks.get(k, 0) - ranks.get(k + 1, 0)
        groups.append(HomologyGroup(rank, tuple(torsion.get(k, ()))))
    return HomologyResult(tuple(groups))


def simplicial_chain_complex(simplices_by_dim):
    """Chain complex of an ordered simplicial complex.

    ``simplices_by_dim[k]`` is a list of sorted vertex tuples of length k+1.
    """
    index = [{s: i for i, s in enumerate(level)} for level in simplices_by_dim]
    dims = [len(level) for level in simplices_by_dim]
    bnd = {}
    for k in range(1, len(simplices_by_dim)):
        cols = []
        for s in simplices_by_dim[k]:
            col = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                col[index[k - 1][face]] = (-1) ** i
            cols.append(col)
        bnd[k] = cols
    return ChainComplex(dims, bnd)


def complex_homology(k2):
    """Homology of a ``SimplicialComplex2``."""
    levels = [[(v,) for v in k2.vertices], list(k2.edges), list(k2.triangles)]
    return homology(simplicial_chain_complex(levels))
