"""Collapsibility search for 2-complexes.

An elementary collapse removes a free face together with its unique
coface.  The search runs greedy random collapses with restarts and, for
small inputs, an exhaustive depth-first search over collapse orders.
Obstructions that hold for every order are reported as certificates.
"""
from __future__ import annotations

import random
from itertools import combinations
from collections import Counter
from dataclasses import dataclass, field

from .homology import homology, simplicial_chain_complex

COLLAPSED = "collapsed"
EXHAUSTED = "exhausted-budget"
IMPOSSIBLE = "proven-impossible"
_RANK = {COLLAPSED: 0, IMPOSSIBLE: 1, EXHAUSTED: 2}


@dataclass(frozen=True)
class CollapseResult:
    outcome: str
    target: str
    sequence: tuple = ()  # ((face, coface), ...)
    final: dict = field(default_factory=dict)
    certificate: str = ""
    seed: int | None = None

    def to_json(self):
        return {
            "outcome": self.outcome,
            "target": self.target,
            "sequence": [[list(f), list(c)] for f, c in self.sequence],
            "final": self.final,
            "certificate": self.certificate,
            "seed": self.seed,
        }


def _simplex_set(k):
    out = set()
    for s in k.simplices() if hasattr(k, "simplices") else k:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            # close downward so the input need not list faces
            out.update(_faces_of_size(s, r))
    return out


def _faces_of_size(s, r):
    return [tuple(c) for c in combinations(s, r)]


def _facets(s):
    return [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []


class _State:
    def __init__(self, simplices):
        self.alive = set(simplices)
        self.cof = {s: set() for s in self.alive}
        for s in self.alive:
            for f in _facets(s):
                self.cof[f].add(s)

    def free_pairs(self):
        out = []
        for s in self.alive:
            c = self.cof[s]
            if len(c) == 1:
                (t,) = c
                if not self.cof[t]:
                    out.append((s, t))
        return sorted(out)

    def collapse(self, face, coface):
        if face not in self.alive or self.cof[face] != {coface} or self.cof[coface]:
            raise ValueError(f"{face} is not a free face of {coface}")
        for s in (coface, face):
            self.alive.discard(s)
            for f in _facets(s):
                self.cof[f].discard(s)
            del self.cof[s]


def summarize(simplices):
    dims = Counter(len(s) - 1 for s in simplices)
    return {
        "vertices": dims.get(0, 0),
        "edges": dims.get(1, 0),
        "triangles": dims.get(2, 0),
        "euler": dims.get(0, 0) - dims.get(1, 0) + dims.get(2, 0),
    }


def is_disc(simplices):
    """Orientable surface with chi 1 and one boundary circle."""
    simplices = set(simplices)
    tris = [s for s in simplices if len(s) == 3]
    edges = [s for s in simplices if len(s) == 2]
    verts = [s for s in simplices if len(s) == 1]
    if not tris:
        return False
    deg = Counter(f for t in tris for f in _facets(t))
    if any(deg.get(e, 0) not in (1, 2) for e in edges):
        return False
    if len(verts) - len(edges) + len(tris) != 1:
        return False
    bnd = [e for e in edges if deg[e] == 1]
    # vertex links: a single path (boundary vertex) or cycle (interior)
    link = {v[0]: [] for v in verts}
    for a, b, c in tris:
        link[a].append((b, c))
        link[b].append((a, c))
        link[c].append((a, b))
    for v, segs in link.items():
        if not segs or not _single_path_or_cycle(segs):
            return False
    bdeg = Counter(x for e in bnd for x in e)
    if any(d != 2 for d in bdeg.values()):
        return False
    if _components(bnd) != 1:
        return False
    return _orientable(tris)


def _single_path_or_cycle(segs):
    deg = Counter(x for s in segs for x in s)
    if any(d > 2 for d in deg.values()):
        return False
    return _components(segs) == 1


def _components(pairs):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(x) for x in parent})


def _orientable(tris):
    by_edge = {}
    for t in tris:
        for i in range(3):
            e = tuple(sorted((t[i], t[(i + 1) % 3])))
            by_edge.setdefault(e, []).append(t)
    sign = {tris[0]: 1}
    stack = [tris[0]]

    def induced(t, e, o):  # +1 if t traverses e as sorted under orientation o
        a, b, c = t
        forward = {(a, b), (b, c), (c, a)}
        return o if e in forward else -o

    while stack:
        t = stack.pop()
        for i in range(3):
            e = tuple(sorted((t[i], t[(i + 1) % 3])))
            for u in by_edge[e]:
                if u == t:
                    continue
                want = -induced(t, e, sign[t])
                o = 1 if induced(u, e, 1) == want else -1
                if u in sign:
                    if sign[u] != o:
                        return False
                else:
                    sign[u] = o
                    stack.append(u)
    return True


def replay(k, sequence):
    """Apply a collapse sequence; returns the residual simplex set."""
    st = _State(_simplex_set(k))
    for face, coface in sequence:
        st.collapse(tuple(face), tuple(coface))
    return frozenset(st.alive)


def _done(alive, target):
    if target == "point":
        return len(alive) == 1
    return is_disc(alive)


def _certificate(simplices, target):
    summ = summarize(simplices)
    if summ["euler"] != 1:
        return f"Euler characteristic {summ['euler']} != 1"
    levels = [sorted(s for s in simplices if len(s) == d) for d in (1, 2, 3)]
    h = homology(simplicial_chain_complex(levels))
    reduced = [h[0].rank - 1] + [h[i].rank for i in (1, 2)]
    if any(reduced) or any(g.torsion for g in h.groups):
        return f"non-trivial reduced homology {h}"
    st = _State(simplices)
    if not st.free_pairs() and not _done(simplices, target):
        return "no free faces: no elementary collapse applies"
    return ""


def _greedy(simplices, target, steps, rng):
    st = _State(simplices)
    seq = []
    check_disc = target == "disc"
    for _ in range(steps):
        if check_disc:
            if _pure2(st) and is_disc(st.alive):
                return True, seq, st.alive
        elif len(st.alive) == 1:
            return True, seq, st.alive
        pairs = st.free_pairs()
        if check_disc:
            # never remove the last triangle on the way to a disc
            pairs = [pr for pr in pairs if len(pr[1]) < 3 or _count(st, 3) > 1]
        if not pairs:
            break
        face, coface = rng.choice(pairs)
        st.collapse(face, coface)
        seq.append((face, coface))
    ok = _done(st.alive, target)
    return ok, seq, st.alive


def _count(st, size):
    return sum(1 for s in st.alive if len(s) == size)


def _pure2(st):
    return all(len(s) == 3 or st.cof[s] for s in st.alive)


def _exhaustive(simplices, target, limit):
    """DFS over collapse orders; returns (found, sequence, residual, complete)."""
    seen = set()
    visits = 0
    start = frozenset(simplices)
    stack = [(start, ())]
    while stack:
        alive, seq = stack.pop()
        if alive in seen:
            continue
        seen.add(alive)
        visits += 1
        if visits > limit:
            return False, (), start, False
        if _done(alive, target):
            return True, seq, alive, True
        st = _State(alive)
        for face, coface in reversed(st.free_pairs()):
            stack.append((alive - {face, coface}, seq + ((face, coface),)))
    return False, (), start, True


def collapse_search(k, target="point", steps=10_000, restarts=50,
                    exhaustive_max=60, seed=0, exhaustive_states=200_000):
    """Search for a collapse of ``k`` to a point or to a disc."""
    if target not in ("point", "disc"):
        raise ValueError(f"unknown target {target!r}")
    simplices = frozenset(_simplex_set(k))
    if _done(simplices, target):
        return CollapseResult(COLLAPSED, target, (), summarize(simplices), "already at target", seed)
    cert = _certificate(simplices, target)
    if cert:
        return CollapseResult(IMPOSSIBLE, target, (), summarize(simplices), cert, seed)
    if len(simplices) <= exhaustive_max:
        found, seq, alive, complete = _exhaustive(simplices, target, exhaustive_states)
        if found:
            return CollapseResult(COLLAPSED, target, seq, summarize(alive), "exhaustive search", seed)
        if complete:
            return CollapseResult(IMPOSSIBLE, target, (), summarize(simplices),
                                  "exhaustive search over all collapse orders", seed)
    best = None
    for r in range(restarts):
        rseed = seed * 1_000_003 + r
        ok, seq, alive = _greedy(simplices, target, steps, random.Random(rseed))
        res = CollapseResult(COLLAPSED if ok else EXHAUSTED, target, tuple(seq),
                             summarize(alive), f"greedy restart {r}", rseed)
        key = (_RANK[res.outcome], len(alive), r)
        if best is None or key < best[0]:
            best = (key, res)
        if ok:
            break
    return best[1]
