"""Group presentations: fundamental group of a 2-complex and simplification.

Words are tuples of non-zero integers; ``i`` is generator ``i`` (1-based)
and ``-i`` its inverse.  Simplification never changes the group.  The
status is upgraded only with a certificate:

* ``trivial``: Tietze moves reached the empty presentation, or coset
  enumeration over the trivial subgroup closed with a single coset (the
  group is then trivial and the empty presentation is returned);
* ``nontrivial``: non-zero abelianization, a finite coset table with more
  than one coset, or a homomorphism with non-trivial image into a small
  permutation group.
"""
from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass

from ..errors import Disconnected
from .snf import smith_normal_form

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple
    status: str = "unknown"
    certificate: str = ""

    def as_text(self):
        names = {i + 1: g for i, g in enumerate(self.generators)}

        def letter(x):
            return names[abs(x)] + ("" if x > 0 else "^-1")

        rels = ", ".join(" ".join(letter(x) for x in r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"

    def to_json(self):
        return {
            "generators": list(self.generators),
            "relators": [list(r) for r in self.relators],
            "certificate": self.certificate,
        }


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(word):
    return tuple(-x for x in reversed(word))


def _canonical(word):
    """Representative of a relator up to cyclic permutation and inversion."""
    if not word:
        return ()
    best = None
    for w in (word, invert(word)):
        for i in range(len(w)):
            c = w[i:] + w[:i]
            if best is None or c < best:
                best = c
    return best


def pi1_presentation(k2, budget=DEFAULT_BUDGET):
    """Edge-path presentation of a connected ``SimplicialComplex2``."""
    adj = {v: [] for v in k2.vertices}
    for a, b in k2.edges:
        adj[a].append(b)
        adj[b].append(a)
    if not k2.vertices:
        raise Disconnected("empty complex")
    root = min(k2.vertices)
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.add(tuple(sorted((v, w))))
                queue.append(w)
    if len(seen) != len(k2.vertices):
        raise Disconnected(f"complex has {len(k2.vertices) - len(seen)} unreachable vertices")
    gens = [e for e in k2.edges if e not in tree]
    gi = {e: i + 1 for i, e in enumerate(gens)}

    def letter(u, w):
        e = (u, w) if u < w else (w, u)
        if e in tree:
            return []
        return [gi[e] if u < w else -gi[e]]

    rels = []
    for a, b, c in k2.triangles:
        rels.append(tuple(letter(a, b) + letter(b, c) + letter(c, a)))
    pres = Presentation(tuple(f"e{u}_{w}" for u, w in gens), tuple(rels))
    return simplify_presentation(pres, budget)


def abelianization(pres):
    """(rank, torsion) of the abelianized group."""
    n = len(pres.generators)
    if n == 0:
        return 0, ()
    rows = []
    for r in pres.relators:
        row = [0] * n
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        if any(row):
            rows.append(row)
    if not rows:
        return n, ()
    res = smith_normal_form(rows)
    return n - res.rank, res.torsion


class _Budget:
    def __init__(self, steps):
        self.left = steps

    def spend(self, n=1):
        self.left -= n
        return self.left >= 0


def _tietze(gens, rels, budget):
    """Greedy Tietze reduction; returns (gens, rels) with renumbered letters."""
    gens = list(gens)
    alive = set(range(1, len(gens) + 1))
    rels = [cyclic_reduce(r) for r in rels]
    changed = True
    while changed and budget.left > 0:
        changed = False
        uniq = {}
        for r in rels:
            if r:
                uniq.setdefault(_canonical(r), r)
        rels = sorted(uniq.values(), key=lambda w: (len(w), w))
        # pick the shortest relator in which some generator occurs once
        best = None
        for idx, r in enumerate(rels):
            counts = Counter(abs(x) for x in r)
            for g, c in sorted(counts.items()):
                if c == 1:
                    best = (idx, g)
                    break
            if best:
                break
        if best is None:
            break
        if not budget.spend():
            break
        idx, g = best
        r = rels.pop(idx)
        pos = next(i for i, x in enumerate(r) if abs(x) == g)
        # r = u g^e v  =>  g^e = (v u)^-1
        u, v = r[:pos], r[pos + 1:]
        repl = invert(v + u)
        if r[pos] < 0:
            repl = invert(repl)
        new = []
        for w in rels:
            if g in (abs(x) for x in w):
                out = []
                for x in w:
                    if x == g:
                        out.extend(repl)
                    elif x == -g:
                        out.extend(invert(repl))
                    else:
                        out.append(x)
                w = cyclic_reduce(out)
                budget.spend()
            new.append(w)
        rels = new
        alive.discard(g)
        changed = True
    keep = sorted(alive)
    renum = {g: i + 1 for i, g in enumerate(keep)}
    out_rels = []
    for r in rels:
        if r:
            out_rels.append(tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in r))
    return [gens[g - 1] for g in keep], out_rels


def coset_enumeration(ngens, relators, max_cosets, subgroup=()):
    """HLT coset enumeration; returns the index or ``None`` if over budget."""
    ncols = 2 * ngens

    def col(x):
        return 2 * (abs(x) - 1) + (0 if x > 0 else 1)

    table = [[None] * ncols]
    parent = [0]
    defined = [1]

    def rep(k):
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def merge(k, l, queue):
        k, l = rep(k), rep(l)
        if k != l:
            lo, hi = min(k, l), max(k, l)
            parent[hi] = lo
            queue.append(hi)

    def coincidence(a, b):
        queue = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d is None:
                    continue
                if table[d][x ^ 1] == g:
                    table[d][x ^ 1] = None
                mu, nu = rep(g), rep(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def define(c, x):
        if defined[0] >= max_cosets:
            raise OverflowError
        d = len(table)
        table.append([None] * ncols)
        parent.append(d)
        defined[0] += 1
        table[c][x] = d
        table[d][x ^ 1] = c

    def scan_and_fill(a, w):
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][col(w[i])] is not None:
                f = table[f][col(w[i])]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][col(-w[j])] is not None:
                b = table[b][col(-w[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][col(w[i])] = b
                table[b][col(-w[i])] = f
                return
            define(f, col(w[i]))

    if ngens == 0:
        return 1
    try:
        for w in subgroup:
            scan_and_fill(0, w)
        c = 0
        while c < len(table):
            if parent[c] == c:
                for r in relators:
                    if not r:
                        continue
                    scan_and_fill(c, r)
                    if parent[c] != c:
                        break
                if parent[c] == c:
                    for x in range(ncols):
                        if table[c][x] is None:
                            define(c, x)
            c += 1
    except OverflowError:
        return None
    return sum(1 for i in range(len(table)) if parent[i] == i)


def _perm_group(n, even_only=False):
    elems = list(itertools.permutations(range(n)))
    if even_only:
        def parity(p):
            s, seen = 0, set()
            for i in range(n):
                if i in seen:
                    continue
                j, k = i, 0
                while j not in seen:
                    seen.add(j)
                    j = p[j]
                    k += 1
                s += k - 1
            return s % 2
        elems = [p for p in elems if parity(p) == 0]
    return elems


def _hom_search(ngens, rels, budget):
    """Look for a homomorphism with non-trivial image into S3, S4 or A5."""
    if ngens == 0 or ngens > 3:
        return None
    for label, n, even in (("S3", 3, False), ("S4", 4, False), ("A5", 5, True)):
        elems = _perm_group(n, even)
        ident = tuple(range(n))

        def mul(p, q):  # apply p then q
            return tuple(q[p[i]] for i in range(n))

        inv = {p: tuple(sorted(range(n), key=lambda i: p[i])) for p in elems}
        for images in itertools.product(elems, repeat=ngens):
            if not budget.spend():
                return None
            if all(im == ident for im in images):
                continue
            ok = True
            for r in rels:
                acc = ident
                for x in r:
                    acc = mul(acc, images[x - 1] if x > 0 else inv[images[-x - 1]])
                if acc != ident:
                    ok = False
                    break
            if ok:
                return label
    return None


def simplify_presentation(pres, budget=DEFAULT_BUDGET):
    b = _Budget(budget)
    gens, rels = _tietze(pres.generators, pres.relators, b)
    if not gens:
        return Presentation((), (), "trivial", "Tietze moves reached the empty presentation")
    if b.left <= 0:
        return Presentation(tuple(gens), tuple(rels), "unknown", "budget exhausted")
    reduced = Presentation(tuple(gens), tuple(rels))
    rank, torsion = abelianization(reduced)
    if rank or torsion:
        ab = " + ".join((["Z^%d" % rank] if rank else []) + [f"Z/{d}" for d in torsion])
        return Presentation(tuple(gens), tuple(rels), "nontrivial", f"abelianization {ab}")
    share = max(b.left // 2, 1)
    index = coset_enumeration(len(gens), rels, max_cosets=share)
    if index is not None:
        if index == 1:
            return Presentation((), (), "trivial",
                                "coset enumeration over the trivial subgroup closed with 1 coset")
        return Presentation(tuple(gens), tuple(rels), "nontrivial",
                            f"coset enumeration: finite group of order {index}")
    b.spend(share)
    target = _hom_search(len(gens), rels, b)
    if target:
        return Presentation(tuple(gens), tuple(rels), "nontrivial",
                            f"homomorphism with non-trivial image into {target}")
    return Presentation(tuple(gens), tuple(rels), "unknown", "budget exhausted")
