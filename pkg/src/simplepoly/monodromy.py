"""Singular graph, Y-bundle monodromy along loops, compatibility check.

Slots of a triple edge are the three prongs of the Y fibre.  A closed
walk in the singular set transports prong labels: circle markers apply
the circle identification and double points apply a slot bijection for
every passage (through-arcs and corner turns alike).  The walk's
monodromy is the composite, read in traversal order.

Compatibility is decided with the sign homomorphism.  Identity and the
two 3-cycles are exactly the even permutations, and with canonical
transitions the sign of a passage ``p -> q`` splits as a product of
per-port signs, so the sign of a walk depends only on its class in the
mod-2 cycle space.  Evaluating it on the fundamental cycles of any
spanning forest therefore decides every simple loop at once.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from . import perm
from .charts import PORTS, canonical_transition
from .errors import NotALoop
from .model import corner_incidence, port_targets, require_valid

JUSTIFICATION = (
    "sign is multiplicative under concatenation and factors through the mod-2 cycle space; "
    "fundamental cycles of a spanning forest generate it, so all simple loops avoid "
    "transpositions iff every basis cycle has sign +1 (id and 3-cycles are the even elements)"
)


@dataclass(frozen=True)
class Arc:
    id: str
    tail: tuple  # node key
    head: tuple
    tail_port: int | None = None
    head_port: int | None = None
    identification: tuple = perm.IDENTITY


@dataclass
class SingularGraph:
    nodes: tuple
    arcs: dict
    transitions: dict = field(default_factory=dict)  # vertex id -> {(p, q): perm}
    through: dict = field(default_factory=dict)  # vertex id -> set of (p, q)

    def is_empty(self):
        return not self.nodes

    def incident(self, node):
        out = []
        for a in self.arcs.values():
            if a.tail == node:
                out.append((a.id, True))
            if a.head == node:
                out.append((a.id, False))
        return out


def singular_graph(p):
    require_valid(p)
    nodes = [("v", v.id) for v in p.vertices]
    arcs = {}
    for e in p.edges:
        if e.is_circle:
            nodes.append(("m", e.id))
            arcs[e.id] = Arc(e.id, ("m", e.id), ("m", e.id), identification=tuple(e.identification))
        else:
            t, h = e.endpoints
            arcs[e.id] = Arc(e.id, ("v", t.vertex), ("v", h.vertex), t.port, h.port)
    inc = corner_incidence(p)
    transitions = {}
    through = {}
    for v in p.vertices:
        phi = port_targets(inc[v.id])
        table = {}
        for a in PORTS:
            for b in PORTS:
                if a != b:
                    table[(a, b)] = canonical_transition(phi[a], phi[b], a, b)
        transitions[v.id] = table
        through[v.id] = {pair for a, b in v.pairs for pair in ((a, b), (b, a))}
    return SingularGraph(tuple(sorted(nodes)), arcs, transitions, through)


def _ends(arc, forward):
    """(start node, start port, end node, end port) of a traversal."""
    if forward:
        return arc.tail, arc.tail_port, arc.head, arc.head_port
    return arc.head, arc.head_port, arc.tail, arc.tail_port


def loop_monodromy(g, walk):
    """Composite slot permutation of a closed walk ``[(arc_id, forward), ...]``."""
    if not walk:
        raise NotALoop("empty walk")
    try:
        steps = [(g.arcs[a], fwd) for a, fwd in walk]
    except KeyError as exc:
        raise NotALoop(f"unknown arc {exc.args[0]}") from None
    result = perm.IDENTITY
    n = len(steps)
    for i, (arc, fwd) in enumerate(steps):
        if arc.tail_port is None:
            ident = arc.identification if fwd else perm.inverse(arc.identification)
            result = perm.compose(result, ident)
        _, _, end, end_port = _ends(arc, fwd)
        nxt, nfwd = steps[(i + 1) % n]
        start, start_port, _, _ = _ends(nxt, nfwd)
        if start != end:
            raise NotALoop(f"step {i} ends at {end[1]} but the next step starts at {start[1]}")
        if end[0] == "m":
            if nxt.id != arc.id:
                raise NotALoop("circle markers only continue along their own circle")
            continue
        if start_port == end_port:
            raise NotALoop(f"walk backtracks through port {end_port} of {end[1]}")
        result = perm.compose(result, g.transitions[end[1]][(end_port, start_port)])
    return result


@dataclass(frozen=True)
class CycleMonodromy:
    walk: tuple
    permutation: tuple
    sign: int

    @property
    def kind(self):
        return perm.classify(self.permutation)


@dataclass(frozen=True)
class MonodromyReport:
    cycles: tuple
    compatible: bool
    witness: tuple | None
    justification: str = JUSTIFICATION


def spanning_forest(g, rng=None):
    """Tree arcs of a spanning forest; random order when ``rng`` is given."""
    nodes = list(g.nodes)
    arcs = sorted(g.arcs)
    if rng is not None:
        rng.shuffle(nodes)
        rng.shuffle(arcs)
    adj = {n: [] for n in nodes}
    for aid in arcs:
        a = g.arcs[aid]
        adj[a.tail].append((aid, True))
        if a.head != a.tail:
            adj[a.head].append((aid, False))
        else:
            adj[a.head].append((aid, False))
    seen = set()
    tree = {}
    for root in nodes:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            n = queue.popleft()
            for aid, fwd in adj[n]:
                a = g.arcs[aid]
                other = a.head if fwd else a.tail
                if other not in seen:
                    seen.add(other)
                    tree[other] = (aid, fwd, n)  # reached ``other`` from ``n``
                    queue.append(other)
    return tree


def _path_to_root(tree, node):
    path = []
    while node in tree:
        aid, fwd, parent = tree[node]
        path.append((aid, fwd))
        node = parent
    path.reverse()
    return path, node


def fundamental_cycles(g, tree):
    tree_arcs = {aid for aid, _, _ in tree.values()}
    cycles = []
    for aid in sorted(g.arcs):
        if aid in tree_arcs:
            continue
        a = g.arcs[aid]
        to_tail, r1 = _path_to_root(tree, a.tail)
        to_head, r2 = _path_to_root(tree, a.head)
        assert r1 == r2
        # strip the common prefix
        k = 0
        while k < min(len(to_tail), len(to_head)) and to_tail[k] == to_head[k]:
            k += 1
        down = to_tail[k:]
        back = [(x, not f) for x, f in reversed(to_head[k:])]
        cycles.append(tuple(down + [(aid, True)] + back))
    return cycles


def _is_backtracking_free(g, walk):
    try:
        loop_monodromy(g, walk)
    except NotALoop:
        return False
    return True


def check_compatibility(p, rng=None):
    g = singular_graph(p)
    tree = spanning_forest(g, rng)
    results = []
    for cyc in fundamental_cycles(g, tree):
        m = _cycle_perm(g, cyc)
        results.append(CycleMonodromy(cyc, m, perm.sign(m)))
    bad = [c for c in results if c.sign < 0]
    witness = bad[0].walk if bad else None
    return MonodromyReport(tuple(results), not bad, witness)


def _cycle_perm(g, cyc):
    """Monodromy of a fundamental cycle.

    A fundamental cycle never backtracks except through a port when the
    non-tree arc is a loop that returns through its own port, which cannot
    happen because the two ends of an interval arc occupy distinct ports.
    """
    return loop_monodromy(g, list(cyc))


def random_walk_loop(g, rng, max_len=12):
    """A random closed, non-backtracking walk (for property tests)."""
    if not g.arcs:
        return None
    for _ in range(200):
        start = rng.choice(sorted(g.nodes))
        choices = g.incident(start)
        if not choices:
            continue
        walk = [rng.choice(choices)]
        node = _ends(g.arcs[walk[0][0]], walk[0][1])[2]
        for _ in range(max_len):
            if node == start and _is_backtracking_free(g, walk):
                return walk
            arc, fwd = walk[-1]
            _, _, _, port = _ends(g.arcs[arc], fwd)
            options = []
            for aid, f in g.incident(node):
                a = g.arcs[aid]
                s, sp, _, _ = _ends(a, f)
                if node[0] == "m" and aid != arc:
                    continue
                if node[0] == "v" and sp == port:
                    continue
                options.append((aid, f))
            if not options:
                break
            walk.append(rng.choice(options))
            node = _ends(g.arcs[walk[-1][0]], walk[-1][1])[2]
        if node == start and _is_backtracking_free(g, walk):
            return walk
    return None


def seeded(seed):
    return random.Random(seed)
