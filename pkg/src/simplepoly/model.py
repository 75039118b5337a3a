"""Combinatorial encoding of simple polyhedra and its validator.

A polyhedron is a set of regions (compact surfaces given by a label)
glued along triple edges (three prong slots each) that meet at double
points.  Boundary circles not glued to anything are *free circles*.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Union

from . import perm
from .charts import PORTS, canonical_transition, get_chart
from .errors import InvalidInput


@dataclass(frozen=True, order=True)
class Port:
    vertex: str
    port: int


@dataclass(frozen=True)
class DoublePoint:
    id: str
    chart_id: str = "X"
    pairs: tuple = ((0, 1), (2, 3))
    transitions: tuple = ((0, 1, 2), (0, 1, 2))


@dataclass(frozen=True)
class TripleEdge:
    id: str
    kind: str  # "interval" or "circle"
    endpoints: tuple = ()  # (tail, head) ports for intervals
    identification: tuple = perm.IDENTITY

    slots = (0, 1, 2)

    @property
    def is_circle(self):
        return self.kind == "circle"


@dataclass(frozen=True)
class EdgeStep:
    edge: str
    slot: int
    forward: bool = True


@dataclass(frozen=True)
class VertexPassage:
    vertex: str
    enter: int
    leave: int


@dataclass(frozen=True)
class FreeCircle:
    id: str


@dataclass(frozen=True)
class Attached:
    word: tuple


BoundaryComponent = Union[FreeCircle, Attached]


@dataclass(frozen=True)
class Region:
    id: str
    genus: int = 0
    orientable: bool = True
    boundary: tuple = ()

    def euler_characteristic(self):
        b = len(self.boundary)
        if self.orientable:
            return 2 - 2 * self.genus - b
        return 2 - self.genus - b


@dataclass(frozen=True)
class SimplePolyhedron:
    name: str
    vertices: tuple = ()
    edges: tuple = ()
    regions: tuple = ()
    free_circles: tuple = ()

    def __post_init__(self):
        # canonical ordering makes structural equality meaningful
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices, key=lambda v: v.id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(self, "regions", tuple(sorted(self.regions, key=lambda r: r.id)))
        object.__setattr__(self, "free_circles", tuple(sorted(self.free_circles)))

    def vertex(self, vid):
        return {v.id: v for v in self.vertices}[vid]

    def edge(self, eid):
        return {e.id: e for e in self.edges}[eid]

    def edge_map(self):
        return {e.id: e for e in self.edges}

    def vertex_map(self):
        return {v.id: v for v in self.vertices}


@dataclass(frozen=True)
class Issue:
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple = ()
    warnings: tuple = ()
    summary: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self):
        return not self.errors

    def codes(self):
        return [e.code for e in self.errors]


# ---------------------------------------------------------------------------
# word geometry helpers


def step_start(edge, step):
    """Port where an interval step begins (``None`` for circles)."""
    if edge.is_circle:
        return None
    return edge.endpoints[0] if step.forward else edge.endpoints[1]


def step_end(edge, step):
    if edge.is_circle:
        return None
    return edge.endpoints[1] if step.forward else edge.endpoints[0]


def circle_next_slot(edge, step):
    """Slot a circle step continues with after passing the marker."""
    if step.forward:
        return edge.identification[step.slot]
    return perm.inverse(edge.identification)[step.slot]


def corner_incidence(p):
    """Region germs at each double point, read off the boundary words.

    Returns ``{vertex_id: {(port, slot): (port, slot)}}`` (symmetric).
    Ill-formed words are skipped; ``validate`` reports them.
    """
    emap = p.edge_map()
    out = defaultdict(dict)
    for region in p.regions:
        for comp in region.boundary:
            if not isinstance(comp, Attached):
                continue
            word = comp.word
            n = len(word)
            for i, tok in enumerate(word):
                if not isinstance(tok, VertexPassage):
                    continue
                before, after = word[(i - 1) % n], word[(i + 1) % n]
                if not (isinstance(before, EdgeStep) and isinstance(after, EdgeStep)):
                    continue
                if before.edge not in emap or after.edge not in emap:
                    continue
                a = (tok.enter, before.slot)
                b = (tok.leave, after.slot)
                out[tok.vertex].setdefault(a, b)
                out[tok.vertex].setdefault(b, a)
    return dict(out)


def port_targets(incidence_at_vertex):
    """``{port: (phi_0, phi_1, phi_2)}``: the port reached through each slot."""
    phi = {}
    for port in PORTS:
        try:
            phi[port] = tuple(incidence_at_vertex[(port, c)][0] for c in range(3))
        except KeyError:
            return None
    return phi


# ---------------------------------------------------------------------------
# validation


class _Collector:
    def __init__(self):
        self.errors = []
        self.warnings = []

    def error(self, code, location, message):
        self.errors.append(Issue(code, location, message))

    def warn(self, code, location, message):
        self.warnings.append(Issue(code, location, message))


def validate(p):
    """Check every local-model constraint; never raises."""
    out = _Collector()
    _check_ids(p, out)
    emap = p.edge_map()
    vmap = p.vertex_map()

    for e in p.edges:
        _check_edge(e, vmap, out)
    _check_ports(p, vmap, out)

    slot_claims = Counter()
    free_claims = Counter()
    for region in p.regions:
        _check_region(region, emap, vmap, slot_claims, free_claims, out)

    for e in p.edges:
        for s in e.slots:
            n = slot_claims[(e.id, s)]
            if n == 0:
                out.error("SLOT_UNCLAIMED", f"edge {e.id}", f"slot {s} is not on any region boundary")
            elif n > 1:
                out.error("SLOT_DOUBLY_CLAIMED", f"edge {e.id}", f"slot {s} claimed {n} times")
    for fc in p.free_circles:
        n = free_claims[fc]
        if n == 0:
            out.error("SLOT_UNCLAIMED", f"free {fc}", "free circle bounds no region")
        elif n > 1:
            out.error("SLOT_DOUBLY_CLAIMED", f"free {fc}", f"free circle claimed by {n} region boundaries")
    for fc in free_claims:
        if fc not in p.free_circles:
            out.error("DANGLING_REFERENCE", f"free {fc}", "free circle not declared")

    _check_vertices(p, vmap, out)
    _check_connected(p, out)

    if not p.regions:
        out.error("EMPTY", p.name, "polyhedron has no regions")
    if not p.edges and p.regions:
        out.warn("EMPTY_SINGULAR_SET", p.name, "no triple edges")
    if p.regions and all(not r.boundary for r in p.regions):
        out.warn("CLOSED_SURFACE_ONLY", p.name, "input consists of closed surfaces only")

    summary = {
        "double_points": len(p.vertices),
        "triple_edges": len(p.edges),
        "triple_circles": sum(1 for e in p.edges if e.is_circle),
        "regions": len(p.regions),
        "free_circles": len(p.free_circles),
    }
    return ValidationReport(tuple(out.errors), tuple(out.warnings), summary)


def require_valid(p):
    report = validate(p)
    if not report.ok:
        first = report.errors[0]
        raise InvalidInput(f"{p.name}: {first.code} at {first.location}: {first.message}", report)
    return report


def _check_ids(p, out):
    seen = Counter()
    for group in (p.vertices, p.edges, p.regions):
        for item in group:
            seen[item.id] += 1
    for fc in p.free_circles:
        seen[fc] += 1
    for ident, n in sorted(seen.items()):
        if n > 1:
            out.error("DUPLICATE_ID", ident, f"identifier used {n} times")


def _check_edge(e, vmap, out):
    loc = f"edge {e.id}"
    if e.kind not in ("interval", "circle"):
        out.error("BAD_EDGE_KIND", loc, f"unknown kind {e.kind!r}")
        return
    if not perm.is_perm(tuple(e.identification)):
        out.error("BAD_PERM", loc, "identification is not a permutation of 3 slots")
    if e.is_circle:
        if e.endpoints:
            out.error("BAD_ENDPOINTS", loc, "circle edges have no endpoints")
        return
    if tuple(e.identification) != perm.IDENTITY:
        out.error("BAD_PERM", loc, "interval edges carry the identity identification")
    if len(e.endpoints) != 2:
        out.error("BAD_ENDPOINTS", loc, "interval edges need exactly 2 endpoint ports")
        return
    for end in e.endpoints:
        if end.vertex not in vmap:
            out.error("DANGLING_REFERENCE", loc, f"undeclared vertex {end.vertex}")
        elif end.port not in PORTS:
            out.error("BAD_PORT", loc, f"port {end.port} out of range")


def _check_ports(p, vmap, out):
    claims = Counter()
    for e in p.edges:
        if e.is_circle:
            continue
        for end in e.endpoints:
            claims[(end.vertex, end.port)] += 1
    for v in p.vertices:
        for port in PORTS:
            n = claims[(v.id, port)]
            if n == 0:
                out.error("PORT_UNCLAIMED", f"vertex {v.id}", f"port {port} has no edge end")
            elif n > 1:
                out.error("PORT_DOUBLY_CLAIMED", f"vertex {v.id}", f"port {port} claimed {n} times")


def _check_region(region, emap, vmap, slot_claims, free_claims, out):
    loc = f"region {region.id}"
    if region.genus < 0:
        out.error("BAD_LABEL", loc, "negative genus")
    if not region.orientable and region.genus < 1:
        out.error("BAD_LABEL", loc, "non-orientable regions need at least one crosscap")
    if not region.boundary:
        out.warn("CLOSED_REGION", loc, "region has no boundary")
    for k, comp in enumerate(region.boundary):
        cloc = f"{loc} boundary {k}"
        if isinstance(comp, FreeCircle):
            free_claims[comp.id] += 1
            continue
        word = comp.word
        if not any(isinstance(t, EdgeStep) for t in word):
            out.error("EMPTY_WORD", cloc, "attached boundary word has no edge steps")
            continue
        for tok in word:
            if isinstance(tok, EdgeStep):
                if tok.edge not in emap:
                    out.error("DANGLING_REFERENCE", cloc, f"undeclared edge {tok.edge}")
                elif tok.slot not in (0, 1, 2):
                    out.error("BAD_SLOT", cloc, f"slot {tok.slot} out of range")
                else:
                    slot_claims[(tok.edge, tok.slot)] += 1
            elif tok.vertex not in vmap:
                out.error("DANGLING_REFERENCE", cloc, f"undeclared vertex {tok.vertex}")
        _check_word_continuity(word, emap, cloc, out)


def _check_word_continuity(word, emap, loc, out):
    n = len(word)
    for i, tok in enumerate(word):
        nxt = word[(i + 1) % n]
        if isinstance(tok, VertexPassage):
            if tok.enter == tok.leave:
                out.error("WORD_DISCONTINUOUS", loc, f"passage at {tok.vertex} re-enters its port")
            if not isinstance(nxt, EdgeStep):
                out.error("WORD_DISCONTINUOUS", loc, "two vertex passages in a row")
            elif nxt.edge in emap:
                e = emap[nxt.edge]
                start = step_start(e, nxt)
                if start != Port(tok.vertex, tok.leave):
                    out.error("WORD_DISCONTINUOUS", loc,
                              f"edge {e.id} does not leave {tok.vertex}.{tok.leave}")
            continue
        if tok.edge not in emap or tok.slot not in (0, 1, 2):
            continue
        e = emap[tok.edge]
        if e.is_circle:
            if not perm.is_perm(tuple(e.identification)):
                continue
            ok = (isinstance(nxt, EdgeStep) and nxt.edge == e.id and nxt.forward == tok.forward
                  and nxt.slot == circle_next_slot(e, tok))
            if not ok:
                out.error("WORD_DISCONTINUOUS", loc,
                          f"circle {e.id} slot {tok.slot} must continue with slot "
                          f"{circle_next_slot(e, tok)}")
        else:
            end = step_end(e, tok)
            if len(e.endpoints) != 2:
                continue
            if not (isinstance(nxt, VertexPassage) and Port(nxt.vertex, nxt.enter) == end):
                out.error("WORD_DISCONTINUOUS", loc,
                          f"edge {e.id} must be followed by a passage entering {end.vertex}.{end.port}")


def _check_vertices(p, vmap, out):
    incidence = corner_incidence(p)
    for v in p.vertices:
        loc = f"vertex {v.id}"
        chart = get_chart(v.chart_id)
        if chart is None:
            out.error("UNKNOWN_CHART", loc, f"chart {v.chart_id!r} is not in the catalog")
            continue
        flat = [x for pair in v.pairs for x in pair]
        if len(v.pairs) != 2 or sorted(flat) != list(PORTS):
            out.error("BAD_PAIRS", loc, "ports must split into two through-pairs covering 0..3")
            continue
        if len(v.transitions) != 2 or not all(perm.is_perm(tuple(t)) for t in v.transitions):
            out.error("BAD_PERM", loc, "through transitions must be bijections on 3 slots")
            continue
        inc = incidence.get(v.id, {})
        germs = Counter()
        bad = False
        for (port, slot), (other, oslot) in inc.items():
            if port == other:
                bad = True
            germs[frozenset((port, other))] += 1
        expected = {frozenset(g) for g in chart.region_germs}
        if bad or set(germs) != expected or len(inc) != 12 or any(n != 2 for n in germs.values()):
            out.error("CHART_MISMATCH", loc,
                      "corner incidence must pair every two ports by exactly one region germ")
            continue
        phi = port_targets(inc)
        for (a, b), given in zip(v.pairs, v.transitions):
            want = canonical_transition(phi[a], phi[b], a, b)
            if tuple(given) != want:
                out.error("TRANSITION_MISMATCH", loc,
                          f"transition {a}->{b} is {perm.fmt(given)}, corner incidence forces "
                          f"{perm.fmt(want)}")


def _check_connected(p, out):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for r in p.regions:
        find(("r", r.id))
        for comp in r.boundary:
            if isinstance(comp, FreeCircle):
                union(("r", r.id), ("f", comp.id))
            else:
                for tok in comp.word:
                    if isinstance(tok, EdgeStep):
                        union(("r", r.id), ("e", tok.edge))
                    else:
                        union(("r", r.id), ("v", tok.vertex))
    for e in p.edges:
        find(("e", e.id))
        for end in e.endpoints:
            union(("e", e.id), ("v", end.vertex))
    for v in p.vertices:
        find(("v", v.id))
    for fc in p.free_circles:
        find(("f", fc))
    roots = {find(x) for x in list(parent)}
    if len(roots) > 1:
        out.error("DISCONNECTED", p.name, f"underlying space has {len(roots)} components")


def euler_characteristic(p):
    """Euler characteristic of the canonical cellulation."""
    from .complexes.cells import cellulate

    require_valid(p)
    return cellulate(p).euler_characteristic()
