"""Built-in example polyhedra.

Words are written in a compact token form, e.g. ``"a0+ x0>2 b0-"``:
``<edge><slot><+|->`` is an edge step and ``<vertex><port>><port>`` a
passage through a double point.  Vertex transitions are filled in from
the corner incidence so the tables below only carry the gluing pattern.
"""
from __future__ import annotations

import re

from .charts import canonical_transition
from .errors import UnknownExample
from .model import (
    Attached,
    DoublePoint,
    EdgeStep,
    FreeCircle,
    Port,
    Region,
    SimplePolyhedron,
    TripleEdge,
    VertexPassage,
    corner_incidence,
    port_targets,
)

_STEP = re.compile(r"^(?P<e>[A-Za-z_][\w]*?)(?P<s>[012])(?P<d>[+-])$")
_PASS = re.compile(r"^(?P<v>[A-Za-z_][\w]*?)(?P<a>[0-3])>(?P<b>[0-3])$")


def word(text):
    tokens = []
    for tok in text.split():
        m = _PASS.match(tok)
        if m:
            tokens.append(VertexPassage(m["v"], int(m["a"]), int(m["b"])))
            continue
        m = _STEP.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        tokens.append(EdgeStep(m["e"], int(m["s"]), m["d"] == "+"))
    return Attached(tuple(tokens))


def interval(eid, tail, head):
    tv, tp = tail.split(".")
    hv, hp = head.split(".")
    return TripleEdge(eid, "interval", (Port(tv, int(tp)), Port(hv, int(hp))))


def circle(eid, ident=(0, 1, 2)):
    return TripleEdge(eid, "circle", (), tuple(ident))


def with_transitions(p):
    """Fill every vertex's through transitions from its corner incidence."""
    inc = corner_incidence(p)
    vertices = []
    for v in p.vertices:
        phi = port_targets(inc.get(v.id, {}))
        if phi is None:
            vertices.append(v)
            continue
        trans = tuple(canonical_transition(phi[a], phi[b], a, b) for a, b in v.pairs)
        vertices.append(DoublePoint(v.id, v.chart_id, v.pairs, trans))
    return SimplePolyhedron(p.name, tuple(vertices), p.edges, p.regions, p.free_circles)


def _disc():
    return SimplePolyhedron("disc", regions=(Region("D", 0, True, (FreeCircle("f"),)),),
                            free_circles=("f",))


def _round_bundle():
    return SimplePolyhedron(
        "round_bundle",
        edges=(circle("C"),),
        regions=(
            Region("A", 0, True, (FreeCircle("f"), word("C0+"))),
            Region("D1", 0, True, (word("C1+"),)),
            Region("D2", 0, True, (word("C2+"),)),
        ),
        free_circles=("f",),
    )


def _round_sum2():
    return SimplePolyhedron(
        "round_sum2",
        edges=(circle("C1"), circle("C2")),
        regions=(
            Region("P", 0, True, (FreeCircle("f"), word("C10+"), word("C20+"))),
            Region("D11", 0, True, (word("C11+"),)),
            Region("D12", 0, True, (word("C12+"),)),
            Region("D21", 0, True, (word("C21+"),)),
            Region("D22", 0, True, (word("C22+"),)),
        ),
        free_circles=("f",),
    )


def _incompatible_circle():
    return SimplePolyhedron(
        "incompatible_circle",
        edges=(circle("C", (1, 0, 2)),),
        regions=(
            Region("A", 0, True, (FreeCircle("f"), word("C0+ C1+"))),
            Region("D", 0, True, (word("C2+"),)),
        ),
        free_circles=("f",),
    )


def _two_crossings():
    # two singular circles a1.a2 and b1.b2 crossing at x and y
    return with_transitions(SimplePolyhedron(
        "two_crossings",
        vertices=(DoublePoint("x"), DoublePoint("y")),
        edges=(
            interval("a1", "y.1", "x.0"),
            interval("a2", "x.1", "y.0"),
            interval("b1", "y.3", "x.2"),
            interval("b2", "x.3", "y.2"),
        ),
        regions=(
            Region("O", 0, True, (FreeCircle("f"), word("a10+ x0>2 b10- y3>1"))),
            Region("R1", 0, True, (word("a11+ x0>1 a20+ y0>1"),)),
            Region("V1", 0, True, (word("a12+ x0>3 b21+ y2>1"),)),
            Region("R2", 0, True, (word("b11+ x2>3 b20+ y2>3"),)),
            Region("V2", 0, True, (word("b12+ x2>1 a21+ y0>3"),)),
            Region("B", 0, True, (word("b22+ y2>0 a22- x1>3"),)),
        ),
        free_circles=("f",),
    ))


def _bing_house():
    # two loop walls e1, e4 joined by the tunnels e2, e3; three disc regions
    return with_transitions(SimplePolyhedron(
        "bing_house",
        vertices=(DoublePoint("x"), DoublePoint("y")),
        edges=(
            interval("e1", "x.0", "x.1"),
            interval("e2", "x.2", "y.0"),
            interval("e3", "x.3", "y.1"),
            interval("e4", "y.2", "y.3"),
        ),
        regions=(
            Region("W1", 0, True, (word("e10+ x1>0"),)),
            Region("H", 0, True, (word(
                "e11+ x1>2 e21+ y0>2 e40+ y3>0 e22- x2>3 e32+ y1>3 "
                "e41- y2>1 e31- x3>1 e12- x0>3 e30+ y1>0 e20- x2>0"),)),
            Region("W2", 0, True, (word("e42+ y3>2"),)),
        ),
    ))


def _suzuoka():
    # same singular graph shape as bing_house, five sheets, outer free circle
    return with_transitions(SimplePolyhedron(
        "suzuoka",
        vertices=(DoublePoint("x"), DoublePoint("y")),
        edges=(
            interval("e1", "x.0", "x.1"),
            interval("e2", "x.2", "y.0"),
            interval("e3", "x.3", "y.1"),
            interval("e4", "y.2", "y.3"),
        ),
        regions=(
            Region("A", 0, True, (FreeCircle("f"), word("e10+ x1>0"))),
            Region("S1", 0, True, (word("e11+ x1>2 e21+ y0>3 e40- y2>0 e20- x2>0"),)),
            Region("S2", 0, True, (word("e12+ x1>3 e31+ y1>3 e41- y2>1 e30- x3>0"),)),
            Region("S3", 0, True, (word("e22+ y0>1 e32- x3>2"),)),
            Region("S4", 0, True, (word("e42+ y3>2"),)),
        ),
        free_circles=("f",),
    ))


_BUILDERS = {
    "disc": _disc,
    "round_bundle": _round_bundle,
    "round_sum2": _round_sum2,
    "incompatible_circle": _incompatible_circle,
    "two_crossings": _two_crossings,
    "bing_house": _bing_house,
    "suzuoka": _suzuoka,
}

NAMES = tuple(sorted(_BUILDERS))


def catalog(name):
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(NAMES)}") from None
    return builder()
