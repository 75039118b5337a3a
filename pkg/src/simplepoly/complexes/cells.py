"""Canonical cellulation of a simple polyhedron and its triangulation.

Every region becomes one polygon attached along its fundamental word:
boundary components are joined to a base point by tethers and handles
(``a b a^-1 b^-1`` or crosscaps ``a a``) are prepended.  A disc with one
boundary component is attached directly along that component.

``triangulate`` cones each polygon from its centre (first subdivision)
and then takes the barycentric subdivision of the resulting Delta-complex,
which is always a genuine simplicial complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..model import Attached, EdgeStep, FreeCircle, require_valid


@dataclass(frozen=True)
class Letter:
    cell: tuple
    forward: bool
    meta: tuple | None = None  # (edge_id, slot) for triple-edge letters


@dataclass
class CellComplex:
    zero_cells: dict = field(default_factory=dict)  # key -> provenance
    one_cells: dict = field(default_factory=dict)  # key -> (tail, head, provenance)
    two_cells: dict = field(default_factory=dict)  # region id -> tuple of Letters

    def euler_characteristic(self):
        return len(self.zero_cells) - len(self.one_cells) + len(self.two_cells)

    def letter_start(self, letter):
        tail, head, _ = self.one_cells[letter.cell]
        return tail if letter.forward else head

    def letter_end(self, letter):
        tail, head, _ = self.one_cells[letter.cell]
        return head if letter.forward else tail


def cellulate(p):
    cx = CellComplex()
    for v in p.vertices:
        cx.zero_cells[("v", v.id)] = ("vertex", v.id)
    for e in p.edges:
        if e.is_circle:
            cx.zero_cells[("m", e.id)] = ("edge", e.id)
            cx.one_cells[("e", e.id)] = (("m", e.id), ("m", e.id), ("edge", e.id))
        else:
            tail, head = e.endpoints
            cx.one_cells[("e", e.id)] = (("v", tail.vertex), ("v", head.vertex), ("edge", e.id))
    for fc in p.free_circles:
        cx.zero_cells[("m", fc)] = ("free", fc)
        cx.one_cells[("f", fc)] = (("m", fc), ("m", fc), ("free", fc))

    for r in p.regions:
        prov = ("region", r.id)
        comps = [_component_letters(cx, comp) for comp in r.boundary]
        g, b = r.genus, len(comps)
        if g == 0 and r.orientable and b == 1:
            cx.two_cells[r.id] = tuple(comps[0])
            continue
        base = ("b", r.id)
        cx.zero_cells[base] = prov
        word = []
        if g == 0 and r.orientable and b == 0:
            far = ("q", r.id)
            cx.zero_cells[far] = prov
            cx.one_cells[("s", r.id)] = (base, far, prov)
            word = [Letter(("s", r.id), True), Letter(("s", r.id), False)]
        elif r.orientable:
            for k in range(g):
                a, bb = ("h", r.id, 2 * k), ("h", r.id, 2 * k + 1)
                cx.one_cells[a] = (base, base, prov)
                cx.one_cells[bb] = (base, base, prov)
                word += [Letter(a, True), Letter(bb, True), Letter(a, False), Letter(bb, False)]
        else:
            for k in range(g):
                a = ("h", r.id, k)
                cx.one_cells[a] = (base, base, prov)
                word += [Letter(a, True), Letter(a, True)]
        for i, letters in enumerate(comps):
            t = ("t", r.id, i)
            cx.one_cells[t] = (base, cx.letter_start(letters[0]), prov)
            word += [Letter(t, True)] + letters + [Letter(t, False)]
        cx.two_cells[r.id] = tuple(word)

    for rid, word in cx.two_cells.items():
        n = len(word)
        for i in range(n):
            if cx.letter_end(word[i]) != cx.letter_start(word[(i + 1) % n]):
                raise AssertionError(f"polygon word of region {rid} is not closed at letter {i}")
    return cx


def _component_letters(cx, comp):
    if isinstance(comp, FreeCircle):
        return [Letter(("f", comp.id), True)]
    steps = [t for t in comp.word if isinstance(t, EdgeStep)]
    return [Letter(("e", s.edge), s.forward, (s.edge, s.slot)) for s in steps]


# ---------------------------------------------------------------------------


@dataclass
class SimplicialComplex2:
    vertices: tuple
    edges: tuple
    triangles: tuple
    vertex_cell: dict  # vertex -> ("region"|"edge"|"vertex"|"free", id)
    edge_cell: dict
    triangle_cell: dict
    vertex_param: dict = field(default_factory=dict)  # vertex -> (one-cell key, Fraction)
    triangle_tag: dict = field(default_factory=dict)  # triangle -> (region, letter index, half)
    polygon_words: dict = field(default_factory=dict)
    name: str = ""

    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def simplices(self):
        return ([(v,) for v in self.vertices] + list(self.edges) + list(self.triangles))


def triangulate(p):
    """Canonical triangulation with provenance; deterministic."""
    require_valid(p)
    cx = cellulate(p)

    # stage 1: cone every polygon, halving every 1-cell
    s1_tris = []  # (id, (A,B,C), (eAB,eBC,eCA), tag)
    s1_edges = {}  # id -> (u, w)
    for cell, (tail, head, _) in cx.one_cells.items():
        mid = ("mid", cell)
        s1_edges[("half", cell, 0)] = (tail, mid)
        s1_edges[("half", cell, 1)] = (mid, head)
    for rid in sorted(cx.two_cells):
        word = cx.two_cells[rid]
        n = len(word)
        centre = ("c", rid)
        for i, letter in enumerate(word):
            s1_edges[("sc", rid, i)] = (centre, cx.letter_start(letter))
            s1_edges[("sm", rid, i)] = (centre, ("mid", letter.cell))
        for i, letter in enumerate(word):
            start, end, mid = cx.letter_start(letter), cx.letter_end(letter), ("mid", letter.cell)
            h_start = ("half", letter.cell, 0 if letter.forward else 1)
            h_end = ("half", letter.cell, 1 if letter.forward else 0)
            s1_tris.append((("T", rid, i, 0), (centre, start, mid),
                            (("sc", rid, i), h_start, ("sm", rid, i)), (rid, i, 0)))
            s1_tris.append((("T", rid, i, 1), (centre, mid, end),
                            (("sm", rid, i), h_end, ("sc", rid, (i + 1) % n)), (rid, i, 1)))

    # stage 2: barycentric subdivision of the Delta-complex
    raw_tris = []
    for tid, (a, b, c), (eab, ebc, eca), tag in s1_tris:
        bary = ("bary", tid)
        for x, e in ((a, eab), (b, eab), (b, ebc), (c, ebc), (c, eca), (a, eca)):
            raw_tris.append(((x, ("emid", e), bary), tag, tid))

    raw_vertices = set()
    for tri, _, _ in raw_tris:
        raw_vertices.update(tri)
    for e, (u, w) in s1_edges.items():
        raw_vertices.update((u, w, ("emid", e)))
    order = sorted(raw_vertices, key=repr)
    index = {key: i for i, key in enumerate(order)}

    def cell_of_key(key):
        kind = key[0]
        if kind in ("v", "m", "b", "q"):
            return cx.zero_cells[key]
        if kind == "mid":
            return cx.one_cells[key[1]][2]
        if kind == "emid":
            e = key[1]
            if e[0] == "half":
                return cx.one_cells[e[1]][2]
            return ("region", e[1])
        if kind == "c":
            return ("region", key[1])
        if kind == "bary":
            return ("region", key[1][1])
        raise KeyError(key)

    vertex_cell = {index[k]: cell_of_key(k) for k in order}
    vertex_param = {}
    for cell, (tail, head, prov) in cx.one_cells.items():
        if prov[0] not in ("edge", "free"):
            continue
        vertex_param.setdefault(index[tail], (cell, Fraction(0)))
        if head != tail:
            vertex_param.setdefault(index[head], (cell, Fraction(1)))
        vertex_param[index[("mid", cell)]] = (cell, Fraction(1, 2))
        vertex_param[index[("emid", ("half", cell, 0))]] = (cell, Fraction(1, 4))
        vertex_param[index[("emid", ("half", cell, 1))]] = (cell, Fraction(3, 4))

    triangles = []
    triangle_tag = {}
    triangle_cell = {}
    edge_cell = {}
    for (x, m, bary), tag, tid in raw_tris:
        tri = tuple(sorted((index[x], index[m], index[bary])))
        triangles.append(tri)
        triangle_tag[tri] = tag
        triangle_cell[tri] = ("region", tag[0])
        s1_edge = m[1]
        # the edge x--emid lies in the stage-1 edge; the other two in the face
        e_in = tuple(sorted((index[x], index[m])))
        if s1_edge[0] == "half":
            edge_cell[e_in] = cx.one_cells[s1_edge[1]][2]
        else:
            edge_cell.setdefault(e_in, ("region", tag[0]))
        for e in ((index[m], index[bary]), (index[x], index[bary])):
            edge_cell[tuple(sorted(e))] = ("region", tag[0])
    if len(set(triangles)) != len(triangles):
        raise AssertionError("subdivision produced duplicate triangles")

    k = SimplicialComplex2(
        vertices=tuple(range(len(order))),
        edges=tuple(sorted(edge_cell)),
        triangles=tuple(sorted(triangles)),
        vertex_cell=vertex_cell,
        edge_cell=edge_cell,
        triangle_cell=triangle_cell,
        vertex_param=vertex_param,
        triangle_tag=triangle_tag,
        polygon_words=dict(cx.two_cells),
        name=p.name,
    )
    return k
