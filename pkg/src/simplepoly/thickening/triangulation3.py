"""Abstract tetrahedral complexes given by face gluings, and their checks.

Tetrahedron ``i`` has local vertices 0..3; face ``f`` is the one opposite
vertex ``f``.  A gluing ``(i, f) -> (j, g, perm)`` sends the vertices of
face ``f``, listed in increasing order, to ``perm[0..2]`` in tetrahedron
``j``.  Everything here works from gluings alone so that parsed files and
hand-made fixtures are checked exactly like generated output.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .. import perm as permutation
from ..complexes.homology import ChainComplex, homology


def face_vertices(f):
    return tuple(v for v in range(4) if v != f)


@dataclass
class Triangulation3:
    n: int
    gluings: dict  # (i, f) -> (j, g, perm)
    provenance: tuple
    cell_incidence: dict = field(default_factory=dict)  # cell -> set of incident cells
    labels: tuple = ()  # optional vertex labels per tetrahedron
    meta: dict = field(default_factory=dict)

    def vertex_map(self, i, f):
        """Full map of tet ``i``'s local vertices into its neighbour across face ``f``."""
        j, g, pm = self.gluings[(i, f)]
        m = dict(zip(face_vertices(f), pm))
        m[f] = g
        return j, m

    def boundary_faces(self):
        return [(i, f) for i in range(self.n) for f in range(4) if (i, f) not in self.gluings]


@dataclass(frozen=True)
class Issue:
    code: str
    where: str
    message: str


@dataclass(frozen=True)
class BoundaryComponent:
    euler: int
    orientable: bool
    triangles: int


@dataclass(frozen=True)
class ManifoldReport:
    is_manifold: bool
    orientable: bool
    orientation: tuple | None
    connected: bool
    boundary: tuple
    issues: tuple
    counts: dict

    @property
    def ok(self):
        return self.is_manifold and not self.issues

    def to_json(self):
        return {
            "is_manifold": self.is_manifold,
            "orientable": self.orientable,
            "connected": self.connected,
            "boundary": [
                {"euler": b.euler, "orientable": b.orientable, "triangles": b.triangles}
                for b in self.boundary
            ],
            "issues": [[i.code, i.where, i.message] for i in self.issues],
            "counts": self.counts,
        }


class _UF:
    """Union-find carrying a Z/2 parity relative to the root."""

    def __init__(self):
        self.parent = {}
        self.parity = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0
            return x, 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = root
        return (root, self.parity[path[0]]) if path else (root, 0)

    def union(self, a, b, odd=0):
        """Identify ``a`` with ``b`` (reversed when ``odd``); False on conflict."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == odd
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ odd
        return True

    def classes(self):
        out = {}
        for x in list(self.parent):
            out.setdefault(self.find(x)[0], []).append(x)
        return out


def check_gluings(t):
    issues = []
    for (i, f), (j, g, pm) in sorted(t.gluings.items()):
        where = f"{i}.{f}"
        if not (0 <= j < t.n and 0 <= g < 4 and 0 <= i < t.n):
            issues.append(Issue("BAD_GLUING", where, "index out of range"))
            continue
        if (i, f) == (j, g):
            issues.append(Issue("SELF_GLUED", where, "face glued to itself"))
            continue
        if sorted(pm) != list(face_vertices(g)):
            issues.append(Issue("BAD_PERM", where, f"{pm} is not a bijection onto face {g}"))
            continue
        back = t.gluings.get((j, g))
        if back is None or back[:2] != (i, f):
            issues.append(Issue("NOT_INVOLUTIVE", where, f"{j}.{g} is not glued back"))
            continue
        m = dict(zip(face_vertices(f), pm))
        inv = dict(zip(face_vertices(g), back[2]))
        if any(inv[m[v]] != v for v in m):
            issues.append(Issue("NOT_INVOLUTIVE", where, "reverse gluing is not the inverse map"))
    if len(t.provenance) != t.n or any(not c for c in t.provenance):
        issues.append(Issue("PROVENANCE_MISSING", "-", "every tetrahedron needs a cell"))
    return issues


def _classes(t, size):
    """Classes of ``size``-vertex sub-simplices under the gluings, with parity."""
    uf = _UF()
    for i in range(t.n):
        for s in combinations(range(4), size):
            uf.find((i, s))
    ok = True
    for (i, f) in t.gluings:
        j, m = t.vertex_map(i, f)
        for s in combinations(face_vertices(f), size):
            image = [m[v] for v in s]
            srt = tuple(sorted(image))
            odd = 0 if permutation.sign(tuple(srt.index(x) for x in image)) > 0 else 1
            ok &= uf.union((i, s), (j, srt), odd)
    return uf, ok


def _edge_links(t, issues):
    uf, ok = _classes(t, 2)
    if not ok:
        issues.append(Issue("EDGE_REVERSED", "-", "an edge is identified with itself reversed"))
    for root, members in sorted(uf.classes().items()):
        # each occurrence (tet, edge) has two faces; walk the link
        occ = set(members)
        free = 0
        adj = {o: [] for o in occ}
        for (i, e) in occ:
            for f in range(4):
                if f in e:
                    continue
                if (i, f) not in t.gluings:
                    free += 1
                    continue
                j, m = t.vertex_map(i, f)
                other = (j, tuple(sorted(m[v] for v in e)))
                adj[(i, e)].append(other)
        seen = set()
        stack = [next(iter(occ))]
        while stack:
            o = stack.pop()
            if o in seen:
                continue
            seen.add(o)
            stack.extend(adj[o])
        if len(seen) != len(occ) or free not in (0, 2):
            issues.append(Issue("EDGE_LINK", f"edge {root}",
                                f"link is not a circle or an arc ({len(occ)} occurrences, {free} free)"))
    return len(uf.classes())


def _vertex_links(t, issues):
    uf = _UF()
    for i in range(t.n):
        for v in range(4):
            uf.find((i, v))
    for (i, f) in t.gluings:
        j, m = t.vertex_map(i, f)
        for v in face_vertices(f):
            uf.union((i, v), (j, m[v]))
    for root, members in sorted(uf.classes().items()):
        tris = len(members)
        edges = set()
        bedges = 0
        lv = _UF()
        for (i, v) in members:
            for w in range(4):
                if w != v:
                    lv.find((i, v, w))
            for f in range(4):
                if f == v:
                    continue
                if (i, f) not in t.gluings:
                    bedges += 1
                    continue
                j, m = t.vertex_map(i, f)
                edges.add(min((i, f, v), (j, t.gluings[(i, f)][1], m[v])))
                for w in face_vertices(f):
                    if w != v:
                        lv.union((i, v, w), (j, m[v], m[w]))
        n_edges = len(edges) + bedges
        chi = len(lv.classes()) - n_edges + tris
        if bedges == 0:
            good = chi == 2
        else:
            good = chi == 1 and _boundary_circles(t, members) == 1
        if not good:
            issues.append(Issue("VERTEX_LINK", f"vertex {root}",
                                f"link is neither a sphere nor a disc (chi={chi}, boundary edges={bedges})"))
    return len(uf.classes())


def _boundary_circles(t, members):
    """Number of boundary circles in a vertex link."""
    # boundary link edges are (tet, v, free face); adjacent ones meet at a link vertex
    walk = _BoundaryWalk(t)
    nodes = []
    uf = _UF()
    for (i, v) in members:
        for f in range(4):
            if f != v and (i, f) not in t.gluings:
                nodes.append((i, f, v))
                uf.find((i, f, v))
    for (i, f, v) in nodes:
        for w in face_vertices(f):
            if w == v:
                continue
            j, g, m = walk.across(i, f, (v, w))
            uf.union((i, f, v), (j, g, m[v]))
    return len(uf.classes())


class _BoundaryWalk:
    """Find the boundary face adjacent to a boundary face across an edge."""

    def __init__(self, t):
        self.t = t

    def across(self, i, f, edge):
        t = self.t
        a, b = edge
        m = {a: a, b: b}
        cur, came = i, f
        for _ in range(4 * t.n + 4):
            other = [x for x in range(4) if x not in (m[a], m[b], came)]
            nf = other[0]
            if (cur, nf) not in t.gluings:
                return cur, nf, {a: m[a], b: m[b]}
            j, vm = t.vertex_map(cur, nf)
            m = {a: vm[m[a]], b: vm[m[b]]}
            came = t.gluings[(cur, nf)][1]
            cur = j
        raise RuntimeError("boundary walk did not terminate")


def _orientation(t):
    sign = [0] * t.n
    ok = True
    for start in range(t.n):
        if sign[start]:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for f in range(4):
                if (i, f) not in t.gluings:
                    continue
                j, m = t.vertex_map(i, f)
                s = permutation.sign(tuple(m[v] for v in range(4)))
                want = -sign[i] * s
                if sign[j] == 0:
                    sign[j] = want
                    queue.append(j)
                elif sign[j] != want:
                    ok = False
    return ok, tuple(sign)


def _connected(t):
    if t.n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for f in range(4):
            if (i, f) in t.gluings:
                j = t.gluings[(i, f)][0]
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
    return len(seen) == t.n


def boundary_surface(t):
    """Components of the boundary surface: (euler, orientable, triangles)."""
    faces = t.boundary_faces()
    if not faces:
        return ()
    walk = _BoundaryWalk(t)
    comp = _UF()
    corners = _UF()
    orient = _UF()
    coherent = True
    edge_count = 0
    for (i, f) in faces:
        comp.find((i, f))
        orient.find((i, f))
        for v in face_vertices(f):
            corners.find((i, f, v))
    for (i, f) in faces:
        fv = face_vertices(f)
        for a, b in combinations(fv, 2):
            j, g, m = walk.across(i, f, (a, b))
            comp.union((i, f), (j, g))
            corners.union((i, f, a), (j, g, m[a]))
            corners.union((i, f, b), (j, g, m[b]))
            edge_count += 1
            # induced edge directions must be opposite for coherence
            d1 = _edge_dir(fv, a, b)
            d2 = _edge_dir(face_vertices(g), m[a], m[b])
            coherent &= orient.union((i, f), (j, g), 0 if d1 != d2 else 1)
    comps = comp.classes()
    out = []
    # orientability per component: re-run parity inside each component
    for root, members in sorted(comps.items()):
        mset = set(members)
        uf = _UF()
        good = True
        verts = set()
        edges = 0
        for (i, f) in members:
            uf.find((i, f))
            fv = face_vertices(f)
            for v in fv:
                verts.add(corners.find((i, f, v))[0])
            for a, b in combinations(fv, 2):
                j, g, m = walk.across(i, f, (a, b))
                assert (j, g) in mset
                edges += 1
                d1 = _edge_dir(fv, a, b)
                d2 = _edge_dir(face_vertices(g), m[a], m[b])
                good &= uf.union((i, f), (j, g), 0 if d1 != d2 else 1)
        edges //= 2
        out.append(BoundaryComponent(len(verts) - edges + len(members), good, len(members)))
    return tuple(sorted(out, key=lambda b: (b.euler, not b.orientable, b.triangles)))


def _edge_dir(fv, a, b):
    """+1 if the cyclic order of face ``fv`` runs a -> b."""
    i, j = fv.index(a), fv.index(b)
    return 1 if (j - i) % 3 == 1 else -1


def verify_manifold(t):
    issues = list(check_gluings(t))
    if issues:
        return ManifoldReport(False, False, None, False, (), tuple(issues), {"tetrahedra": t.n})
    n_edges = _edge_links(t, issues)
    n_vertices = _vertex_links(t, issues)
    orientable, signs = _orientation(t)
    connected = _connected(t)
    bnd = boundary_surface(t) if not issues else ()
    n_faces = (4 * t.n + len(t.boundary_faces())) // 2
    counts = {
        "tetrahedra": t.n,
        "faces": n_faces,
        "edges": n_edges,
        "vertices": n_vertices,
        "euler": n_vertices - n_edges + n_faces - t.n,
    }
    return ManifoldReport(
        is_manifold=not issues,
        orientable=orientable,
        orientation=signs if orientable else None,
        connected=connected,
        boundary=bnd,
        issues=tuple(issues),
        counts=counts,
    )


def chain_complex3(t):
    """Cellular chain complex of the glued tetrahedra."""
    levels = {}
    for size in (1, 2, 3):
        uf, ok = _classes(t, size)
        if not ok:
            raise ValueError(f"a {size - 1}-simplex is identified with itself reversed")
        roots = sorted(uf.classes())
        index = {r: k for k, r in enumerate(roots)}
        levels[size] = (uf, index)

    def cell(size, i, s):
        uf, index = levels[size]
        root, odd = uf.find((i, s))
        return index[root], -1 if odd else 1

    dims = [len(levels[s][1]) for s in (1, 2, 3)] + [t.n]
    bnd = {}
    for size in (2, 3):
        uf, index = levels[size]
        cols = [None] * len(index)
        for (i, s) in sorted(uf.parent):
            c, sg = cell(size, i, s)
            if cols[c] is not None:
                continue
            col = {}
            for pos in range(size):
                face = s[:pos] + s[pos + 1:]
                r, fs = cell(size - 1, i, face)
                col[r] = col.get(r, 0) + sg * fs * (-1) ** pos
            cols[c] = {r: v for r, v in col.items() if v}
        bnd[size - 1] = cols
    cols = []
    for i in range(t.n):
        col = {}
        for pos in range(4):
            face = tuple(v for v in range(4) if v != pos)
            r, fs = cell(3, i, face)
            col[r] = col.get(r, 0) + fs * (-1) ** pos
        cols.append({r: v for r, v in col.items() if v})
    bnd[3] = cols
    return ChainComplex(dims, bnd)


def homology3(t):
    return homology(chain_complex3(t))


@dataclass(frozen=True)
class WitnessReport:
    cellular: bool
    covering: bool
    violations: tuple
    uncovered: tuple

    @property
    def ok(self):
        return self.cellular and self.covering


def projection_witness(t, cells=None):
    """Check that provenance defines a cellular, covering map onto the polyhedron.

    ``cells`` maps each cell of the polyhedron to the set of cells incident
    to it; defaults to the incidence stored on ``t``.
    """
    inc = cells if cells is not None else t.cell_incidence
    violations = []
    for (i, f), (j, _g, _p) in sorted(t.gluings.items()):
        if i > j:
            continue
        a, b = t.provenance[i], t.provenance[j]
        if a == b:
            continue
        if b not in inc.get(a, ()) and a not in inc.get(b, ()):
            violations.append((i, f, j, a, b))
    present = set(t.provenance)
    uncovered = tuple(sorted(c for c in inc if c not in present))
    return WitnessReport(not violations, not uncovered, tuple(violations), uncovered)
