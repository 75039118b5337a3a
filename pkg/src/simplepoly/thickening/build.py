"""Thicken a simple polyhedron to an orientable 3-manifold with boundary.

Blocks, all built over the canonical triangulation ``K``:

* region prisms: every triangle of ``K`` times an interval, with the two
  interval ends chosen from the local orientation so that the bundle over
  a non-orientable region is the twisted one;
* centre prisms: a triangle ``Delta`` times each ``K``-edge of a triple
  edge; the three sheets attach along the sides of ``Delta`` and a circle
  edge closes up by rotating ``Delta`` through its slot permutation;
* collar prisms along free circles;
* one tetrahedron per double point, its faces capping the four ports.

Vertices carry labels, prisms are cut into tetrahedra with diagonals
chosen by the global label order, and gluings come from shared faces.
The chirality of each triple edge (how its sheets wind around ``Delta``)
is solved as a Z/2 system; a solution exists exactly when no loop of the
singular set has odd monodromy.
"""
from __future__ import annotations

from collections import defaultdict, deque
from fractions import Fraction

from .. import perm
from ..charts import get_chart
from ..complexes.cells import triangulate
from ..errors import ChartUnsupported, Incompatible, VerificationFailure
from ..model import Attached, FreeCircle, VertexPassage, corner_incidence, port_targets, require_valid
from ..monodromy import check_compatibility
from .triangulation3 import Triangulation3, face_vertices

SWAP = (1, 0, 2)
Q1, Q2, Q3 = Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)


def link_direction(tri, v):
    """Edge of the link of ``v`` in ``tri``, directed by the sorted orientation."""
    a, b, c = tri
    if v == a:
        return (b, c)
    if v == b:
        return (c, a)
    return (a, b)


def _walk_paths(segments, ends):
    """Split a link graph into paths between ``ends`` nodes.

    ``segments`` maps triangle -> undirected link edge.  Returns a list of
    (start, stop, [(tri, (u, w)), ...]) with each edge directed start->stop.
    """
    by_node = defaultdict(list)
    for tri, (u, w) in segments.items():
        by_node[u].append(tri)
        by_node[w].append(tri)
    used = set()
    paths = []
    for start in sorted(ends):
        for tri in sorted(by_node[start]):
            if tri in used:
                continue
            node, cur, steps = start, tri, []
            while True:
                used.add(cur)
                u, w = segments[cur]
                nxt = w if u == node else u
                steps.append((cur, (node, nxt)))
                node = nxt
                if node in ends:
                    break
                cand = [x for x in by_node[node] if x not in used]
                if len(cand) != 1:
                    raise VerificationFailure(f"link walk stuck at {node}")
                cur = cand[0]
            paths.append((start, node, steps))
    if len(used) != len(segments):
        raise VerificationFailure("link has pieces away from the singular nodes")
    return paths


def _cycle_or_path(segments):
    """Orient a connected link that is a cycle or a path; returns directed edges."""
    adj = defaultdict(list)
    for u, w in segments:
        adj[u].append(w)
        adj[w].append(u)
    ends = sorted(v for v, ns in adj.items() if len(ns) == 1)
    if any(len(ns) > 2 for ns in adj.values()) or len(ends) not in (0, 2):
        raise VerificationFailure("regional link is not a cycle or a path")
    start = ends[0] if ends else min(adj)
    prev, node = None, start
    directed = set()
    for _ in range(len(segments)):
        options = sorted(w for w in adj[node] if w != prev) if prev is not None else sorted(adj[node])
        if not options:
            break
        nxt = options[0]
        directed.add((node, nxt))
        prev, node = node, nxt
    if len(directed) != len(segments):
        raise VerificationFailure("regional link is disconnected")
    return directed


class _Builder:
    def __init__(self, p):
        self.p = p
        self.k = triangulate(p)
        self.emap = p.edge_map()
        self.inc = corner_incidence(p)
        self.phi = {v.id: port_targets(self.inc[v.id]) for v in p.vertices}
        self.tris_at = defaultdict(list)
        for t in self.k.triangles:
            for v in t:
                self.tris_at[v].append(t)
        self.nbrs = defaultdict(set)
        for a, b in self.k.edges:
            self.nbrs[a].add(b)
            self.nbrs[b].add(a)
        self.kind = {v: self.k.vertex_cell[v][0] for v in self.k.vertices}

    # -- singular bookkeeping -------------------------------------------------

    def edge_nbrs(self, v):
        return sorted(w for w in self.nbrs[v]
                      if self.k.edge_cell[tuple(sorted((v, w)))][0] == "edge")

    def param(self, v, eid):
        vp = self.k.vertex_param.get(v)
        if vp is not None and vp[0] == ("e", eid):
            return vp[1]
        return None

    def prev_next(self, y):
        eid = self.k.vertex_cell[y][1]
        t = self.param(y, eid)
        ns = self.edge_nbrs(y)
        if len(ns) != 2:
            raise VerificationFailure(f"edge vertex {y} has {len(ns)} edge neighbours")
        want_prev = {Fraction(0): Q3, Q1: None, Q2: Q1, Q3: Q2}[t]
        want_next = {Fraction(0): Q1, Q1: Q2, Q2: Q3, Q3: None}[t]
        prev = [w for w in ns if self.param(w, eid) == want_prev] if want_prev is not None else \
            [w for w in ns if self.param(w, eid) != want_next]
        nxt = [w for w in ns if w not in prev]
        return prev[0], nxt[0]

    def letter_slot(self, tri):
        rid, i, _ = self.k.triangle_tag[tri]
        meta = self.k.polygon_words[rid][i].meta
        if meta is None:
            raise VerificationFailure(f"triangle {tri} next to an edge has no slot")
        return meta[1]

    def analyse_edges(self):
        """Sheets at every triple-edge vertex: triangle -> (label, agree)."""
        self.sheet = {}
        for y in self.k.vertices:
            if self.kind[y] != "edge":
                continue
            eid = self.k.vertex_cell[y][1]
            edge = self.emap[eid]
            prev, nxt = self.prev_next(y)
            segs = {t: link_direction(t, y) for t in self.tris_at[y]}
            paths = _walk_paths(segs, {prev, nxt})
            seen_labels = set()
            for start, stop, steps in paths:
                if start == stop:
                    raise VerificationFailure(f"sheet at {y} returns to its start")
                if start != prev:
                    steps = [(t, (b, a)) for t, (a, b) in reversed(steps)]
                first, last = steps[0][0], steps[-1][0]
                c_first, c_last = self.letter_slot(first), self.letter_slot(last)
                at_marker = self.param(y, eid) == 0
                expect = edge.identification[c_first] if at_marker else c_first
                if expect != c_last:
                    raise VerificationFailure(f"sheet labels disagree at {y}")
                seen_labels.add(c_last)
                for t, d in steps:
                    self.sheet[(y, t)] = (c_last, link_direction(t, y) == d)
            if len(seen_labels) != 3:
                raise VerificationFailure(f"edge vertex {y} does not see three sheets")

    def port_of(self, x, w):
        """Port of double point ``x`` whose edge germ contains neighbour ``w``."""
        cell = self.k.edge_cell[tuple(sorted((x, w)))]
        edge = self.emap[cell[1]]
        t = self.param(w, edge.id)
        end = edge.endpoints[0] if t == Q1 else edge.endpoints[1]
        return end.port, edge.id

    def analyse_vertices(self):
        self.germs = {}  # x -> list of dicts
        for x in self.k.vertices:
            if self.kind[x] != "vertex":
                continue
            vid = self.k.vertex_cell[x][1]
            ports = {w: self.port_of(x, w) for w in self.edge_nbrs(x)}
            segs = {t: link_direction(t, x) for t in self.tris_at[x]}
            paths = _walk_paths(segs, set(ports))
            out = []
            seen = set()
            for start, stop, steps in paths:
                key = frozenset(t for t, _ in steps)
                if key in seen:
                    continue
                seen.add(key)
                (p, ep), (q, eq) = ports[start], ports[stop]
                if p > q:
                    start, stop, (p, ep), (q, eq) = stop, start, (q, eq), (p, ep)
                    steps = [(t, (b, a)) for t, (a, b) in reversed(steps)]
                out.append({
                    "vid": vid, "p": p, "q": q, "ep": ep, "eq": eq,
                    "yp": start, "yq": stop, "steps": steps,
                })
            if len(out) != 6 or {(g["p"], g["q"]) for g in out} != {
                    (a, b) for a in range(4) for b in range(a + 1, 4)}:
                raise VerificationFailure(f"double point {vid} does not show six region germs")
            self.germs[x] = out

    # -- chirality --------------------------------------------------------------

    @staticmethod
    def lam(bit):
        return perm.IDENTITY if bit == 0 else SWAP

    def delta_top(self, label, agree, lam):
        k = perm.inverse(lam)[label]
        return (k + 1) % 3 if agree else (k + 2) % 3

    def tstar_corner(self, vid, port, lam, j):
        return self.phi[vid][port][lam[j]]

    def germ_check(self, x, g, bp, bq):
        """Does the germ close up consistently for chirality bits ``bp``, ``bq``?"""
        vid = g["vid"]
        t0, d0 = g["steps"][0]
        t1, d1 = g["steps"][-1]
        l0, a0 = self.sheet[(g["yp"], t0)]
        l1, a1 = self.sheet[(g["yq"], t1)]
        A = self.tstar_corner(vid, g["p"], self.lam(bp), self.delta_top(l0, a0, self.lam(bp)))
        B = self.tstar_corner(vid, g["q"], self.lam(bq), self.delta_top(l1, a1, self.lam(bq)))
        fibre = [c for c in range(4) if c not in (g["p"], g["q"])]
        if A not in fibre or B not in fibre:
            raise VerificationFailure(f"germ {g['p']}{g['q']} at {vid} leaves its fibre")
        x_agree0 = link_direction(t0, x) == d0
        x_agree1 = link_direction(t1, x) == d1
        expect = A if x_agree0 == x_agree1 else next(c for c in fibre if c != A)
        return expect == B

    def solve_chirality(self):
        constraints = defaultdict(list)
        for x, germs in self.germs.items():
            for g in germs:
                ok = {(a, b) for a in (0, 1) for b in (0, 1) if self.germ_check(x, g, a, b)}
                if g["ep"] == g["eq"]:
                    ok = {(a, b) for a, b in ok if a == b}
                    if not ok:
                        raise Incompatible(f"edge {g['ep']} cannot be thickened orientably",
                                           witness=((g["ep"], True),))
                    if len(ok) == 1:
                        (bit, _), = ok
                        constraints[g["ep"]].append((None, bit))
                    continue
                if ok == {(0, 0), (1, 1)}:
                    parity = 0
                elif ok == {(0, 1), (1, 0)}:
                    parity = 1
                else:
                    raise VerificationFailure(f"germ constraint {sorted(ok)} is not a parity")
                constraints[g["ep"]].append((g["eq"], parity))
                constraints[g["eq"]].append((g["ep"], parity))
        bits = {}
        for e in sorted(self.emap):
            if e in bits:
                continue
            fixed = [b for other, b in constraints[e] if other is None]
            bits[e] = fixed[0] if fixed else 0
            queue = deque([e])
            while queue:
                a = queue.popleft()
                for other, parity in constraints[a]:
                    if other is None:
                        if bits[a] != parity:
                            raise Incompatible("no orientable thickening of the singular set",
                                               witness=((a, True),))
                        continue
                    want = bits[a] ^ parity
                    if other not in bits:
                        bits[other] = want
                        queue.append(other)
                    elif bits[other] != want:
                        raise Incompatible("no orientable thickening of the singular set",
                                           witness=((a, True), (other, True)))
        self.bits = bits
        for e in self.emap.values():
            if e.is_circle and perm.sign(e.identification) < 0:
                raise Incompatible(f"circle {e.id} has odd slot monodromy", witness=((e.id, True),))

    # -- fibres -----------------------------------------------------------------

    def regional_orientation(self):
        self.reg_dir = {}
        for v in self.k.vertices:
            if self.kind[v] in ("region", "free"):
                segs = [link_direction(t, v) for t in self.tris_at[v]]
                self.reg_dir[v] = _cycle_or_path(segs)

    def build_x_tops(self):
        self.x_top = {}
        for x, germs in self.germs.items():
            for g in germs:
                vid = g["vid"]
                fibre = [c for c in range(4) if c not in (g["p"], g["q"])]
                t0, d0 = g["steps"][0]
                l0, a0 = self.sheet[(g["yp"], t0)]
                lam = self.lam(self.bits[g["ep"]])
                A = self.tstar_corner(vid, g["p"], lam, self.delta_top(l0, a0, lam))
                B = next(c for c in fibre if c != A)
                agree0 = link_direction(t0, x) == d0
                for t, d in g["steps"]:
                    top = A if (link_direction(t, x) == d) == agree0 else B
                    self.x_top[(x, t)] = (("t", x, top), ("t", x, A if top == B else B))

    def fibre(self, t, v):
        """(top, bottom) vertex labels of the prism over ``t`` at ``v``."""
        kind = self.kind[v]
        if kind in ("region", "free"):
            up = link_direction(t, v) in self.reg_dir[v]
            return (("r", v, "+"), ("r", v, "-")) if up else (("r", v, "-"), ("r", v, "+"))
        if kind == "edge":
            label, agree = self.sheet[(v, t)]
            lam = self.lam(self.bits[self.k.vertex_cell[v][1]])
            k = perm.inverse(lam)[label]
            top, bot = ((k + 1) % 3, (k + 2) % 3) if agree else ((k + 2) % 3, (k + 1) % 3)
            return ("d", v, top), ("d", v, bot)
        return self.x_top[(v, t)]

    def delta_labels(self, v, eid, toward):
        """Labels of the Delta corners 0..2 at ``v`` for the centre prism of ``eid``."""
        lam = self.lam(self.bits[eid])
        if self.kind[v] == "vertex":
            edge = self.emap[eid]
            vid = self.k.vertex_cell[v][1]
            t = self.param(toward, eid)
            port = edge.endpoints[0].port if t == Q1 else edge.endpoints[1].port
            return [("t", v, self.tstar_corner(vid, port, lam, j)) for j in range(3)]
        return [("d", v, j) for j in range(3)]

    # -- assembly ---------------------------------------------------------------

    def prisms(self):
        out = []  # (cell, [(bottom, top) x 3])
        for t in self.k.triangles:
            rid = self.k.triangle_cell[t][1]
            pairs = [tuple(reversed(self.fibre(t, v))) for v in t]
            out.append((f"region:{rid}", pairs))
        for (a, b), cell in sorted(self.k.edge_cell.items()):
            if cell[0] == "edge":
                eid = cell[1]
                ta = self.param(a, eid)
                tb = self.param(b, eid)
                # orient the K-edge along the triple edge
                if self.kind[a] == "vertex":
                    u, w = (a, b) if tb == Q1 else (b, a)
                elif self.kind[b] == "vertex":
                    u, w = (b, a) if ta == Q1 else (a, b)
                elif (ta, tb) in ((Q3, 0), (Fraction(0), Q3)):
                    u, w = (a, b) if ta == Q3 else (b, a)
                else:
                    u, w = (a, b) if ta < tb else (b, a)
                lu = self.delta_labels(u, eid, w)
                lw = self.delta_labels(w, eid, u)
                edge = self.emap[eid]
                if edge.is_circle and self.param(w, eid) == 0 and self.kind[w] == "edge":
                    lam = self.lam(self.bits[eid])
                    sigma = perm.compose(perm.compose(lam, edge.identification), perm.inverse(lam))
                    lw = [lw[sigma[j]] for j in range(3)]
                out.append((f"edge:{eid}", list(zip(lu, lw))))
            elif cell[0] == "free":
                tri = next(t for t in self.tris_at[a] if b in t)
                fa, fb = self.fibre(tri, a), self.fibre(tri, b)
                pairs = [(fa[0], fb[0]), (fa[1], fb[1]), (("r", a, "c"), ("r", b, "c"))]
                out.append((f"free:{cell[1]}", pairs))
        return out

    def run(self):
        self.analyse_edges()
        self.analyse_vertices()
        self.solve_chirality()
        self.regional_orientation()
        self.build_x_tops()
        prisms = self.prisms()
        labels = set()
        for _, pairs in prisms:
            for a, b in pairs:
                labels.update((a, b))
        for x in self.germs:
            labels.update(("t", x, c) for c in range(4))
        order = {lab: i for i, lab in enumerate(sorted(labels, key=repr))}
        tets = []
        for cell, pairs in prisms:
            ipairs = [(order[a], order[b]) for a, b in pairs]
            for tet in split_prism(ipairs):
                tets.append((tet, cell))
        for x in sorted(self.germs):
            vid = self.k.vertex_cell[x][1]
            tets.append((tuple(sorted(order[("t", x, c)] for c in range(4))), f"vertex:{vid}"))
        return assemble(tets, cell_incidence(self.p), meta={
            "chirality": dict(sorted(self.bits.items())),
            "orientable_singular_neighbourhood": True,
        })


def split_prism(pairs):
    """Three tetrahedra of the prism with vertical edges ``pairs``.

    Every square side is cut along the diagonal through its smallest
    vertex, so adjacent prisms always agree on shared sides.
    """
    (a0, b0), (a1, b1), (a2, b2) = pairs
    A, B = (a0, a1, a2), (b0, b1, b2)
    v = min(A + B)

    def quad(i, j):
        ai, aj, bi, bj = A[i], A[j], B[i], B[j]
        if min(ai, aj, bi, bj) in (ai, bj):
            return [(ai, aj, bj), (ai, bj, bi)]
        return [(aj, bi, ai), (aj, bj, bi)]

    faces = [A, B] + quad(0, 1) + quad(1, 2) + quad(2, 0)
    tets = [tuple(sorted((v,) + f)) for f in faces if v not in f]
    if len(tets) != 3 or any(len(set(t)) != 4 for t in tets):
        raise VerificationFailure(f"degenerate prism {pairs}")
    return tets


def assemble(tets, incidence=None, meta=None):
    """Triangulation3 from labelled tetrahedra; gluings by shared faces."""
    order = sorted(range(len(tets)), key=lambda i: tets[i][0])
    tets = [tets[i] for i in order]
    if len({t for t, _ in tets}) != len(tets):
        raise VerificationFailure("two blocks produced the same tetrahedron")
    where = defaultdict(list)
    for i, (t, _) in enumerate(tets):
        for f in range(4):
            where[tuple(x for k, x in enumerate(t) if k != f)].append((i, f))
    gluings = {}
    for face, occ in where.items():
        if len(occ) > 2:
            raise VerificationFailure(f"face {face} lies in {len(occ)} tetrahedra")
        if len(occ) == 2:
            (i, f), (j, g) = occ
            ti, tj = tets[i][0], tets[j][0]
            gluings[(i, f)] = (j, g, tuple(tj.index(ti[v]) for v in face_vertices(f)))
            gluings[(j, g)] = (i, f, tuple(ti.index(tj[v]) for v in face_vertices(g)))
    return Triangulation3(
        n=len(tets),
        gluings=gluings,
        provenance=tuple(c for _, c in tets),
        cell_incidence=incidence or {},
        labels=tuple(t for t, _ in tets),
        meta=meta or {},
    )


def cell_incidence(p):
    inc = defaultdict(set)

    def link(a, b):
        inc[a].add(b)
        inc[b].add(a)

    for v in p.vertices:
        inc[f"vertex:{v.id}"]
    for e in p.edges:
        inc[f"edge:{e.id}"]
        for port in e.endpoints:
            link(f"edge:{e.id}", f"vertex:{port.vertex}")
    for r in p.regions:
        rc = f"region:{r.id}"
        inc[rc]
        for comp in r.boundary:
            if isinstance(comp, FreeCircle):
                link(rc, f"free:{comp.id}")
            elif isinstance(comp, Attached):
                for tok in comp.word:
                    if isinstance(tok, VertexPassage):
                        link(rc, f"vertex:{tok.vertex}")
                    else:
                        link(rc, f"edge:{tok.edge}")
    for fc in p.free_circles:
        inc[f"free:{fc}"]
    return {k: frozenset(v) for k, v in sorted(inc.items())}


def thicken(p):
    """Orientable 3-manifold ``W_P`` thickening ``p``, as glued tetrahedra."""
    require_valid(p)
    for v in p.vertices:
        chart = get_chart(v.chart_id)
        if chart is None or chart.thickening_block != "tetrahedron":
            raise ChartUnsupported(f"chart {v.chart_id!r} of vertex {v.id} has no thickening block")
    report = check_compatibility(p)
    if not report.compatible:
        raise Incompatible("a loop of the singular set has transposition monodromy "
                           "(not compatible with the natural orientation)", witness=report.witness)
    return _Builder(p).run()
