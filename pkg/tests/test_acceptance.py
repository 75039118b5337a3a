"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` for the lines inline; the
terminal summary repeats them.  ``python3 tests/test_acceptance.py``
runs the gate without pytest.
"""
import os
import random
import sys
import tempfile
import time

from simplepoly import cli
from simplepoly.catalog import NAMES, catalog
from simplepoly.codec.spoly import emit_spoly, parse_spoly
from simplepoly.codec.tri3 import emit_tri3, parse_tri3
from simplepoly.complexes.cells import triangulate
from simplepoly.complexes.collapse import COLLAPSED, IMPOSSIBLE, collapse_search
from simplepoly.complexes.homology import complex_homology
from simplepoly.complexes.snf import smith_normal_form
from simplepoly.decisions import AFFIRMED, source_invariants, special_generic_decision, sphere_recognition
from simplepoly.model import SimplePolyhedron, validate
from simplepoly.monodromy import check_compatibility, seeded
from simplepoly.thickening.build import thicken
from simplepoly.thickening.triangulation3 import check_gluings, homology3, projection_witness, verify_manifold

try:
    from .conftest import ACCEPTANCE, annulus
    from .test_snf import oracle
except ImportError:  # run as a script
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    from tests.conftest import ACCEPTANCE, annulus
    from tests.test_snf import oracle


def _gate(number, limit, check):
    """Run ``check`` (returns a list of failure strings) and record the verdict."""
    start = time.perf_counter()
    failures = check()
    elapsed = time.perf_counter() - start
    if elapsed > limit:
        failures.append(f"took {elapsed:.1f}s, limit {limit}s")
    ok = not failures
    detail = f"({elapsed:.2f}s)" + ("" if ok else " " + "; ".join(failures[:3]))
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, failures


def _shape(h):
    return tuple((h[k].rank, tuple(h[k].torsion)) for k in range(3))


def test_criterion_1_catalog_integrity():
    def check():
        bad = []
        for name in NAMES:
            report = validate(catalog(name))
            if report.errors:
                bad.append(f"{name}: {report.codes()}")
        dp = validate(catalog("bing_house")).summary["double_points"]
        if dp != 2:
            bad.append(f"bing_house has {dp} double points")
        if len(NAMES) != 7:
            bad.append(f"{len(NAMES)} catalog entries")
        return bad

    _gate(1, 1.0, check)


def test_criterion_2_compatibility():
    def check():
        bad = []
        expected = {"disc": True, "round_bundle": True, "round_sum2": True, "bing_house": True,
                    "two_crossings": True, "incompatible_circle": False}
        for name, want in expected.items():
            p = catalog(name)
            start = time.perf_counter()
            reports = [check_compatibility(p, rng=seeded(s)) for s in range(100)]
            if time.perf_counter() - start > 1.0:
                bad.append(f"{name} over 1s")
            verdicts = {r.compatible for r in reports}
            if verdicts != {want}:
                bad.append(f"{name}: {verdicts}")
            if not want and any(r.witness is None for r in reports):
                bad.append(f"{name}: missing witness loop")
        return bad

    _gate(2, 6.0, check)


def test_criterion_3_homology():
    def check():
        bad = []
        z, zero = (1, ()), (0, ())
        expected = {
            "disc": (z, zero, zero),
            "bing_house": (z, zero, zero),
            "round_bundle": (z, zero, z),
            "round_sum2": (z, zero, (2, ())),
        }
        for name, want in expected.items():
            got = _shape(complex_homology(triangulate(catalog(name))))
            if got != want:
                bad.append(f"{name}: {got}")
        rng = random.Random(20240601)
        mismatches = 0
        for _ in range(1000):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            a = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
            if smith_normal_form(a).factors != oracle(a):
                mismatches += 1
        if mismatches:
            bad.append(f"{mismatches} SNF mismatches")
        return bad

    _gate(3, 10.0, check)


def test_criterion_4_rank_transport():
    def check():
        bad = []
        for name, want in (("round_bundle", 2), ("round_sum2", 4)):
            got = source_invariants(catalog(name), 4).rank_h2_source
            if got != want:
                bad.append(f"{name}: rank H2(M) = {got}")
        return bad

    _gate(4, 1.0, check)


def test_criterion_5_thickening():
    def check():
        bad = []
        for name in NAMES:
            p = catalog(name)
            if not check_compatibility(p).compatible:
                continue
            t = thicken(p)
            r = verify_manifold(t)
            if not (r.ok and r.orientable and r.connected and r.boundary):
                bad.append(f"{name}: manifold checks {r.issues[:2]}")
                continue
            k2 = triangulate(p)
            chi = r.counts["euler"]
            if chi != k2.euler_characteristic():
                bad.append(f"{name}: chi(W_P) {chi} != chi(W_p) {k2.euler_characteristic()}")
            if sum(b.euler for b in r.boundary) != 2 * chi:
                bad.append(f"{name}: chi of boundary is not 2 chi")
            h3 = homology3(t)
            if _shape(h3) != _shape(complex_homology(k2)) or h3[3].rank or h3[3].torsion:
                bad.append(f"{name}: homology {h3}")
            if not projection_witness(t).ok:
                bad.append(f"{name}: projection witness")
        return bad

    _gate(5, 30.0, check)


def test_criterion_6_disc_is_a_ball():
    def check():
        t = thicken(catalog("disc"))
        r = verify_manifold(t)
        bad = []
        if [(b.euler, b.orientable) for b in r.boundary] != [(2, True)]:
            bad.append(f"boundary {r.boundary}")
        h = homology3(t)
        if [(g.rank, g.torsion) for g in h.groups] != [(1, ()), (0, ()), (0, ()), (0, ())]:
            bad.append(f"homology {h}")
        return bad

    _gate(6, 1.0, check)


def test_criterion_7_hypothesis_gating():
    def check():
        bad = []
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "out.tri3")
            code = cli.run(["thicken", "catalog:incompatible_circle", "-o", out])
            if code != 2 or os.listdir(tmp):
                bad.append(f"thicken incompatible: exit {code}, files {os.listdir(tmp)}")
        r = sphere_recognition(catalog("bing_house"), 4)
        if not any(c.conclusion == AFFIRMED and "a standard sphere or S^4" in c.statement for c in r.claims):
            bad.append("bing_house dim 4 not recognised as a standard sphere or S^4")
        r = special_generic_decision(catalog("bing_house"), 5)
        if r.conclusion != AFFIRMED or not all("5-dimensional" in c.paper_ref for c in r.claims):
            bad.append("bing_house dim 5 special generic not affirmed")
        for name in NAMES:
            if special_generic_decision(catalog(name), 7, construct=False).affirmed():
                bad.append(f"{name} dim 7 affirmed")
        return bad

    _gate(7, 5.0, check)


def test_criterion_8_collapse():
    def check():
        bad = []
        disc = collapse_search(triangulate(catalog("disc")), seed=1)
        if disc.outcome != COLLAPSED:
            bad.append(f"disc: {disc.outcome}")
        ann = collapse_search(triangulate(annulus()), seed=1)
        if ann.outcome != IMPOSSIBLE:
            bad.append(f"annulus: {ann.outcome}")
        k = triangulate(catalog("bing_house"))
        a = collapse_search(k, seed=1)
        b = collapse_search(k, seed=1)
        if a.outcome == COLLAPSED:
            bad.append("bing_house collapsed")
        if len(k.simplices()) <= 60 and a.outcome != IMPOSSIBLE:
            bad.append("bing_house fits the exhaustive threshold but was not refuted")
        if a != b:
            bad.append("bing_house search not deterministic")
        g1 = collapse_search(triangulate(catalog("disc")), exhaustive_max=0, seed=9)
        g2 = collapse_search(triangulate(catalog("disc")), exhaustive_max=0, seed=9)
        if g1 != g2:
            bad.append("greedy search not deterministic")
        return bad

    _gate(8, 60.0, check)


def _fuzz_inputs(n, seed):
    rng = random.Random(seed)
    texts = [emit_spoly(catalog(name)).encode() for name in NAMES]
    alphabet = b" \n\t()>+-.#0123456789abcefgxyzCDRX_"
    words = [b"spoly", b"polyhedron", b"vertex", b"edge", b"region", b"boundary", b"free", b"attached",
             b"chart", b"pairs", b"trans", b"circle", b"interval", b"ident", b"genus", b"orientable"]
    for i in range(n):
        kind = i % 3
        if kind == 0:
            yield rng.randbytes(rng.randrange(0, 160))
        elif kind == 1:
            parts = [rng.choice(words) if rng.random() < 0.4 else
                     bytes(rng.choice(alphabet) for _ in range(rng.randrange(1, 6)))
                     for _ in range(rng.randrange(0, 30))]
            yield b" ".join(parts)
        else:
            b = bytearray(rng.choice(texts))
            for _ in range(rng.randrange(1, 5)):
                k = rng.randrange(len(b) + 1)
                op = rng.randrange(3)
                if op == 0:
                    b[k:k] = bytes([rng.choice(alphabet)])
                elif op == 1:
                    del b[k:k + rng.randrange(1, 6)]
                else:
                    b[k:k + 1] = bytes([rng.randrange(256)])
            yield bytes(b)


def test_criterion_9_formats():
    def check():
        bad = []
        for name in NAMES:
            p = catalog(name)
            text = emit_spoly(p)
            q = parse_spoly(text)
            if q != p or emit_spoly(q) != text:
                bad.append(f"{name}: spoly round trip")
            if check_compatibility(p).compatible:
                t = thicken(p)
                if check_gluings(t):
                    bad.append(f"{name}: gluings not involutive")
                u = parse_tri3(emit_tri3(t))
                if isinstance(u, list) or u.gluings != t.gluings:
                    bad.append(f"{name}: tri3 round trip")
        crashes = 0
        for data in _fuzz_inputs(100_000, 7):
            try:
                result = parse_spoly(data)
                if not isinstance(result, (list, SimplePolyhedron)):
                    crashes += 1
            except Exception:
                crashes += 1
        if crashes:
            bad.append(f"{crashes} parser crashes")
        return bad

    _gate(9, 30.0, check)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
