"""Hypothesis checklists and verdicts about the source manifold ``M``.

Everything here is derived from the polyhedron ``W_p`` alone: homology,
the fundamental group (through the transport isomorphisms), compatibility
of the singular set, and the count of double points.  A claim is affirmed
only when every hypothesis holds; one unknown hypothesis makes the claim
unknown, and otherwise a failing one makes it not applicable.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes.cells import cellulate, triangulate
from .complexes.collapse import collapse_search
from .complexes.homology import complex_homology
from .complexes.presentation import DEFAULT_BUDGET, pi1_presentation
from .errors import InvalidInput, TorsionAnomaly, VerificationFailure
from .model import require_valid
from .monodromy import check_compatibility

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"
AFFIRMED, NOT_APPLICABLE = "affirmed", "not-applicable"

REF_THICKENING = "thickening theorem for 4-dimensional sources"
REF_SPECIAL = "special generic maps into R^3 for 4-dimensional sources"
REF_FIVE = "special generic maps into R^3 for 5-dimensional sources"
REF_SPHERE = "homotopy sphere recognition from a simply connected polyhedron with H_2 = 0"
REF_NO_DOUBLE = "collapse to a disc when the singular set has no double points"
REF_LIMITS = "limits of the construction in higher dimensions"

READING_CAVEAT = ("'compatible with the natural polyhedron' is read as compatibility with "
                  "the natural orientation")


@dataclass(frozen=True)
class Hypothesis:
    name: str
    verdict: str  # holds / fails / unknown

    def to_json(self):
        return {"name": self.name, "holds": {HOLDS: True, FAILS: False}.get(self.verdict, UNKNOWN)}


@dataclass(frozen=True)
class Claim:
    statement: str
    paper_ref: str
    hypotheses: tuple
    caveats: tuple = ()
    corroboration: str = ""

    @property
    def conclusion(self):
        verdicts = [h.verdict for h in self.hypotheses]
        if UNKNOWN in verdicts:
            return UNKNOWN
        if FAILS in verdicts:
            return NOT_APPLICABLE
        return AFFIRMED

    def to_json(self):
        out = {
            "claim": self.statement,
            "paper_ref": self.paper_ref,
            "hypotheses": [h.to_json() for h in self.hypotheses],
            "verdict": self.conclusion,
            "caveats": list(self.caveats),
        }
        if self.corroboration:
            out["corroboration"] = self.corroboration
        return out


@dataclass(frozen=True)
class DecisionReport:
    question: str
    dimension: int
    claims: tuple

    @property
    def conclusion(self):
        found = {c.conclusion for c in self.claims}
        for c in (AFFIRMED, UNKNOWN):
            if c in found:
                return c
        return NOT_APPLICABLE

    def affirmed(self):
        return [c for c in self.claims if c.conclusion == AFFIRMED]

    def to_json(self):
        return {"question": self.question, "dimension": self.dimension,
                "conclusion": self.conclusion, "claims": [c.to_json() for c in self.claims]}


@dataclass(frozen=True)
class Facts:
    """Invariants of ``W_p`` shared by all decisions."""

    polyhedron: object
    euler: int
    homology: object
    pi1: object
    compatibility: object
    double_points: int
    complex: object = field(repr=False, default=None)


def compute_facts(p, budget=DEFAULT_BUDGET):
    require_valid(p)
    k2 = triangulate(p)
    return Facts(
        polyhedron=p,
        euler=cellulate(p).euler_characteristic(),
        homology=complex_homology(k2),
        pi1=pi1_presentation(k2, budget),
        compatibility=check_compatibility(p),
        double_points=len(p.vertices),
        complex=k2,
    )


def _facts(p, facts):
    return facts if facts is not None else compute_facts(p)


def _check_dim(m, lowest=3):
    if not isinstance(m, int) or m < lowest:
        raise InvalidInput(f"source dimension must be an integer >= {lowest}, got {m!r}")


def _holds(flag):
    return HOLDS if flag else FAILS


def _pi1_verdict(pi1):
    return {"trivial": HOLDS, "nontrivial": FAILS}.get(pi1.status, UNKNOWN)


@dataclass(frozen=True)
class SourceManifoldReport:
    dimension: int
    h1: str
    pi1_status: str
    transported_range: tuple
    transported: dict  # k -> H_k(M) = H_k(W_p) as text
    h2_free: bool | None = None
    rank_h2_source: int | None = None

    def to_json(self):
        out = {
            "dimension": self.dimension,
            "H1": self.h1,
            "pi1_status": self.pi1_status,
            "transported_range": list(self.transported_range),
            "transported_homology": {str(k): v for k, v in self.transported.items()},
        }
        if self.rank_h2_source is not None:
            out["H2_free"] = self.h2_free
            out["rank_H2_source"] = self.rank_h2_source
        return out


def source_invariants(p, m, facts=None):
    """What ``W_p`` determines about an ``m``-dimensional source ``M``."""
    _check_dim(m)
    f = _facts(p, facts)
    h = f.homology
    top = m - 3
    transported = {k: str(h[k]) for k in range(top + 1)}
    h2_free = rank = None
    if m == 4:
        h2_free = not h[2].torsion
        if not h2_free:
            raise TorsionAnomaly(
                f"H_2(W_p) = {h[2]} has torsion; no 4-dimensional source can map onto it this way")
        rank = 2 * h[2].rank
    return SourceManifoldReport(m, str(h[1]), f.pi1.status, tuple(range(top + 1)),
                                transported, h2_free, rank)


def _compat_hyp(f):
    return Hypothesis("W_p is compatible with the natural orientation",
                      _holds(f.compatibility.compatible))


def _corroborate_thickening(p, f):
    if not f.compatibility.compatible:
        return ""
    from .thickening.build import thicken
    from .thickening.triangulation3 import verify_manifold

    t = thicken(p)
    r = verify_manifold(t)
    if not r.ok or not r.orientable or not r.boundary:
        raise VerificationFailure(f"thickening of {p.name} failed its checks: {r.issues[:3]}")
    return (f"constructed W_P: {t.n} tetrahedra, orientable, connected, "
            f"{len(r.boundary)} boundary component(s)")


def special_generic_decision(p, m, facts=None, construct=True):
    """Does ``M`` admit a special generic map into R^3?"""
    _check_dim(m)
    f = _facts(p, facts)
    valid = Hypothesis("W_p is a valid simple polyhedron encoding", HOLDS)
    hyps = [valid, _compat_hyp(f)]
    claims = []
    addendum = ("composing with a projection gives a normal spherical fold map of M into the "
                "plane whose Reeb space is compatible with the natural orientation")
    if m == 4:
        dim = Hypothesis("source dimension m = 4", HOLDS)
        corr = _corroborate_thickening(p, f) if construct else ""
        claims.append(Claim(
            "there is a compact connected orientable 3-manifold W_P with non-empty boundary, "
            "a pseudo special generic map f_P of M onto W_P and a map g: W_P -> W_p with f_p = g o f_P",
            REF_THICKENING, (valid, hyps[1], dim), (READING_CAVEAT,), corr))
        claims.append(Claim("M admits a special generic map into R^3", REF_SPECIAL,
                            (valid, hyps[1], dim)))
        claims.append(Claim(addendum, REF_SPECIAL, (valid, hyps[1], dim)))
    elif m == 5:
        dim = Hypothesis("source dimension m = 5", HOLDS)
        claims.append(Claim("M admits a special generic map into R^3", REF_FIVE,
                            (valid, hyps[1], dim)))
        claims.append(Claim(addendum, REF_FIVE, (valid, hyps[1], dim)))
    else:
        dim = Hypothesis("source dimension m is 4 or 5", FAILS)
        caveats = (
            "the construction is not known to extend to this dimension in general",
            "there are 7-dimensional homotopy spheres that admit no special generic map into R^3",
        )
        claims.append(Claim("M admits a special generic map into R^3", REF_LIMITS,
                            (valid, hyps[1], dim), caveats))
    return DecisionReport("special generic map into R^3", m, tuple(claims))


def sphere_recognition(p, m, facts=None, collapse=True, seed=0, exhaustive_max=60):
    """Is ``M`` a (standard) sphere?"""
    _check_dim(m)
    f = _facts(p, facts)
    pi1 = _pi1_verdict(f.pi1)
    h2 = Hypothesis("H_2(W_p) = 0", _holds(f.homology[2].is_zero()))
    simply = Hypothesis(f"pi_1(W_p) is trivial ({f.pi1.certificate or f.pi1.status})", pi1)
    claims = []

    big = Hypothesis("source dimension m > 3", _holds(m > 3))
    claims.append(Claim("M is a homotopy sphere", REF_SPHERE, (simply, h2, big)))
    if m in (5, 6):
        claims.append(Claim("M is diffeomorphic to a standard sphere", REF_SPHERE,
                            (simply, h2, Hypothesis("source dimension m is 5 or 6", HOLDS))))
    if m == 4:
        claims.append(Claim("M is a standard sphere or S^4", REF_SPHERE,
                            (simply, h2, Hypothesis("source dimension m = 4", HOLDS), _compat_hyp(f)),
                            (READING_CAVEAT,)))

    nodouble = Hypothesis("the singular set has no double points", _holds(f.double_points == 0))
    corr = ""
    if collapse and f.double_points == 0:
        res = collapse_search(f.complex, target="disc", seed=seed, exhaustive_max=exhaustive_max)
        corr = f"collapse search to a disc: {res.outcome} ({res.certificate})"
    if m >= 4:
        # simple connectivity of M is read off W_p through the transport isomorphism
        m_simply = Hypothesis(f"M is simply connected, via pi_1(M) = pi_1(W_p) "
                              f"({f.pi1.certificate or f.pi1.status})", pi1)
        base = (nodouble, m_simply, h2)
        claims.append(Claim("W_p collapses to the closed 2-disc and M is a homotopy sphere",
                            REF_NO_DOUBLE, base, (), corr))
        if m <= 6:
            claims.append(Claim("M is the standard sphere", REF_NO_DOUBLE, base, (), corr))
    else:
        claims.append(Claim("W_p collapses to the closed 2-disc and M is diffeomorphic to S^3",
                            REF_NO_DOUBLE, (nodouble, simply, h2), (), corr))
    return DecisionReport("sphere recognition", m, tuple(claims))


@dataclass(frozen=True)
class AnalysisBundle:
    facts: Facts
    dimension: int
    source: SourceManifoldReport
    special_generic: DecisionReport
    sphere: DecisionReport

    def claims(self):
        return self.special_generic.claims + self.sphere.claims

    def to_json(self):
        f = self.facts
        hom = {f"H{k}": {"rank": f.homology[k].rank, "torsion": list(f.homology[k].torsion)}
               for k in range(3)}
        pres = f.pi1.to_json()
        pres["text"] = f.pi1.as_text()
        witness = f.compatibility.witness
        return {
            "polyhedron": f.polyhedron.name,
            "dimension": self.dimension,
            "euler": f.euler,
            "homology": hom,
            "pi1": {"status": f.pi1.status, "presentation": pres},
            "compatible": f.compatibility.compatible,
            "compatibility_witness": [[a, fw] for a, fw in witness] if witness else None,
            "double_points": f.double_points,
            "source_manifold": self.source.to_json(),
            "decisions": [c.to_json() for c in self.claims()],
        }


def analyze(p, m, budget=DEFAULT_BUDGET, seed=0, exhaustive_max=60, construct=True):
    _check_dim(m)
    f = compute_facts(p, budget)
    return AnalysisBundle(
        f, m, source_invariants(p, m, f),
        special_generic_decision(p, m, f, construct=construct),
        sphere_recognition(p, m, f, seed=seed, exhaustive_max=exhaustive_max),
    )
