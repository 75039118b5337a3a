"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 hypotheses not met, 3 budget or
limit exceeded, 4 internal verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import catalog as _catalog
from .codec.report import emit_report_json
from .codec.spoly import emit_spoly, parse_spoly_document
from .codec.tri3 import emit_tri3
from .complexes.cells import triangulate
from .complexes.collapse import EXHAUSTED, collapse_search
from .complexes.presentation import DEFAULT_BUDGET
from .errors import (
    ChartUnsupported,
    Incompatible,
    InvalidInput,
    SimplePolyError,
    TorsionAnomaly,
    UnknownExample,
    VerificationFailure,
)
from .model import validate

OK, INVALID, HYPOTHESES, BUDGET, VERIFY = 0, 1, 2, 3, 4
PREFIX = "catalog:"


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _err(msg):
    print(msg, file=sys.stderr)


def _load(source):
    """Polyhedron from ``catalog:<name>`` or a ``.spoly`` path."""
    if source.startswith(PREFIX):
        try:
            return _catalog.catalog(source[len(PREFIX):])
        except UnknownExample as exc:
            raise _Failure(INVALID, str(exc.args[0])) from None
    try:
        with open(source, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise _Failure(INVALID, f"cannot read {source}: {exc.strerror}") from None
    doc = parse_spoly_document(data)
    if doc.polyhedron is None:
        raise _Failure(INVALID, "\n".join(f"{source}:{e}" for e in doc.errors))
    return doc.polyhedron


def _write(path, text):
    """Write atomically so a failure never leaves a partial file behind."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_json(obj):
    sys.stdout.write(emit_report_json(obj))


def cmd_validate(args):
    p = _load(args.input)
    report = validate(p)
    if args.json:
        _emit_json({
            "polyhedron": p.name,
            "ok": report.ok,
            "errors": [[i.code, i.location, i.message] for i in report.errors],
            "warnings": [[i.code, i.location, i.message] for i in report.warnings],
            "summary": report.summary,
        })
    else:
        print(f"{p.name}: {'valid' if report.ok else 'invalid'}")
        for k, v in sorted(report.summary.items()):
            print(f"  {k}: {v}")
        for i in report.warnings:
            _err(f"warning {i.code} at {i.location}: {i.message}")
    for i in report.errors:
        _err(f"error {i.code} at {i.location}: {i.message}")
    return OK if report.ok else INVALID


def cmd_analyze(args):
    from .decisions import analyze

    p = _load(args.input)
    bundle = analyze(p, args.dim, budget=args.budget or DEFAULT_BUDGET, seed=args.seed,
                     exhaustive_max=args.exhaustive_max)
    if args.json:
        _emit_json(bundle)
    else:
        f = bundle.facts
        print(f"polyhedron {p.name}, source dimension {args.dim}")
        print(f"  euler characteristic {f.euler}")
        print(f"  homology {f.homology}")
        print(f"  pi_1 {f.pi1.status}: {f.pi1.certificate}")
        print(f"  compatible {f.compatibility.compatible}, double points {f.double_points}")
        if bundle.source.rank_h2_source is not None:
            print(f"  rank H_2(M) = {bundle.source.rank_h2_source}")
        for c in bundle.claims():
            print(f"  [{c.conclusion}] {c.statement}  ({c.paper_ref})")
            for h in c.hypotheses:
                print(f"      {h.verdict:7s} {h.name}")
            for cav in c.caveats:
                print(f"      caveat: {cav}")
            if c.corroboration:
                print(f"      corroboration: {c.corroboration}")
    if bundle.facts.pi1.status == "unknown":
        _err("pi_1 simplification ran out of budget; simple connectivity is unknown")
        return BUDGET
    return OK


def cmd_thicken(args):
    from .thickening.build import thicken
    from .thickening.triangulation3 import projection_witness, verify_manifold

    p = _load(args.input)
    try:
        t = thicken(p)
    except Incompatible as exc:
        raise _Failure(HYPOTHESES, f"not compatible with the natural orientation: {exc}; "
                                   f"witness loop {exc.witness}") from None
    except ChartUnsupported as exc:
        raise _Failure(HYPOTHESES, str(exc)) from None
    report = verify_manifold(t)
    witness = projection_witness(t)
    if not report.ok or not report.orientable or not report.connected or not report.boundary:
        raise _Failure(VERIFY, f"constructed W_P failed manifold checks: {list(report.issues)[:5]}")
    if not witness.ok:
        raise _Failure(VERIFY, f"projection witness failed: {witness.violations[:3]} "
                               f"uncovered {witness.uncovered[:3]}")
    text = emit_tri3(t)
    _write(args.output, text)
    summary = report.to_json()
    summary["tetrahedra"] = t.n
    if args.output in (None, "-"):
        _err(json.dumps(summary, sort_keys=True))
    elif args.json:
        _emit_json(summary)
    else:
        print(f"wrote {args.output}: {t.n} tetrahedra, orientable {report.orientable}, "
              f"boundary components {len(report.boundary)} "
              f"(euler {', '.join(str(b.euler) for b in report.boundary)})")
    return OK


def cmd_collapse(args):
    p = _load(args.input)
    k2 = triangulate(p)
    res = collapse_search(k2, target=args.target, steps=args.budget or 10_000,
                          restarts=args.restarts, exhaustive_max=args.exhaustive_max, seed=args.seed)
    if args.json:
        _emit_json(res)
    else:
        print(f"{p.name}: {res.outcome} (target {res.target})")
        print(f"  {res.certificate}")
        print(f"  {len(res.sequence)} elementary collapses, residual {res.final}")
    return BUDGET if res.outcome == EXHAUSTED else OK


def cmd_examples(args):
    if not args.name:
        if args.json:
            _emit_json({"examples": list(_catalog.NAMES)})
        else:
            print("\n".join(_catalog.NAMES))
        return OK
    p = _load(PREFIX + args.name)
    _write(args.output, emit_spoly(p))
    return OK


def build_parser():
    ap = argparse.ArgumentParser(prog="simplepoly",
                                 description="Simple polyhedra, fold-map target spaces and their thickenings.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, seed=False):
        sp.add_argument("input", help="a .spoly file or catalog:<name>")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--budget", type=int, default=None)
            sp.add_argument("--exhaustive-max", type=int, default=60)

    sp = sub.add_parser("validate", help="check a polyhedron encoding")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="invariants and decisions for a source dimension")
    common(sp, seed=True)
    sp.add_argument("--dim", type=int, required=True, help="dimension m of the source manifold")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("thicken", help="build the 3-dimensional thickening as .tri3")
    common(sp)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_thicken)

    sp = sub.add_parser("collapse", help="search for a collapse of the triangulated polyhedron")
    common(sp, seed=True)
    sp.add_argument("--target", choices=("point", "disc"), default="point")
    sp.add_argument("--restarts", type=int, default=50)
    sp.set_defaults(func=cmd_collapse)

    sp = sub.add_parser("examples", help="list catalog entries or emit one as .spoly")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_examples)
    return ap


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    try:
        return args.func(args)
    except _Failure as exc:
        _err(str(exc))
        return exc.code
    except (InvalidInput, TorsionAnomaly) as exc:
        _err(f"invalid input: {exc}")
        return INVALID
    except VerificationFailure as exc:
        _err(f"verification failure: {exc}")
        return VERIFY
    except SimplePolyError as exc:
        _err(f"error: {exc}")
        return INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
