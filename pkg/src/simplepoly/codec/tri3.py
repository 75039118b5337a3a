"""The ``.tri3`` tetrahedral-complex format.

::

    tri3 2
    tet 0 cell region:R
    tet 1 cell vertex:x
    glue 0.3 1.3 012
    glue 1.3 0.3 012

Faces without a ``glue`` line are boundary.  Each gluing must appear in
both directions with mutually inverse vertex maps.
"""
from __future__ import annotations

import re

from ..errors import InvalidInput
from ..thickening.triangulation3 import Triangulation3, check_gluings
from .spoly import ParseError

MAX_TETS = 10_000_000
_HEADER = re.compile(r"tri3\s+(\d{1,8})\Z")
_TET = re.compile(r"tet\s+(\d{1,8})\s+cell\s+(\S+)\Z")
_GLUE = re.compile(r"glue\s+(\d{1,8})\.([0-3])\s+(\d{1,8})\.([0-3])\s+([0-3]{3})\Z")


def parse_tri3(text):
    """A ``Triangulation3`` or a list of ``ParseError``."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            return [ParseError(1, 1, "ENCODING", f"not UTF-8: {exc.reason}")]
    errors = []
    n = None
    cells = {}
    gluings = {}
    glue_line = {}
    for number, raw in enumerate(text.split("\n"), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if n is None:
            m = _HEADER.match(body)
            if not m:
                errors.append(ParseError(number, col, "SYNTAX", "expected 'tri3 <n>' header", body[:20]))
                return errors
            n = int(m.group(1))
            if n > MAX_TETS:
                errors.append(ParseError(number, col, "BAD_LABEL", "too many tetrahedra"))
                return errors
            continue
        m = _TET.match(body)
        if m:
            i = int(m.group(1))
            if i >= n:
                errors.append(ParseError(number, col, "BAD_GLUING", f"tetrahedron {i} out of range"))
            elif i in cells:
                errors.append(ParseError(number, col, "DUPLICATE_ID", f"tetrahedron {i} declared twice"))
            else:
                cells[i] = m.group(2)
            continue
        m = _GLUE.match(body)
        if m:
            i, f, j, g = (int(m.group(k)) for k in range(1, 5))
            pm = tuple(int(c) for c in m.group(5))
            if i >= n or j >= n:
                errors.append(ParseError(number, col, "BAD_GLUING", "tetrahedron index out of range"))
            elif (i, f) in gluings:
                errors.append(ParseError(number, col, "DUPLICATE_ID", f"face {i}.{f} glued twice"))
            else:
                gluings[(i, f)] = (j, g, pm)
                glue_line[f"{i}.{f}"] = number
            continue
        errors.append(ParseError(number, col, "SYNTAX", "expected 'tet' or 'glue' line", body[:20]))
    if n is None:
        return [ParseError(1, 1, "SYNTAX", "empty input; expected 'tri3 <n>' header")]
    missing = [i for i in range(n) if i not in cells]
    if missing:
        errors.append(ParseError(1, 1, "PROVENANCE_MISSING",
                                 f"{len(missing)} tetrahedra lack a cell, first {missing[0]}"))
    if errors:
        return errors
    t = Triangulation3(n, gluings, tuple(cells[i] for i in range(n)))
    for issue in check_gluings(t):
        errors.append(ParseError(glue_line.get(issue.where, 1), 1, issue.code, issue.message))
    return errors or t


def load_tri3(text):
    result = parse_tri3(text)
    if isinstance(result, list):
        raise InvalidInput("; ".join(str(e) for e in result[:5]), result)
    return result


def emit_tri3(t):
    """Canonical text; raises ``InvalidInput`` if the gluings are inconsistent."""
    issues = check_gluings(t)
    if issues:
        raise InvalidInput(f"{issues[0].code} at {issues[0].where}: {issues[0].message}", issues)
    lines = [f"tri3 {t.n}"]
    lines += [f"tet {i} cell {t.provenance[i]}" for i in range(t.n)]
    for (i, f), (j, g, pm) in sorted(t.gluings.items()):
        lines.append(f"glue {i}.{f} {j}.{g} {''.join(map(str, pm))}")
    return "\n".join(lines) + "\n"
