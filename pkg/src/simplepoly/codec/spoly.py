"""The line-oriented ``.spoly`` polyhedron format.

::

    spoly 1
    polyhedron two_rooms
    vertex x chart X pairs (0 1) (2 3) trans 012 012
    edge a interval x.0 x.1
    edge c circle ident 120
    region R genus 0 orientable yes
    boundary free f
    boundary attached a 0 + x 1>0

``#`` starts a comment.  ``parse_spoly`` never raises: it returns either
a validated polyhedron or the list of every error it could find.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .. import perm
from ..errors import InvalidInput
from ..model import (
    Attached,
    DoublePoint,
    EdgeStep,
    FreeCircle,
    Port,
    Region,
    SimplePolyhedron,
    TripleEdge,
    VertexPassage,
    require_valid,
    validate,
)

VERSION = 1
MAX_GENUS = 10_000
_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NAME = re.compile(r"[A-Za-z0-9_.\-]+\Z")
_PORTREF = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\.([0-3])\Z")
_PASSAGE = re.compile(r"([0-3])>([0-3])\Z")
_TOKEN = re.compile(r"[()]|[^\s()]+")


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    code: str
    message: str
    token: str = ""

    def __str__(self):
        tok = f" near {self.token!r}" if self.token else ""
        return f"{self.line}:{self.column}: {self.code}: {self.message}{tok}"


@dataclass
class SpolyDocument:
    version: int
    polyhedron: SimplePolyhedron | None
    comments: list = field(default_factory=list)  # (line, text)
    errors: list = field(default_factory=list)


class _Line:
    def __init__(self, number, text):
        self.number = number
        self.tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(text)]
        self.end = len(text) + 1
        self.pos = 0

    def err(self, code, message, idx=None):
        if idx is None:
            idx = self.pos
        if idx < len(self.tokens):
            tok, col = self.tokens[idx]
        else:
            tok, col = "", self.end
        return ParseError(self.number, col, code, message, tok)

    def take(self, what, check):
        """Consume one token satisfying ``check``; returns (value, error)."""
        if self.pos >= len(self.tokens):
            return None, self.err("SYNTAX", f"expected {what}, found end of line")
        tok, _ = self.tokens[self.pos]
        value = check(tok)
        if value is None:
            return None, self.err("SYNTAX", f"expected {what}")
        self.pos += 1
        return value, None

    def done(self):
        if self.pos < len(self.tokens):
            return self.err("SYNTAX", "unexpected trailing token")
        return None


def _lit(word):
    return lambda t: t if t == word else None


def _ident(t):
    return t if _ID.match(t) else None


def _port(t):
    return int(t) if t in ("0", "1", "2", "3") else None


def _slot(t):
    return int(t) if t in ("0", "1", "2") else None


def _perm3(t):
    try:
        return perm.parse(t)
    except ValueError:
        return None


def _nonneg(t):
    if t.isascii() and t.isdigit() and len(t) <= 6:
        return int(t)
    return None


def _yesno(t):
    return {"yes": True, "no": False}.get(t)


def _portref(t):
    m = _PORTREF.match(t)
    return Port(m.group(1), int(m.group(2))) if m else None


def _run(line, pattern):
    """Match a list of (label, checker) pairs; returns values or an error."""
    values = []
    for what, check in pattern:
        v, e = line.take(what, check)
        if e:
            return None, e
        values.append(v)
    e = line.done()
    return (None, e) if e else (values, None)


def _parse_word(line):
    toks = []
    while line.pos < len(line.tokens):
        ident, e = line.take("edge or vertex id", _ident)
        if e:
            return None, e
        if line.pos >= len(line.tokens):
            return None, line.err("SYNTAX", "expected slot or port>port after id")
        tok, _ = line.tokens[line.pos]
        m = _PASSAGE.match(tok)
        if m:
            line.pos += 1
            toks.append((VertexPassage(ident, int(m.group(1)), int(m.group(2))), line.pos - 2))
            continue
        slot, e = line.take("slot 0-2 or port>port", _slot)
        if e:
            return None, e
        d, e = line.take("direction + or -", lambda t: {"+": True, "-": False}.get(t))
        if e:
            return None, e
        toks.append((EdgeStep(ident, slot, d), line.pos - 3))
    if not toks:
        return None, line.err("EMPTY_WORD", "attached boundary has no tokens")
    return toks, None


def parse_spoly_document(text):
    errors = []
    comments = []
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            return SpolyDocument(VERSION, None, [], [ParseError(1, 1, "ENCODING", f"not UTF-8: {exc.reason}")])
    if not isinstance(text, str):
        return SpolyDocument(VERSION, None, [], [ParseError(1, 1, "ENCODING", "input is not text")])

    name = None
    version = VERSION
    vertices, edges, regions = {}, {}, {}
    where = {}  # id -> (line, column) of its declaration
    refs = []  # (kind, id, line, col)
    current = None  # region id receiving boundary lines
    bounds = {}
    seen_decl = False

    for number, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        hash_at = raw.find("#")
        if hash_at >= 0:
            comments.append((number, raw[hash_at + 1:]))
            raw = raw[:hash_at]
        line = _Line(number, raw)
        if not line.tokens:
            continue
        head = line.tokens[0][0]
        if head == "spoly":
            values, e = _run(line, [("spoly", _lit("spoly")), ("version", _nonneg)])
            if e:
                errors.append(e)
            elif seen_decl:
                errors.append(line.err("SYNTAX", "header must come first", 0))
            elif values[1] != VERSION:
                errors.append(line.err("VERSION", f"unsupported version {values[1]}", 1))
            else:
                version = values[1]
            seen_decl = True
            continue
        seen_decl = True
        if head == "polyhedron":
            values, e = _run(line, [("polyhedron", _lit("polyhedron")),
                                    ("name", lambda t: t if _NAME.match(t) else None)])
            if e:
                errors.append(e)
            elif name is not None:
                errors.append(line.err("DUPLICATE_ID", "second polyhedron declaration", 0))
            else:
                name = values[1]
            current = None
        elif head == "vertex":
            values, e = _run(line, [
                ("vertex", _lit("vertex")), ("vertex id", _ident), ("chart", _lit("chart")),
                ("chart id", _ident), ("pairs", _lit("pairs")),
                ("(", _lit("(")), ("port", _port), ("port", _port), (")", _lit(")")),
                ("(", _lit("(")), ("port", _port), ("port", _port), (")", _lit(")")),
                ("trans", _lit("trans")), ("permutation", _perm3), ("permutation", _perm3),
            ])
            current = None
            if e:
                errors.append(e)
                continue
            vid = values[1]
            if _dup(vid, vertices, where, line, errors):
                continue
            vertices[vid] = DoublePoint(vid, values[3], ((values[6], values[7]), (values[10], values[11])),
                                        (values[14], values[15]))
            where[vid] = (number, line.tokens[1][1])
        elif head == "edge":
            current = None
            if len(line.tokens) > 2 and line.tokens[2][0] == "circle":
                values, e = _run(line, [("edge", _lit("edge")), ("edge id", _ident),
                                        ("circle", _lit("circle")), ("ident", _lit("ident")),
                                        ("permutation", _perm3)])
                if e:
                    errors.append(e)
                    continue
                edge = TripleEdge(values[1], "circle", (), values[4])
            else:
                values, e = _run(line, [("edge", _lit("edge")), ("edge id", _ident),
                                        ("circle or interval", _lit("interval")),
                                        ("vertex.port", _portref), ("vertex.port", _portref)])
                if e:
                    errors.append(e)
                    continue
                edge = TripleEdge(values[1], "interval", (values[3], values[4]))
                for k in (3, 4):
                    tok, col = line.tokens[k]
                    refs.append(("vertex", values[k].vertex, number, col, tok))
            if _dup(edge.id, edges, where, line, errors):
                continue
            edges[edge.id] = edge
            where[edge.id] = (number, line.tokens[1][1])
        elif head == "region":
            values, e = _run(line, [("region", _lit("region")), ("region id", _ident),
                                    ("genus", _lit("genus")), ("genus value", _nonneg),
                                    ("orientable", _lit("orientable")), ("yes or no", _yesno)])
            current = None
            if e:
                errors.append(e)
                continue
            rid = values[1]
            if values[3] > MAX_GENUS:
                errors.append(line.err("BAD_LABEL", f"genus above {MAX_GENUS}", 3))
                continue
            if _dup(rid, regions, where, line, errors):
                continue
            regions[rid] = (values[3], values[5])
            bounds[rid] = []
            where[rid] = (number, line.tokens[1][1])
            current = rid
        elif head == "boundary":
            if current is None:
                errors.append(line.err("SYNTAX", "boundary line outside a region", 0))
                continue
            line.pos = 1
            kind, e = line.take("free or attached", lambda t: t if t in ("free", "attached") else None)
            if e:
                errors.append(e)
                continue
            if kind == "free":
                fid, e = line.take("circle id", _ident)
                e = e or line.done()
                if e:
                    errors.append(e)
                    continue
                bounds[current].append(FreeCircle(fid))
                where.setdefault(fid, (number, line.tokens[2][1]))
            else:
                toks, e = _parse_word(line)
                if e:
                    errors.append(e)
                    continue
                for tok, idx in toks:
                    col = line.tokens[idx][1]
                    if isinstance(tok, EdgeStep):
                        refs.append(("edge", tok.edge, number, col, tok.edge))
                    else:
                        refs.append(("vertex", tok.vertex, number, col, tok.vertex))
                bounds[current].append(Attached(tuple(t for t, _ in toks)))
        else:
            errors.append(line.err("SYNTAX", "unknown declaration", 0))

    if name is None:
        errors.append(ParseError(1, 1, "SYNTAX", "missing 'polyhedron <name>' declaration"))
    for kind, ident, number, col, tok in refs:
        table = vertices if kind == "vertex" else edges
        if ident not in table:
            errors.append(ParseError(number, col, "DANGLING_REFERENCE", f"undeclared {kind} {ident}", tok))
    if errors:
        return SpolyDocument(version, None, comments, _sorted(errors))

    free = [c.id for rid in bounds for c in bounds[rid] if isinstance(c, FreeCircle)]
    p = SimplePolyhedron(
        name,
        tuple(vertices.values()),
        tuple(edges.values()),
        tuple(Region(rid, g, o, tuple(bounds[rid])) for rid, (g, o) in regions.items()),
        tuple(dict.fromkeys(free)),
    )
    report = validate(p)
    if not report.ok:
        for issue in report.errors:
            number, col = _locate(issue.location, where)
            errors.append(ParseError(number, col, issue.code, issue.message, ""))
        return SpolyDocument(version, None, comments, _sorted(errors))
    return SpolyDocument(version, p, comments, [])


def _dup(ident, table, where, line, errors):
    if ident in table:
        first = where.get(ident, (0, 0))[0]
        errors.append(line.err("DUPLICATE_ID", f"{ident} already declared on line {first}", 1))
        return True
    return False


def _locate(location, where):
    for word in reversed(str(location).split()):
        if word in where:
            return where[word]
    return 1, 1


def _sorted(errors):
    return sorted(errors, key=lambda e: (e.line, e.column, e.code))


def parse_spoly(text):
    """A validated ``SimplePolyhedron``, or a list of ``ParseError``."""
    try:
        doc = parse_spoly_document(text)
    except RecursionError:  # pragma: no cover - defensive, inputs are line-based
        return [ParseError(1, 1, "INTERNAL", "input too deeply nested")]
    return doc.polyhedron if doc.polyhedron is not None else doc.errors


def load_spoly(text):
    """Like ``parse_spoly`` but raises ``InvalidInput`` on failure."""
    result = parse_spoly(text)
    if isinstance(result, list):
        raise InvalidInput("; ".join(str(e) for e in result[:5]), result)
    return result


def _word_text(word):
    out = []
    for tok in word:
        if isinstance(tok, EdgeStep):
            out.append(f"{tok.edge} {tok.slot} {'+' if tok.forward else '-'}")
        else:
            out.append(f"{tok.vertex} {tok.enter}>{tok.leave}")
    return " ".join(out)


def emit_spoly(p, comments=None):
    """Canonical text for a valid polyhedron; byte-identical for equal inputs."""
    require_valid(p)
    lines = [f"spoly {VERSION}"]
    for c in comments or ():
        lines.append(f"# {c}")
    lines.append(f"polyhedron {p.name}")
    for v in p.vertices:
        (a, b), (c, d) = v.pairs
        t1, t2 = v.transitions
        lines.append(f"vertex {v.id} chart {v.chart_id} pairs ({a} {b}) ({c} {d}) "
                     f"trans {perm.fmt(t1)} {perm.fmt(t2)}")
    for e in p.edges:
        if e.is_circle:
            lines.append(f"edge {e.id} circle ident {perm.fmt(e.identification)}")
        else:
            t, h = e.endpoints
            lines.append(f"edge {e.id} interval {t.vertex}.{t.port} {h.vertex}.{h.port}")
    for r in p.regions:
        lines.append(f"region {r.id} genus {r.genus} orientable {'yes' if r.orientable else 'no'}")
        for comp in r.boundary:
            if isinstance(comp, FreeCircle):
                lines.append(f"boundary free {comp.id}")
            else:
                lines.append(f"boundary attached {_word_text(comp.word)}")
    return "\n".join(lines) + "\n"
