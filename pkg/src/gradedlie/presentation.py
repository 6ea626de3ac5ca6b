"""Lie presentations and the text format used to describe them.

Grammar (whitespace and ``#`` comments are ignored)::

    file    := header? stanza+
    header  := "field" "=" ("Q" | "F" int) ";"?
    stanza  := "algebra" name "{" "generators" "=" namelist ";"
               ("relations" "=" exprlist ";")? ("truncation" "=" int ";")? "}"
    expr    := term (("+" | "-") term)*
    term    := (coeff "*")? bracket
    bracket := "[" (name | bracket) "," (name | bracket) "]" | name
    coeff   := int | int "/" int

Two conveniences are accepted as well: a bare body without the
``algebra name { ... }`` wrapper and with optional ``=`` signs (for example
``generators x,y; relations [x,y];``), and ``exterior`` stanzas describing a
graded-commutative quadratic algebra ``Λ(V)/(Ω)`` whose relations are
combinations of wedges ``a^b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .lie import degree, expand_to_tensor, expr_str
from .linalg import QQ, Field, LinalgError, parse_field

DEFAULT_TRUNCATION = 6


class PresentationError(ValueError):
    """Malformed or inconsistent presentation; ``pos`` is ``(line, column)``."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} at line {pos[0]}, column {pos[1]}"
        super().__init__(message)


@dataclass
class LiePresentation:
    field: Field
    names: list
    relations: list = dc_field(default_factory=list)
    truncation: int = DEFAULT_TRUNCATION
    name: str = "L"

    def __post_init__(self):
        self.names = list(self.names)
        if len(set(self.names)) != len(self.names):
            raise PresentationError("generator names are not distinct")
        if self.truncation < 2:
            raise PresentationError("truncation must be at least 2")
        rels = []
        for r in self.relations:
            r = {t: self.field(c) for t, c in r.items()}
            r = {t: c for t, c in r.items() if c}
            degs = {degree(t) for t in r}
            if len(degs) > 1:
                raise PresentationError(f"inhomogeneous relation {expr_str(r, self.names)}")
            if degs:
                (e,) = degs
                if e < 2:
                    raise PresentationError(f"relation {expr_str(r, self.names)} has degree 1")
                if e > self.truncation:
                    raise PresentationError(
                        f"relation {expr_str(r, self.names)} has degree {e} above the truncation {self.truncation}"
                    )
            rels.append(r)
        self.relations = rels

    @property
    def d(self) -> int:
        return len(self.names)

    def relation_degrees(self) -> list:
        return [degree(next(iter(r))) for r in self.relations if r]

    def tensor_relations(self) -> list:
        """Nonzero relations expanded into the tensor algebra, with their degrees."""
        out = []
        for r in self.relations:
            t = expand_to_tensor(self.field, r)
            if t:
                out.append((len(next(iter(t))), t))
        return out

    def is_quadratic(self) -> bool:
        return all(e == 2 for e in self.relation_degrees())

    def with_truncation(self, n: int) -> "LiePresentation":
        return LiePresentation(self.field, self.names, self.relations, n, self.name)

    def with_field(self, field: Field) -> "LiePresentation":
        return LiePresentation(field, self.names, self.relations, self.truncation, self.name)

    def to_text(self) -> str:
        f = "Q" if self.field.char == 0 else f"F{self.field.char}"
        lines = [f"field = {f};", f"algebra {self.name} {{", f"  generators = {','.join(self.names)};"]
        rels = [expr_str(r, self.names) for r in self.relations if r]
        if rels:
            lines.append(f"  relations = {', '.join(rels)};")
        lines.append(f"  truncation = {self.truncation};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.names),
            "relations": [expr_str(r, self.names) for r in self.relations if r],
            "truncation": self.truncation,
        }


@dataclass
class ExteriorPresentation:
    """Quadratic graded-commutative algebra ``Λ(V)/(Ω)``, ``Ω`` a list of 2-forms.

    Each form is a ``dict`` mapping pairs ``(i, j)`` with ``i < j`` to scalars.
    """

    field: Field
    names: list
    omega: list = dc_field(default_factory=list)
    truncation: int = DEFAULT_TRUNCATION
    name: str = "C"

    @property
    def d(self) -> int:
        return len(self.names)


# --------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[\[\],;=\{\}+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: tuple


def _tokenize(text: str) -> list:
    toks = []
    i, line, col = 0, 1, 1
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise PresentationError(f"unexpected character {text[i]!r}", (line, col))
        s = m.group()
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, s, (line, col)))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        i = m.end()
    toks.append(_Tok("eof", "", (line, col)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise PresentationError(f"syntax error: {msg} (found {found})", tok.pos)

    def accept(self, text) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def name(self) -> _Tok:
        if self.tok.kind != "name":
            self.error("expected a name")
        t = self.tok
        self.i += 1
        return t

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return v

    # -- file level

    def parse_file(self):
        field = None
        stanzas = []
        if self.tok.text == "field":
            field = self.header()
        if self.tok.text in ("algebra", "exterior"):
            while self.tok.kind != "eof":
                if self.tok.text not in ("algebra", "exterior"):
                    self.error("expected 'algebra' or 'exterior'")
                kind = self.tok.text
                self.i += 1
                name = self.name().text
                self.expect("{")
                body = self.body(closing="}")
                self.expect("}")
                stanzas.append((kind, name, body))
        else:
            body = self.body(closing=None)
            if body.get("field") is not None:
                field = body["field"]
            stanzas.append(("algebra", "L", body))
            if self.tok.kind != "eof":
                self.error("unexpected trailing input")
        if not stanzas:
            self.error("no algebra stanza")
        return field, stanzas

    def header(self) -> Field:
        self.expect("field")
        self.accept("=")
        f = self.field_spec()
        self.accept(";")
        return f

    def field_spec(self) -> Field:
        t = self.tok
        if t.kind == "name" and t.text in ("Q", "QQ"):
            self.i += 1
            return QQ
        if t.kind == "name" and re.fullmatch(r"F\d+", t.text):
            self.i += 1
            p = int(t.text[1:])
        elif t.kind == "name" and t.text == "F":
            self.i += 1
            p = self.integer()
        else:
            self.error("expected Q or F<prime>")
        try:
            return parse_field(f"F{p}")
        except LinalgError as exc:
            raise PresentationError(str(exc), t.pos) from None

    def body(self, closing):
        out = {"generators": None, "relations": [], "truncation": None, "field": None}
        while self.tok.kind != "eof" and self.tok.text != closing:
            key = self.tok
            if key.text == "generators":
                self.i += 1
                self.accept("=")
                names = [self.name()]
                while self.accept(","):
                    names.append(self.name())
                out["generators"] = names
            elif key.text == "relations":
                self.i += 1
                self.accept("=")
                if self.tok.text in (";", closing) or self.tok.kind == "eof":
                    exprs = []
                else:
                    exprs = [self.expr()]
                    while self.accept(","):
                        exprs.append(self.expr())
                out["relations"] = exprs
            elif key.text == "truncation":
                self.i += 1
                self.accept("=")
                out["truncation"] = self.integer()
            elif key.text == "field" and closing is None:
                self.i += 1
                self.accept("=")
                out["field"] = self.field_spec()
            else:
                self.error("expected 'generators', 'relations' or 'truncation'")
            if not self.accept(";"):
                at_end = self.tok.kind == "eof" if closing is None else self.tok.text == closing
                if not at_end:
                    self.error("expected ';'")
        if out["generators"] is None:
            self.error("missing generators")
        return out

    # -- expressions: list of (coeff, raw-term) where raw-term is a bracket or wedge

    def expr(self):
        terms = []
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        terms.append(self.term(sign))
        while self.tok.text in ("+", "-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            terms.append(self.term(sign))
        return terms

    def term(self, sign):
        coeff = Fraction(sign)
        if self.tok.kind == "int":
            num = self.integer()
            den = 1
            if self.accept("/"):
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", self.toks[self.i - 1])
            self.expect("*")
            coeff *= Fraction(num, den)
        start = self.tok
        b = self.bracket()
        if self.accept("^"):
            b = ("wedge", b, self.bracket())
        return coeff, b, start.pos

    def bracket(self):
        open_tok = self.tok
        if self.accept("["):
            a = self.bracket()
            self._bracket_part(",", open_tok)
            b = self.bracket()
            self._bracket_part("]", open_tok)
            return (a, b)
        return self.name()

    def _bracket_part(self, text, open_tok):
        if self.accept(text):
            return
        if self.tok.kind == "eof":
            line, col = open_tok.pos
            self.error(f"unclosed '[' opened at line {line}, column {col}")
        self.error(f"expected {text!r}")


def _resolve(raw, index, pos):
    if isinstance(raw, _Tok):
        if raw.text not in index:
            raise PresentationError(f"unknown generator {raw.text!r}", raw.pos)
        return index[raw.text]
    if raw[0] == "wedge":
        raise PresentationError("wedge products are only allowed in exterior stanzas", pos)
    return (_resolve(raw[0], index, pos), _resolve(raw[1], index, pos))


def _build(kind, name, body, field, truncation):
    names = [t.text for t in body["generators"]]
    if len(set(names)) != len(names):
        seen = set()
        for t in body["generators"]:
            if t.text in seen:
                raise PresentationError(f"duplicate generator {t.text!r}", t.pos)
            seen.add(t.text)
    index = {n: i for i, n in enumerate(names)}
    N = body["truncation"] if body["truncation"] is not None else truncation
    if kind == "exterior":
        omega = []
        for expr in body["relations"]:
            form = {}
            for c, raw, pos in expr:
                if not (isinstance(raw, tuple) and raw and raw[0] == "wedge"):
                    raise PresentationError("exterior relations must be combinations of a^b", pos)
                a, b = (_resolve(raw[1], index, pos), _resolve(raw[2], index, pos))
                if not (isinstance(a, int) and isinstance(b, int)):
                    raise PresentationError("wedge factors must be generators", pos)
                if a == b:
                    continue
                if a > b:
                    a, b, c = b, a, -c
                form[(a, b)] = form.get((a, b), 0) + c
            form = {k: field(v) for k, v in form.items() if field(v)}
            omega.append(form)
        return ExteriorPresentation(field, names, omega, N, name)
    rels = []
    for expr in body["relations"]:
        r: dict = {}
        degs = set()
        for c, raw, pos in expr:
            t = _resolve(raw, index, pos)
            degs.add(degree(t))
            if len(degs) > 1:
                raise PresentationError("inhomogeneous relation", pos)
            r[t] = r.get(t, 0) + c
        (e,) = degs
        if e < 2:
            raise PresentationError("relation of degree 1 (relations must be brackets)", expr[0][2])
        if e > N:
            raise PresentationError(f"relation degree {e} exceeds truncation {N}", expr[0][2])
        rels.append({t: v for t, v in r.items() if v})
    return LiePresentation(field, names, rels, N, name)


def parse_all(text: str, field: Field | None = None, truncation: int | None = None) -> list:
    """Parse every stanza of a presentation file.

    ``field`` and ``truncation`` override the values in the text when given.
    """
    parser = _Parser(text)
    header_field, stanzas = parser.parse_file()
    f = field or header_field or QQ
    out = []
    for kind, name, body in stanzas:
        if truncation is not None:
            body = dict(body, truncation=truncation)
        out.append(_build(kind, name, body, f, DEFAULT_TRUNCATION))
    return out


def parse_presentation(text: str, field: Field | None = None, truncation: int | None = None, name=None):
    """Parse one stanza (the first, or the one called ``name``)."""
    items = parse_all(text, field, truncation)
    if name is None:
        return items[0]
    for it in items:
        if it.name == name:
            return it
    raise PresentationError(f"no stanza named {name!r}")
