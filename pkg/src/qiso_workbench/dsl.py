"""Text syntax for *-polynomials, presentation files and JSON model files.

Polynomial grammar::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := postfix (['*'] postfix)*          juxtaposition or spaced '*' is product
    postfix := primary ('*' | '^' INT | '^' '*')*
    primary := INT ['/' INT] | 'z(' INT ',' INT ')' | IDENT | '(' expr ')'

A ``*`` written directly after an identifier, a closing parenthesis or
another adjoint star is the adjoint; otherwise it is multiplication.  Adjoint
binds tighter than powers, so ``A*^2`` is ``(A*)^2``.  ``X^*`` is accepted as
another spelling of ``X*``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .cyclotomic import CyclotomicScalar, Matrix, UnsupportedOrderError, format_scalar
from .relations import Presentation, Relation, StarPolynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1, source: str | None = None):
        self.line, self.col = line, col
        self.message = message
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT IDENT ROOT + - * ADJ ^ / ( ) , EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(z\(\s*-?\d+\s*,\s*-?\d+\s*\))|([A-Za-z_][A-Za-z0-9_']*)|(.))")
_ROOT_RE = re.compile(r"z\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def tokenize(text: str, line: int = 1, col0: int = 1) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m.lastindex is None:
            break  # trailing whitespace
        start = m.start(m.lastindex)
        col = col0 + start
        spaced = start > pos
        if m.group(1):
            tokens.append(Token("INT", m.group(1), line, col))
        elif m.group(2):
            tokens.append(Token("ROOT", m.group(2), line, col))
        elif m.group(3):
            tokens.append(Token("IDENT", m.group(3), line, col))
        else:
            ch = m.group(4)
            if ch == "*":
                prev = tokens[-1].kind if tokens else None
                adj = not spaced and prev in ("IDENT", ")", "ADJ")
                tokens.append(Token("ADJ" if adj else "*", ch, line, col))
            elif ch in "+-^/(),=":
                tokens.append(Token(ch, ch, line, col))
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col)
        pos = m.end()
    tokens.append(Token("EOF", "", line, col0 + len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], generators: Iterable[str] | None):
        self.toks = tokens
        self.i = 0
        self.generators = set(generators) if generators is not None else None

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> Token:
        tok = self.cur
        if kind is not None and tok.kind != kind:
            self.fail(f"expected {kind!r}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.cur
        raise ParseError(msg, tok.line, tok.col)

    def expr(self) -> StarPolynomial:
        sign = 1
        if self.cur.kind in ("+", "-"):
            sign = -1 if self.take().kind == "-" else 1
        total = self.term() * sign
        while self.cur.kind in ("+", "-"):
            sign = -1 if self.take().kind == "-" else 1
            total = total + self.term() * sign
        return total

    _STARTS = ("INT", "ROOT", "IDENT", "(")

    def term(self) -> StarPolynomial:
        if self.cur.kind not in self._STARTS:
            self.fail(f"expected a term, found {self.cur.text or 'end of input'!r}")
        out = self.postfix()
        while True:
            if self.cur.kind == "*":
                self.take()
                if self.cur.kind not in self._STARTS:
                    self.fail("expected a factor after '*'")
                out = out * self.postfix()
            elif self.cur.kind in self._STARTS:
                out = out * self.postfix()
            else:
                return out

    def postfix(self) -> StarPolynomial:
        p = self.primary()
        while True:
            if self.cur.kind == "ADJ":
                self.take()
                p = p.adjoint()
            elif self.cur.kind == "^":
                self.take()
                if self.cur.kind in ("ADJ", "*"):
                    self.take()
                    p = p.adjoint()
                else:
                    tok = self.take("INT")
                    p = p ** int(tok.text)
            else:
                return p

    def primary(self) -> StarPolynomial:
        tok = self.cur
        if tok.kind == "INT":
            self.take()
            num = int(tok.text)
            if self.cur.kind == "/":
                self.take()
                den_tok = self.take("INT")
                den = int(den_tok.text)
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return StarPolynomial.constant(Fraction(num, den))
            return StarPolynomial.constant(num)
        if tok.kind == "ROOT":
            self.take()
            n, k = (int(x) for x in _ROOT_RE.fullmatch(tok.text).groups())
            try:
                return StarPolynomial.constant(CyclotomicScalar.root(n, k))
            except UnsupportedOrderError as exc:
                self.fail(str(exc), tok)
        if tok.kind == "IDENT":
            self.take()
            if self.generators is not None and tok.text not in self.generators:
                self.fail(f"unknown generator {tok.text!r}", tok)
            return StarPolynomial.atom(tok.text)
        if tok.kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        self.fail(f"unexpected {tok.text or 'end of input'!r}")


def parse_polynomial(
    text: str, generators: Iterable[str] | None = None, line: int = 1, col: int = 1
) -> StarPolynomial:
    parser = _Parser(tokenize(text, line, col), generators)
    p = parser.expr()
    if parser.cur.kind != "EOF":
        parser.fail(f"unexpected {parser.cur.text!r}")
    return p


def parse_relation(
    text: str, generators: Iterable[str] | None = None, line: int = 1, col: int = 1
) -> list[Relation]:
    """``lhs [= rhs [= ...]]``; each equality becomes one relation ``left - right = 0``."""
    parser = _Parser(tokenize(text, line, col), generators)
    sides = [parser.expr()]
    while parser.cur.kind == "=":
        parser.take()
        sides.append(parser.expr())
    if parser.cur.kind != "EOF":
        parser.fail(f"unexpected {parser.cur.text!r}")
    pieces = [" ".join(piece.split()) for piece in text.split("=")]
    if len(sides) == 1:
        return [Relation(pieces[0], sides[0])]
    return [
        Relation(f"{pieces[i]} = {pieces[i + 1]}", sides[i] - sides[i + 1]) for i in range(len(sides) - 1)
    ]


def parse_scalar(text: str) -> CyclotomicScalar:
    p = parse_polynomial(str(text), generators=())
    if not p.terms:
        return CyclotomicScalar.rational(0)
    if set(p.terms) != {()}:
        raise ParseError(f"not a scalar: {text!r}")
    return p.terms[()]


def presentation(
    generators: Sequence[str],
    relations: Sequence[str],
    corep: Sequence[Sequence[str]] | None = None,
    name: str = "",
) -> Presentation:
    rels: list[Relation] = []
    for r in relations:
        rels.extend(parse_relation(r, generators))
    grid = None
    if corep is not None:
        grid = [[parse_polynomial(e, generators) for e in row] for row in corep]
    return Presentation(tuple(generators), rels, grid, name)


def _split_top_level(text: str) -> list[tuple[str, int]]:
    """Split on commas outside parentheses, returning (piece, offset)."""
    pieces, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append((text[start:i], start))
            start = i + 1
    pieces.append((text[start:], start))
    return pieces


def parse_presentation(text: str, source: str | None = None) -> Presentation:
    """Read the presentation file format.

    ::

        # comment
        generators: A, B
        corep:
          A, B
          B*, A*
        relations:
          A A* = A* A
          A^2 + B^2 - 1
    """
    generators: list[str] | None = None
    corep_rows: list[tuple[str, int, int]] = []
    rel_lines: list[tuple[str, int, int]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        header = re.match(r"(generators|corep|relations)\s*:", stripped)
        if header:
            section = header.group(1)
            rest = stripped[header.end():]
            offset = line.index(stripped) + header.end()
            if section == "generators":
                if generators is not None:
                    raise ParseError("duplicate generators line", lineno, 1, source)
                generators = [g for g in re.split(r"[,\s]+", rest.strip()) if g]
                for g in generators:
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", g) or g == "z":
                        raise ParseError(f"invalid generator name {g!r}", lineno, offset + 1, source)
            elif rest.strip():
                target = corep_rows if section == "corep" else rel_lines
                target.append((rest, lineno, offset + 1))
            continue
        if section == "corep":
            corep_rows.append((line, lineno, 1))
        elif section == "relations":
            rel_lines.append((line, lineno, 1))
        else:
            raise ParseError("content outside any section", lineno, 1, source)
    if generators is None:
        raise ParseError("missing 'generators:' line", 1, 1, source)
    try:
        rels: list[Relation] = []
        for body, lineno, col in rel_lines:
            rels.extend(parse_relation(body, generators, lineno, col))
        grid = None
        if corep_rows:
            grid = [
                [parse_polynomial(piece, generators, lineno, col + off) for piece, off in _split_top_level(body)]
                for body, lineno, col in corep_rows
            ]
        return Presentation(tuple(generators), rels, grid, source or "")
    except ParseError as exc:
        if source:
            raise ParseError(exc.message, exc.line, exc.col, source) from None
        raise
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, source) from None


def load_presentation(path: str | Path) -> Presentation:
    path = Path(path)
    return parse_presentation(path.read_text(), source=str(path))


def model_from_json(data: dict[str, Any] | str, name: str = "model"):
    from .models import MatrixModel

    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        order = int(data.get("root_order", 1))
        dim = int(data["dim"])
        assign_raw = data["assign"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"model file needs 'dim' and 'assign' ({exc})") from None
    assign = {}
    for label, rows in assign_raw.items():
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ParseError(f"matrix for {label!r} is not {dim}x{dim}")
        entries = [[parse_scalar(str(x)) for x in r] for r in rows]
        for r in entries:
            for x in r:
                if order % x.order:
                    raise ParseError(f"entry {x} of {label!r} is not in Q(zeta_{order})")
        assign[label] = Matrix.from_rows(entries)
    return MatrixModel(data.get("name", name), order, dim, assign)


def model_to_json(model) -> dict[str, Any]:
    return {
        "name": model.name,
        "root_order": model.root_order,
        "dim": model.dim,
        "assign": {
            label: [[format_scalar(x) for x in row] for row in m.to_rows()]
            for label, m in sorted(model.assign.items())
        },
    }


def load_model(path: str | Path):
    path = Path(path)
    try:
        return model_from_json(path.read_text(), name=path.stem)
    except ParseError as exc:
        raise ParseError(exc.message, exc.line, exc.col, str(path)) from None
