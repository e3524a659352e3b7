"""Recursive-descent parser for the multivector, polynomial and form grammars.

The parser works on raw dictionaries so it has no dependency on the public
classes::

    terms: {blade_indices: {exponent_tuple: Fraction}}

Examples of accepted input::

    3/2*e1^e3 - e2^e4              (multivector, blade prefix "e")
    3/2*x0^2*x1 - x3               (polynomial)
    P = (x1)*dx0^dx1 + (2)*dx2^dx3 (form, blade prefix "dx")
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = ["ParseError", "parse_terms"]

RawPoly = dict[tuple[int, ...], Fraction]
RawTerms = dict[tuple[int, ...], RawPoly]


class ParseError(ValueError):
    """Malformed input text. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1} of {text!r})"
        super().__init__(message)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+)"
    r"|(?P<dx>dx(?P<dxi>\d+))"
    r"|(?P<e>e(?P<ei>\d+))"
    r"|(?P<x>x(?P<xi>\d+))"
    r"|(?P<op>[-+*/^()=])"
    r"|(?P<name>[A-Za-z_]\w*)"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError("unexpected character", text, len(text[pos:]) - len(text[pos:].lstrip()) + pos)
        kind = next(g for g in ("num", "dx", "e", "x", "op", "name") if m.group(g) is not None)
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def _poly_add(a: RawPoly, b: RawPoly, sign: int = 1) -> RawPoly:
    out = dict(a)
    for exp, c in b.items():
        v = out.get(exp, Fraction(0)) + sign * c
        if v:
            out[exp] = v
        else:
            out.pop(exp, None)
    return out


def _poly_mul(a: RawPoly, b: RawPoly) -> RawPoly:
    out: RawPoly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(exp, Fraction(0)) + ca * cb
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
    return out


class _Parser:
    def __init__(self, text, dim, nvars, base, blade_prefix, allow_vars):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.nvars_blade = dim
        self.nvars = nvars
        self.base = base
        self.blade_prefix = blade_prefix
        self.allow_vars = allow_vars

    # token helpers
    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message, tok=None):
        tok = tok if tok is not None else self.peek()
        pos = tok[2] if tok is not None else len(self.text)
        raise ParseError(message, self.text, pos)

    def take(self, kind=None, value=None, label=None):
        tok = self.peek()
        if tok is None:
            self.error(f"unexpected end of input, expected {label or value or kind or 'a token'}")
        if (kind is not None and tok[0] != kind) or (value is not None and tok[1] != value):
            self.error(f"expected {label or repr(value) or kind}")
        self.i += 1
        return tok

    def at_op(self, value):
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    def one(self) -> RawPoly:
        return {(0,) * self.nvars: Fraction(1)}

    # grammar
    def parse(self) -> RawTerms:
        # optional "NAME =" prefix, e.g. "P = ..."
        if len(self.tokens) >= 2 and self.tokens[0][0] == "name" and self.tokens[1][1] == "=":
            self.i = 2
        if self.peek() is None:
            self.error("empty expression")
        terms = self.expr(allow_blades=self.blade_prefix is not None)
        if self.peek() is not None:
            self.error("unexpected token")
        return terms

    def expr(self, allow_blades: bool) -> RawTerms:
        sign = 1
        if self.at_op("+") or self.at_op("-"):
            sign = -1 if self.take()[1] == "-" else 1
        out: RawTerms = {}
        while True:
            blade, poly = self.term(allow_blades)
            merged = _poly_add(out.get(blade, {}), poly, sign)
            if merged:
                out[blade] = merged
            else:
                out.pop(blade, None)
            if self.at_op("+") or self.at_op("-"):
                sign = -1 if self.take()[1] == "-" else 1
                continue
            return out

    def term(self, allow_blades: bool):
        blade = None
        poly = self.one()
        while True:
            fblade, fpoly = self.factor(allow_blades)
            if fblade is not None:
                if blade is not None:
                    self.error("more than one blade in a term")
                blade = fblade
            poly = _poly_mul(poly, fpoly)
            if self.at_op("*"):
                self.take()
                continue
            return (blade if blade is not None else ()), poly

    def factor(self, allow_blades: bool):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        kind, value, _ = tok
        if kind == "num":
            self.take()
            num = Fraction(int(value))
            if self.at_op("/"):
                self.take()
                den_tok = self.take("num", label="denominator")
                den = int(den_tok[1])
                if den == 0:
                    self.error("zero denominator", den_tok)
                num /= den
            return None, {(0,) * self.nvars: num}
        if kind == "x":
            if not self.allow_vars:
                self.error("coordinate variables are not allowed here")
            self.take()
            pos = int(value[1:]) - self.base
            if not 0 <= pos < self.nvars:
                self.error(f"variable {value} outside x{self.base}..x{self.base + self.nvars - 1}", tok)
            power = 1
            if self.at_op("^"):
                self.take()
                power = int(self.take("num", label="exponent")[1])
            exp = [0] * self.nvars
            exp[pos] = power
            return None, {tuple(exp): Fraction(1)}
        if kind in ("e", "dx"):
            if not allow_blades or kind != self.blade_prefix:
                self.error(f"unexpected blade factor {value}")
            return self.blade(), self.one()
        if kind == "op" and value == "(":
            self.take()
            inner = self.expr(allow_blades=False)
            self.take("op", ")")
            return None, inner.get((), {})
        self.error("unexpected token")

    def blade(self):
        indices = []
        toks = []
        while True:
            tok = self.take()
            if tok[0] != self.blade_prefix:
                self.error(f"expected a {self.blade_prefix}<i> factor", tok)
            idx = int(tok[1][len(self.blade_prefix):])
            if not self.base <= idx < self.base + self.nvars_blade:
                self.error(
                    f"index {idx} outside {self.base}..{self.base + self.nvars_blade - 1}", tok
                )
            indices.append(idx)
            toks.append(tok)
            if self.at_op("^"):
                self.take()
                continue
            break
        for a, b, tok in zip(indices, indices[1:], toks[1:]):
            if a == b:
                self.error("repeated index in blade", tok)
            if a > b:
                self.error("blade indices must be ascending", tok)
        return tuple(indices)


def parse_terms(
    text: str,
    *,
    dim: int,
    base: int = 1,
    nvars: int = 0,
    blade_prefix: str | None = None,
    allow_vars: bool = False,
) -> RawTerms:
    """Parse ``text`` into ``{blade: {exponents: coefficient}}``.

    ``dim`` bounds blade indices, ``nvars`` bounds coordinate variables; both
    are labelled starting at ``base``.
    """
    return _Parser(text, dim, nvars, base, blade_prefix, allow_vars).parse()
