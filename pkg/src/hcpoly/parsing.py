"""Text grammar for polynomials and scalars.

A polynomial is a signed sum of terms ``c``, ``c*z^k`` or ``z^k`` where the
coefficient literal is a rational ``a/b``, a decimal, an imaginary multiple
``a/b*i`` (or bare ``i``), or a parenthesized complex sum ``(a/b+c/d*i)``.
Rational literals keep the exact backend reachable from the shell; decimals
are read exactly (as decimal fractions) in the exact backend.
"""

from __future__ import annotations

import re

from .poly import Poly
from .scalar import Backend, Scalar

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:\.\d+)?)|(?P<sym>[iz^*/+\-()]))")


class PolyParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (position {pos})")
        self.pos = pos


class _Scanner:
    def __init__(self, text):
        self.text = text.rstrip()
        self.pos = 0
        self.tokens = []
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if m is None or m.end() == pos:
                raise PolyParseError(f"unexpected character {self.text[pos]!r}", pos)
            if m.lastgroup is not None:
                self.tokens.append((m.group(m.lastgroup), m.start(m.lastgroup)))
            pos = m.end()

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def where(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text)

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok[0]

    def expect(self, tok):
        if self.peek() != tok:
            raise PolyParseError(f"expected {tok!r}", self.where())
        return self.take()


def _is_number(tok):
    return tok is not None and tok[0].isdigit()


class _Parser:
    def __init__(self, text, backend: Backend):
        self.sc = _Scanner(text)
        self.backend = backend

    def parse_poly(self) -> Poly:
        if self.sc.peek() is None:
            raise PolyParseError("empty polynomial", 0)
        acc = {}
        sign = 1
        if self.sc.peek() in "+-":
            sign = -1 if self.sc.take() == "-" else 1
        while True:
            coeff, power = self.parse_term()
            if sign < 0:
                coeff = -coeff
            acc[power] = acc.get(power, self.backend.scalar(0)) + coeff
            tok = self.sc.peek()
            if tok is None:
                break
            if tok not in "+-":
                raise PolyParseError("expected '+' or '-' between terms", self.sc.where())
            sign = -1 if self.sc.take() == "-" else 1
            if self.sc.peek() is None:
                raise PolyParseError("dangling sign", self.sc.where())
        top = max(acc)
        zero = self.backend.scalar(0)
        return Poly([acc.get(k, zero) for k in range(top + 1)])

    def parse_term(self):
        """One unsigned term -> (coefficient Scalar, power int)."""
        tok = self.sc.peek()
        if tok == "z":
            return self.backend.scalar(1), self.parse_zpow()
        coeff = self.parse_coefficient()
        if self.sc.peek() == "*":
            self.sc.take()
            if self.sc.peek() != "z":
                raise PolyParseError("expected 'z' after '*'", self.sc.where())
            return coeff, self.parse_zpow()
        if self.sc.peek() == "z":
            return coeff, self.parse_zpow()
        return coeff, 0

    def parse_zpow(self):
        self.sc.expect("z")
        if self.sc.peek() == "^":
            self.sc.take()
            tok = self.sc.peek()
            if not _is_number(tok) or "." in tok:
                raise PolyParseError("expected an integer exponent", self.sc.where())
            return int(self.sc.take())
        return 1

    def parse_coefficient(self) -> Scalar:
        if self.sc.peek() == "(":
            self.sc.take()
            value = self.parse_complex_sum()
            self.sc.expect(")")
            return value
        return self.parse_simple()

    def parse_complex_sum(self) -> Scalar:
        sign = 1
        if self.sc.peek() in "+-":
            sign = -1 if self.sc.take() == "-" else 1
        value = self.parse_simple()
        if sign < 0:
            value = -value
        while self.sc.peek() in ("+", "-"):
            sign = -1 if self.sc.take() == "-" else 1
            nxt = self.parse_simple()
            value = value + (-nxt if sign < 0 else nxt)
        return value

    def parse_simple(self) -> Scalar:
        """rational ['*'? 'i'] or bare 'i'."""
        tok = self.sc.peek()
        if tok == "i":
            self.sc.take()
            return self.backend.scalar(0, 1)
        if not _is_number(tok):
            raise PolyParseError("expected a number or 'i'", self.sc.where())
        text = self.sc.take()
        if self.sc.peek() == "/":
            self.sc.take()
            den = self.sc.peek()
            if not _is_number(den) or "." in den:
                raise PolyParseError("expected an integer denominator", self.sc.where())
            text = text + "/" + self.sc.take()
        if self.sc.peek() == "*" and self.sc.pos + 1 < len(self.sc.tokens) and \
                self.sc.tokens[self.sc.pos + 1][0] == "i":
            self.sc.take()
            self.sc.take()
            return self.backend.scalar(0, text)
        if self.sc.peek() == "i":
            self.sc.take()
            return self.backend.scalar(0, text)
        return self.backend.scalar(text)


def parse_poly(text: str, backend: Backend = None) -> Poly:
    """Parse polynomial text in the configured backend (exact by default)."""
    from .scalar import EXACT

    return _Parser(text, backend or EXACT).parse_poly()


def parse_scalar(text: str, backend: Backend = None) -> Scalar:
    """Parse a rational-complex literal like ``-3/2+1/4*i`` (parens optional)."""
    from .scalar import EXACT

    parser = _Parser(text, backend or EXACT)
    if parser.sc.peek() == "(":
        parser.sc.take()
        value = parser.parse_complex_sum()
        parser.sc.expect(")")
    else:
        value = parser.parse_complex_sum()
    if parser.sc.peek() is not None:
        raise PolyParseError("trailing input after scalar", parser.sc.where())
    return value


def _render_rational(q) -> str:
    return str(q)


def render_scalar(s: Scalar, wrap=True) -> str:
    """Literal that parse_scalar/parse_poly reads back; exact round trip."""
    if s.is_exact:
        re_txt = _render_rational(s.re)
        im_txt = _render_rational(s.im)
    else:
        import mpmath

        re_txt = mpmath.nstr(s.re, 17)
        im_txt = mpmath.nstr(s.im, 17)
    if not s.im:
        return re_txt
    if not s.re:
        return f"{im_txt}*i" if not im_txt.startswith("-") else f"-{im_txt[1:]}*i"
    sign = "-" if im_txt.startswith("-") else "+"
    im_abs = im_txt.lstrip("-")
    body = f"{re_txt}{sign}{im_abs}*i"
    return f"({body})" if wrap else body


def render_poly(p: Poly) -> str:
    """Text form with exact rational literals; parse_poly round-trips it."""
    if p.is_zero:
        return "0"
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c.is_zero():
            continue
        coeff_txt = render_scalar(c)
        if k == 0:
            parts.append(coeff_txt)
        else:
            zpart = "z" if k == 1 else f"z^{k}"
            parts.append(f"{coeff_txt}*{zpart}")
    out = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            out += part
        else:
            out += "+" + part
    return out
