"""Truncated power series with an explicit order tag.

A Series keeps exactly order+1 coefficients (trailing zeros retained), so a
truncation order is part of the value.  Products and reciprocals agree with
exact polynomial arithmetic modulo z^(order+1).
"""

from __future__ import annotations

from .poly import Poly
from .scalar import BackendMismatchError, Scalar, backend_of


class Series:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        cs = list(coeffs)
        if order is None:
            if not cs:
                raise ValueError("series needs coefficients or an explicit order")
            order = len(cs) - 1
        if order < 0:
            raise ValueError("series order must be non-negative")
        if not cs:
            raise ValueError("series needs at least one coefficient to fix the backend")
        zero = cs[0].zero_like()
        if len(cs) <= order:
            cs = cs + [zero] * (order + 1 - len(cs))
        else:
            cs = cs[: order + 1]
        exact = cs[0].is_exact
        for c in cs:
            if c.is_exact != exact:
                raise BackendMismatchError("mixed-backend series coefficients")
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def from_poly(cls, p: Poly, order=None):
        if p.is_zero:
            raise ValueError("cannot build a series from the zero polynomial without a backend")
        return cls(list(p.coeffs), order if order is not None else p.degree)

    @classmethod
    def from_ints(cls, ints, backend, order=None):
        return cls([backend.scalar(c) for c in ints], order)

    # -- structure ---------------------------------------------------------

    @property
    def backend(self):
        return backend_of(self.coeffs[0])

    @property
    def vanish_order(self):
        """Smallest k with a nonzero coefficient; None if all stored ones vanish."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    @property
    def is_zero(self):
        return self.vanish_order is None

    def coeff(self, k):
        if 0 <= k <= self.order:
            return self.coeffs[k]
        return self.coeffs[0].zero_like()

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def __repr__(self):
        return f"Series({list(map(str, self.coeffs))}, order={self.order})"

    # -- algebra ---------------------------------------------------------

    def truncate(self, order):
        return Series(list(self.coeffs), order)

    def __add__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        order = min(self.order, other.order)
        return Series([self.coeff(k) + other.coeff(k) for k in range(order + 1)], order)

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self + (-other)

    def scale(self, s):
        return Series([c * s for c in self.coeffs], self.order)

    def scale_arg(self, s: Scalar):
        """Series of f(s*z): multiplies coefficient k by s^k."""
        out, sk = [], s.one_like()
        for c in self.coeffs:
            out.append(c * sk)
            sk = sk * s
        return Series(out, self.order)

    def shift_down(self, m):
        """Divide by z^m; the first m coefficients must vanish."""
        if m == 0:
            return self
        if m > self.order:
            raise ValueError("cannot shift below order 0")
        for c in self.coeffs[:m]:
            if not c.is_zero():
                raise ValueError("series is not divisible by z^m")
        return Series(list(self.coeffs[m:]), self.order - m)

    def mul_trunc(self, other: "Series", order: int) -> "Series":
        """Cauchy product truncated at the given order."""
        zero = self.coeffs[0].zero_like()
        out = [zero] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a.is_zero():
                continue
            jmax = min(order - i, other.order)
            for j in range(jmax + 1):
                b = other.coeffs[j]
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return Series(out, order)

    def reciprocal(self, order: int) -> "Series":
        """t with self*t = 1 mod z^(order+1); requires a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise ZeroDivisionError("series has no reciprocal: constant term is zero")
        inv0 = c0.one_like() / c0
        out = [inv0]
        for n in range(1, order + 1):
            acc = c0.zero_like()
            for i in range(1, min(n, self.order) + 1):
                si = self.coeffs[i]
                if si.is_zero():
                    continue
                acc = acc + si * out[n - i]
            out.append(-inv0 * acc)
        return Series(out, order)

    def pow_trunc(self, e: int, order: int) -> "Series":
        """Non-negative integer power truncated at the given order."""
        if e < 0:
            raise ValueError("pow_trunc needs a non-negative exponent")
        one = self.coeffs[0].one_like()
        result = Series([one], order)
        base = self.truncate(order)
        while e:
            if e & 1:
                result = result.mul_trunc(base, order)
            base = base.mul_trunc(base, order)
            e >>= 1
        return result

    def to_poly(self) -> Poly:
        return Poly(self.coeffs)

    def to_float(self, prec):
        return Series([c.to_float(prec) for c in self.coeffs], self.order)
