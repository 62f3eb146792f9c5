"""Complex-coefficient polynomials: exact arithmetic, norms, combinatorics.

Coefficients are stored ascending by degree with trailing zeros stripped;
the zero polynomial is the empty tuple and its degree is the -inf sentinel,
so degree inequalities hold without special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp

from .scalar import (
    DEFAULT_PRECISION,
    BackendMismatchError,
    Scalar,
    add_up,
    backend_of,
    mul_up,
)

NEG_INF = float("-inf")


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient; 0 when k > n, error on negative input."""
    if n < 0 or k < 0:
        raise ValueError("binom requires non-negative arguments")
    return math.comb(n, k)


def falling_ratio(k: int, steps: int):
    """k! / (k+steps)! as an exact positive integer denominator."""
    den = 1
    for j in range(k + 1, k + steps + 1):
        den *= j
    return den


@dataclass(frozen=True)
class Disk:
    """Closed disk |z| <= radius about the origin."""

    radius: object

    def __post_init__(self):
        if not self._radius_positive():
            raise ValueError("disk radius must be positive")

    def _radius_positive(self):
        r = self.radius
        if isinstance(r, Scalar):
            return r.is_real() and r.re > 0
        return r > 0

    def radius_mpf(self, prec=DEFAULT_PRECISION):
        r = self.radius
        if isinstance(r, Scalar):
            return r.abs_mpf(prec=prec)
        with mp.workprec(prec):
            return mpmath.mpf(r)


class Poly:
    """Immutable polynomial over Scalar coefficients (single backend)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(coeffs)
        while cs and cs[-1].is_zero():
            cs = cs[:-1]
        if cs:
            exact = cs[0].is_exact
            for c in cs:
                if c.is_exact != exact:
                    raise BackendMismatchError("mixed-backend coefficients")
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, backend):
        del backend
        return cls(())

    @classmethod
    def one(cls, backend):
        return cls((backend.scalar(1),))

    @classmethod
    def monomial(cls, k, coeff):
        if k < 0:
            raise ValueError("monomial degree must be non-negative")
        zero = coeff.zero_like()
        return cls((zero,) * k + (coeff,))

    @classmethod
    def variable(cls, backend):
        return cls.monomial(1, backend.scalar(1))

    @classmethod
    def from_ints(cls, ints, backend):
        return cls(tuple(backend.scalar(c) for c in ints))

    # -- structure --------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def backend(self):
        if not self.coeffs:
            return None
        return backend_of(self.coeffs[0])

    def coeff(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.coeffs[0].zero_like() if self.coeffs else Scalar.exact(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{k}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Scalar):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, Scalar):
            other = Poly((other,))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            if not self.coeffs:
                return self
            if isinstance(other, int):
                other = self.coeffs[0]._coerce(other)
            return Poly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly(())
        a, b = self.coeffs, other.coeffs
        zero = a[0].zero_like()
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b):
                if cb.is_zero():
                    continue
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    # -- analytic operations ----------------------------------------------

    def eval(self, z):
        """Value at z by Horner expansion; z must share the backend."""
        if not isinstance(z, Scalar):
            raise TypeError("evaluation point must be a Scalar")
        if self.is_zero:
            return z.zero_like()
        if self.coeffs[0].is_exact != z.is_exact:
            raise BackendMismatchError("polynomial and point use different backends")
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    __call__ = eval

    def derivative(self, k=1):
        """k-th derivative; k >= 0."""
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        if k == 0:
            return self
        if len(self.coeffs) <= k:
            return Poly(())
        out = []
        for j in range(k, len(self.coeffs)):
            fac = 1
            for t in range(j, j - k, -1):
                fac *= t
            out.append(self.coeffs[j] * fac)
        return Poly(out)

    def compose_affine(self, lam, b):
        """Coefficients of p(lam*z + b); exact in the exact backend."""
        if self.is_zero:
            return self
        lin = Poly((b, lam))
        acc = Poly((self.coeffs[-1],))
        for c in reversed(self.coeffs[:-1]):
            acc = acc * lin + c
        return acc

    # -- norms -------------------------------------------------------------

    def norm_upper(self, disk: Disk, prec=DEFAULT_PRECISION):
        """Coefficient majorant sum(|c_k| R^k), rounded upward.

        Certified >= sup of |p| on the disk at any precision.
        """
        if self.is_zero:
            return mpmath.mpf(0)
        wp = prec + 8
        r = disk.radius_mpf(prec=wp)
        total = mpmath.mpf(0)
        rk = mpmath.mpf(1)
        for c in self.coeffs:
            total = add_up(total, mul_up(c.abs_upper(prec=wp), rk, wp), wp)
            rk = mul_up(rk, r, wp)
        return mpmath.mpf(total)

    def norm_boundary(self, disk: Disk, samples=None, prec=DEFAULT_PRECISION):
        """Max of |p| over equispaced boundary points; a lower estimate of the sup.

        The result carries a one-sided rounding slack so that it never exceeds
        norm_upper even when the two agree exactly (e.g. monomials).
        """
        if self.is_zero:
            return mpmath.mpf(0)
        d = len(self.coeffs) - 1
        if samples is None:
            samples = 16 * (d + 1) + 32
        if samples < 1:
            raise ValueError("need at least one boundary sample")
        wp = prec + 8
        with mp.workprec(wp):
            r = disk.radius_mpf(prec=wp)
            cs = [c.to_float(wp) for c in self.coeffs]
            cs = [mpmath.mpc(c.re, c.im) for c in cs]
            best = mpmath.mpf(0)
            for j in range(samples):
                zj = r * mpmath.expjpi(mpmath.mpf(2 * j) / samples)
                acc = cs[-1]
                for c in reversed(cs[:-1]):
                    acc = acc * zj + c
                v = abs(acc)
                if v > best:
                    best = v
            # slack keeps the diagnostic strictly below the certified majorant
            slack = 1 - mpmath.mpf(4 * d + 16) * mpmath.mpf(2) ** (1 - wp)
            best = best * slack
        with mp.workprec(prec):
            return +best

    # -- conversions -----------------------------------------------------------

    def to_float(self, prec=DEFAULT_PRECISION):
        return Poly(tuple(c.to_float(prec) for c in self.coeffs))

    def to_exact(self):
        return Poly(tuple(c.to_exact() for c in self.coeffs))

    def map_coeffs(self, fn):
        return Poly(tuple(fn(c) for c in self.coeffs))
