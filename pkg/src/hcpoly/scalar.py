"""Complex scalars with a dual backend: exact Gaussian rationals or binary floats.

The exact backend stores re/im as arbitrary-precision rationals (gmpy2.mpq)
and never rounds.  The float backend stores re/im as mpmath binary floats
with a per-value precision (default 53 bits); mpmath's unbounded exponent
range means sweeps through astronomically small or large magnitudes neither
overflow nor underflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from gmpy2 import mpq
from mpmath import mp
from mpmath.libmp import (
    from_man_exp,
    from_rational,
    mpf_add,
    mpf_mul,
    mpf_sqrt,
    round_nearest,
    round_up,
)

DEFAULT_PRECISION = 53

# Magnitude past which sweep code adds mantissa headroom (long products of
# scalar powers accumulate one rounding per multiply).
POWER_MAGNITUDE_THRESHOLD = 1e300
PRECISION_HEADROOM = 60


class BackendMismatchError(TypeError):
    """Raised when exact and float values meet in one arithmetic expression."""


def _as_mpq(x):
    if isinstance(x, (int, type(mpq()))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x))
    raise TypeError(f"cannot build an exact rational from {x!r}")


def _rational_to_mpf(num, den, prec, rnd=round_nearest):
    # Correctly rounded conversion of num/den; den > 0.
    return mp.make_mpf(from_rational(int(num), int(den), prec, rnd))


def _as_mpf(x, prec):
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, int):
        return mp.make_mpf(from_man_exp(x, 0, prec, round_nearest))
    if isinstance(x, float):
        with mp.workprec(prec):
            return mpmath.mpf(x)
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, (Fraction, type(mpq()))):
        return _rational_to_mpf(x.numerator, x.denominator, prec)
    raise TypeError(f"cannot build a float from {x!r}")


class Scalar:
    """One complex number in either backend.

    ``prec is None`` marks the exact backend (re/im are mpq); otherwise
    re/im are mpf values and ``prec`` is the working precision in bits.
    Instances are immutable and hashable.
    """

    __slots__ = ("re", "im", "prec")

    def __init__(self, re, im, prec):
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, re=0, im=0):
        return cls(_as_mpq(re), _as_mpq(im), None)

    @classmethod
    def approx(cls, re=0, im=0, prec=DEFAULT_PRECISION):
        return cls(_as_mpf(re, prec), _as_mpf(im, prec), prec)

    # -- predicates ----------------------------------------------------

    @property
    def backend(self):
        return "exact" if self.prec is None else "float"

    @property
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        return not self.re and not self.im

    def is_real(self):
        return not self.im

    def is_one(self):
        return self.re == 1 and not self.im

    # -- coercion ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if (self.prec is None) != (other.prec is None):
                raise BackendMismatchError(
                    f"cannot mix {self.backend} and {other.backend} scalars"
                )
            return other
        if self.prec is None:
            if isinstance(other, float):
                raise BackendMismatchError(
                    "refusing to coerce a Python float into the exact backend; "
                    "pass a Fraction, string or integer"
                )
            return Scalar(_as_mpq(other), mpq(0), None)
        return Scalar(_as_mpf(other, self.prec), mpmath.mpf(0), self.prec)

    def _prec_with(self, other):
        return max(self.prec, other.prec)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError as e:
            if isinstance(e, BackendMismatchError):
                raise
            return NotImplemented
        if self.prec is None:
            return Scalar(self.re + o.re, self.im + o.im, None)
        p = self._prec_with(o)
        with mp.workprec(p):
            return Scalar(self.re + o.re, self.im + o.im, p)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im, self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError as e:
            if isinstance(e, BackendMismatchError):
                raise
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if self.prec is None:
            return Scalar(a * c - b * d, a * d + b * c, None)
        p = self._prec_with(o)
        with mp.workprec(p):
            return Scalar(a * c - b * d, a * d + b * c, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        a, b, c, d = self.re, self.im, o.re, o.im
        if self.prec is None:
            den = c * c + d * d
            if not den:
                raise ZeroDivisionError("division by zero scalar")
            return Scalar((a * c + b * d) / den, (b * c - a * d) / den, None)
        p = self._prec_with(o)
        with mp.workprec(p):
            den = c * c + d * d
            if not den:
                raise ZeroDivisionError("division by zero scalar")
            return Scalar((a * c + b * d) / den, (b * c - a * d) / den, p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            base = self.one_like() / self
            e = -e
        else:
            base = self
        result = self.one_like()
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def one_like(self):
        if self.prec is None:
            return Scalar(mpq(1), mpq(0), None)
        return Scalar(mpmath.mpf(1), mpmath.mpf(0), self.prec)

    def zero_like(self):
        if self.prec is None:
            return Scalar(mpq(0), mpq(0), None)
        return Scalar(mpmath.mpf(0), mpmath.mpf(0), self.prec)

    def conjugate(self):
        return Scalar(self.re, -self.im, self.prec)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, type(mpq()))):
            try:
                other = self._coerce(other)
            except BackendMismatchError:
                return NotImplemented
        if not isinstance(other, Scalar):
            return NotImplemented
        if (self.prec is None) != (other.prec is None):
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im, self.prec is None))

    def __bool__(self):
        return not self.is_zero()

    # -- magnitude -------------------------------------------------------

    def abs2(self):
        """|z|^2 in the native backend (exact rational when exact)."""
        if self.prec is None:
            return self.re * self.re + self.im * self.im
        with mp.workprec(self.prec):
            return self.re * self.re + self.im * self.im

    def abs_mpf(self, prec=None):
        """|z| as an mpf, round-to-nearest."""
        p = prec if prec is not None else (self.prec or DEFAULT_PRECISION)
        if self.prec is None:
            a2 = self.abs2()
            with mp.workprec(p):
                return mpmath.sqrt(_rational_to_mpf(a2.numerator, a2.denominator, p + 8))
        with mp.workprec(p):
            return mpmath.hypot(self.re, self.im)

    def abs_upper(self, prec=None):
        """|z| as an mpf rounded upward: a certified upper bound on |z|."""
        p = prec if prec is not None else (self.prec or DEFAULT_PRECISION)
        if self.prec is None:
            a2 = self.abs2()
            raw = from_rational(int(a2.numerator), int(a2.denominator), p + 8, round_up)
            return mp.make_mpf(mpf_sqrt(raw, p, round_up))
        rr = mpf_mul(self.re._mpf_, self.re._mpf_, p + 8, round_up)
        ii = mpf_mul(self.im._mpf_, self.im._mpf_, p + 8, round_up)
        return mp.make_mpf(mpf_sqrt(mpf_add(rr, ii, p + 8, round_up), p, round_up))

    # -- conversions -------------------------------------------------------

    def to_float(self, prec=DEFAULT_PRECISION):
        """Exact -> float conversion, correctly rounded per component."""
        if self.prec is not None:
            if prec == self.prec:
                return self
            with mp.workprec(prec):
                return Scalar(+self.re, +self.im, prec)
        return Scalar(
            _rational_to_mpf(self.re.numerator, self.re.denominator, prec),
            _rational_to_mpf(self.im.numerator, self.im.denominator, prec),
            prec,
        )

    def to_exact(self):
        """Float -> exact conversion; binary floats are rationals, so lossless."""
        if self.prec is None:
            return self
        return Scalar(_mpf_to_mpq(self.re), _mpf_to_mpq(self.im), None)

    def to_complex(self):
        if self.prec is None:
            return complex(
                self.re.numerator / self.re.denominator,
                self.im.numerator / self.im.denominator,
            )
        return complex(float(self.re), float(self.im))

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.prec is None:
            re, im = str(self.re), str(self.im)
        else:
            re, im = mpmath.nstr(self.re, 12), mpmath.nstr(self.im, 12)
        if not self.im:
            return re
        if not self.re:
            return f"{im}i"
        sign = "+" if (self.im > 0) else "-"
        im_abs = im.lstrip("-")
        return f"({re}{sign}{im_abs}i)"


def _mpf_to_mpq(x):
    if not x:
        return mpq(0)
    if not mpmath.isfinite(x):
        raise ValueError(f"cannot convert non-finite float {x} to a rational")
    sign, man, exp, _ = x._mpf_
    val = mpq(man) * (mpq(2) ** exp if exp >= 0 else mpq(1, 2 ** (-exp)))
    return -val if sign else val


@dataclass(frozen=True)
class Backend:
    """Tag selecting the arithmetic backend for constructed values."""

    kind: str
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.prec < 2:
            raise ValueError("precision must be at least 2 bits")

    def scalar(self, re=0, im=0):
        if self.kind == "exact":
            return Scalar.exact(re, im)
        return Scalar.approx(re, im, self.prec)

    @property
    def is_exact(self):
        return self.kind == "exact"


EXACT = Backend("exact")
FLOAT53 = Backend("float", DEFAULT_PRECISION)


def backend_of(s: Scalar) -> Backend:
    return EXACT if s.prec is None else Backend("float", s.prec)


def sweep_precision(base_prec: int, lam: Scalar, max_exponent: int) -> int:
    """Working precision for float sweeps involving lam**max_exponent.

    mpmath floats cannot overflow, so this only adds mantissa headroom once
    the power magnitude leaves the IEEE-double range (|lam|^e > 1e300).
    """
    if max_exponent <= 0:
        return base_prec
    a = lam.abs_mpf(prec=53)
    if not a or a == 1:
        return base_prec
    with mp.workprec(53):
        mag = abs(mpmath.log10(a)) * max_exponent
    if mag > 300:
        return base_prec + PRECISION_HEADROOM
    return base_prec


# Upward-rounded positive real helpers used by the norm majorant.

def add_up(a, b, prec):
    return mp.make_mpf(mpf_add(a._mpf_, b._mpf_, prec, round_up))


def mul_up(a, b, prec):
    return mp.make_mpf(mpf_mul(a._mpf_, b._mpf_, prec, round_up))
