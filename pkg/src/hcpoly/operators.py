"""Operator families on polynomials: differentiation, affine composition,
their compositions, and series of these, with closed-form powers.

Kinds:
  D           derivative
  C(lam,b)    f(z) -> f(lam z + b)
  T(lam,b)    f(z) -> f'(lam z + b), i.e. C after D
  conv(phi)   phi(D)
  L(lam,b,phi)    C_{lam,b} after phi(D)
  psiT(psi,lam,b) psi applied to T_{lam,b} (series in T)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .poly import Disk, Poly
from .reports import OrbitReport, OrbitStep
from .scalar import DEFAULT_PRECISION, Scalar
from .series import Series

_KINDS = ("D", "C", "T", "conv", "L", "psiT")


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    lam: Optional[Scalar] = None
    b: Optional[Scalar] = None
    phi: Optional[Series] = None
    psi: Optional[Series] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind in ("C", "T", "L", "psiT"):
            if self.lam is None or self.b is None:
                raise ValueError(f"{self.kind} needs lam and b")
        if self.kind in ("conv", "L") and self.phi is None:
            raise ValueError(f"{self.kind} needs a series phi")
        if self.kind == "psiT" and self.psi is None:
            raise ValueError("psiT needs a series psi")

    # metadata only; no behavioral branch keys off these flags
    @property
    def is_convolution(self):
        if self.kind in ("D", "conv"):
            return True
        if self.lam is not None:
            return self.lam.is_one()
        return False

    @property
    def is_degenerate(self):
        return self.lam is not None and self.lam.is_zero()

    @property
    def series(self):
        return self.phi if self.kind in ("conv", "L") else self.psi

    def drop_per_step(self):
        """Guaranteed degree drop of one application (lam != 0)."""
        if self.kind in ("D", "T"):
            return 1
        if self.kind == "C":
            return 0
        v = self.series.vanish_order
        return v if v is not None else None


def diff_op():
    return OperatorSpec("D")


def compose_op(lam, b):
    return OperatorSpec("C", lam=lam, b=b)


def t_op(lam, b):
    return OperatorSpec("T", lam=lam, b=b)


def conv_op(phi):
    return OperatorSpec("conv", phi=phi)


def l_op(lam, b, phi):
    return OperatorSpec("L", lam=lam, b=b, phi=phi)


def psi_t_op(psi, lam, b):
    return OperatorSpec("psiT", lam=lam, b=b, psi=psi)


# -- the accumulated shift r_n -----------------------------------------------


def shift_r(lam: Scalar, b: Scalar, n: int) -> Scalar:
    """r_n with n-fold affine composition acting as f(lam^n z - r_n).

    Closed form -b(1-lam^n)/(1-lam); at lam = 1 the recursion limit -n*b.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if b.is_zero() or n == 0:
        return b.zero_like()
    if lam.is_one():
        return -(b * n)
    one = lam.one_like()
    return -b * (one - lam**n) / (one - lam)


class ShiftSequence:
    """Lazy r_n values via the recursion r_{n+1} = lam*r_n - b, r_0 = 0."""

    def __init__(self, lam: Scalar, b: Scalar):
        self.lam = lam
        self.b = b
        self._vals = [b.zero_like()]

    def __getitem__(self, n):
        if n < 0:
            raise IndexError("shift index must be non-negative")
        while len(self._vals) <= n:
            self._vals.append(self.lam * self._vals[-1] - self.b)
        return self._vals[n]

    value = __getitem__


# -- application ------------------------------------------------------------


def _series_in_d(s: Series, p: Poly) -> Poly:
    """sum_k w_k D^k p; terms beyond deg p vanish."""
    if p.is_zero:
        return p
    out = Poly(())
    q = p
    top = min(s.order, len(p.coeffs) - 1)
    for k in range(top + 1):
        w = s.coeffs[k]
        if not w.is_zero():
            out = out + q * w
        if k < top:
            q = q.derivative()
    return out


def _series_in_t(s: Series, lam: Scalar, b: Scalar, p: Poly) -> Poly:
    """sum_k w_k T^k p with T = C_{lam,b} after D."""
    if p.is_zero:
        return p
    out = Poly(())
    q = p
    top = min(s.order, len(p.coeffs) - 1)
    for k in range(top + 1):
        w = s.coeffs[k]
        if not w.is_zero():
            out = out + q * w
        if k < top:
            q = q.derivative().compose_affine(lam, b)
    return out


def apply(op: OperatorSpec, p: Poly) -> Poly:
    """Exact image of p under the operator.

    lam = 0 is allowed here (apply only); it is flagged by is_degenerate.
    Series-backed kinds auto-extend the series with zeros past deg p.
    """
    if op.kind == "D":
        return p.derivative()
    if op.kind == "C":
        return p.compose_affine(op.lam, op.b)
    if op.kind == "T":
        return p.derivative().compose_affine(op.lam, op.b)
    if op.kind == "conv":
        return _series_in_d(op.phi, p)
    if op.kind == "L":
        return _series_in_d(op.phi, p).compose_affine(op.lam, op.b)
    return _series_in_t(op.psi, op.lam, op.b, p)


def power_closed_form(lam: Scalar, b: Scalar, m: int, n: int, p: Poly) -> Poly:
    """n-th power of f -> f^(m)(lam z + b) in closed form:

        lam^(m n (n-1)/2) * p^(mn)(lam^n z - r_n)

    Exact; equals n-fold application (tested, not assumed).
    """
    if lam.is_zero():
        raise ValueError("closed-form power requires lam != 0")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    q = p.derivative(m * n)
    if q.is_zero:
        return q
    rn = shift_r(lam, b, n)
    q = q.compose_affine(lam**n, -rn)
    return q * lam ** (m * n * (n - 1) // 2)


def commute_rhs(phi: Series, lam: Scalar, b: Scalar, p: Poly) -> Poly:
    """phi(lam^{-1} D) applied to p(lam z + b).

    Equals C_{lam,b}(phi(D) p); the equality is a test target, not assumed.
    """
    if lam.is_zero():
        raise ValueError("commutation requires lam != 0")
    inv = lam.one_like() / lam
    return _series_in_d(phi.scale_arg(inv), p.compose_affine(lam, b))


@lru_cache(maxsize=4096)
def _phi_product_series(phi: Series, lam: Scalar, n: int, order: int) -> Series:
    """prod_{j=1..n} phi(lam^{-j} z) mod z^(order+1)."""
    inv = lam.one_like() / lam
    one = phi.coeffs[0].one_like()
    acc = Series([one], order)
    scale = inv
    for _ in range(n):
        acc = acc.mul_trunc(phi.scale_arg(scale), order)
        scale = scale * inv
    return acc


def apply_power(op: OperatorSpec, n: int, p: Poly) -> Poly:
    """Exact n-fold application using closed forms where available.

    Equals iterating apply() n times; the equivalence is covered by tests.
    Nondegenerate lam required for C/T/L/psiT when n > 0.
    """
    if n < 0:
        raise ValueError("power must be non-negative")
    if n == 0 or p.is_zero:
        return p
    if op.kind == "D":
        return p.derivative(n)
    if op.kind == "conv":
        d = len(p.coeffs) - 1
        return _series_in_d(op.phi.pow_trunc(n, d), p)
    if op.lam.is_zero():
        raise ValueError("closed-form powers require lam != 0")
    lam, b = op.lam, op.b
    if op.kind == "C":
        return p.compose_affine(lam**n, -shift_r(lam, b, n))
    if op.kind == "T":
        return power_closed_form(lam, b, 1, n, p)
    if op.kind == "L":
        # commute every phi(D) past the compositions:
        #   L^n = prod_{j=1..n} phi(lam^{-j} D) after C^n
        d = len(p.coeffs) - 1
        q = p.compose_affine(lam**n, -shift_r(lam, b, n))
        return _series_in_d(_phi_product_series(op.phi, lam, n, d), q)
    # psiT: split psi = z^ell * xi, apply T^(ell n) in closed form, then xi^n in T
    psi = op.psi
    ell = psi.vanish_order
    if ell is None:
        return Poly(())
    if ell > 0:
        q = power_closed_form(lam, b, 1, ell * n, p)
        xi = psi.shift_down(ell)
    else:
        q = p
        xi = psi
    if q.is_zero:
        return q
    d = len(q.coeffs) - 1
    return _series_in_t(xi.pow_trunc(n, d), lam, b, q)


def orbit(
    op: OperatorSpec,
    p: Poly,
    n_steps: int,
    disk: Disk,
    samples=None,
    prec=DEFAULT_PRECISION,
) -> OrbitReport:
    """Norms and degrees of p, op p, ..., op^N p by iterated application."""
    if n_steps < 0:
        raise ValueError("orbit length must be non-negative")
    steps = []
    q = p
    for n in range(n_steps + 1):
        steps.append(
            OrbitStep(
                n=n,
                norm_upper=q.norm_upper(disk, prec=prec),
                norm_boundary=q.norm_boundary(disk, samples=samples, prec=prec),
                degree=q.degree,
            )
        )
        if n < n_steps:
            q = apply(op, q)
    return OrbitReport(steps=steps, disk=disk)
