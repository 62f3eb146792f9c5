"""Right-inverse constructions for the operator families.

Three families, all exact on polynomials:

* s_mn           inverts the n-th power of f -> f^(m)(lam z + b) by the
                 per-monomial lift formula (degree rises by m*n).
* s_psi_lambda_g inverts psi(lam G) for any degree-dropping G via the
                 truncated series reciprocal of psi (degree preserved).
* f_n            inverts the n-th power of C_{lam,b} phi(D) by chaining
                 reciprocal factors with s_mn.
* right_inverse_psiT   inverts psi(T_{lam,b})^n for psi vanishing at 0.

The factor ordering in f_n follows the commuted power expansion

    L^n = prod_{j=1..n} phi(lam^{-j} D) after C^n,

so the reciprocal factors carry lam^{-1}..lam^{-n}; these are the exponents
that make the round trip an exact identity (covered by the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .operators import OperatorSpec, apply, shift_r
from .poly import NEG_INF, Poly, binom, falling_ratio
from .scalar import Scalar
from .series import Series

ROOT_CLUSTER_TOL = 1e-7


# -- the degree-raising family ------------------------------------------------


@lru_cache(maxsize=16384)
def _s_mn_monomial(m: int, n: int, lam: Scalar, b: Scalar, k: int):
    """Sparse image of z^k: tuple of (degree, coefficient).

    Image = k!/((k+mn)! lam^(kn) lam^(mn(n-1)/2)) *
            sum_{j=0..k} binom(k+mn, j) z^(k+mn-j) r_n^j
    """
    one = lam.one_like()
    pref = one / (lam ** (k * n + m * n * (n - 1) // 2) * falling_ratio(k, m * n))
    rn = shift_r(lam, b, n)
    terms = []
    rj = one
    for j in range(k + 1):
        c = pref * binom(k + m * n, j) * rj
        terms.append((k + m * n - j, c))
        rj = rj * rn
    return tuple(terms)


def s_mn(m: int, n: int, lam: Scalar, b: Scalar, p: Poly) -> Poly:
    """Linear right inverse of the n-th closed-form power; deg rises by m*n."""
    if lam.is_zero():
        raise ValueError("right inverses require lam != 0")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if p.is_zero:
        return p
    zero = p.coeffs[0].zero_like()
    out = [zero] * (len(p.coeffs) + m * n)
    for k, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        for deg, t in _s_mn_monomial(m, n, lam, b, k):
            out[deg] = out[deg] + c * t
    return Poly(out)


def s_mn_kernel_defect(m: int, n: int, lam: Scalar, b: Scalar, k: int) -> Poly:
    """Difference between the plain antiderivative lift of z^k and s_mn(z^k).

    Has degree <= m*n - 1 and is annihilated by the n-th closed-form power.
    """
    if lam.is_zero():
        raise ValueError("right inverses require lam != 0")
    one = lam.one_like()
    pref = one / (lam ** (k * n + m * n * (n - 1) // 2) * falling_ratio(k, m * n))
    rn = shift_r(lam, b, n)
    lifted = Poly.monomial(k + m * n, pref).compose_affine(one, rn)
    return lifted - s_mn(m, n, lam, b, Poly.monomial(k, one))


# -- the degree-preserving family ---------------------------------------------


@lru_cache(maxsize=4096)
def _reciprocal_power(s: Series, n: int, order: int) -> Series:
    """(1/s)^n mod z^(order+1)."""
    return s.reciprocal(order).pow_trunc(n, order)


def s_psi_lambda_g(psi: Series, lam: Scalar, g: OperatorSpec, p: Poly) -> Poly:
    """Right inverse of psi(lam G) on p, for G strictly dropping degree.

    Computed from the truncated reciprocal of psi: on polynomials of degree
    <= deg p the restriction of psi(lam G) is invertible with a unique
    inverse, so this coincides with a root-factored construction.  The
    degree-drop hypothesis is checked on the orbit of p.
    """
    if lam.is_zero():
        raise ValueError("right inverses require lam != 0")
    if psi.coeffs[0].is_zero():
        raise ValueError("psi(0) must be nonzero for this inverse family")
    if p.is_zero:
        return p
    d = len(p.coeffs) - 1
    # chain of G^i p with the degree-drop hypothesis checked at every step
    powers = [p]
    q = p
    for _ in range(d + 1):
        q = apply(g, q)
        if not (q.degree < powers[-1].degree):
            raise ValueError("operator G does not drop degree on this input")
        if q.is_zero:
            break
        powers.append(q)
    u = _reciprocal_power(psi, 1, d)
    out = Poly(())
    lam_i = lam.one_like()
    for i, gi in enumerate(powers):
        ui = u.coeffs[i]
        if not ui.is_zero():
            out = out + gi * (ui * lam_i)
        lam_i = lam_i * lam
    return out


@dataclass(frozen=True)
class InverseExpansion:
    """Expansion data of an n-th inverse power w0^-n (I + sum a_i (lam G)^i).

    coeffs[i-1] is a_{i,n} for 1 <= i <= m.  Root data (float backend) feeds
    the growth bound: r = max(1, 1/|alpha_i|) over roots of the degree-m
    truncation, bound_c = (r m)^m and bound_n = (r m n)^m.
    """

    w0: Scalar
    m: int
    n: int
    coeffs: tuple
    roots: Optional[tuple] = None
    r: Optional[float] = None
    bound_c: Optional[float] = None
    bound_n: Optional[float] = None


def poly_roots(coeffs) -> list:
    """Roots of sum c_k z^k via companion-matrix eigenvalues (float backend)."""
    cs = [c.to_complex() if isinstance(c, Scalar) else complex(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    arr = np.array(cs[::-1], dtype=complex)
    return [complex(z) for z in np.roots(arr)]


def cluster_roots(roots, tol=ROOT_CLUSTER_TOL):
    """Merge numerically coincident roots; multiplicity is preserved."""
    out = []
    for z in sorted(roots, key=lambda w: (w.real, w.imag)):
        for i, (rep, mult) in enumerate(out):
            if abs(z - rep) <= tol:
                out[i] = ((rep * mult + z) / (mult + 1), mult + 1)
                break
        else:
            out.append((z, 1))
    merged = []
    for rep, mult in out:
        merged.extend([rep] * mult)
    return merged


def s_psi_power_coeffs(psi: Series, m: int, n: int) -> InverseExpansion:
    """Coefficients a_{i,n} of the expanded n-th inverse power.

    a_{i,n} = w0^n * [z^i] (1/psi)^n for 1 <= i <= m; the lam powers attach
    to the i-th term of the displayed expansion.  Root data is attached in
    the float backend when the truncation has any nonconstant part.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    w0 = psi.coeffs[0]
    if w0.is_zero():
        raise ValueError("psi(0) must be nonzero")
    un = _reciprocal_power(psi, n, m)
    w0n = w0**n
    coeffs = tuple(un.coeffs[i] * w0n for i in range(1, m + 1))
    roots = r = bound_c = bound_n = None
    try:
        found = poly_roots(psi.truncate(m).coeffs)
        roots = tuple(cluster_roots(found))
        inv_mags = [1.0 / abs(z) for z in roots]
        r = max([1.0] + inv_mags)
        bound_c = (r * m) ** m
        bound_n = (r * m * n) ** m
    except (np.linalg.LinAlgError, ZeroDivisionError):
        roots = None
    return InverseExpansion(
        w0=w0, m=m, n=n, coeffs=coeffs, roots=roots, r=r, bound_c=bound_c, bound_n=bound_n
    )


def root_factored_inverse_series(psi: Series, m: int, prec=53) -> Series:
    """Float-backend inverse of psi mod z^(m+1) built from its roots.

    1/w0 * prod_i (1 + z/alpha_i + ... + (z/alpha_i)^m); agrees with the
    series reciprocal on the truncation (same unique inverse).
    """
    from .scalar import Backend

    be = Backend("float", prec)
    roots = poly_roots(psi.truncate(m).coeffs)
    one = be.scalar(1)
    acc = Series([one], m)
    for alpha in roots:
        inv = one / be.scalar(alpha.real, alpha.imag)
        geom, t = [one], one
        for _ in range(m):
            t = t * inv
            geom.append(t)
        acc = acc.mul_trunc(Series(geom, m), m)
    w0 = psi.coeffs[0].to_float(prec)
    return acc.scale(one / w0)


# -- the product family ---------------------------------------------------------


@lru_cache(maxsize=4096)
def _inverse_product_series(psi: Series, lam: Scalar, n: int, order: int) -> Series:
    """prod_{j=1..n} u(lam^{-j} z) mod z^(order+1), u = 1/psi truncated."""
    u = psi.reciprocal(order)
    inv = lam.one_like() / lam
    acc = Series([psi.coeffs[0].one_like()], order)
    scale = inv
    for _ in range(n):
        acc = acc.mul_trunc(u.scale_arg(scale), order)
        scale = scale * inv
    return acc


def f_n(phi: Series, lam: Scalar, b: Scalar, n: int, p: Poly) -> Poly:
    """Right inverse of the n-th power of C_{lam,b} phi(D).

    With phi = z^m psi (psi(0) != 0), applies the reciprocal factors
    u(lam^{-j} D) for j = n..1 and then the degree-raising lift s_mn.
    """
    if lam.is_zero():
        raise ValueError("right inverses require lam != 0")
    if n < 1:
        raise ValueError("n must be positive")
    m = phi.vanish_order
    if m is None:
        raise ValueError("phi must be a nonzero series")
    if m < 1:
        raise ValueError("phi must vanish at 0")
    if p.is_zero:
        return p
    psi = phi.shift_down(m)
    d = len(p.coeffs) - 1
    w = _inverse_product_series(psi, lam, n, d)
    q = Poly(())
    dk = p
    for i in range(d + 1):
        wi = w.coeffs[i]
        if not wi.is_zero():
            q = q + dk * wi
        if i < d:
            dk = dk.derivative()
    return s_mn(m, n, lam, b, q)


def right_inverse_psiT(psi: Series, lam: Scalar, b: Scalar, n: int, p: Poly) -> Poly:
    """Right inverse of psi(T_{lam,b})^n for psi with psi(0) = 0.

    Writes psi = z^ell xi and composes the degree-raising lift for T^(ell n)
    with the n-th inverse power of xi(T).
    """
    if lam.is_zero():
        raise ValueError("right inverses require lam != 0")
    if n < 1:
        raise ValueError("n must be positive")
    ell = psi.vanish_order
    if ell is None:
        raise ValueError("psi must be a nonzero series")
    if ell < 1:
        raise ValueError("psi must vanish at 0")
    if p.is_zero:
        return p
    xi = psi.shift_down(ell)
    d = len(p.coeffs) - 1
    v = _reciprocal_power(xi, n, d)
    q = Poly(())
    tk = p
    for i in range(d + 1):
        vi = v.coeffs[i]
        if not vi.is_zero():
            q = q + tk * vi
        if i < d:
            tk = tk.derivative().compose_affine(lam, b)
            if tk.is_zero:
                break
    return s_mn(1, ell * n, lam, b, q)
