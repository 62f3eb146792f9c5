"""Exact identity suite: round trips, closed form vs iteration, commutation,
kernel and degree bookkeeping.

Every check here is zero-tolerance: the equalities hold coefficient-by-
coefficient in the exact backend, and a single mismatch is a failure.  The
randomized polynomials are seeded, so runs are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import inverses, operators
from .operators import apply, apply_power, commute_rhs, l_op, power_closed_form, t_op
from .poly import NEG_INF, Poly
from .scalar import Backend, Scalar
from .series import Series

DEFAULT_TRIALS = 20


def random_rational_poly(rng: random.Random, backend: Backend, deg_max: int) -> Poly:
    """Random polynomial with small Gaussian-rational coefficients, deg <= deg_max."""
    d = rng.randint(0, deg_max)
    coeffs = []
    for _ in range(d + 1):
        re = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        im = Fraction(rng.randint(-9, 9), rng.randint(1, 4)) if rng.random() < 0.5 else Fraction(0)
        coeffs.append(backend.scalar(re, im))
    if coeffs[-1].is_zero():
        coeffs[-1] = backend.scalar(1)
    return Poly(coeffs)


def _cell_rng(seed, *tags) -> random.Random:
    return random.Random((seed, tags).__repr__())


class CheckResult:
    def __init__(self, name):
        self.name = name
        self.cases = 0
        self.failures = []

    def record(self, ok, detail):
        self.cases += 1
        if not ok:
            self.failures.append(detail)

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures[:20],
            "ok": self.ok,
        }


def check_s_mn_roundtrip(lam, b, m, n, polys) -> CheckResult:
    res = CheckResult("s_mn round trip")
    for p in polys:
        q = inverses.s_mn(m, n, lam, b, p)
        ok = power_closed_form(lam, b, m, n, q) == p
        ok = ok and (p.is_zero or q.degree == p.degree + m * n)
        res.record(ok, f"m={m} n={n} lam={lam} b={b} p={p!r}")
    return res


def check_closed_form_vs_iterate(lam, b, m, n, polys) -> CheckResult:
    res = CheckResult("closed form equals iteration")
    phi = Series.from_poly(Poly.monomial(m, lam.one_like()))
    op = l_op(lam, b, phi)
    for p in polys:
        q = p
        for _ in range(n):
            q = apply(op, q)
        res.record(
            power_closed_form(lam, b, m, n, p) == q,
            f"m={m} n={n} lam={lam} b={b} p={p!r}",
        )
    return res


def check_f_n_roundtrip(lam, b, phi, n, polys) -> CheckResult:
    res = CheckResult("f_n round trip")
    m = phi.vanish_order
    op = l_op(lam, b, phi)
    for p in polys:
        q = inverses.f_n(phi, lam, b, n, p)
        ok = apply_power(op, n, q) == p
        ok = ok and (p.is_zero or q.degree == p.degree + m * n)
        res.record(ok, f"phi(order {phi.order}) n={n} lam={lam} b={b} p={p!r}")
    return res


def check_psiT_roundtrip(lam, b, psi, n, polys) -> CheckResult:
    res = CheckResult("psi(T) round trip")
    op = operators.psi_t_op(psi, lam, b)
    for p in polys:
        q = inverses.right_inverse_psiT(psi, lam, b, n, p)
        res.record(
            apply_power(op, n, q) == p,
            f"psi(order {psi.order}) n={n} lam={lam} b={b} p={p!r}",
        )
    return res


def check_commutation(lam, b, phi, polys) -> CheckResult:
    res = CheckResult("composition commutes through the series")
    op = l_op(lam, b, phi)
    for p in polys:
        res.record(
            apply(op, p) == commute_rhs(phi, lam, b, p),
            f"phi(order {phi.order}) lam={lam} b={b} p={p!r}",
        )
    return res


def check_kernel_defects(lam, b, m, n, k_max) -> CheckResult:
    res = CheckResult("kernel defect degree and annihilation")
    for k in range(k_max + 1):
        delta = inverses.s_mn_kernel_defect(m, n, lam, b, k)
        ok = delta.degree <= m * n - 1
        ok = ok and power_closed_form(lam, b, m, n, delta).is_zero
        res.record(ok, f"m={m} n={n} k={k} lam={lam} b={b}")
    return res


def check_degree_preservation(lam, b, psi, polys) -> CheckResult:
    """deg S_{psi(lam G)} p = deg p with G the derivative-then-compose map."""
    res = CheckResult("degree-preserving inverse")
    g = t_op(lam, b)
    for p in polys:
        q = inverses.s_psi_lambda_g(psi, lam, g, p)
        res.record(q.degree == p.degree, f"psi(order {psi.order}) lam={lam} b={b} p={p!r}")
    return res


DEFAULT_M_SET = (1, 2, 3)
DEFAULT_PHI_TEXTS = ("z^2", "z+z^2", "z+z^3")
DEFAULT_PSI_TEXTS = ("z", "z+z^2", "z^2+z^3")
DEFAULT_COMMUTE_TEXTS = ("z", "z^2", "1+z", "z+z^2")


def verify_identities(
    lam: Scalar,
    b: Scalar,
    deg_max: int = 8,
    n_max: int = 12,
    m_set=DEFAULT_M_SET,
    phi_series=None,
    psi_series=None,
    commute_series=None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    backend: Backend = None,
):
    """Run the exact identity suite for one (lam, b) cell.

    Returns a dict with one entry per check family plus an overall flag.
    """
    from .parsing import parse_poly
    from .scalar import EXACT

    be = backend or EXACT
    if phi_series is None:
        phi_series = [Series.from_poly(parse_poly(t, be)) for t in DEFAULT_PHI_TEXTS]
    if psi_series is None:
        psi_series = [Series.from_poly(parse_poly(t, be)) for t in DEFAULT_PSI_TEXTS]
    if commute_series is None:
        commute_series = [Series.from_poly(parse_poly(t, be)) for t in DEFAULT_COMMUTE_TEXTS]

    results = []
    for m in m_set:
        for n in range(1, n_max + 1):
            rng = _cell_rng(seed, "s_mn", m, n)
            polys = [random_rational_poly(rng, be, deg_max) for _ in range(trials)]
            results.append(check_s_mn_roundtrip(lam, b, m, n, polys))
            results.append(check_closed_form_vs_iterate(lam, b, m, n, polys))
            results.append(check_kernel_defects(lam, b, m, n, min(deg_max, 5)))
    for phi in phi_series:
        for n in range(1, n_max + 1):
            rng = _cell_rng(seed, "f_n", phi.order, n)
            polys = [random_rational_poly(rng, be, deg_max) for _ in range(trials)]
            results.append(check_f_n_roundtrip(lam, b, phi, n, polys))
    for psi in psi_series:
        for n in range(1, n_max + 1):
            rng = _cell_rng(seed, "psiT", psi.order, n)
            polys = [random_rational_poly(rng, be, deg_max) for _ in range(trials)]
            results.append(check_psiT_roundtrip(lam, b, psi, n, polys))
    for phi in commute_series:
        rng = _cell_rng(seed, "commute", phi.order)
        polys = [random_rational_poly(rng, be, deg_max) for _ in range(trials)]
        results.append(check_commutation(lam, b, phi, polys))
    for xi in (s for s in commute_series if not s.coeffs[0].is_zero()):
        rng = _cell_rng(seed, "degree", xi.order)
        polys = [random_rational_poly(rng, be, deg_max) for _ in range(trials)]
        results.append(check_degree_preservation(lam, b, xi, polys))

    merged = {}
    for r in results:
        if r.name not in merged:
            merged[r.name] = CheckResult(r.name)
        merged[r.name].cases += r.cases
        merged[r.name].failures.extend(r.failures)
    checks = [merged[name].as_dict() for name in merged]
    return {"checks": checks, "ok": all(c["ok"] for c in checks)}
