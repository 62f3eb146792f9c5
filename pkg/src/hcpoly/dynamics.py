"""Convergence and decay checks built on the operator and inverse layers.

Everything here is a verification harness: forward orbits are exact, norms
are certified majorants (norm_upper) or boundary lower estimates
(norm_boundary), and convergence acceptance means the majorant stays below
epsilon for five consecutive indices.
"""

from __future__ import annotations

import math

import mpmath
from mpmath import mp

from . import inverses, operators
from .operators import OperatorSpec, apply, apply_power
from .poly import Disk, Poly
from .reports import (
    BoundRow,
    BoundsReport,
    ConditionA,
    ConditionB,
    CriterionReport,
    DecayReport,
    OrbitReport,
    OrbitStep,
    SLimitReport,
    SynthesisPlan,
)
from .scalar import DEFAULT_PRECISION, Scalar, _as_mpf, backend_of, sweep_precision
from .series import Series

CONSECUTIVE_BELOW = 5
SYNTH_INDEX_BUDGET = 2**14


def _abs2_cmp_one(lam: Scalar):
    """-1, 0, +1 as |lam| is below, at, or above 1 (exact when lam is exact)."""
    a2 = lam.abs2()
    if a2 == 1:
        return 0
    return -1 if a2 < 1 else 1


def _family(op: OperatorSpec, inverse: str):
    """Resolve (name, S_n builder, degree drop per step) for the operator."""
    if op.lam is None or op.lam.is_zero():
        raise ValueError("inverse families require lam != 0")
    lam, b = op.lam, op.b
    if op.kind == "T":
        if inverse not in ("auto", "s_mn", "psi_t"):
            raise ValueError(f"family {inverse!r} does not apply to T")
        return "s_mn", (lambda n, p: inverses.s_mn(1, n, lam, b, p)), 1
    if op.kind == "psiT":
        if inverse not in ("auto", "psi_t"):
            raise ValueError(f"family {inverse!r} does not apply to psiT")
        ell = op.psi.vanish_order
        if ell is None or ell < 1:
            raise ValueError("psi must vanish at 0")
        return (
            "psi_t",
            (lambda n, p: inverses.right_inverse_psiT(op.psi, lam, b, n, p)),
            ell,
        )
    if op.kind == "L":
        if inverse not in ("auto", "f_n"):
            raise ValueError(f"family {inverse!r} does not apply to L")
        m = op.phi.vanish_order
        if m is None or m < 1:
            raise ValueError("phi must vanish at 0")
        return "f_n", (lambda n, p: inverses.f_n(op.phi, lam, b, n, p)), m
    raise ValueError(f"no inverse family for operator kind {op.kind!r}")


def _work_prec(op: OperatorSpec, max_exponent: int, prec):
    base = prec if prec is not None else DEFAULT_PRECISION
    if op.lam is not None and not op.lam.is_exact:
        return sweep_precision(base, op.lam, max_exponent)
    return base


def criterion_check(
    op: OperatorSpec,
    d_max: int,
    disk: Disk,
    epsilon,
    n_max: int,
    inverse: str = "auto",
    prec=None,
) -> CriterionReport:
    """Check the three orbit-transitivity conditions on monomials z^k, k <= d_max.

    (a) forward orbits reach the zero polynomial, exactly, by n = floor(k/drop)+1;
    (b) majorant norms of the inverse images fall below epsilon and stay there
        for five consecutive indices within n_max;
    (c) the n-th forward power returns the inverse image to z^k with exact
        equality for every n <= n_max.

    A budget-exhausted (b) is inconclusive rather than failed when |lam| < 1.
    """
    name, s_n, drop = _family(op, inverse)
    if d_max < 0 or n_max < 1:
        raise ValueError("d_max must be >= 0 and n_max >= 1")
    lam = op.lam
    backend = backend_of(lam)
    wp = _work_prec(op, d_max * n_max + drop * n_max * (n_max - 1) // 2, prec)
    eps = mpmath.mpf(epsilon)

    report = CriterionReport(
        family=name, d_max=d_max, disk=disk, epsilon=float(epsilon), n_max=n_max
    )
    a_ok = True
    c_ok = True
    for k in range(d_max + 1):
        zk = Poly.monomial(k, backend.scalar(1))
        # (a): exact forward annihilation
        bound = k // drop + 1
        q = zk
        first_zero = None
        for n in range(1, bound + 2):
            q = apply(op, q)
            if q.is_zero:
                first_zero = n
                break
        ok = first_zero is not None and first_zero <= bound
        a_ok = a_ok and ok
        report.cond_a.append(ConditionA(k=k, first_zero=first_zero, bound=bound, ok=ok))

        # inverse images, shared by (b) and (c)
        norms = []
        first_below = None
        certified = False
        run = 0
        tail_monotone = True
        prev = None
        for n in range(1, n_max + 1):
            img = s_n(n, zk)
            if report.cond_c_failure is None:
                back = apply_power(op, n, img)
                if back != zk:
                    c_ok = False
                    report.cond_c_failure = (k, n)
            val = img.norm_upper(disk, prec=wp)
            norms.append((n, val))
            if val < eps:
                if first_below is None:
                    first_below = n
                run += 1
                if run >= CONSECUTIVE_BELOW:
                    certified = True
            else:
                run = 0
            if first_below is not None and n > first_below:
                if prev is not None and val > prev:
                    tail_monotone = False
            prev = val
        report.cond_b.append(
            ConditionB(
                k=k,
                norms=norms,
                first_below=first_below,
                certified=certified,
                monotone_tail=tail_monotone if first_below is not None else False,
            )
        )

    report.cond_a_ok = a_ok
    report.cond_c_ok = c_ok
    all_certified = all(row.certified for row in report.cond_b)
    if all_certified:
        report.cond_b_status = "certified"
    elif _abs2_cmp_one(lam) < 0:
        report.cond_b_status = "inconclusive"
    else:
        report.cond_b_status = "fail"

    if a_ok and c_ok and all_certified:
        report.status = "pass"
    elif report.cond_b_status == "inconclusive" and a_ok and c_ok:
        report.status = "inconclusive"
    else:
        report.status = "fail"
    return report


def plan_for_indices(
    op: OperatorSpec,
    targets: list,
    indices: list,
    disk: Disk,
    inverse: str = "auto",
    prec=None,
    require_kills: bool = False,
):
    """Evaluate the vector f = sum_k S_{n_k} p_k for an explicit index schedule.

    Returns (plan, kills_ok): visit error at k is the majorant of the n_k-th
    forward image of f minus p_k; n_k = 0 contributes p_k itself.
    """
    _, s_n, _ = _family(op, inverse)
    if len(indices) != len(targets):
        raise ValueError("one index per target required")
    if any(n2 <= n1 for n1, n2 in zip(indices, indices[1:])):
        raise ValueError("indices must be strictly increasing")
    wp = _work_prec(op, (max(indices) if indices else 1) ** 2, prec)

    pieces = [p if n == 0 else s_n(n, p) for n, p in zip(indices, targets)]
    f = Poly(())
    for piece in pieces:
        f = f + piece
    visit_errors, tail_bounds, exact_visits = [], [], []
    kills_ok = True
    for k, (nk, pk) in enumerate(zip(indices, targets)):
        img = apply_power(op, nk, f)
        visit_errors.append((img - pk).norm_upper(disk, prec=wp))
        exact_visits.append(apply_power(op, nk, pieces[k]) == pk)
        tail = mpmath.mpf(0)
        for j in range(len(targets)):
            if j == k:
                continue
            cross = apply_power(op, nk, pieces[j])
            if j < k:
                if not cross.is_zero:
                    kills_ok = False
            else:
                tail += cross.norm_upper(disk, prec=wp)
        tail_bounds.append(tail)
    plan = SynthesisPlan(
        targets=list(targets),
        indices=list(indices),
        vector=f,
        visit_errors=visit_errors,
        tail_bounds=tail_bounds,
        exact_visits=exact_visits,
        gap=None,
        status="found",
    )
    if require_kills and not kills_ok:
        plan.status = "invalid"
    return plan, kills_ok


def synthesize_hc_vector(
    op: OperatorSpec,
    targets: list,
    disk: Disk,
    epsilon,
    inverse: str = "auto",
    max_index: int = SYNTH_INDEX_BUDGET,
    prec=None,
) -> SynthesisPlan:
    """Build one vector whose forward orbit visits each target within epsilon.

    Greedy doubling over the uniform gap g with indices n_k = g*k: earlier
    targets are reproduced exactly at their index, later contributions are
    majorant-bounded tails.  Status is "exhausted" once g*K would pass the
    index budget.
    """
    if not targets:
        raise ValueError("need at least one target")
    if _abs2_cmp_one(op.lam) < 0:
        raise ValueError("synthesis requires |lam| >= 1")
    eps = mpmath.mpf(epsilon)
    gap = 1
    last_plan = None
    while gap * len(targets) <= max_index:
        indices = [gap * (k + 1) for k in range(len(targets))]
        plan, kills_ok = plan_for_indices(
            op, targets, indices, disk, inverse=inverse, prec=prec
        )
        plan.gap = gap
        last_plan = plan
        if kills_ok and all(err < eps for err in plan.visit_errors):
            plan.status = "found"
            return plan
        gap *= 2
    if last_plan is None:
        raise ValueError("index budget too small for this many targets")
    last_plan.status = "exhausted"
    return last_plan


def slimit_check(
    m: int,
    ell: int,
    lam: Scalar,
    b: Scalar,
    t,
    p: Poly,
    disk: Disk,
    epsilon=1e-6,
    n_max: int = 100,
    prec=None,
) -> SLimitReport:
    """Certify that the lifted inverse images of t^n * p shrink to nothing.

    Uses the worst-case geometric envelope sigma_n = t^n and the coefficient
    majorant on the disk; acceptance is five consecutive indices below
    epsilon.  Requires |lam| >= 1 (the certified regime).
    """
    if lam.is_zero() or _abs2_cmp_one(lam) < 0:
        raise ValueError("slimit_check requires |lam| >= 1")
    if m < 1 or ell < 1:
        raise ValueError("m and ell must be positive")
    base = prec if prec is not None else DEFAULT_PRECISION
    d = int(p.degree) if not p.is_zero else 0
    max_exp = d * ell * n_max + m * ell * n_max * (ell * n_max - 1) // 2
    wp = sweep_precision(base, lam, max_exp) if not lam.is_exact else base
    eps = mpmath.mpf(epsilon)
    if isinstance(t, Scalar):
        t_mpf = t.abs_mpf(prec=wp)
    else:
        t_mpf = _as_mpf(t, wp)
    if t_mpf < 0:
        raise ValueError("geometric bound t must be non-negative")

    values = []
    run = 0
    certified_at = None
    tn = mpmath.mpf(1)
    for n in range(1, n_max + 1):
        with mp.workprec(wp):
            tn = tn * t_mpf
        q = inverses.s_mn(m, ell * n, lam, b, p)
        with mp.workprec(wp):
            val = tn * q.norm_upper(disk, prec=wp)
        values.append((n, val))
        if val < eps:
            run += 1
            if run >= CONSECUTIVE_BELOW:
                certified_at = n - CONSECUTIVE_BELOW + 1
                break
        else:
            run = 0
    status = "pass" if certified_at is not None else "exhausted"
    return SLimitReport(
        m=m,
        ell=ell,
        t=t,
        values=values,
        certified_at=certified_at,
        consecutive=CONSECUTIVE_BELOW,
        status=status,
    )


def decay_envelope_check(
    psi: Series,
    lam: Scalar,
    b: Scalar,
    f: Poly,
    disk: Disk,
    n_range,
    samples=None,
    prec=None,
) -> DecayReport:
    """Compare the forward orbit of f against the factorial decay envelope.

    Envelope at step n: C * n! * 2^n * |lam|^(n(n-1)/2) with C the boundary
    estimate of f on the unit disk.  Requires 0 < |lam| < 1 and psi(0) = 0.
    The start of the passing range (n0) is found by scanning; the overall
    trend is the majorant peaking once and then strictly decreasing.
    """
    if lam.is_zero() or _abs2_cmp_one(lam) >= 0:
        raise ValueError("decay analysis requires 0 < |lam| < 1")
    v = psi.vanish_order
    if v is None or v < 1:
        raise ValueError("psi must vanish at 0")
    n_lo, n_hi = n_range
    if not (0 <= n_lo <= n_hi):
        raise ValueError("bad n_range")
    wp = prec if prec is not None else DEFAULT_PRECISION

    op = operators.psi_t_op(psi, lam, b)
    orb = operators.orbit(op, f, n_hi, disk, samples=samples, prec=wp)

    c_value = f.norm_boundary(Disk(1), samples=samples, prec=wp)
    lam_abs = lam.abs_mpf(prec=wp)
    envelope = []
    with mp.workprec(wp):
        for n in range(n_lo, n_hi + 1):
            env = c_value * mpmath.mpf(math.factorial(n)) * mpmath.mpf(2) ** n
            env *= lam_abs ** (n * (n - 1) // 2)
            envelope.append((n, env))
    orb.envelope = envelope

    # smallest n0 in range with norm_boundary <= envelope from n0 onward
    passing = [orb.steps[n].norm_boundary <= env for n, env in envelope]
    n0 = None
    for i in range(len(passing)):
        if all(passing[i:]):
            n0 = n_lo + i
            break
    envelope_ok = n0 == n_lo

    uppers = [s.norm_upper for s in orb.steps]
    n_peak = max(range(len(uppers)), key=lambda i: uppers[i])
    trend_ok = True
    for i in range(n_peak, n_hi):
        if uppers[i + 1] < uppers[i]:
            continue
        if uppers[i] == 0 and uppers[i + 1] == 0:
            continue  # orbit already exactly annihilated
        trend_ok = False
        break

    return DecayReport(
        orbit=orb,
        c_value=c_value,
        n_range=(n_lo, n_hi),
        n0=n0,
        n_peak=n_peak,
        envelope_ok=envelope_ok,
        trend_ok=trend_ok,
        status="pass" if (envelope_ok and trend_ok) else "fail",
    )


def coefficient_bound_check(psi: Series, d: int, n_range, prec=None) -> BoundsReport:
    """Numerically assert the three coefficient growth bounds.

    For each n in range: |a_{i,n}| <= (r d n)^d with r derived from the roots
    of the degree-d truncation; |c_{j,n}| <= r_sup^j * binom(n+j-1, j) for the
    forward power of psi normalized to psi(0) = 1; and the multinomial count
    binom(j+n-1, n-1) * alpha^j <= n^j * alpha^j.  Root-finding failure marks
    the first family unavailable; series values are still computed.
    """
    if d < 1:
        raise ValueError("d must be positive")
    w0 = psi.coeffs[0]
    if w0.is_zero():
        raise ValueError("psi(0) must be nonzero")
    n_lo, n_hi = n_range
    if not (1 <= n_lo <= n_hi):
        raise ValueError("bad n_range")
    wp = prec if prec is not None else DEFAULT_PRECISION
    slack = mpmath.mpf(1) + mpmath.mpf(1e-9)

    xi = psi.scale(w0.one_like() / w0)
    r_sup = max(c.abs_mpf(prec=wp) for c in xi.truncate(d).coeffs)

    first = inverses.s_psi_power_coeffs(psi, d, 1)
    alpha = mpmath.mpf(1)
    for a in first.coeffs:
        alpha = max(alpha, a.abs_mpf(prec=wp))

    rows_a, rows_c, rows_binom = [], [], []
    r_roots = first.r
    roots = list(first.roots) if first.roots is not None else None
    for n in range(n_lo, n_hi + 1):
        exp_n = inverses.s_psi_power_coeffs(psi, d, n)
        for i, a in enumerate(exp_n.coeffs, start=1):
            val = a.abs_mpf(prec=wp)
            if exp_n.bound_n is None:
                rows_a.append(BoundRow(n=n, index=i, value=val, bound=None, ok=None))
            else:
                with mp.workprec(wp):
                    bound = mpmath.mpf(exp_n.bound_n)
                    ok = bool(val <= bound * slack)
                rows_a.append(BoundRow(n=n, index=i, value=val, bound=bound, ok=ok))
        xin = xi.pow_trunc(n, d)
        for j in range(1, d + 1):
            val = xin.coeffs[j].abs_mpf(prec=wp)
            with mp.workprec(wp):
                bound = r_sup**j * forward_count(n, j)
                ok = bool(val <= bound * slack)
            rows_c.append(BoundRow(n=n, index=j, value=val, bound=bound, ok=ok))
        for j in range(1, d + 1):
            with mp.workprec(wp):
                aj = alpha**j
                lhs = forward_count(n, j) * aj
                rhs = mpmath.mpf(n) ** j * aj
                ok = bool(lhs <= rhs * slack)
            rows_binom.append(BoundRow(n=n, index=j, value=lhs, bound=rhs, ok=ok))

    oks = [row.ok for row in rows_a + rows_c + rows_binom]
    if any(ok is False for ok in oks):
        status = "fail"
    elif any(ok is None for ok in oks):
        status = "partial"
    else:
        status = "pass"
    return BoundsReport(
        d=d,
        n_range=(n_lo, n_hi),
        rows_a=rows_a,
        rows_c=rows_c,
        rows_binom=rows_binom,
        r_roots=r_roots,
        r_sup=r_sup,
        roots=roots,
        alpha=alpha,
        status=status,
    )


def forward_count(n: int, j: int):
    """binom(n+j-1, j): compositions of j into n non-negative parts."""
    return mpmath.mpf(math.comb(n + j - 1, j))
