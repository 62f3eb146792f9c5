"""Command-line interface: every operation as a subcommand with JSON/CSV
reports, parameter grids, and reproducible run manifests.

Exit codes: 0 verified pass, 1 verified failure, 2 invalid input,
3 inconclusive (budget exhausted or bound data unavailable).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import os
import sys
from dataclasses import dataclass, field

from . import dynamics, inverses, operators, verify
from .jsonio import (
    canonical_dumps,
    degree_to_json,
    poly_to_json,
    real_to_json,
    real_to_str,
    scalar_to_json,
    series_to_json,
)
from .parsing import PolyParseError, parse_poly, parse_scalar
from .poly import Disk, Poly
from .scalar import DEFAULT_PRECISION, Backend
from .series import Series

PRECISION_ENV = "HCPOLY_PRECISION"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

_STATUS_EXIT = {
    "pass": EXIT_PASS,
    "found": EXIT_PASS,
    "certified": EXIT_PASS,
    "fail": EXIT_FAIL,
    "invalid": EXIT_FAIL,
    "inconclusive": EXIT_INCONCLUSIVE,
    "exhausted": EXIT_INCONCLUSIVE,
    "partial": EXIT_INCONCLUSIVE,
}


class CliInputError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    backend: str
    precision: int
    seed: int
    output: str | None
    fmt: str
    grid: list = field(default_factory=list)

    def as_dict(self):
        return {
            "subcommand": self.subcommand,
            "params": {k: v for k, v in sorted(self.params.items())},
            "backend": self.backend,
            "precision": self.precision,
            "seed": self.seed,
            "output": self.output,
            "format": self.fmt,
            "grid": self.grid,
        }

    def make_backend(self) -> Backend:
        if self.backend == "exact":
            return Backend("exact")
        return Backend("float", self.precision)


# -- parameter helpers -------------------------------------------------------


def _need(params, key):
    if params.get(key) is None:
        raise CliInputError(f"missing required option --{key.replace('_', '-')}")
    return params[key]


def _scalar(params, key, backend):
    try:
        return parse_scalar(str(_need(params, key)), backend)
    except PolyParseError as e:
        raise CliInputError(f"bad scalar for --{key}: {e}") from e


def _poly(params, key, backend):
    try:
        return parse_poly(str(_need(params, key)), backend)
    except PolyParseError as e:
        raise CliInputError(f"bad polynomial for --{key}: {e}") from e


def _series(params, key, backend) -> Series:
    p = _poly(params, key, backend)
    if p.is_zero:
        raise CliInputError(f"--{key} must be a nonzero series")
    return Series.from_poly(p)


def _disk(params, key="radius"):
    from fractions import Fraction

    r = _need(params, key)
    try:
        return Disk(Fraction(str(r)))
    except (ValueError, ZeroDivisionError) as e:
        raise CliInputError(f"bad radius {r!r}") from e


def _operator(params, backend):
    kind = _need(params, "op")
    if kind not in ("D", "C", "T", "conv", "L", "psiT"):
        raise CliInputError(f"unknown operator kind {kind!r}")
    lam = b = phi = psi = None
    if kind in ("C", "T", "L", "psiT"):
        lam = _scalar(params, "lam", backend)
        b = _scalar(params, "b", backend)
    if kind in ("conv", "L"):
        phi = _series(params, "phi", backend)
    if kind == "psiT":
        psi = _series(params, "psi", backend)
    return operators.OperatorSpec(kind, lam=lam, b=b, phi=phi, psi=psi)


def _exp_trunc_poly(order: int, backend) -> Poly:
    from fractions import Fraction
    import math

    return Poly(
        [backend.scalar(Fraction(1, math.factorial(k))) for k in range(order + 1)]
    )


# -- report renderers ---------------------------------------------------------


def _orbit_json(rep):
    out = {
        "radius": real_to_json(rep.disk.radius_mpf()),
        "steps": [
            {
                "n": s.n,
                "norm_upper": real_to_json(s.norm_upper),
                "norm_boundary": real_to_json(s.norm_boundary),
                "degree": degree_to_json(s.degree),
            }
            for s in rep.steps
        ],
    }
    if rep.envelope is not None:
        out["envelope"] = [[n, real_to_json(v)] for n, v in rep.envelope]
    return out


def _orbit_rows(rep, cell):
    env = dict(rep.envelope or [])
    rows = []
    for s in rep.steps:
        rows.append(
            {
                **cell,
                "n": s.n,
                "norm_upper": real_to_str(s.norm_upper),
                "norm_boundary": real_to_str(s.norm_boundary),
                "envelope": real_to_str(env[s.n]) if s.n in env else "",
                "pass": "",
            }
        )
    return rows


def _criterion_json(rep):
    return {
        "family": rep.family,
        "d_max": rep.d_max,
        "epsilon": rep.epsilon,
        "n_max": rep.n_max,
        "condition_a": {
            "ok": rep.cond_a_ok,
            "rows": [
                {"k": r.k, "first_zero": r.first_zero, "bound": r.bound, "ok": r.ok}
                for r in rep.cond_a
            ],
        },
        "condition_b": {
            "status": rep.cond_b_status,
            "rows": [
                {
                    "k": r.k,
                    "first_below": r.first_below,
                    "certified": r.certified,
                    "monotone_tail": r.monotone_tail,
                    "norms": [[n, real_to_json(v)] for n, v in r.norms],
                }
                for r in rep.cond_b
            ],
        },
        "condition_c": {
            "ok": rep.cond_c_ok,
            "first_failure": list(rep.cond_c_failure) if rep.cond_c_failure else None,
        },
        "status": rep.status,
    }


def _criterion_rows(rep, cell):
    rows = []
    for r in rep.cond_b:
        for n, v in r.norms:
            rows.append(
                {
                    **cell,
                    "k": r.k,
                    "n": n,
                    "norm_upper": real_to_str(v),
                    "norm_boundary": "",
                    "envelope": "",
                    "pass": str(bool(v < rep.epsilon)).lower(),
                }
            )
    return rows


def _plan_json(plan):
    return {
        "indices": plan.indices,
        "gap": plan.gap,
        "vector": poly_to_json(plan.vector),
        "visit_errors": [real_to_json(v) for v in plan.visit_errors],
        "tail_bounds": [real_to_json(v) for v in plan.tail_bounds],
        "exact_visits": plan.exact_visits,
        "status": plan.status,
    }


def _slimit_json(rep):
    return {
        "m": rep.m,
        "ell": rep.ell,
        "t": str(rep.t),
        "certified_at": rep.certified_at,
        "consecutive": rep.consecutive,
        "values": [[n, real_to_json(v)] for n, v in rep.values],
        "status": rep.status,
    }


def _slimit_rows(rep, cell):
    return [
        {
            **cell,
            "n": n,
            "norm_upper": real_to_str(v),
            "norm_boundary": "",
            "envelope": "",
            "pass": "",
        }
        for n, v in rep.values
    ]


def _decay_json(rep):
    return {
        "orbit": _orbit_json(rep.orbit),
        "c": real_to_json(rep.c_value),
        "n_range": list(rep.n_range),
        "n0": rep.n0,
        "n_peak": rep.n_peak,
        "envelope_ok": rep.envelope_ok,
        "trend_ok": rep.trend_ok,
        "status": rep.status,
    }


def _decay_rows(rep, cell):
    env = dict(rep.orbit.envelope or [])
    rows = []
    for s in rep.orbit.steps:
        in_range = rep.n_range[0] <= s.n <= rep.n_range[1]
        ok = ""
        if in_range and s.n in env:
            ok = str(bool(s.norm_boundary <= env[s.n])).lower()
        rows.append(
            {
                **cell,
                "n": s.n,
                "norm_upper": real_to_str(s.norm_upper),
                "norm_boundary": real_to_str(s.norm_boundary),
                "envelope": real_to_str(env[s.n]) if s.n in env else "",
                "pass": ok,
            }
        )
    return rows


def _bounds_json(rep):
    def rows(rs):
        return [
            {
                "n": r.n,
                "index": r.index,
                "value": real_to_json(r.value),
                "bound": real_to_json(r.bound) if r.bound is not None else None,
                "ok": r.ok,
            }
            for r in rs
        ]

    return {
        "d": rep.d,
        "n_range": list(rep.n_range),
        "inverse_coefficient_rows": rows(rep.rows_a),
        "forward_coefficient_rows": rows(rep.rows_c),
        "multinomial_rows": rows(rep.rows_binom),
        "r_roots": real_to_json(rep.r_roots) if rep.r_roots is not None else None,
        "r_sup": real_to_json(rep.r_sup),
        "alpha": real_to_json(rep.alpha),
        "roots": [[z.real, z.imag] for z in rep.roots] if rep.roots else None,
        "status": rep.status,
    }


def _bounds_rows(rep, cell):
    rows = []
    for label, rs in (
        ("inverse", rep.rows_a),
        ("forward", rep.rows_c),
        ("multinomial", rep.rows_binom),
    ):
        for r in rs:
            rows.append(
                {
                    **cell,
                    "family": label,
                    "n": r.n,
                    "index": r.index,
                    "value": real_to_str(r.value),
                    "bound": real_to_str(r.bound) if r.bound is not None else "",
                    "pass": "" if r.ok is None else str(r.ok).lower(),
                }
            )
    return rows


# -- handlers -----------------------------------------------------------------


def _handle_apply(params, config):
    backend = config.make_backend()
    op = _operator(params, backend)
    p = _poly(params, "poly", backend)
    n = int(params.get("power") or 1)
    if n == 1:
        result = operators.apply(op, p)
    else:
        result = operators.apply_power(op, n, p)
    report = {
        "result": poly_to_json(result),
        "degree": degree_to_json(result.degree),
        "is_convolution": op.is_convolution,
        "is_degenerate": op.is_degenerate,
    }
    return "pass", report, None


def _handle_orbit(params, config):
    backend = config.make_backend()
    op = _operator(params, backend)
    p = _poly(params, "poly", backend)
    disk = _disk(params)
    n = int(_need(params, "n"))
    samples = int(params["samples"]) if params.get("samples") else None
    rep = operators.orbit(op, p, n, disk, samples=samples, prec=config.precision)
    return "pass", _orbit_json(rep), _orbit_rows(rep, {})


def _handle_inverse(params, config):
    backend = config.make_backend()
    family = _need(params, "family")
    lam = _scalar(params, "lam", backend)
    b_needed = family in ("s_mn", "f_n", "psi_t", "psi_g")
    b = _scalar(params, "b", backend) if b_needed else None
    report = {}
    if family == "s_mn":
        m, n = int(_need(params, "m")), int(_need(params, "n"))
        p = _poly(params, "poly", backend)
        q = inverses.s_mn(m, n, lam, b, p)
        verified = operators.power_closed_form(lam, b, m, n, q) == p
        report = {"result": poly_to_json(q), "verified": verified}
    elif family == "f_n":
        n = int(_need(params, "n"))
        phi = _series(params, "phi", backend)
        p = _poly(params, "poly", backend)
        q = inverses.f_n(phi, lam, b, n, p)
        verified = operators.apply_power(operators.l_op(lam, b, phi), n, q) == p
        report = {"result": poly_to_json(q), "verified": verified}
    elif family == "psi_t":
        n = int(_need(params, "n"))
        psi = _series(params, "psi", backend)
        p = _poly(params, "poly", backend)
        q = inverses.right_inverse_psiT(psi, lam, b, n, p)
        verified = operators.apply_power(operators.psi_t_op(psi, lam, b), n, q) == p
        report = {"result": poly_to_json(q), "verified": verified}
    elif family == "psi_g":
        psi = _series(params, "psi", backend)
        p = _poly(params, "poly", backend)
        g_kind = params.get("g_op") or "T"
        if g_kind == "T":
            g = operators.t_op(lam, b)
        elif g_kind == "D":
            g = operators.diff_op()
        else:
            raise CliInputError(f"unsupported helper operator {g_kind!r}")
        q = inverses.s_psi_lambda_g(psi, lam, g, p)
        # verify psi(lam G) q == p
        check = Poly(())
        gq = q
        for k in range(len(q.coeffs)):
            wk = psi.coeff(k) * lam**k
            if not wk.is_zero():
                check = check + gq * wk
            gq = operators.apply(g, gq)
            if gq.is_zero:
                break
        report = {"result": poly_to_json(q), "verified": check == p}
    elif family == "psi_power":
        m, n = int(_need(params, "m")), int(_need(params, "n"))
        psi = _series(params, "psi", backend)
        exp = inverses.s_psi_power_coeffs(psi, m, n)
        report = {
            "w0": scalar_to_json(exp.w0),
            "a": [[i, n, scalar_to_json(c)] for i, c in enumerate(exp.coeffs, start=1)],
            "bound": real_to_json(exp.bound_n) if exp.bound_n is not None else None,
            "bound_c": real_to_json(exp.bound_c) if exp.bound_c is not None else None,
            "r": real_to_json(exp.r) if exp.r is not None else None,
            "roots": [[z.real, z.imag] for z in exp.roots] if exp.roots else None,
        }
        return "pass", report, None
    else:
        raise CliInputError(f"unknown inverse family {family!r}")
    status = "pass" if report.get("verified", True) else "fail"
    return status, report, None


def _criterion_operator(params, backend):
    lam = _scalar(params, "lam", backend)
    b = _scalar(params, "b", backend)
    if params.get("phi"):
        return operators.l_op(lam, b, _series(params, "phi", backend))
    if params.get("psi"):
        psi = _series(params, "psi", backend)
        if psi.order == 1 and psi.coeffs[0].is_zero() and psi.coeffs[1].is_one():
            return operators.t_op(lam, b)
        return operators.psi_t_op(psi, lam, b)
    return operators.t_op(lam, b)


def _handle_criterion(params, config):
    backend = config.make_backend()
    op = _criterion_operator(params, backend)
    disk = _disk(params)
    rep = dynamics.criterion_check(
        op,
        d_max=int(_need(params, "d_max")),
        disk=disk,
        epsilon=float(_need(params, "epsilon")),
        n_max=int(_need(params, "n_max")),
        inverse=params.get("family") or "auto",
        prec=config.precision,
    )
    return rep.status, _criterion_json(rep), _criterion_rows(rep, {})


def _handle_synthesize(params, config):
    backend = config.make_backend()
    op = _criterion_operator(params, backend)
    disk = _disk(params)
    targets = [
        parse_poly(t, backend) for t in str(_need(params, "targets")).split(";") if t.strip()
    ]
    if not targets:
        raise CliInputError("no targets given")
    if params.get("indices"):
        indices = [int(x) for x in str(params["indices"]).split(",")]
        plan, kills_ok = dynamics.plan_for_indices(
            op, targets, indices, disk, prec=config.precision
        )
        eps = float(_need(params, "epsilon"))
        ok = kills_ok and all(float(e) < eps for e in plan.visit_errors)
        plan.status = "found" if ok else "fail"
    else:
        plan = dynamics.synthesize_hc_vector(
            op,
            targets,
            disk,
            float(_need(params, "epsilon")),
            max_index=int(params.get("max_index") or dynamics.SYNTH_INDEX_BUDGET),
            prec=config.precision,
        )
    return plan.status, _plan_json(plan), None


def _handle_slimit(params, config):
    backend = config.make_backend()
    lam = _scalar(params, "lam", backend)
    b = _scalar(params, "b", backend)
    p = _poly(params, "poly", backend)
    rep = dynamics.slimit_check(
        int(_need(params, "m")),
        int(_need(params, "ell")),
        lam,
        b,
        float(params.get("t") if params.get("t") is not None else 1.0),
        p,
        _disk(params),
        epsilon=float(params.get("epsilon") or 1e-6),
        n_max=int(params.get("n_max") or 100),
        prec=config.precision,
    )
    return rep.status, _slimit_json(rep), _slimit_rows(rep, {})


def _handle_decay(params, config):
    backend = config.make_backend()
    lam = _scalar(params, "lam", backend)
    b = _scalar(params, "b", backend)
    psi = _series(params, "psi", backend)
    if params.get("exp_trunc"):
        f = _exp_trunc_poly(int(params["exp_trunc"]), backend)
    else:
        f = _poly(params, "poly", backend)
    rep = dynamics.decay_envelope_check(
        psi,
        lam,
        b,
        f,
        _disk(params),
        (int(_need(params, "n_from")), int(_need(params, "n_to"))),
        samples=int(params["samples"]) if params.get("samples") else None,
        prec=config.precision,
    )
    return rep.status, _decay_json(rep), _decay_rows(rep, {})


def _handle_bounds(params, config):
    backend = config.make_backend()
    psi = _series(params, "psi", backend)
    rep = dynamics.coefficient_bound_check(
        psi,
        int(_need(params, "d")),
        (int(params.get("n_from") or 1), int(_need(params, "n_to"))),
        prec=config.precision,
    )
    return rep.status, _bounds_json(rep), _bounds_rows(rep, {})


def _handle_verify(params, config):
    backend = config.make_backend()
    if not backend.is_exact:
        raise CliInputError("verify-identities requires --backend exact")
    lam = _scalar(params, "lam", backend)
    b = _scalar(params, "b", backend)
    kwargs = {}
    if params.get("m_set"):
        kwargs["m_set"] = [int(x) for x in str(params["m_set"]).split(",")]
    if params.get("phi_set"):
        kwargs["phi_series"] = [
            Series.from_poly(parse_poly(t, backend))
            for t in str(params["phi_set"]).split(";")
        ]
    if params.get("psi_set"):
        kwargs["psi_series"] = [
            Series.from_poly(parse_poly(t, backend))
            for t in str(params["psi_set"]).split(";")
        ]
    result = verify.verify_identities(
        lam,
        b,
        deg_max=int(params.get("deg_max") or 8),
        n_max=int(params.get("n_max") or 12),
        trials=int(params.get("trials") or verify.DEFAULT_TRIALS),
        seed=config.seed,
        backend=backend,
        **kwargs,
    )
    return ("pass" if result["ok"] else "fail"), result, None


_HANDLERS = {
    "apply": _handle_apply,
    "orbit": _handle_orbit,
    "inverse": _handle_inverse,
    "criterion": _handle_criterion,
    "synthesize": _handle_synthesize,
    "slimit": _handle_slimit,
    "decay": _handle_decay,
    "bounds": _handle_bounds,
    "verify-identities": _handle_verify,
}

_CSV_CAPABLE = {"orbit", "criterion", "slimit", "decay", "bounds"}


# -- grid expansion ------------------------------------------------------------


def _expand_grid(params, grid_specs):
    """Cartesian product of --grid name=v1,v2 overrides, in given order."""
    if not grid_specs:
        return [({}, params)]
    names, valuelists = [], []
    for spec in grid_specs:
        if "=" not in spec:
            raise CliInputError(f"bad --grid spec {spec!r}; expected name=v1,v2")
        name, values = spec.split("=", 1)
        name = name.replace("-", "_")
        vals = [v for v in values.split(",") if v != ""]
        if not vals:
            raise CliInputError(f"--grid {spec!r} has no values")
        names.append(name)
        valuelists.append(vals)
    cells = []
    for combo in itertools.product(*valuelists):
        cell = dict(zip(names, combo))
        merged = dict(params)
        merged.update(cell)
        cells.append((cell, merged))
    return cells


# -- dispatch -------------------------------------------------------------------


def dispatch(config: RunConfig) -> int:
    """Run the configured subcommand; write report(s); return the exit code."""
    handler = _HANDLERS[config.subcommand]
    if config.fmt == "csv" and config.subcommand not in _CSV_CAPABLE:
        raise CliInputError(f"csv output is not defined for {config.subcommand!r}")
    if config.fmt == "csv" and not config.output:
        raise CliInputError("csv output requires --output")

    cells = _expand_grid(config.params, config.grid)
    reports, all_rows, statuses = [], [], []
    for cell, params in cells:
        status, report, rows = handler(params, config)
        statuses.append(status)
        reports.append({"cell": cell, "status": status, "report": report})
        if rows:
            prefixed = [
                {**{f"param_{k}": v for k, v in cell.items()}, **row} for row in rows
            ]
            all_rows.extend(prefixed)

    manifest = {"config": config.as_dict()}
    if len(cells) == 1:
        payload = {**manifest, "status": statuses[0], "report": reports[0]["report"]}
    else:
        overall = _worst_status(statuses)
        payload = {**manifest, "status": overall, "cells": reports}

    if config.fmt == "json":
        text = canonical_dumps(payload)
        if config.output:
            with open(config.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _write_csv(config.output, all_rows)
        with open(config.output + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(canonical_dumps({**manifest, "status": _worst_status(statuses)}))

    overall = _worst_status(statuses)
    sys.stderr.write(f"{config.subcommand}: {overall}\n")
    return _STATUS_EXIT.get(overall, EXIT_FAIL)


def _worst_status(statuses):
    order = {"fail": 0, "invalid": 0, "exhausted": 1, "inconclusive": 1, "partial": 1}
    worst = min(statuses, key=lambda s: order.get(s, 2))
    return worst


def _write_csv(path, rows):
    fieldnames = []
    for row in rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, restval="", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


# -- argument parsing ------------------------------------------------------------


def _build_parser():
    top = argparse.ArgumentParser(
        prog="hcpoly",
        description="operator dynamics on complex polynomials: exact identities "
        "and certified convergence checks",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("exact", "float"), default="exact")
    common.add_argument("--precision", type=int, default=None,
                        help=f"float precision in bits (default ${PRECISION_ENV} or 53)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--grid", action="append", default=[],
                        help="sweep: name=v1,v2,... (repeatable)")

    sub = top.add_subparsers(dest="subcommand", required=True)

    def cmd(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = cmd("apply", help="apply an operator (optionally an n-th power) to a polynomial")
    p.add_argument("--op", required=True)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--b")
    p.add_argument("--phi")
    p.add_argument("--psi")
    p.add_argument("--poly", required=True)
    p.add_argument("--power", type=int, default=1)

    p = cmd("orbit", help="iterated application with norms per step")
    p.add_argument("--op", required=True)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--b")
    p.add_argument("--phi")
    p.add_argument("--psi")
    p.add_argument("--poly", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("--samples", type=int)

    p = cmd("inverse", help="right-inverse constructions and expansion coefficients")
    p.add_argument("--family", required=True,
                   choices=("s_mn", "f_n", "psi_t", "psi_g", "psi_power"))
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--b")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--phi")
    p.add_argument("--psi")
    p.add_argument("--poly")
    p.add_argument("--g-op", dest="g_op", choices=("D", "T"))

    p = cmd("criterion", help="transitivity criterion check on monomials")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--psi")
    p.add_argument("--phi")
    p.add_argument("--d-max", dest="d_max", type=int, required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--family", dest="family", default="auto")

    p = cmd("synthesize", help="build a vector whose orbit visits the targets")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--psi")
    p.add_argument("--phi")
    p.add_argument("--targets", required=True, help="semicolon-separated polynomials")
    p.add_argument("--radius", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--max-index", dest="max_index", type=int)
    p.add_argument("--indices", help="explicit comma-separated schedule")

    p = cmd("slimit", help="certify decay of lifted inverse images of t^n p")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", "--l", dest="ell", type=int, required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--t")
    p.add_argument("--poly", required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("--epsilon")
    p.add_argument("--n-max", dest="n_max", type=int)

    p = cmd("decay", help="orbit decay envelope comparison for |lambda| < 1")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--poly")
    p.add_argument("--exp-trunc", dest="exp_trunc", type=int,
                   help="use the truncated exponential of this order as input")
    p.add_argument("--radius", required=True)
    p.add_argument("--n-from", dest="n_from", type=int, required=True)
    p.add_argument("--n-to", dest="n_to", type=int, required=True)
    p.add_argument("--samples", type=int)

    p = cmd("bounds", help="coefficient growth bound checks")
    p.add_argument("--psi", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-from", dest="n_from", type=int, default=1)
    p.add_argument("--n-to", dest="n_to", type=int, required=True)

    p = cmd("verify-identities", help="exact identity suite for one parameter cell")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--deg-max", dest="deg_max", type=int, default=8)
    p.add_argument("--n-max", dest="n_max", type=int, default=12)
    p.add_argument("--trials", type=int, default=verify.DEFAULT_TRIALS)
    p.add_argument("--m-set", dest="m_set")
    p.add_argument("--phi-set", dest="phi_set")
    p.add_argument("--psi-set", dest="psi_set")

    return top


_CONFIG_KEYS = {"backend", "precision", "seed", "output", "fmt", "grid", "subcommand"}


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    precision = ns.precision
    if precision is None:
        precision = int(os.environ.get(PRECISION_ENV, DEFAULT_PRECISION))
    params = {k: v for k, v in vars(ns).items() if k not in _CONFIG_KEYS}
    config = RunConfig(
        subcommand=ns.subcommand,
        params=params,
        backend=ns.backend,
        precision=precision,
        seed=ns.seed,
        output=ns.output,
        fmt=ns.fmt,
        grid=list(ns.grid),
    )
    try:
        return dispatch(config)
    except (CliInputError, PolyParseError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID
    except (ValueError, ZeroDivisionError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
