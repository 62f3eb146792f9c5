"""Report containers produced by orbit and convergence checks.

These are plain data holders; JSON/CSV rendering lives in jsonio/cli so the
numeric layers stay dependency-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .poly import Disk, Poly


class OrbitStep(NamedTuple):
    n: int
    norm_upper: object
    norm_boundary: object
    degree: object  # int or the -inf sentinel


@dataclass
class OrbitReport:
    steps: list
    disk: Disk
    envelope: Optional[list] = None  # list of (n, bound) when attached

    def norms_upper(self):
        return [s.norm_upper for s in self.steps]

    def degrees(self):
        return [s.degree for s in self.steps]


class ConditionA(NamedTuple):
    k: int
    first_zero: int
    bound: int
    ok: bool


class ConditionB(NamedTuple):
    k: int
    norms: list  # [(n, norm_upper)]
    first_below: Optional[int]
    certified: bool
    monotone_tail: bool


@dataclass
class CriterionReport:
    family: str
    d_max: int
    disk: Disk
    epsilon: float
    n_max: int
    cond_a: list = field(default_factory=list)
    cond_b: list = field(default_factory=list)
    cond_a_ok: bool = False
    cond_b_status: str = "fail"  # "certified" | "fail" | "inconclusive"
    cond_c_ok: bool = False
    cond_c_failure: Optional[tuple] = None  # (k, n) of first exact mismatch
    status: str = "fail"  # "pass" | "fail" | "inconclusive"


@dataclass
class SynthesisPlan:
    targets: list
    indices: list
    vector: Poly
    visit_errors: list
    tail_bounds: list
    exact_visits: list
    gap: Optional[int]
    status: str  # "found" | "exhausted"


@dataclass
class SLimitReport:
    m: int
    ell: int
    t: object
    values: list  # [(n, norm_upper of S_{m, ell*n}(t^n p))]
    certified_at: Optional[int]
    consecutive: int
    status: str  # "pass" | "exhausted"


@dataclass
class DecayReport:
    orbit: OrbitReport
    c_value: object
    n_range: tuple
    n0: Optional[int]
    n_peak: int
    envelope_ok: bool
    trend_ok: bool
    status: str  # "pass" | "fail"


class BoundRow(NamedTuple):
    n: int
    index: int
    value: object  # |a_{i,n}| or |c_{j,n}| or the multinomial count
    bound: object
    ok: Optional[bool]  # None when the bound is unavailable


@dataclass
class BoundsReport:
    d: int
    n_range: tuple
    rows_a: list
    rows_c: list
    rows_binom: list
    r_roots: Optional[object]
    r_sup: object
    roots: Optional[list]
    alpha: object
    status: str  # "pass" | "fail" | "partial"
