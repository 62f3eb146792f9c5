"""JSON value encoding shared by the CLI and the report writers.

A Scalar encodes as {"re": "p/q", "im": "p/q"} in the exact backend and
{"re": number, "im": number} in the float backend; a Poly is
{"coeffs": [Scalar, ...]} ascending by degree and a Series adds its order.
Float components that over- or underflow an IEEE double are written as
decimal strings instead of numbers so nothing silently becomes 0 or inf.
"""

from __future__ import annotations

import json

import mpmath

from .poly import NEG_INF, Poly
from .scalar import Backend, Scalar
from .series import Series

REAL_DIGITS = 17


def real_to_json(x):
    """A real value (mpf/float/int) as a JSON-safe number or decimal string."""
    if isinstance(x, int):
        return x
    xf = float(x)
    if mpmath.isfinite(mpmath.mpf(xf)) and (x == 0 or xf != 0):
        return xf
    return mpmath.nstr(mpmath.mpf(x), REAL_DIGITS)


def real_to_str(x):
    """Deterministic decimal rendering for CSV cells."""
    if isinstance(x, int):
        return str(x)
    return mpmath.nstr(mpmath.mpf(x), REAL_DIGITS)


def _component_to_json(c, exact):
    if exact:
        return str(c)
    return real_to_json(c)


def scalar_to_json(s: Scalar):
    exact = s.is_exact
    return {"re": _component_to_json(s.re, exact), "im": _component_to_json(s.im, exact)}


def scalar_from_json(obj, backend: Backend) -> Scalar:
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise ValueError(f"not a scalar object: {obj!r}")
    re, im = obj["re"], obj["im"]
    if backend.is_exact:
        if isinstance(re, float) or isinstance(im, float):
            raise ValueError("float components cannot enter the exact backend")
        return Scalar.exact(re, im)
    return Scalar.approx(re, im, backend.prec)


def poly_to_json(p: Poly):
    return {"coeffs": [scalar_to_json(c) for c in p.coeffs]}


def poly_from_json(obj, backend: Backend) -> Poly:
    return Poly([scalar_from_json(c, backend) for c in obj["coeffs"]])


def series_to_json(s: Series):
    return {"coeffs": [scalar_to_json(c) for c in s.coeffs], "order": s.order}


def series_from_json(obj, backend: Backend) -> Series:
    return Series([scalar_from_json(c, backend) for c in obj["coeffs"]], obj["order"])


def degree_to_json(d):
    return None if d == NEG_INF else d


def canonical_dumps(obj) -> str:
    """Byte-stable JSON: sorted keys, no whitespace, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
