"""Spec files (JSON) and report files (JSON / CSV).

Spec file layout::

    {"n": 2,
     "function": {"kind": "multilinear",
                  "terms": [{"subset": [1, 2], "coef": "1"}]}}

Kinds and their payloads:

* ``multilinear`` / ``choquet``: ``terms`` as above (1-based, strictly increasing subsets).
* ``pseudo_multilinear``: ``terms`` plus ``transforms`` (one per variable).
* ``multiplicative``: ``transforms``.
* ``geometric_mean``: ``weights`` (rational strings summing to 1).
* ``expression``: ``expr`` over x1..xn; optional booleans ``smooth``, ``lattice``.

A transform is ``{"kind": "identity"}``, ``{"kind": "power", "exponent": "1/2"}``,
``{"kind": "affine", "slope": "2", "intercept": "-1/2"}`` or
``{"kind": "tabulated", "knots": [...], "values": [...]}``.

Rationals are written as strings (``"1/3"``); integers are accepted too.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from . import subsets as sb
from .errors import InteractError, SpecParseError
from .expression import expression_spec
from .model import (
    Affine,
    Choquet,
    FunctionSpec,
    GeometricMean,
    Identity,
    InteractionTable,
    Multilinear,
    MultilinearPoly,
    Multiplicative,
    Power,
    PseudoMultilinear,
    SetFunction,
    Tabulated,
    is_exact,
)

KINDS = ("multilinear", "choquet", "pseudo_multilinear", "multiplicative", "geometric_mean", "expression")


# ---------------------------------------------------------------------------
# Scalars


def format_scalar(x) -> str:
    """Exact values as ``p/q`` (or ``p``); floats via ``repr``."""
    if is_exact(x):
        return str(x)
    return repr(float(x))


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SpecParseError(path, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise SpecParseError(path, f"zero denominator in {value!r}") from None
        except ValueError:
            raise SpecParseError(path, f"cannot parse {value!r} as p/q") from None
    if isinstance(value, float):
        raise SpecParseError(path, "write rationals as strings such as \"1/3\" to keep them exact")
    raise SpecParseError(path, f"expected a rational string, got {type(value).__name__}")


def _field(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise SpecParseError(path, "expected an object")
    if key not in obj:
        raise SpecParseError(f"{path}.{key}", "missing")
    return obj[key]


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SpecParseError(path, "expected an array")
    return value


# ---------------------------------------------------------------------------
# Loading


def _subset(value, n: int, path: str) -> int:
    items = _list(value, path)
    prev = 0
    S = 0
    for j, i in enumerate(items):
        if not isinstance(i, int) or isinstance(i, bool):
            raise SpecParseError(f"{path}[{j}]", "subset entries must be integers")
        if not 1 <= i <= n:
            raise SpecParseError(f"{path}[{j}]", f"index {i} outside 1..{n}")
        if i <= prev:
            raise SpecParseError(f"{path}[{j}]", "subset indices must be strictly increasing")
        prev = i
        S |= 1 << (i - 1)
    return S


def _terms(payload: dict, n: int, path: str) -> dict[int, Fraction]:
    terms = _list(_field(payload, "terms", path), f"{path}.terms")
    coeffs: dict[int, Fraction] = {}
    for j, term in enumerate(terms):
        tp = f"{path}.terms[{j}]"
        S = _subset(_field(term, "subset", tp), n, f"{tp}.subset")
        if S in coeffs:
            raise SpecParseError(f"{tp}.subset", "duplicate subset")
        coeffs[S] = _rational(_field(term, "coef", tp), f"{tp}.coef")
    return coeffs


def _transform(obj, path: str):
    kind = _field(obj, "kind", path)
    if kind == "identity":
        return Identity()
    if kind == "power":
        c = _rational(_field(obj, "exponent", path), f"{path}.exponent")
        if c < 0:
            raise SpecParseError(f"{path}.exponent", "must be >= 0")
        return Power(c)
    if kind == "affine":
        return Affine(_rational(_field(obj, "slope", path), f"{path}.slope"),
                      _rational(_field(obj, "intercept", path), f"{path}.intercept"))
    if kind == "tabulated":
        knots = [_rational(v, f"{path}.knots[{j}]") for j, v in enumerate(_list(_field(obj, "knots", path), f"{path}.knots"))]
        values = [_rational(v, f"{path}.values[{j}]") for j, v in enumerate(_list(_field(obj, "values", path), f"{path}.values"))]
        try:
            return Tabulated(tuple(knots), tuple(values))
        except InteractError as exc:
            raise SpecParseError(path, str(exc)) from None
    raise SpecParseError(f"{path}.kind", f"unknown transform kind {kind!r}")


def _transforms(payload: dict, n: int, path: str) -> tuple:
    items = _list(_field(payload, "transforms", path), f"{path}.transforms")
    if len(items) != n:
        raise SpecParseError(f"{path}.transforms", f"expected {n} transforms, got {len(items)}")
    return tuple(_transform(t, f"{path}.transforms[{j}]") for j, t in enumerate(items))


def spec_from_dict(doc: dict, smooth: bool | None = None) -> FunctionSpec:
    """Build a spec from a parsed JSON document; ``smooth`` overrides the expression hint."""
    n = _field(doc, "n", "$")
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= sb.MAX_N:
        raise SpecParseError("$.n", f"expected an integer in 1..{sb.MAX_N}")
    payload = _field(doc, "function", "$")
    path = "$.function"
    kind = _field(payload, "kind", path)
    try:
        if kind == "multilinear":
            return Multilinear(MultilinearPoly(n, _terms(payload, n, path)))
        if kind == "choquet":
            if n > sb.MAX_DENSE_N:
                raise SpecParseError("$.n", f"choquet specs are limited to n <= {sb.MAX_DENSE_N}")
            return Choquet(SetFunction.from_dict(n, _terms(payload, n, path)))
        if kind == "pseudo_multilinear":
            return PseudoMultilinear(MultilinearPoly(n, _terms(payload, n, path)), _transforms(payload, n, path))
        if kind == "multiplicative":
            return Multiplicative(_transforms(payload, n, path))
        if kind == "geometric_mean":
            weights = _list(_field(payload, "weights", path), f"{path}.weights")
            if len(weights) != n:
                raise SpecParseError(f"{path}.weights", f"expected {n} weights")
            ws = tuple(_rational(w, f"{path}.weights[{j}]") for j, w in enumerate(weights))
            try:
                return GeometricMean(ws)
            except InteractError as exc:
                raise SpecParseError(f"{path}.weights", str(exc)) from None
        if kind == "expression":
            text = _field(payload, "expr", path)
            if not isinstance(text, str):
                raise SpecParseError(f"{path}.expr", "expected a string")
            hint = bool(payload.get("smooth", False)) if smooth is None else smooth
            try:
                return expression_spec(text, n, smooth=hint, lattice=bool(payload.get("lattice", False)))
            except InteractError as exc:
                raise SpecParseError(f"{path}.expr", str(exc)) from None
    except SpecParseError:
        raise
    except InteractError as exc:
        raise SpecParseError(path, str(exc)) from None
    raise SpecParseError(f"{path}.kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def load_spec(path: str | Path, smooth: bool | None = None) -> FunctionSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecParseError("$", f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise SpecParseError("$", f"cannot read {path}: {exc}") from None
    return spec_from_dict(doc, smooth)


def _terms_json(coeffs: dict) -> list:
    items = sorted(coeffs.items(), key=lambda kv: sb.sort_key(kv[0]))
    return [{"subset": [i + 1 for i in sb.members(S)], "coef": format_scalar(c)} for S, c in items]


def poly_to_dict(poly: MultilinearPoly) -> dict:
    return {"n": poly.n, "function": {"kind": "multilinear", "terms": _terms_json(poly.coeffs)}}


# ---------------------------------------------------------------------------
# Reports

CSV_COLUMNS = ("subset", "order", "value", "method", "stderr")


def table_rows(table: InteractionTable) -> list[dict]:
    rows = []
    for S, est in table.rows():
        rows.append(
            {
                "subset": sb.format_subset(S),
                "order": sb.popcount(S),
                "value": format_scalar(est.value),
                "method": est.method,
                "stderr": None if est.stderr is None else repr(est.stderr),
            }
        )
    return rows


def table_to_json(table: InteractionTable) -> str:
    return json.dumps({"n": table.n, "rows": table_rows(table)}, indent=2) + "\n"


def table_to_csv(table: InteractionTable) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in table_rows(table):
        writer.writerow({**row, "stderr": "" if row["stderr"] is None else row["stderr"]})
    return buf.getvalue()
