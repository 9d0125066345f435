"""JSON interchange: matrix literals, tuples, points and report encoding.

A matrix literal is a list of rows whose entries are ``[re, im]`` pairs.
Report floats are rounded to a fixed number of significant digits so that
last-bit noise from BLAS never leaks into a byte-level comparison.
"""

from __future__ import annotations

import json
import math
from dataclasses import is_dataclass
from numbers import Number

import numpy as np

from .errors import StructuralError
from .linalg import OperatorTuple, as_matrix

REPORT_DIGITS = 6


def _entry(x) -> complex:
    if (not isinstance(x, (list, tuple)) or len(x) != 2
            or not all(isinstance(v, Number) and not isinstance(v, bool) for v in x)):
        raise StructuralError(f"matrix entry must be a [re, im] pair of numbers, got {x!r}")
    return complex(float(x[0]), float(x[1]))


def matrix_to_literal(m) -> list:
    a = as_matrix(m)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def matrix_from_literal(lit) -> np.ndarray:
    if not isinstance(lit, list) or not lit or not all(isinstance(r, list) for r in lit):
        raise StructuralError("a matrix must be a non-empty list of rows")
    width = len(lit[0])
    if width == 0 or any(len(r) != width for r in lit):
        raise StructuralError("matrix rows must be non-empty and of equal length")
    return as_matrix([[_entry(x) for x in row] for row in lit])


def tuple_to_json(t: OperatorTuple) -> dict:
    return {"n": t.n, "dim": t.dim, "ops": [matrix_to_literal(m) for m in t.ops]}


def tuple_from_json(obj) -> OperatorTuple:
    if not isinstance(obj, dict) or "ops" not in obj:
        raise StructuralError('tuple JSON needs an "ops" list')
    ops = obj["ops"]
    if not isinstance(ops, list) or not ops:
        raise StructuralError('"ops" must be a non-empty list of matrices')
    t = OperatorTuple(tuple(matrix_from_literal(m) for m in ops))
    if "n" in obj and obj["n"] != t.n:
        raise StructuralError(f'"n" is {obj["n"]} but {t.n} matrices were given')
    if "dim" in obj and obj["dim"] != t.dim:
        raise StructuralError(f'"dim" is {obj["dim"]} but matrices are {t.dim}x{t.dim}')
    return t


def point_to_json(s) -> dict:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    return {"s": [[float(v.real), float(v.imag)] for v in s]}


def point_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or not isinstance(obj.get("s"), list) or not obj["s"]:
        raise StructuralError('point JSON needs a non-empty "s" list of [re, im] pairs')
    s = np.array([_entry(x) for x in obj["s"]], dtype=complex)
    if not np.all(np.isfinite(s)):
        raise StructuralError("point has non-finite coordinates")
    return s


def fundamental_to_dict(fo) -> dict:
    return {"side": fo.side, "rank": fo.rank, "basis": matrix_to_literal(fo.basis)
            if fo.rank else [], "matrices": [matrix_to_literal(e) for e in fo.E] if fo.rank else [],
            "residuals": list(fo.residuals), "off_defect": list(fo.off_defect),
            "flags": list(fo.flags)}


def dilation_to_dict(dil) -> dict:
    return {"n_minus": dil.n_minus, "n_plus": dil.n_plus, "safe_degree": dil.safe_degree,
            "blocks": dil.blocks.to_list(),
            "R": [matrix_to_literal(r) for r in dil.R], "U": matrix_to_literal(dil.U)}


def _round(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return 0.0
    return float(f"{x:.{REPORT_DIGITS}g}")


def to_jsonable(obj, exact: bool = False):
    """Recursively convert report objects to plain JSON types.

    With ``exact`` false (reports), floats are rounded; matrix payloads that
    must round-trip should be converted with the literal helpers first and
    passed with ``exact`` true.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if exact and math.isfinite(x) else _round(x)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real, exact), to_jsonable(obj.imag, exact)]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2 and np.iscomplexobj(obj):
            return [[to_jsonable(v, exact) for v in row] for row in obj]
        return [to_jsonable(v, exact) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, exact) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, range)):
        return [to_jsonable(v, exact) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict(), exact)
    if is_dataclass(obj):
        return to_jsonable(vars(obj), exact)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, exact: bool = False) -> str:
    return json.dumps(to_jsonable(obj, exact), indent=2, ensure_ascii=False) + "\n"
