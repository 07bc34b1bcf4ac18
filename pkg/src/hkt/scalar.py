"""Scalar handling shared by every module.

Two arithmetic modes coexist:

* exact: entries are :class:`fractions.Fraction` (or int) and equality is literal;
* float: entries are Python/numpy floats compared with a relative tolerance
  ``|x - y| <= tol * max(1, |x|, |y|)``.

Arrays in exact mode have ``dtype=object``; float arrays are ``float64``.
"""
from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from typing import Any, Iterator

import numpy as np

DEFAULT_TOLERANCE = 1e-9
_tolerance = DEFAULT_TOLERANCE


def get_tolerance() -> float:
    return _tolerance


def set_tolerance(tol: float) -> None:
    global _tolerance
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _tolerance = float(tol)


@contextlib.contextmanager
def tolerance(tol: float) -> Iterator[None]:
    old = _tolerance
    set_tolerance(tol)
    try:
        yield
    finally:
        set_tolerance(old)


def parse_rational(text: Any) -> Fraction:
    """Parse ``"p/q"``, ``"3"``, ints or Fractions into a Fraction.

    Floats are rejected on purpose: they would silently corrupt exact data.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"expected a rational string, got {type(text).__name__}")


def format_rational(x: Any) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_exact_scalar(x: Any) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def is_exact_array(a: np.ndarray) -> bool:
    return a.dtype == object


def is_zero(x: Any) -> bool:
    if is_exact_scalar(x):
        return x == 0
    return abs(x) <= _tolerance


def close(x: Any, y: Any) -> bool:
    if is_exact_scalar(x) and is_exact_scalar(y):
        return x == y
    x, y = float(x), float(y)
    return abs(x - y) <= _tolerance * max(1.0, abs(x), abs(y))


def array_is_zero(a: np.ndarray) -> bool:
    a = np.asarray(a)
    if a.size == 0:
        return True
    if is_exact_array(a):
        return all(v == 0 for v in a.flat)
    return bool(np.max(np.abs(a)) <= _tolerance)


def arrays_close(a: np.ndarray, b: np.ndarray) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    if is_exact_array(a) and is_exact_array(b):
        return all(x == y for x, y in zip(a.flat, b.flat))
    af, bf = a.astype(float), b.astype(float)
    scale = np.maximum(1.0, np.maximum(np.abs(af), np.abs(bf)))
    return bool(np.all(np.abs(af - bf) <= _tolerance * scale))


def max_abs(a: Any) -> Any:
    """Largest absolute entry; stays a Fraction for exact input."""
    a = np.asarray(a)
    if a.size == 0:
        return Fraction(0)
    if is_exact_array(a):
        return max((abs(v) for v in a.flat), default=Fraction(0))
    return float(np.max(np.abs(a)))


def exact_array(data: Any) -> np.ndarray:
    """Object array of Fractions from nested lists of ints/Fractions/strings."""
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = parse_rational(v)
    return out


def zeros(shape: Any, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def identity(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def to_float(a: Any) -> Any:
    if isinstance(a, np.ndarray):
        return a.astype(float)
    return float(a)


def to_exact(a: np.ndarray) -> np.ndarray:
    """Lift an int/Fraction array to object dtype (floats are refused)."""
    a = np.asarray(a)
    if a.dtype.kind == "f":
        raise TypeError("cannot convert a float array to exact mode")
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = Fraction(v)
    return out


def exact_sqrt(x: Any) -> Fraction:
    """Square root of a nonnegative rational perfect square; ValueError otherwise."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p != x.numerator or q * q != x.denominator:
        raise ValueError(f"{x} is not the square of a rational")
    return Fraction(p, q)


def sqrt(x: Any) -> Any:
    if is_exact_scalar(x):
        return exact_sqrt(x)
    return math.sqrt(x)


def one(exact: bool) -> Any:
    return Fraction(1) if exact else 1.0


def _integerize(a: np.ndarray) -> tuple[np.ndarray, int, int]:
    """(integer array, common denominator, max |numerator|) for a Fraction array."""
    den = 1
    for v in a.flat:
        if isinstance(v, Fraction) and v.denominator != 1:
            den = math.lcm(den, v.denominator)
    ints = np.empty(a.shape, dtype=object)
    top = 0
    for idx, v in np.ndenumerate(a):
        k = int(v * den) if den != 1 else int(v)
        ints[idx] = k
        if abs(k) > top:
            top = abs(k)
    return ints, den, top


def common_integers(*arrays: np.ndarray) -> tuple[list[np.ndarray], int]:
    """Scale exact arrays by one common denominator D; returns (integer arrays, D).

    The integer arrays are int64 when their entries are small enough that
    degree-three products summed over a few hundred terms cannot overflow.
    """
    den = 1
    for a in arrays:
        for v in a.flat:
            if isinstance(v, Fraction) and v.denominator != 1:
                den = math.lcm(den, v.denominator)
    out = []
    top = 0
    for a in arrays:
        m = np.empty(a.shape, dtype=object)
        for idx, v in np.ndenumerate(a):
            k = int(v * den)
            m[idx] = k
            top = max(top, abs(k))
        out.append(m)
    if top < 2 ** 18:
        out = [m.astype(np.int64) for m in out]
    return out, den


def xeinsum(spec: str, *ops: np.ndarray) -> np.ndarray:
    """einsum that stays exact for Fraction arrays and runs at integer speed.

    Exact operands are scaled to integers by their common denominators; the
    contraction runs in int64 when a crude bound rules out overflow, else on
    Python ints; the result is divided back into Fractions.
    """
    arrays = [np.asarray(o) for o in ops]
    if not all(is_exact_array(a) for a in arrays):
        return np.einsum(spec, *[a.astype(float) for a in arrays], optimize=True)
    den = 1
    bound = 1
    ints = []
    for a in arrays:
        m, d, top = _integerize(a)
        ints.append(m)
        den *= d
        bound *= max(top, 1)
    lhs = spec.split("->")[0].replace(",", "")
    summed = 1
    sizes: dict[str, int] = {}
    for a, sub in zip(arrays, spec.split("->")[0].split(",")):
        for ch, n in zip(sub, a.shape):
            sizes[ch] = n
    out_idx = spec.split("->")[1] if "->" in spec else ""
    for ch in set(lhs) - set(out_idx):
        summed *= sizes[ch]
    if bound * summed < 2 ** 62:
        res = np.einsum(spec, *[m.astype(np.int64) for m in ints], optimize=True)
    else:
        res = np.einsum(spec, *ints)
    res = np.asarray(res)
    out = np.empty(res.shape, dtype=object)
    for idx, v in np.ndenumerate(res):
        out[idx] = Fraction(int(v), den)
    return out
