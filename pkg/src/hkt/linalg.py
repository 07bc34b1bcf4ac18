"""Gaussian elimination that works for Fraction (object) and float64 matrices.

numpy.linalg cannot handle object arrays, and sympy is far slower than a
plain row reduction for the small dense matrices used here.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

import numpy as np

from .scalar import get_tolerance, is_exact_array, zeros


def _pivot_ok(x: Any, exact: bool) -> bool:
    return x != 0 if exact else abs(x) > get_tolerance()


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = np.array(m, dtype=object if is_exact_array(np.asarray(m)) else float, copy=True)
    exact = is_exact_array(a)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if exact:
            p = next((i for i in range(r, rows) if a[i, c] != 0), None)
        else:
            i = r + int(np.argmax(np.abs(a[r:, c])))
            p = i if abs(a[i, c]) > get_tolerance() else None
        if p is None:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for i in range(rows):
            if i != r and _pivot_ok(a[i, c], exact):
                a[i] = a[i] - a[i, c] * a[r]
        if not exact:
            a[np.abs(a) <= get_tolerance() * 1e-3] = 0.0
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m: np.ndarray) -> list[np.ndarray]:
    """Basis of {x : m x = 0}, one vector per free column."""
    m = np.asarray(m)
    exact = is_exact_array(m)
    cols = m.shape[1]
    if m.shape[0] == 0:
        red, pivots = np.zeros((0, cols)), []
    else:
        red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(cols, exact)
        v[f] = Fraction(1) if exact else 1.0
        for r, p in enumerate(pivots):
            v[p] = -red[r, f]
        basis.append(v)
    return basis


def row_basis(vectors: list[np.ndarray]) -> list[np.ndarray]:
    """Independent subset spanning the same space (reduced rows)."""
    if not vectors:
        return []
    red, pivots = rref(np.array(vectors))
    return [red[i] for i in range(len(pivots))]


def solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a square nonsingular system m x = b (b may be a matrix)."""
    m = np.asarray(m)
    n = m.shape[0]
    b2 = np.asarray(b).reshape(n, -1)
    aug = np.concatenate([m, b2], axis=1)
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    x = red[:, n:]
    return x.reshape(np.asarray(b).shape)


def inverse(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    n = m.shape[0]
    eye = zeros((n, n), is_exact_array(m))
    for i in range(n):
        eye[i, i] = Fraction(1) if is_exact_array(m) else 1.0
    return solve(m, eye)


def det(m: np.ndarray) -> Any:
    m = np.asarray(m)
    n = m.shape[0]
    if n == 0:
        return Fraction(1) if is_exact_array(m) else 1.0
    if not is_exact_array(m):
        return float(np.linalg.det(m.astype(float)))
    a = np.array(m, dtype=object, copy=True)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i, c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[[c, p]] = a[[p, c]]
            result = -result
        result *= a[c, c]
        for i in range(c + 1, n):
            if a[i, c] != 0:
                a[i, c:] = a[i, c:] - (a[i, c] / a[c, c]) * a[c, c:]
    return result


def charpoly(m: np.ndarray) -> list[Any]:
    """Coefficients of det(x I - m), highest degree first (Faddeev-LeVerrier)."""
    m = np.asarray(m)
    n = m.shape[0]
    exact = is_exact_array(m)
    eye = zeros((n, n), exact)
    for i in range(n):
        eye[i, i] = Fraction(1) if exact else 1.0
    coeffs = [Fraction(1) if exact else 1.0]
    mk = zeros((n, n), exact)
    for k in range(1, n + 1):
        mk = m @ (mk + coeffs[-1] * eye)
        tr = sum(mk[i, i] for i in range(n))
        coeffs.append(-tr / k)
    return coeffs


def is_positive_definite(m: np.ndarray) -> bool:
    m = np.asarray(m)
    return all(det(m[:k, :k]) > (0 if is_exact_array(m) else get_tolerance())
               for k in range(1, m.shape[0] + 1))


def in_span(vectors: list[np.ndarray], v: np.ndarray) -> bool:
    if not vectors:
        return all(not _pivot_ok(x, is_exact_array(np.asarray(v))) for x in np.asarray(v).flat)
    return rank(np.array(vectors + [v])) == rank(np.array(vectors))
