"""Lie algebras given by structure constants, and the Chevalley-Eilenberg d.

``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]`` (0-based).
All forms handled here are left-invariant, so d has no derivative term:

    d a(X_0, ..., X_k) = sum_{i<j} (-1)^{i+j} a([X_i, X_j], X_0, ..^i..^j.., X_k)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from . import linalg
from .multilinear import Form, perm_sign
from .scalar import array_is_zero, is_exact_array, is_zero, parse_rational, to_float, xeinsum, zeros


class LieAlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    name: str = ""
    _dcache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact_array(self.c)

    @classmethod
    def from_brackets(cls, dim: int, brackets: Iterable[tuple[int, int, int, Any]],
                      name: str = "", one_based: bool = False, exact: bool = True) -> "LieAlgebra":
        """Build from sparse triples (i, j, k, value) meaning [e_i, e_j] has value on e_k.

        The antisymmetric partner is filled in automatically; listing both
        (i, j, k) and (j, i, k), or the same triple twice, is an error.
        """
        c = zeros((dim, dim, dim), exact)
        seen: set[tuple[int, int, int]] = set()
        off = 1 if one_based else 0
        for pos, entry in enumerate(brackets):
            i, j, k, v = entry
            i, j, k = i - off, j - off, k - off
            if not all(0 <= x < dim for x in (i, j, k)):
                raise LieAlgebraError(f"brackets[{pos}]: index out of range for dim {dim}")
            if i == j:
                raise LieAlgebraError(f"brackets[{pos}]: [e_i, e_i] must vanish")
            key = (min(i, j), max(i, j), k)
            if key in seen:
                raise LieAlgebraError(f"brackets[{pos}]: duplicate entry for ({i + off},{j + off},{k + off})")
            seen.add(key)
            val = parse_rational(v) if exact else float(parse_rational(v))
            c[i, j, k] = val
            c[j, i, k] = -val
        return cls(c, name)

    @classmethod
    def abelian(cls, dim: int, exact: bool = True) -> "LieAlgebra":
        return cls(zeros((dim, dim, dim), exact), f"r{dim}")

    def brackets(self) -> list[tuple[int, int, int, Any]]:
        """Sparse 0-based triples with i < j."""
        n = self.dim
        return [(i, j, k, self.c[i, j, k]) for i in range(n) for j in range(i + 1, n)
                for k in range(n) if not is_zero(self.c[i, j, k])]

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return xeinsum("i,j,ijk->k", x, y, self.c)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad_x acting on column vectors."""
        return xeinsum("i,ijk->kj", x, self.c)

    def ad_basis(self, i: int) -> np.ndarray:
        return self.c[i].T.copy()

    def to_float(self) -> "LieAlgebra":
        return LieAlgebra(to_float(self.c), self.name)

    def __repr__(self) -> str:
        return f"LieAlgebra(name={self.name!r}, dim={self.dim})"


def check_antisymmetric(L: LieAlgebra) -> bool:
    return array_is_zero(L.c + L.c.transpose(1, 0, 2))


def jacobi_tensor(L: LieAlgebra) -> np.ndarray:
    c = L.c
    t = xeinsum("ijm,mkl->ijkl", c, c)
    return t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)


def jacobi_violation(L: LieAlgebra) -> tuple[int, int, int, int] | None:
    """First index quadruple (i,j,k,l) where the Jacobi sum is nonzero, else None."""
    t = jacobi_tensor(L)
    for idx in itertools.product(range(L.dim), repeat=4):
        if not is_zero(t[idx]):
            return idx
    return None


def jacobi_check(L: LieAlgebra) -> bool:
    return array_is_zero(jacobi_tensor(L))


def _d_basis(L: LieAlgebra, degree: int) -> dict:
    """d of each basis k-form e^I, memoized per algebra."""
    cache = L._dcache
    if degree in cache:
        return cache[degree]
    n, c = L.dim, L.c
    out: dict[tuple[int, ...], dict[tuple[int, ...], Any]] = {}
    # d e^m (X_0..X_k): sum over pairs of -c[a,b,m] style terms; go through increasing J of degree k+1
    combos = list(itertools.combinations(range(n), degree + 1))
    for J in combos:
        for p, q in itertools.combinations(range(degree + 1), 2):
            rest = J[:p] + J[p + 1:q] + J[q + 1:]
            s0 = -1 if (p + q) % 2 else 1
            row = c[J[p], J[q]]
            for m in range(n):
                v = row[m]
                if is_zero(v) and (L.exact or v == 0):
                    continue
                sign, I = perm_sign((m,) + rest)
                if sign == 0:
                    continue
                out.setdefault(I, {})
                out[I][J] = out[I].get(J, 0) + s0 * sign * v
    cache[degree] = out
    return out


def ce_differential(L: LieAlgebra, a: Form) -> Form:
    if a.dim != L.dim:
        raise ValueError("dimension mismatch")
    if a.degree >= L.dim:
        return Form.zero(L.dim, a.degree + 1)
    table = _d_basis(L, a.degree)
    acc: dict[tuple[int, ...], Any] = {}
    for I, x in a.items():
        for J, v in table.get(I, {}).items():
            acc[J] = acc.get(J, 0) + x * v
    return Form(L.dim, a.degree + 1, acc)


d = ce_differential


def direct_sum(A: LieAlgebra, B: LieAlgebra, name: str = "") -> LieAlgebra:
    n, m = A.dim, B.dim
    exact = A.exact and B.exact
    c = zeros((n + m, n + m, n + m), exact)
    c[:n, :n, :n] = A.c
    c[n:, n:, n:] = B.c
    return LieAlgebra(c, name or f"{A.name}+{B.name}")


def killing_form(L: LieAlgebra) -> np.ndarray:
    return xeinsum("imk,jkm->ij", L.c, L.c)


def _span_of_brackets(L: LieAlgebra, X: list[np.ndarray], Y: list[np.ndarray]) -> list[np.ndarray]:
    vecs = [L.bracket(x, y) for x in X for y in Y]
    return linalg.row_basis(vecs) if vecs else []


def derived_series(L: LieAlgebra) -> list[int]:
    n = L.dim
    eye = np.eye(n, dtype=int)
    cur = [np.array([Fraction(v) for v in eye[i]], dtype=object) if L.exact else eye[i].astype(float)
           for i in range(n)]
    dims = [n]
    while True:
        nxt = _span_of_brackets(L, cur, cur)
        dims.append(len(nxt))
        if len(nxt) == len(cur) or not nxt:
            return dims
        cur = nxt


def lower_central_series(L: LieAlgebra) -> list[int]:
    n = L.dim
    eye = np.eye(n, dtype=int)
    full = [np.array([Fraction(v) for v in eye[i]], dtype=object) if L.exact else eye[i].astype(float)
            for i in range(n)]
    cur = full
    dims = [n]
    while True:
        nxt = _span_of_brackets(L, full, cur)
        dims.append(len(nxt))
        if len(nxt) == len(cur) or not nxt:
            return dims
        cur = nxt


def classify_algebra(L: LieAlgebra) -> dict[str, bool]:
    if not jacobi_check(L):
        raise LieAlgebraError("Jacobi identity fails")
    n = L.dim
    abelian = array_is_zero(L.c)
    solvable = derived_series(L)[-1] == 0
    nilpotent = lower_central_series(L)[-1] == 0
    semisimple = n > 0 and linalg.rank(killing_form(L)) == n
    unimodular = all(is_zero(sum(L.c[i, j, j] for j in range(n))) for i in range(n))
    return {"abelian": abelian, "nilpotent": nilpotent, "solvable": solvable,
            "semisimple": semisimple, "unimodular": unimodular}
