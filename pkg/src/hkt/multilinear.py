"""Alternating forms, metrics and endomorphisms on a real space with a fixed basis.

Forms are stored sparsely on strictly increasing index tuples (0-based);
evaluation on a permuted tuple picks up the sign of the permutation.
Vectors, metrics and endomorphisms are plain numpy arrays: ``dtype=object``
holding Fractions in exact mode, ``float64`` in float mode.  Endomorphism
matrices act on column vectors, so column ``j`` of ``J`` is ``J e_j``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Any, Iterable, Mapping

import numpy as np

from . import linalg
from .scalar import close, is_exact_array, is_exact_scalar, is_zero, zeros


def perm_sign(seq: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """(sign, sorted tuple); sign is 0 if an index repeats."""
    s = list(seq)
    sign = 1
    for i in range(1, len(s)):
        j = i
        while j > 0 and s[j - 1] > s[j]:
            s[j - 1], s[j] = s[j], s[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(s)):
        if s[i] == s[i - 1]:
            return 0, tuple(s)
    return sign, tuple(s)


class Form:
    """A degree-k alternating form on R^n with coefficients on increasing tuples."""

    __slots__ = ("dim", "degree", "_c")

    def __init__(self, dim: int, degree: int, coeffs: Mapping[tuple[int, ...], Any] | None = None):
        if degree < 0:
            raise ValueError("negative degree")
        self.dim = dim
        self.degree = degree
        c: dict[tuple[int, ...], Any] = {}
        if coeffs and degree <= dim:
            for idx, v in coeffs.items():
                idx = tuple(idx)
                if len(idx) != degree or any(not 0 <= i < dim for i in idx):
                    raise ValueError(f"bad index {idx} for a {degree}-form in dim {dim}")
                sign, key = perm_sign(idx)
                if sign == 0:
                    continue
                c[key] = c.get(key, 0) + sign * v
        self._c = {k: v for k, v in c.items() if not _exact_zero(v)}

    # construction
    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls(dim, degree)

    @classmethod
    def basis(cls, dim: int, *idx: int) -> "Form":
        return cls(dim, len(idx), {tuple(idx): Fraction(1)})

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Form":
        """Read the increasing-tuple entries of a dense antisymmetric array."""
        arr = np.asarray(arr)
        k, n = arr.ndim, (arr.shape[0] if arr.ndim else 0)
        return cls(n, k, {I: arr[I] for I in itertools.combinations(range(n), k)})

    @classmethod
    def from_function(cls, dim: int, degree: int, f) -> "Form":
        return cls(dim, degree, {I: f(I) for I in itertools.combinations(range(dim), degree)})

    @classmethod
    def scalar(cls, dim: int, value: Any) -> "Form":
        return cls(dim, 0, {(): value})

    # access
    def items(self):
        return self._c.items()

    def __getitem__(self, idx) -> Any:
        if not isinstance(idx, tuple):
            idx = (idx,)
        sign, key = perm_sign(idx)
        if sign == 0:
            return Fraction(0)
        v = self._c.get(key)
        if v is None:
            return Fraction(0)
        return v if sign > 0 else -v

    @property
    def exact(self) -> bool:
        return all(is_exact_scalar(v) for v in self._c.values())

    def to_array(self, exact: bool | None = None) -> np.ndarray:
        if exact is None:
            exact = self.exact
        out = zeros((self.dim,) * self.degree, exact)
        perms = [(p, perm_sign(p)[0]) for p in itertools.permutations(range(self.degree))]
        for I, v in self._c.items():
            for p, s in perms:
                out[tuple(I[i] for i in p)] = v if s > 0 else -v
        return out

    def __call__(self, *vectors: np.ndarray) -> Any:
        if len(vectors) != self.degree:
            raise ValueError("wrong number of arguments")
        if self.degree == 0:
            return self._c.get((), Fraction(0))
        m = np.array([np.asarray(v) for v in vectors]).T  # columns are the vectors
        total: Any = Fraction(0)
        for I, a in self._c.items():
            total = total + a * linalg.det(m[list(I), :])
        return total

    # arithmetic
    def _check(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.dim != self.dim or other.degree != self.degree:
            raise ValueError(f"shape mismatch: ({self.dim},{self.degree}) vs ({other.dim},{other.degree})")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return Form(self.dim, self.degree, c)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.dim, self.degree, {k: -v for k, v in self._c.items()})

    def __mul__(self, s: Any) -> "Form":
        if isinstance(s, Form):
            return wedge(self, s)
        return Form(self.dim, self.degree, {k: v * s for k, v in self._c.items()})

    __rmul__ = __mul__

    def __truediv__(self, s: Any) -> "Form":
        return Form(self.dim, self.degree, {k: v / s for k, v in self._c.items()})

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def is_zero(self) -> bool:
        return all(is_zero(v) for v in self._c.values())

    def equals(self, other: "Form") -> bool:
        self._check(other)
        keys = set(self._c) | set(other._c)
        return all(close(self[k], other[k]) for k in keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.dim == other.dim and self.degree == other.degree and self.equals(other)

    __hash__ = None  # type: ignore[assignment]

    def max_abs(self) -> Any:
        return max((abs(v) for v in self._c.values()), default=Fraction(0))

    def to_float(self) -> "Form":
        return Form(self.dim, self.degree, {k: float(v) for k, v in self._c.items()})

    def __repr__(self) -> str:
        if not self._c:
            return f"Form(dim={self.dim}, degree={self.degree}, 0)"
        terms = " + ".join(f"({v})e^{''.join(str(i + 1) for i in k) or '()'}"
                           for k, v in sorted(self._c.items()))
        return f"Form(dim={self.dim}, degree={self.degree}, {terms})"


def _exact_zero(v: Any) -> bool:
    # only literal zeros are dropped; float noise stays visible to tolerance checks
    return v == 0 if is_exact_scalar(v) else v == 0.0


def one_form(v: np.ndarray) -> Form:
    """1-form with the given coefficient vector."""
    v = np.asarray(v)
    return Form(len(v), 1, {(i,): v[i] for i in range(len(v))})


def coefficients(a: Form) -> np.ndarray:
    """Coefficient vector of a 1-form."""
    if a.degree != 1:
        raise ValueError("expected a 1-form")
    exact = a.exact
    out = zeros(a.dim, exact)
    for (i,), v in a.items():
        out[i] = v
    return out


def wedge(a: Form, b: Form) -> Form:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    c: dict[tuple[int, ...], Any] = {}
    for I, x in a.items():
        sI = set(I)
        for J, y in b.items():
            if sI.intersection(J):
                continue
            sign, key = perm_sign(I + J)
            c[key] = c.get(key, 0) + (x * y if sign > 0 else -(x * y))
    return Form(a.dim, a.degree + b.degree, c)


def wedge_all(*forms: Form) -> Form:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def interior(v: np.ndarray, a: Form) -> Form:
    """Contraction in the first slot; degree-0 input gives the zero 0-form."""
    if len(v) != a.dim:
        raise ValueError("dimension mismatch")
    if a.degree == 0:
        return Form(a.dim, 0)
    c: dict[tuple[int, ...], Any] = {}
    for I, x in a.items():
        for p, m in enumerate(I):
            if is_exact_scalar(v[m]) and v[m] == 0:
                continue
            J = I[:p] + I[p + 1:]
            term = v[m] * x
            c[J] = c.get(J, 0) + (term if p % 2 == 0 else -term)
    return Form(a.dim, a.degree - 1, c)


def pullback(A: np.ndarray, a: Form) -> Form:
    """(A^* a)(X_1,...,X_k) = a(A X_1, ..., A X_k)."""
    A = np.asarray(A)
    k, n = a.degree, a.dim
    if k == 0:
        return a
    if k <= 3:
        # dense contraction is cheapest for small degree
        arr = a.to_array(exact=is_exact_array(A) and a.exact)
        for slot in range(k):
            arr = np.moveaxis(np.tensordot(arr, A, axes=([slot], [0])), -1, slot)
        return Form.from_array(arr)
    c = {}
    for J in itertools.combinations(range(n), k):
        total: Any = Fraction(0)
        for I, x in a.items():
            total = total + x * linalg.det(A[np.ix_(list(I), list(J))])
        c[J] = total
    return Form(n, k, c)


def j_act(Jmat: np.ndarray, a: Form) -> Form:
    """(J a)(X_1,...,X_k) = a(-J X_1, ..., -J X_k)."""
    check_complex_structure(Jmat)
    out = pullback(Jmat, a)
    return out if a.degree % 2 == 0 else -out


def invariance_check(a: Form, structures: Iterable[np.ndarray]) -> bool:
    return all(j_act(L, a).equals(a) for L in structures)


# metrics ---------------------------------------------------------------------

def check_metric(g: np.ndarray) -> None:
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("metric must be square")
    if not all(close(g[i, j], g[j, i]) for i in range(len(g)) for j in range(i)):
        raise ValueError("metric is not symmetric")
    if not linalg.is_positive_definite(g):
        raise ValueError("metric is not positive definite")


def check_complex_structure(Jmat: np.ndarray) -> None:
    Jmat = np.asarray(Jmat)
    sq = Jmat @ Jmat
    n = len(Jmat)
    for i in range(n):
        for j in range(n):
            if not close(sq[i, j], -1 if i == j else 0):
                raise ValueError("matrix does not square to -id")


def flat(g: np.ndarray, v: np.ndarray) -> Form:
    return one_form(np.asarray(g) @ np.asarray(v))


def sharp(g: np.ndarray, alpha: Form) -> np.ndarray:
    return linalg.solve(np.asarray(g), coefficients(alpha))


def musical(g: np.ndarray, x: Any) -> Any:
    """Vector -> 1-form (flat) or 1-form -> vector (sharp)."""
    if isinstance(x, Form):
        return sharp(g, x)
    return flat(g, x)


def inner(g: np.ndarray, a: Form, b: Form, ginv: np.ndarray | None = None) -> Any:
    """Full-sum inner product sum_{i_1..i_k} a(e_{i_1},..) b(e_{i_1},..) in a g-orthonormal frame.

    Computed as k! * sum_{I,J increasing} a_I b_J det(g^{-1}[I,J]).
    """
    if a.dim != b.dim or a.degree != b.degree:
        raise ValueError("shape mismatch")
    if ginv is None:
        ginv = linalg.inverse(np.asarray(g))
    k = a.degree
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    diag = all(is_zero(ginv[i, j]) for i in range(a.dim) for j in range(a.dim) if i != j)
    total: Any = Fraction(0)
    for I, x in a.items():
        if diag:
            y = b[I]
            if not (is_exact_scalar(y) and y == 0):
                w = Fraction(1) if is_exact_array(ginv) else 1.0
                for i in I:
                    w = w * ginv[i, i]
                total = total + x * y * w
            continue
        for J, y in b.items():
            total = total + x * y * linalg.det(ginv[np.ix_(list(I), list(J))])
    return fact * total


def form_norm_sq(g: np.ndarray, a: Form, ginv: np.ndarray | None = None) -> Any:
    return inner(g, a, a, ginv)


def hodge_star(g: np.ndarray, orientation: list[np.ndarray], a: Form) -> Form:
    """Hodge star inside the oriented subspace W spanned by ``orientation``.

    ``a`` must vanish on the g-orthogonal complement of W; the result has the
    same property.  Exact mode requires the Gram determinant of the oriented
    basis to be a rational square.
    """
    from .scalar import sqrt

    g = np.asarray(g)
    B = np.array([np.asarray(v) for v in orientation]).T  # n x m
    n, m = B.shape
    k = a.degree
    gram = B.T @ g @ B
    gram_inv = linalg.inverse(gram)
    # dual coframe b^i = sum_j gram_inv[i,j] (b_j)^flat, which vanishes on W-perp
    coframe = [one_form(sum(gram_inv[i, j] * (g @ B[:, j]) for j in range(m))) for i in range(m)]

    def monomial(idx: tuple[int, ...]) -> Form:
        return wedge_all(*[coframe[i] for i in idx]) if idx else Form.scalar(n, Fraction(1))

    comp = {I: a(*[B[:, i] for i in I]) for I in itertools.combinations(range(m), k)}
    rebuilt = Form.zero(n, k)
    for I, x in comp.items():
        if not is_zero(x):
            rebuilt = rebuilt + x * monomial(I)
    if not rebuilt.equals(a):
        raise ValueError("form is not supported on the oriented subspace")
    vol = sqrt(linalg.det(gram))
    out = Form.zero(n, m - k)
    for J in itertools.combinations(range(m), k):
        # index raising inside W
        x: Any = Fraction(0)
        for I, y in comp.items():
            if not is_zero(y):
                x = x + y * linalg.det(gram_inv[np.ix_(list(I), list(J))])
        if is_zero(x):
            continue
        rest = tuple(i for i in range(m) if i not in J)
        sign, _ = perm_sign(J + rest)
        out = out + (sign * vol * x) * monomial(rest)
    return out


def volume_form(g: np.ndarray, orientation: list[np.ndarray]) -> Form:
    return hodge_star(g, orientation, Form.scalar(len(g), 1))


# endomorphisms -----------------------------------------------------------------

def lower(g: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Bilinear form (X, Y) -> g(A X, Y) as a matrix M[x, y]."""
    return np.asarray(A).T @ np.asarray(g)


def bilinear_from_form(a: Form) -> np.ndarray:
    if a.degree != 2:
        raise ValueError("expected a 2-form")
    return a.to_array()


def is_g_skew(g: np.ndarray, A: np.ndarray) -> bool:
    M = lower(g, A)
    n = len(M)
    return all(close(M[i, j], -M[j, i]) for i in range(n) for j in range(n))


def commutes(A: np.ndarray, B: np.ndarray) -> bool:
    from .scalar import array_is_zero
    return array_is_zero(A @ B - B @ A)


def derivation(A: np.ndarray, a: Form) -> Form:
    """(D_A a)(X_1..X_k) = sum_p a(.., A X_p, ..): the derivation induced by an endomorphism."""
    A = np.asarray(A)
    n = a.dim
    c: dict[tuple[int, ...], Any] = {}
    for I, x in a.items():
        for p, i in enumerate(I):
            for m in range(n):
                v = A[i, m]
                if is_exact_scalar(v) and v == 0:
                    continue
                J = I[:p] + (m,) + I[p + 1:]
                sign, key = perm_sign(J)
                if sign == 0:
                    continue
                c[key] = c.get(key, 0) + sign * v * x
    return Form(n, a.degree, c)


class ComplexForm:
    """re + i*im with real Forms; complex scalars are passed as (real, imag) pairs."""

    __slots__ = ("re", "im")

    def __init__(self, re: Form, im: Form | None = None):
        self.re = re
        self.im = im if im is not None else Form.zero(re.dim, re.degree)

    @property
    def dim(self) -> int:
        return self.re.dim

    @property
    def degree(self) -> int:
        return self.re.degree

    def __add__(self, o: "ComplexForm") -> "ComplexForm":
        return ComplexForm(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "ComplexForm") -> "ComplexForm":
        return ComplexForm(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "ComplexForm":
        return ComplexForm(-self.re, -self.im)

    def scale(self, z: tuple[Any, Any]) -> "ComplexForm":
        a, b = z
        return ComplexForm(self.re * a - self.im * b, self.im * a + self.re * b)

    def conj(self) -> "ComplexForm":
        return ComplexForm(self.re, -self.im)

    def wedge(self, o: "ComplexForm") -> "ComplexForm":
        return ComplexForm(wedge(self.re, o.re) - wedge(self.im, o.im),
                           wedge(self.re, o.im) + wedge(self.im, o.re))

    def real_map(self, f) -> "ComplexForm":
        """Apply a real-linear operation to both parts."""
        return ComplexForm(f(self.re), f(self.im))

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def equals(self, o: "ComplexForm") -> bool:
        return self.re.equals(o.re) and self.im.equals(o.im)

    def __getitem__(self, idx) -> tuple[Any, Any]:
        return self.re[idx], self.im[idx]

    def __repr__(self) -> str:
        return f"ComplexForm(re={self.re!r}, im={self.im!r})"


def complex_interior(v_re: np.ndarray, v_im: np.ndarray, a: ComplexForm) -> ComplexForm:
    return ComplexForm(interior(v_re, a.re) - interior(v_im, a.im),
                       interior(v_re, a.im) + interior(v_im, a.re))


def type_projection(Imat: np.ndarray, a: ComplexForm | Form, p: int, q: int) -> ComplexForm:
    """(p,q) component with respect to I, where (1,0)-forms satisfy a(IX) = i a(X).

    D_I acts on (p,q)-forms as i(p-q); project by Lagrange interpolation in D_I.
    """
    if isinstance(a, Form):
        a = ComplexForm(a)
    k = a.degree
    if p + q != k or p < 0 or q < 0:
        return ComplexForm(Form.zero(a.dim, k))
    exact = a.re.exact and a.im.exact and is_exact_array(np.asarray(Imat))
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    target = p - q
    out = a
    for pp in range(k + 1):
        s = pp - (k - pp)
        if s == target:
            continue
        # (D - i s) / (i target - i s) = (D - i s) * (-i) / (target - s)
        shifted = out.real_map(lambda f: derivation(Imat, f)) - out.scale((zero, s * one))
        out = shifted.scale((zero, -one / (target - s)))
    return out
