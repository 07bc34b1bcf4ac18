"""Invariant Hermitian structures: integrability, torsion, the Gauduchon line, Lee form, Ricci forms.

Conventions: ``omega(X,Y) = g(JX,Y)``, ``J`` acts on k-forms with ``-J`` in every slot,
``d^c omega = J d omega`` and the Bismut torsion is ``H = -d^c omega``, i.e.
``H(X,Y,Z) = d omega(JX,JY,JZ)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

import numpy as np

from . import linalg
from .curvature import (Connection, Curvature, HardFailure, curvature, from_lowered, h_squared,
                        koszul, levi_civita, lower_torsion, nabla_tensor, ricci_traces, torsion)
from .liealg import LieAlgebra, ce_differential
from .multilinear import (Form, check_complex_structure, check_metric, j_act, one_form,
                          pullback, wedge)
from .scalar import array_is_zero, arrays_close, is_exact_array, is_zero, max_abs, to_float, xeinsum, zeros

__all__ = [
    "HermitianStructure", "HermitianData", "HermitianReport", "nijenhuis", "is_integrable",
    "fundamental_form", "bismut_torsion", "gauduchon_connection", "levi_civita", "bismut_connection",
    "chern_connection", "lee_form", "lee_form_from_wedge", "lee_form_check", "useful_identity_residual", "connection_axioms", "bismut_ricci", "rhob2_residual",
    "classify_hermitian", "codifferential", "compatible",
]


def _half(exact: bool) -> Any:
    return Fraction(1, 2) if exact else 0.5


def compatible(g: np.ndarray, Jmat: np.ndarray) -> bool:
    return arrays_close(Jmat.T @ g @ Jmat, g)


@dataclass(frozen=True, eq=False)
class HermitianStructure:
    algebra: LieAlgebra
    g: np.ndarray
    J: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        n = self.algebra.dim
        if self.g.shape != (n, n) or self.J.shape != (n, n):
            raise ValueError("metric and J must be square of the algebra's dimension")
        check_metric(self.g)
        check_complex_structure(self.J)
        if not compatible(self.g, self.J):
            raise ValueError("metric is not J-invariant")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def exact(self) -> bool:
        return self.algebra.exact and is_exact_array(self.g) and is_exact_array(self.J)

    @cached_property
    def ginv(self) -> np.ndarray:
        return linalg.inverse(self.g)

    def to_float(self) -> "HermitianStructure":
        return HermitianStructure(self.algebra.to_float(), to_float(self.g), to_float(self.J), self.name)

    def memo(self, key: str, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


HermitianData = HermitianStructure


def nijenhuis(h: HermitianStructure) -> np.ndarray:
    """N[x, y, k]: e_k component of [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY]."""
    c, J = h.algebra.c, h.J
    JJ = xeinsum("ax,by,abk->xyk", J, J, c)
    t1 = xeinsum("ax,ayk->xyk", J, c)            # [JX, Y]
    t2 = xeinsum("by,xbk->xyk", J, c)            # [X, JY]
    return JJ - c - xeinsum("km,xym->xyk", J, t1 + t2)


def is_integrable(h: HermitianStructure) -> bool:
    return array_is_zero(nijenhuis(h))


def _require_integrable(h: HermitianStructure) -> None:
    ok = h.memo("integrable", lambda: is_integrable(h))
    if not ok:
        raise ValueError("complex structure is not integrable")


def fundamental_form(h: HermitianStructure) -> Form:
    return h.memo("omega", lambda: Form.from_array(h.J.T @ h.g))


def d_omega(h: HermitianStructure) -> Form:
    return h.memo("domega", lambda: ce_differential(h.algebra, fundamental_form(h)))


def dc_omega(h: HermitianStructure) -> Form:
    return j_act(h.J, d_omega(h))


def bismut_torsion(h: HermitianStructure) -> Form:
    """H(X,Y,Z) = d omega(JX, JY, JZ) = -d^c omega."""
    _require_integrable(h)
    return h.memo("H", lambda: pullback(h.J, d_omega(h)))


def useful_identity_residual(h: HermitianStructure) -> Any:
    """max |H(X,Y,Z) - H(JX,JY,Z) - H(JX,Y,JZ) - H(X,JY,JZ)| over basis triples."""
    H = bismut_torsion(h).to_array(exact=h.exact)
    J = h.J
    t1 = xeinsum("abz,ax,by->xyz", H, J, J)
    t2 = xeinsum("ayc,ax,cz->xyz", H, J, J)
    t3 = xeinsum("xbc,by,cz->xyz", H, J, J)
    return max_abs(H - t1 - t2 - t3)


def gauduchon_connection(h: HermitianStructure, t: Any) -> Connection:
    """g(nabla^t_X Y,Z) = g(LC) + (t-1)/4 d^c w(X,Y,Z) + (t+1)/4 d^c w(X,JY,JZ)."""
    _require_integrable(h)
    dc = dc_omega(h).to_array(exact=h.exact)
    dcJJ = xeinsum("xbc,by,cz->xyz", dc, h.J, h.J)
    q = Fraction(1, 4) if h.exact else 0.25
    low = koszul(h.algebra, h.g) + (t - 1) * q * dc + (t + 1) * q * dcJJ
    return from_lowered(h.g, low, h.ginv, name=f"t={t}")


def connection_axioms(h: HermitianStructure, t: Any) -> dict[str, Any]:
    """Residuals of the defining properties of the connection at parameter t on the Gauduchon line."""
    conn = gauduchon_connection(h, t)
    out = {"metric": max_abs(nabla_tensor(conn, h.g)),
           "complex": max_abs(xeinsum("xik,kj->xij", conn.gamma, h.J) - xeinsum("ik,xkj->xij", h.J, conn.gamma))}
    T = lower_torsion(torsion(conn, h.algebra), h.g)         # T[x,y,z] = g(T(e_x,e_y), e_z)
    if t == -1:
        out["torsion_skew"] = max_abs(T + T.transpose(0, 2, 1))
        out["torsion_is_minus_dc"] = max_abs(T + dc_omega(h).to_array(exact=h.exact))
    if t == 1:
        # (1,1)-part of the vector-valued torsion: T(JX,JY) + T(X,Y)
        TJ = xeinsum("abz,ax,by->xyz", T, h.J, h.J)
        out["torsion_11_zero"] = max_abs(T + TJ)
    return out


def bismut_connection(h: HermitianStructure) -> Connection:
    return h.memo("bismut", lambda: gauduchon_connection(h, -1))


def chern_connection(h: HermitianStructure) -> Connection:
    return h.memo("chern", lambda: gauduchon_connection(h, 1))


def lee_form(h: HermitianStructure) -> Form:
    """theta(X) = 1/2 sum g^{ab} H(e_a, J e_b, JX)."""
    def compute() -> Form:
        H = bismut_torsion(h).to_array(exact=h.exact)
        v = xeinsum("ab,abc,cx->x", h.ginv, xeinsum("amc,mb->abc", H, h.J), h.J)
        return one_form(_half(h.exact) * v)
    return h.memo("theta", compute)


def lee_form_from_wedge(h: HermitianStructure) -> Form:
    """Solve d(omega^{m-1}) = theta ^ omega^{m-1} for theta, with dim = 2m."""
    n = h.dim
    m = n // 2
    exact = h.exact
    if m < 2:
        return Form.zero(n, 1)
    omega = fundamental_form(h)
    power = omega
    for _ in range(m - 2):
        power = wedge(power, omega)
    target = ce_differential(h.algebra, power)
    cols = [wedge(Form.basis(n, i), power) for i in range(n)]
    keys = sorted(set(k for f in cols + [target] for k, _ in f.items()))
    if not keys:
        return Form.zero(n, 1)
    A = zeros((len(keys), n), exact)
    b = zeros(len(keys), exact)
    for j, f in enumerate(cols):
        for r, k in enumerate(keys):
            A[r, j] = f[k]
    for r, k in enumerate(keys):
        b[r] = target[k]
    # least squares via normal equations keeps this exact; the system is consistent
    x = linalg.solve(A.T @ A, A.T @ b)
    if not arrays_close(A @ x, b):
        raise HardFailure("d(omega^(m-1)) is not of the form theta ^ omega^(m-1)")
    return one_form(x)


def lee_form_check(h: HermitianStructure) -> Form:
    """Trace and wedge computations of the Lee form; the trace form is minus the wedge form."""
    theta = lee_form(h)
    if h.dim >= 4 and not theta.equals(-lee_form_from_wedge(h)):
        raise HardFailure("trace and wedge Lee forms are not opposite")
    return theta


def codifferential(L: LieAlgebra, g: np.ndarray, a: np.ndarray, lc: Connection | None = None,
                   ginv: np.ndarray | None = None) -> np.ndarray:
    """delta a = -sum g^{ab} iota_{e_a} nabla^LC_{e_b} a, for a dense covariant array."""
    if lc is None:
        lc = levi_civita(L, g)
    if ginv is None:
        ginv = linalg.inverse(g)
    na = nabla_tensor(lc, a)          # na[b, a, ...]
    return -np.tensordot(ginv, na, axes=([0, 1], [1, 0]))


@dataclass
class BismutRicci:
    rho_b: Form
    ric_b: np.ndarray
    curvature: Curvature
    rhob2_residual: Any


def rhob2_residual(h: HermitianStructure, rho_b: np.ndarray, ric_b: np.ndarray) -> Any:
    """max | rho^B(X,Y) + Ric^B(X,JY) + (nabla^B_X theta)(JY) |."""
    theta = _one_form_array(lee_form(h), h.dim, h.exact)
    nt = nabla_tensor(bismut_connection(h), theta)       # nt[x, k] = (nabla_x theta)(e_k)
    J = h.J
    return max_abs(rho_b + ric_b @ J + nt @ J)


def _one_form_array(a: Form, n: int, exact: bool) -> np.ndarray:
    out = zeros(n, exact)
    for (i,), v in a.items():
        out[i] = v
    return out


def bismut_ricci(h: HermitianStructure) -> BismutRicci:
    def compute() -> BismutRicci:
        bis = bismut_connection(h)
        R = curvature(bis, h.algebra, h.g)
        ric, _, rho = ricci_traces(R, h.g, h.J, h.ginv)
        return BismutRicci(Form.from_array(rho), ric, R, rhob2_residual(h, rho, ric))
    return h.memo("bismut_ricci", compute)


@dataclass
class HermitianReport:
    kahler: bool
    skt: bool
    balanced: bool
    cyt: bool
    bhe: bool
    generalized_einstein: bool
    theta: Form
    H: Form
    rho_b: Form
    H_norm_sq: Any = None
    rhob2_residual: Any = None
    lc_einstein: bool = False
    delta_H_zero: bool = False
    gauduchon: bool = True

    def flags(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in
                ("kahler", "skt", "balanced", "cyt", "bhe", "generalized_einstein")}


def classify_hermitian(h: HermitianStructure) -> HermitianReport:
    from .multilinear import form_norm_sq
    _require_integrable(h)
    H = bismut_torsion(h)
    theta = lee_form(h)
    br = bismut_ricci(h)
    kahler = d_omega(h).is_zero()
    skt = ce_differential(h.algebra, H).is_zero()
    balanced = theta.is_zero()
    cyt = br.rho_b.is_zero()
    gen_e = array_is_zero(br.ric_b)
    lc = levi_civita(h.algebra, h.g)
    ric_lc, _, _ = ricci_traces(curvature(lc, h.algebra, h.g), h.g, ginv=h.ginv)
    q = Fraction(1, 4) if h.exact else 0.25
    Ha = H.to_array(exact=h.exact)
    lc_einstein = arrays_close(ric_lc, q * h_squared(Ha, h.g, h.ginv))
    delta_H = array_is_zero(codifferential(h.algebra, h.g, Ha, lc, h.ginv))
    theta_arr = _one_form_array(theta, h.dim, h.exact)
    gauduchon = is_zero(codifferential(h.algebra, h.g, theta_arr, lc, h.ginv))
    return HermitianReport(kahler=kahler, skt=skt, balanced=balanced, cyt=cyt, bhe=skt and cyt,
                           generalized_einstein=gen_e, theta=theta, H=H, rho_b=br.rho_b,
                           H_norm_sq=form_norm_sq(h.g, H, h.ginv), rhob2_residual=br.rhob2_residual,
                           lc_einstein=lc_einstein, delta_H_zero=delta_H, gauduchon=gauduchon)
