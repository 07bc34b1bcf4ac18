"""Structure theory of 8-dimensional strong HKT Lie algebras with a Bismut-parallel Euler field.

Everything is computed on invariant tensors.  V = 1/2 theta^sharp spans, together with
IV, JV, KV, the vertical distribution F; its g-orthogonal complement is the horizontal
part.  Horizontal 2-forms split into self-dual and anti-self-dual parts for the orientation
in which omega_I^T, omega_J^T, omega_K^T are self-dual.

Each identity is recorded as a ``Check``.  Inside the regime where the identities are
theorems (see ``regime``) a failed check is a hard failure; outside it the same checks
are only observed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import hermitian as herm
from . import linalg
from . import quaternionic as quat
from .curvature import HardFailure, curvature, ivanov_residual, levi_civita, nabla_tensor, nabla_vector
from .liealg import LieAlgebra, ce_differential, classify_algebra
from .multilinear import (ComplexForm, Form, complex_interior, flat, form_norm_sq, hodge_star, inner,
                          interior, invariance_check, j_act, pullback, type_projection, volume_form, wedge,
                          wedge_all)
from .quaternionic import HyperHermitianStructure
from .scalar import array_is_zero, close, is_zero, max_abs, xeinsum

__all__ = [
    "Structure8Error", "Check", "EulerField", "Structure8Report", "regime", "euler_field", "vertical_type",
    "horizontal_decompose", "beta_eta_extract", "balance_check", "rotational_check", "obata_euler_check",
    "hkt_einstein_check", "appendix_identities", "equivalence_suite", "potential_form_check", "analyze",
    "lie_derivative",
]


class Structure8Error(ValueError):
    """The entry does not satisfy a precondition of the structure analysis."""


def _q(num: int, den: int, exact: bool) -> Any:
    return Fraction(num, den) if exact else num / den


@dataclass
class Check:
    id: str
    ok: bool
    residual: Any = 0
    asserted: bool = True

    @property
    def status(self) -> str:
        if self.ok:
            return "pass"
        return "fail" if self.asserted else "observed-fail"


def _check(cid: str, residual: Any, asserted: bool = True) -> Check:
    return Check(cid, is_zero(residual), residual, asserted)


def _form_residual(a: Form, b: Form) -> Any:
    return (a - b).max_abs()


def lie_derivative(L: LieAlgebra, x: np.ndarray, a: Form) -> Form:
    """Cartan's formula for invariant forms along an invariant field."""
    out = interior(x, ce_differential(L, a))
    if a.degree > 0:
        out = out + ce_differential(L, interior(x, a))
    return out


def _clie(L: LieAlgebra, re: np.ndarray, im: np.ndarray, a: ComplexForm) -> ComplexForm:
    da = a.real_map(lambda f: ce_differential(L, f))
    return complex_interior(re, im, da) + complex_interior(re, im, a).real_map(lambda f: ce_differential(L, f))


# regime -----------------------------------------------------------------------

def regime(q: HyperHermitianStructure) -> dict[str, bool]:
    """Conditions under which the identities of this module are theorems for the entry."""
    rep = quat.classify_hyper(q)
    out = {"dim8": q.dim == 8, "strong_hkt": rep.strong_hkt, "not_hyperkahler": not rep.hyperkahler}
    if not all(out.values()):
        return out
    V = quat.euler_vector(q)
    out["bismut_parallel_V"] = array_is_zero(nabla_vector(quat.bismut_connection(q), V))
    F = [V, q.I @ V, q.J @ V, q.K @ V]
    out["vertical_involutive"] = all(linalg.in_span(F, q.algebra.bracket(x, y)) for x in F for y in F)
    out["d_theta_nonzero"] = not ce_differential(q.algebra, rep.theta).is_zero()
    out["unimodular"] = classify_algebra(q.algebra)["unimodular"]
    return out


# Euler field ------------------------------------------------------------------

@dataclass
class EulerField:
    q: HyperHermitianStructure
    V: np.ndarray
    IV: np.ndarray
    JV: np.ndarray
    KV: np.ndarray
    normalized: bool
    scale: Any
    checks: list[Check] = field(default_factory=list)

    @property
    def vertical(self) -> list[np.ndarray]:
        return [self.V, self.IV, self.JV, self.KV]

    def by_name(self, which: str) -> np.ndarray:
        return {"I": self.IV, "J": self.JV, "K": self.KV}[which]


def euler_field(q: HyperHermitianStructure, normalize: bool = True) -> EulerField:
    """V = 1/2 theta^sharp with its quaternionic span; rescales g so that |V| = 1 when asked."""
    rep = quat.classify_hyper(q)
    if not rep.hkt:
        raise Structure8Error("structure is not HKT")
    if rep.theta.is_zero():
        raise Structure8Error("theta = 0: hyper-Kahler candidate, structure analysis inapplicable")
    V = quat.euler_vector(q)
    c = V @ q.g @ V
    scale = _q(1, 1, q.exact)
    if normalize and not close(c, 1):
        # theta is scale invariant, so |V|^2 scales by 1/c
        q = q.scaled(c)
        scale = c
        V = quat.euler_vector(q)
    vs = [V, q.I @ V, q.J @ V, q.K @ V]
    norms = [v @ q.g @ v for v in vs]
    checks = [
        _check("euler.bismut_parallel", max_abs(nabla_vector(quat.bismut_connection(q), V))),
        _check("euler.constant_norms", max(abs(n - norms[0]) for n in norms)),
    ]
    M = nabla_vector(levi_civita(q.algebra, q.g), V) @ q.g     # g(nabla_x V, e_y)
    checks.append(_check("euler.killing", max_abs(M + M.T)))
    return EulerField(q, V, vs[1], vs[2], vs[3], close(norms[0], 1), scale, checks)


# vertical algebra ---------------------------------------------------------------

def vertical_type(ef: EulerField) -> tuple[str, Any, list[Check]]:
    q = ef.q
    L = q.algebra
    F = ef.vertical
    for x in F:
        for y in F:
            if not linalg.in_span(F, L.bracket(x, y)):
                raise Structure8Error("vertical distribution span{V,IV,JV,KV} is not closed under the bracket")
    checks = [_check("vertical.V_central", max(max_abs(L.bracket(ef.V, w)) for w in F[1:]))]
    c = ef.KV @ q.g @ ef.KV
    a = (L.bracket(ef.IV, ef.JV) @ q.g @ ef.KV) / c
    res = max(max_abs(L.bracket(ef.IV, ef.JV) - a * ef.KV),
              max_abs(L.bracket(ef.JV, ef.KV) - a * ef.IV),
              max_abs(L.bracket(ef.KV, ef.IV) - a * ef.JV))
    checks.append(_check("vertical.su2_brackets", res))
    H = quat.torsion_form(q)
    checks.append(_check("vertical.a_from_torsion", a + H(ef.IV, ef.JV, ef.KV)))
    return ("abelian_r4" if is_zero(a) else "u1_su2"), a, checks


# frames and projections -----------------------------------------------------------

@dataclass
class Frame:
    """Orthogonal basis (V, IV, JV, KV, xi, I xi, J xi, K xi) and its dual coframe."""
    basis: list[np.ndarray]
    coframe: list[Form]
    P_vert: np.ndarray
    P_hor: np.ndarray

    @property
    def horizontal(self) -> list[np.ndarray]:
        return self.basis[4:]


def adapted_frame(ef: EulerField) -> Frame:
    q = ef.q
    if q.dim != 8:
        raise Structure8Error("adapted frames need dimension 8")
    rows = np.array([q.g @ v for v in ef.vertical])
    null = linalg.nullspace(rows)
    if len(null) != 4:
        raise Structure8Error("vertical span does not have rank 4")
    xi = null[0]
    basis = ef.vertical + [xi, q.I @ xi, q.J @ xi, q.K @ xi]
    gram = np.array([[u @ q.g @ v for v in basis] for u in basis])
    if not array_is_zero(gram - np.diag(np.diag(gram))):
        raise HardFailure("adapted frame is not orthogonal")
    cof = [flat(q.g, v / gram[i, i]) for i, v in enumerate(basis)]
    n = q.dim

    def proj(idx):
        P = np.zeros((n, n), dtype=object if q.exact else float)
        P[:] = _q(0, 1, q.exact)
        for i in idx:
            P = P + np.outer(basis[i], q.g @ basis[i]) / gram[i, i]
        return P
    return Frame(basis, cof, proj(range(4)), proj(range(4, 8)))


@dataclass
class Decomposition:
    vertical: Form
    mixed: Form
    sd: Form
    asd: Form


def _omega_T(ef: EulerField, fr: Frame) -> dict[str, Form]:
    return {L: pullback(fr.P_hor, quat.omega(ef.q, L)) for L in "IJK"}


def horizontal_decompose(ef: EulerField, a: Form, fr: Frame | None = None,
                         omega_T: dict[str, Form] | None = None) -> Decomposition:
    """Orthogonal projection of a 2-form onto vertical, mixed, horizontal SD and ASD parts."""
    if a.degree != 2:
        raise ValueError("expected a 2-form")
    fr = fr or adapted_frame(ef)
    omega_T = omega_T or _omega_T(ef, fr)
    q = ef.q
    vert = pullback(fr.P_vert, a)
    hor = pullback(fr.P_hor, a)
    mixed = a - vert - hor
    sd = Form.zero(q.dim, 2)
    for w in omega_T.values():
        sd = sd + w * (inner(q.g, hor, w, q.ginv) / inner(q.g, w, w, q.ginv))
    return Decomposition(vert, mixed, sd, hor - sd)


def orientation_checks(ef: EulerField, fr: Frame, omega_T: dict[str, Form]) -> list[Check]:
    q = ef.q
    vol = volume_form(q.g, fr.horizontal)
    out = []
    for L, w in omega_T.items():
        out.append(_check(f"orientation.omega_{L}_self_dual", _form_residual(hodge_star(q.g, fr.horizontal, w), w)))
        out.append(_check(f"orientation.omega_{L}_square", _form_residual(wedge(w, w), vol * 2)))
    return out


# beta, eta, constants ---------------------------------------------------------------

_CYCLE = {"I": ("J", "K"), "J": ("K", "I"), "K": ("I", "J")}
# L_{LV} omega_M^T = sign * b * omega_N^T
_BLM = {("I", "J"): ("K", 1), ("I", "K"): ("J", -1), ("J", "I"): ("K", -1),
        ("J", "K"): ("I", 1), ("K", "I"): ("J", 1), ("K", "J"): ("I", -1)}


@dataclass
class BetaEta:
    a: Any
    b: Any
    b_measured: dict[str, Any]
    beta: dict[str, Form]
    eta: dict[str, Form]
    omega_T: dict[str, Form]
    dV_flat: Form
    b_LM: dict[tuple[str, str], Any]
    checks: list[Check]


def beta_eta_extract(ef: EulerField, a: Any, fr: Frame | None = None) -> BetaEta:
    q = ef.q
    L = q.algebra
    fr = fr or adapted_frame(ef)
    omega_T = _omega_T(ef, fr)
    H = quat.torsion_form(q)
    exact = q.exact
    b = -2 - a
    half = _q(1, 2, exact)
    flats = {"V": flat(q.g, ef.V), **{n: flat(q.g, ef.by_name(n)) for n in "IJK"}}
    dV = ce_differential(L, flats["V"])
    checks = orientation_checks(ef, fr, omega_T)
    beta, eta, bm = {}, {}, {}
    for n in "IJK":
        dL = ce_differential(L, flats[n])
        checks.append(_check(f"beta.d{n}V_is_contraction", _form_residual(dL, interior(ef.by_name(n), H))))
        checks.append(_check(f"useful.d{n}V_type_11", 0 if invariance_check(dL, [getattr(q, n)]) else 1))
        checks.append(_check(f"useful.iota_V_d{n}V", interior(ef.V, dL).max_abs()))
        checks.append(_check(f"useful.iota_{n}V_d{n}V", interior(ef.by_name(n), dL).max_abs()))
        beta[n] = pullback(fr.P_hor, dL)
        M, N = _CYCLE[n]
        checks.append(_check(f"diff2.d{n}V", _form_residual(dL, wedge(flats[M], flats[N]) * (-a) + beta[n])))
        w = omega_T[n]
        bm[n] = -2 * inner(q.g, beta[n], w, q.ginv) / inner(q.g, w, w, q.ginv)
        eta[n] = beta[n] + w * (b * half)
        dec = horizontal_decompose(ef, eta[n], fr, omega_T)
        checks.append(_check(f"betas.eta_{n}_anti_self_dual", dec.sd.max_abs()))
        checks.append(_check(f"norms.beta_{n}",
                             form_norm_sq(q.g, beta[n], q.ginv) - b * b - form_norm_sq(q.g, eta[n], q.ginv)))
    checks.append(_check("constants.a_plus_b", max(abs(a + x + 2) for x in bm.values())))
    checks.append(_check("constants.b_times_b_minus_a", b * (b - a)))
    for W, nm in zip(ef.vertical, ("V", "IV", "JV", "KV")):
        checks.append(_check(f"useful.iota_{nm}_dV", interior(W, dV).max_abs()))
    checks.append(_check("useful.dV_su2_invariant", 0 if invariance_check(dV, q.structures) else 1))
    dec = horizontal_decompose(ef, dV, fr, omega_T)
    checks.append(_check("useful.dV_horizontal_asd",
                         max(dec.vertical.max_abs(), dec.mixed.max_abs(), dec.sd.max_abs())))
    # derived constants b_{LM}; compared with the table only as observations
    b_LM = {}
    for (n, m), (k, sgn) in _BLM.items():
        lie = lie_derivative(L, ef.by_name(n), omega_T[m])
        w = omega_T[k]
        coef = inner(q.g, lie, w, q.ginv) / inner(q.g, w, w, q.ginv)
        b_LM[(n, m)] = coef
        res = max(_form_residual(lie, w * coef), abs(coef - sgn * b))
        checks.append(_check(f"beta1.b_{n}{m}", res, asserted=False))
    # d omega_L^T = b MV ^ omega_N^T - b NV ^ omega_M^T pattern, cyclic
    for n in "IJK":
        M, N = _CYCLE[n]
        rhs = wedge(flats[N], omega_T[M]) * b - wedge(flats[M], omega_T[N]) * b
        checks.append(_check(f"domega.{n}", _form_residual(ce_differential(L, omega_T[n]), rhs)))
    # d eta_I = -eta_J ^ KV + eta_K ^ JV, cyclic
    for n in "IJK":
        M, N = _CYCLE[n]
        rhs = -wedge(eta[M], flats[N]) + wedge(eta[N], flats[M])
        checks.append(_check(f"deta.{n}", _form_residual(ce_differential(L, eta[n]), rhs)))
    # torsion reconstruction
    Hrec = wedge(flats["V"], dV) - wedge_all(flats["I"], flats["J"], flats["K"]) * a
    for n in "IJK":
        Hrec = Hrec + wedge(flats[n], beta[n])
    checks.append(_check("tor2.H_reconstruction", _form_residual(Hrec, H)))
    theta = quat.lee_form(q)
    checks.append(_check("thet.theta_decomposition", _form_residual(theta, flats["V"] * (-(a + b)))))
    return BetaEta(a, b, bm, beta, eta, omega_T, dV, b_LM, checks)


def balance_check(ef: EulerField, be: BetaEta, fr: Frame | None = None) -> tuple[Any, list[Check]]:
    """-1/2 (|dV|^2 + sum |eta_L|^2) + 3/2, with the full-sum norm; zero on the strong HKT regime."""
    q = ef.q
    fr = fr or adapted_frame(ef)
    exact = q.exact
    half, three_half = _q(1, 2, exact), _q(3, 2, exact)
    total = form_norm_sq(q.g, be.dV_flat, q.ginv) + sum(form_norm_sq(q.g, e, q.ginv) for e in be.eta.values())
    residual = -half * total + three_half
    coef = -half * total + three_half * be.b * be.b
    vol = volume_form(q.g, fr.horizontal)
    dH = ce_differential(q.algebra, quat.torsion_form(q))
    checks = [_check("balance.residual", residual),
              _check("balance.dH_horizontal", _form_residual(pullback(fr.P_hor, dH), vol * coef))]
    return residual, checks


# Lie derivative identities ------------------------------------------------------------

def rotational_check(ef: EulerField) -> list[Check]:
    q = ef.q
    L = q.algebra
    om = {n: quat.omega(q, n) for n in "IJK"}
    out = [_check(f"rotational.L_V_omega_{n}", lie_derivative(L, ef.V, om[n]).max_abs()) for n in "IJK"]
    for n in "IJK":
        M, N = _CYCLE[n]
        X = ef.by_name(n)
        # L_{IV} omega_J = -omega_K and L_{IV} omega_K = omega_J, cyclic
        out.append(_check(f"rotational.L_{n}V_omega_{M}", _form_residual(lie_derivative(L, X, om[M]), -om[N])))
        out.append(_check(f"rotational.L_{n}V_omega_{N}", _form_residual(lie_derivative(L, X, om[N]), om[M])))
        out.append(_check(f"rotational.L_{n}V_omega_{n}", lie_derivative(L, X, om[n]).max_abs()))
    return out


def obata_euler_check(ef: EulerField) -> list[Check]:
    q = ef.q
    ob = quat.obata_connection(q)
    half = _q(1, 2, q.exact)
    n = q.dim
    ident = np.eye(n, dtype=int)
    out = [_check("obata.nabla_V", max_abs(nabla_vector(ob, ef.V) - half * ident))]
    for nm in "IJK":
        Lm = getattr(q, nm)
        # M[x, k] = (nabla_x LV)^k should be 1/2 (L e_x)^k = 1/2 L[k, x]
        out.append(_check(f"obata.nabla_{nm}V", max_abs(nabla_vector(ob, ef.by_name(nm)) - half * Lm.T)))
    op = curvature(ob, q.algebra, q.g).op
    res = 0
    for U in ef.vertical:
        res = max(res, max_abs(xeinsum("x,xykz->ykz", U, op)), max_abs(xeinsum("z,xykz->xyk", U, op)))
    out.append(_check("obata.curvature_vertical", res))
    lc = levi_civita(q.algebra, q.g)
    fr = adapted_frame(ef)
    res = 0
    for U in ef.vertical:
        for W in ef.vertical:
            nab = lc.on(U, W)
            for X in fr.horizontal:
                res = max(res, abs(nab @ q.g @ X))
    out.append(_check("obata.totally_geodesic", res))
    return out


def hkt_einstein_check(q: HyperHermitianStructure) -> tuple[Any, list[Check]]:
    """lambda with (rho^C_I - J rho^C_I)/2 = lambda omega_I."""
    hI = q.hermitian["I"]
    ch = herm.chern_connection(hI)
    from .curvature import ricci_traces
    _, _, rho = ricci_traces(curvature(ch, q.algebra, q.g), q.g, q.I, q.ginv)
    rhoC = Form.from_array(rho)
    half = _q(1, 2, q.exact)
    X = (rhoC - j_act(q.J, rhoC)) * half
    w = quat.omega(q, "I")
    lam = inner(q.g, X, w, q.ginv) / inner(q.g, w, w, q.ginv)
    checks = [_check("einstein.proportional", _form_residual(X, w * lam))]
    if herm.bismut_ricci(hI).rho_b.is_zero():
        dIt = ce_differential(q.algebra, j_act(q.I, quat.lee_form(q)))
        checks.append(_check("einstein.chern_ricci_is_d_I_theta", _form_residual(rhoC, dIt)))
    return lam, checks


# curvature components ---------------------------------------------------------------

def appendix_identities(ef: EulerField, be: BetaEta, fr: Frame | None = None) -> tuple[list[Any], list[Check]]:
    """Seven residuals of the component identities, evaluated on an I,J,K-adapted horizontal frame."""
    q = ef.q
    L = q.algebra
    fr = fr or adapted_frame(ef)
    exact = q.exact
    half, quarter = _q(1, 2, exact), _q(1, 4, exact)
    Hb = np.array(fr.horizontal)                      # rows are horizontal vectors
    Fv = np.array(ef.vertical)
    lc = levi_civita(L, q.g)
    Rb = curvature(quat.bismut_connection(q), L, q.g).R
    Rlc = curvature(lc, L, q.g).R
    dv = be.dV_flat.to_array(exact=exact)
    ndv = nabla_tensor(lc, dv)
    V = ef.V

    def on4(R, A, B, C, D):
        return xeinsum("abcd,ia,jb,kc,ld->ijkl", R, A, B, C, D)

    res = [0] * 7
    Vrow = V.reshape(1, -1)
    res[1] = max_abs(on4(Rb, Vrow, Hb, Hb, Hb) + xeinsum("abc,ia,jb,kc->ijk", ndv, Hb, Hb, Hb)[None])
    res[4] = max_abs(on4(Rlc, Vrow, Hb, Hb, Hb) - half * on4(Rb, Vrow, Hb, Hb, Hb))
    for n in "IJK":
        LV = ef.by_name(n).reshape(1, -1)
        E = be.eta[n].to_array(exact=exact)
        M = E @ q.ginv @ dv - dv @ q.ginv @ E
        lhs1 = on4(Rb, Vrow, LV, Hb, Hb)[0, 0]
        res[0] = max(res[0], max_abs(lhs1 - Hb @ M @ Hb.T))
        ne = nabla_tensor(lc, E)
        res[2] = max(res[2], max_abs(on4(Rb, LV, Hb, Hb, Hb)[0]
                                     + xeinsum("abc,ia,jb,kc->ijk", ne, Hb, Hb, Hb)))
        res[3] = max(res[3], max_abs(on4(Rlc, Vrow, LV, Hb, Hb) - quarter * on4(Rb, Vrow, LV, Hb, Hb)))
        res[5] = max(res[5], max_abs(on4(Rlc, LV, Hb, Hb, Hb) - half * on4(Rb, LV, Hb, Hb, Hb)))
        res[6] = max(res[6], max_abs(on4(Rlc, Vrow, LV, Fv, Hb)))
    checks = [_check(f"appendix.item{i + 1}", r) for i, r in enumerate(res)]
    checks.append(_check("appendix.ivanov_cross_check", ivanov_residual(L, q.g, quat.torsion_form(q).to_array(exact=exact))))
    return res, checks


def equivalence_suite(ef: EulerField, be: BetaEta, fr: Frame | None = None) -> tuple[tuple[bool, ...], Check]:
    q = ef.q
    fr = fr or adapted_frame(ef)
    Hb = np.array(fr.horizontal)
    Rlc = curvature(levi_civita(q.algebra, q.g), q.algebra, q.g).R
    per_L = []
    for n in "IJK":
        comp = xeinsum("abcd,a,b,ic,jd->ij", Rlc, ef.V, ef.by_name(n), Hb, Hb)
        per_L.append(array_is_zero(comp))
    eta_zero = [be.eta[n].is_zero() for n in "IJK"]
    flags = (quat.parallel_torsion(q), all(per_L), any(per_L), all(eta_zero), any(eta_zero))
    consistent = len(set(flags)) == 1
    return flags, Check("equivalence.consistent", consistent, 0 if consistent else 1)


def potential_form_check(ef: EulerField) -> list[Check]:
    q = ef.q
    L = q.algebra
    exact = q.exact
    Omega = quat.holomorphic_symplectic(q)
    zero, one = _q(0, 1, exact), _q(1, 1, exact)

    def cres(a: ComplexForm, b: ComplexForm) -> Any:
        d = a - b
        return max(d.re.max_abs(), d.im.max_abs())
    out = [_check("potential.L_V10_Omega", cres(_clie(L, ef.V, -ef.IV, Omega), Omega)),
           _check("potential.L_IV_Omega", cres(_clie(L, ef.IV, 0 * ef.IV, Omega), Omega.scale((zero, one))))]
    JVf = flat(q.g, ef.JV)
    dJ = ce_differential(L, JVf)
    out.append(_check("potential.omega_J", _form_residual(quat.omega(q, "J"), dJ - j_act(q.I, dJ))))
    gamma = ComplexForm(JVf, j_act(q.I, JVf)).scale((2 * one, zero))
    d_gamma = gamma.real_map(lambda f: ce_differential(L, f))
    out.append(_check("potential.Omega_del_exact", cres(type_projection(q.I, d_gamma, 2, 0), Omega)))
    Vf = flat(q.g, ef.V)
    v10 = ComplexForm(Vf, j_act(q.I, Vf))
    dv10 = type_projection(q.I, v10.real_map(lambda f: ce_differential(L, f)), 2, 0)
    out.append(_check("potential.V10_del_closed", max(dv10.re.max_abs(), dv10.im.max_abs())))
    return out


# report --------------------------------------------------------------------------------

@dataclass
class Structure8Report:
    V: np.ndarray
    IV: np.ndarray
    JV: np.ndarray
    KV: np.ndarray
    a: Any
    b: Any
    dV_flat: Form
    omega_T: tuple[Form, Form, Form]
    beta: tuple[Form, Form, Form]
    eta: tuple[Form, Form, Form]
    vertical_type: str
    equivalence_flags: tuple[bool, ...]
    balance_residual: Any
    asserted: bool
    scale: Any
    lam: Any
    appendix_residuals: list[Any]
    b_LM: dict[tuple[str, str], Any]
    regime: dict[str, bool]
    dV_norm_sq: Any = None
    checks: list[Check] = field(default_factory=list)

    @property
    def lambda_L(self) -> Any:
        return -self.b / 2

    @property
    def contradiction(self) -> bool:
        """a = 0 on a strong HKT non-hyper-Kahler entry cannot occur in the regime."""
        return self.vertical_type == "abelian_r4"

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def asserted_failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and c.asserted]


def analyze(q: HyperHermitianStructure, force: bool = False, strict: bool = True) -> Structure8Report:
    """Run the whole dimension-8 suite.

    Runs when the entry is strong HKT, not hyper-Kahler and 8-dimensional; ``force``
    drops that gate.  Checks are asserted only inside the full regime; with ``strict`` an
    asserted failure raises ``HardFailure``.
    """
    reg = regime(q)
    gate = reg.get("dim8", False) and reg.get("strong_hkt", False) and reg.get("not_hyperkahler", False)
    if not gate and not force:
        missing = ", ".join(k for k, v in reg.items() if not v)
        raise Structure8Error(f"structure analysis inapplicable: {missing}")
    asserted = all(reg.values()) and len(reg) == 7
    ef = euler_field(q)
    checks = list(ef.checks)
    vt, a, c = vertical_type(ef)
    checks += c
    fr = adapted_frame(ef)
    be = beta_eta_extract(ef, a, fr)
    checks += be.checks
    bal, c = balance_check(ef, be, fr)
    checks += c
    checks += rotational_check(ef)
    checks += obata_euler_check(ef)
    lam, c = hkt_einstein_check(ef.q)
    checks += c
    checks.append(_check("einstein.lambda_one", lam - 1))
    app, c = appendix_identities(ef, be, fr)
    checks += c
    flags, c = equivalence_suite(ef, be, fr)
    checks.append(c)
    checks += potential_form_check(ef)
    if not asserted:
        for ch in checks:
            ch.asserted = False
    rep = Structure8Report(ef.V, ef.IV, ef.JV, ef.KV, a, be.b, be.dV_flat,
                           tuple(be.omega_T[n] for n in "IJK"), tuple(be.beta[n] for n in "IJK"),
                           tuple(be.eta[n] for n in "IJK"), vt, flags, bal, asserted, ef.scale, lam, app,
                           be.b_LM, reg, form_norm_sq(ef.q.g, be.dV_flat, ef.q.ginv), checks)
    if strict and asserted and rep.asserted_failures():
        names = ", ".join(ch.id for ch in rep.asserted_failures())
        raise HardFailure(f"dimension-8 identities fail: {names}")
    return rep
