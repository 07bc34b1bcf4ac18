"""Hyper-Hermitian structures: HKT detection, the Obata connection, Obata Ricci form, Ricci foliation."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

import numpy as np

from . import hermitian as herm
from . import linalg
from .curvature import (Connection, HardFailure, bianchi_check, lc_from_bismut_check, connection_with_skew_torsion, curvature,
                        from_lowered, holonomy_algebra, nabla_endomorphism, nabla_tensor, nabla_vector,
                        torsion, Holonomy)
from .hermitian import HermitianStructure
from .liealg import LieAlgebra, ce_differential
from .multilinear import (ComplexForm, Form, coefficients, derivation, invariance_check, j_act, sharp,
                          type_projection, wedge)
from .scalar import array_is_zero, arrays_close, identity, is_exact_array, is_zero, to_float, xeinsum, zeros


def quaternion_relations(I: np.ndarray, J: np.ndarray, K: np.ndarray) -> bool:
    n = len(I)
    minus = -identity(n, is_exact_array(I))
    return (arrays_close(I @ I, minus) and arrays_close(J @ J, minus) and arrays_close(K @ K, minus)
            and arrays_close(I @ J, K) and arrays_close(J @ I, -K))


@dataclass(frozen=True, eq=False)
class HyperHermitianStructure:
    algebra: LieAlgebra
    g: np.ndarray
    I: np.ndarray
    J: np.ndarray
    K: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not quaternion_relations(self.I, self.J, self.K):
            raise ValueError("I, J, K do not satisfy the quaternion relations")
        for L in (self.I, self.J, self.K):
            if not herm.compatible(self.g, L):
                raise ValueError("metric is not compatible with all of I, J, K")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def exact(self) -> bool:
        return self.algebra.exact and is_exact_array(self.g) and is_exact_array(self.I)

    @cached_property
    def hermitian(self) -> dict[str, HermitianStructure]:
        return {nm: HermitianStructure(self.algebra, self.g, L, f"{self.name}:{nm}")
                for nm, L in (("I", self.I), ("J", self.J), ("K", self.K))}

    @property
    def structures(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.I, self.J, self.K

    @cached_property
    def ginv(self) -> np.ndarray:
        return linalg.inverse(self.g)

    def integrable(self) -> bool:
        return all(herm.is_integrable(h) for h in self.hermitian.values())

    def to_float(self) -> "HyperHermitianStructure":
        return HyperHermitianStructure(self.algebra.to_float(), to_float(self.g), to_float(self.I),
                                       to_float(self.J), to_float(self.K), self.name)

    def scaled(self, c: Any) -> "HyperHermitianStructure":
        return HyperHermitianStructure(self.algebra, self.g * c, self.I, self.J, self.K, self.name)

    def memo(self, key: str, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]


HyperHermitianData = HyperHermitianStructure


def quaternion_check(q: HyperHermitianStructure) -> bool:
    return quaternion_relations(q.I, q.J, q.K)


def is_hkt(q: HyperHermitianStructure) -> tuple[bool, Form]:
    def compute():
        hs = q.hermitian
        Hs = [herm.bismut_torsion(hs[n]) for n in "IJK"]
        ok = Hs[0].equals(Hs[1]) and Hs[0].equals(Hs[2])
        thetas = [herm.lee_form(hs[n]) for n in "IJK"]
        if not (thetas[0].equals(thetas[1]) and thetas[0].equals(thetas[2])):
            raise HardFailure("Lee forms of I, J, K differ on a hyper-Hermitian structure")
        return ok, Hs[0]
    return q.memo("hkt", compute)


def torsion_form(q: HyperHermitianStructure) -> Form:
    return is_hkt(q)[1]


def lee_form(q: HyperHermitianStructure) -> Form:
    return herm.lee_form(q.hermitian["I"])


def bismut_connection(q: HyperHermitianStructure) -> Connection:
    return herm.bismut_connection(q.hermitian["I"])


def _require_hkt(q: HyperHermitianStructure) -> Form:
    ok, H = is_hkt(q)
    if not ok:
        raise ValueError("structure is not HKT")
    return H


def obata_tensor(H: np.ndarray, I: np.ndarray, J: np.ndarray, K: np.ndarray) -> np.ndarray:
    """A[x,y,z] with 2A(X,Y,Z) = -H(X,IY,IZ) - H(IX,IY,Z) - H(X,KY,KZ) - H(IX,KY,JZ)."""
    t1 = xeinsum("xbc,by,cz->xyz", H, I, I)
    t2 = xeinsum("abz,ax,by->xyz", H, I, I)
    t3 = xeinsum("xbc,by,cz->xyz", H, K, K)
    t4 = xeinsum("abc,ax,by,cz->xyz", H, I, K, J)
    s = -(t1 + t2 + t3 + t4)
    return s * Fraction(1, 2) if is_exact_array(s) else s * 0.5


def obata_connection(q: HyperHermitianStructure, roles: str = "IJK") -> Connection:
    """g(nabla^Ob_X Y, Z) = g(nabla^B_X Y, Z) + A(X,Y,Z); the roles string picks which structure plays I, J, K."""
    def compute() -> Connection:
        H = _require_hkt(q).to_array(exact=q.exact)
        S = {"I": q.I, "J": q.J, "K": q.K}
        A = obata_tensor(H, *(S[r] for r in roles))
        low = bismut_connection(q).lowered(q.g) + A
        conn = from_lowered(q.g, low, q.ginv, name="Ob")
        if not array_is_zero(torsion(conn, q.algebra)):
            raise HardFailure(f"Obata connection ({roles}) has torsion")
        for L in (q.I, q.J, q.K):
            if not array_is_zero(nabla_endomorphism(conn, L)):
                raise HardFailure(f"Obata connection ({roles}) does not preserve the hypercomplex structure")
        return conn
    return q.memo(f"obata:{roles}", compute)


def omega(q: HyperHermitianStructure, which: str) -> Form:
    return herm.fundamental_form(q.hermitian[which])


def holomorphic_symplectic(q: HyperHermitianStructure) -> ComplexForm:
    """Omega = omega_J + i omega_K."""
    return ComplexForm(omega(q, "J"), omega(q, "K"))


def _cpower(a: ComplexForm, k: int) -> ComplexForm:
    out = a
    for _ in range(k - 1):
        out = out.wedge(a)
    return out


@dataclass
class ObataRicci:
    alpha: Form
    Theta: Form
    d_theta: Form


def obata_ricci(q: HyperHermitianStructure) -> ObataRicci:
    """alpha from nabla^Ob Omega^n = alpha (x) Omega^n, Theta = d alpha; checked against d theta."""
    def compute() -> ObataRicci:
        conn = obata_connection(q)
        n = q.dim // 4
        top = _cpower(holomorphic_symplectic(q), n)
        key = next(iter(k for k, v in top.re.items() if not is_zero(v)), None)
        if key is None:
            key = next(k for k, v in top.im.items() if not is_zero(v))
        denom_re, denom_im = top[key]
        norm = denom_re * denom_re + denom_im * denom_im
        alpha = {}
        for x in range(q.dim):
            # nabla_x acts on forms as -D_{Gamma_x}
            dt = top.real_map(lambda f: -derivation(conn.gamma[x], f))
            num_re, num_im = dt[key]
            a_re = (num_re * denom_re + num_im * denom_im) / norm
            a_im = (num_im * denom_re - num_re * denom_im) / norm
            if not is_zero(a_im):
                raise HardFailure("Obata connection form on the real canonical line is not real")
            if not dt.equals(top.scale((a_re, a_im))):
                raise HardFailure("nabla^Ob Omega^n is not proportional to Omega^n")
            alpha[(x,)] = a_re
        alpha_f = Form(q.dim, 1, alpha)
        Theta = ce_differential(q.algebra, alpha_f)
        d_theta = ce_differential(q.algebra, lee_form(q))
        if not Theta.equals(-d_theta):
            raise HardFailure("Obata Ricci form differs from -d theta")
        if not invariance_check(Theta, q.structures):
            raise HardFailure("Obata Ricci form is not (1,1) for I, J and K")
        return ObataRicci(alpha_f, Theta, d_theta)
    return q.memo("obata_ricci", compute)


def q_real_check(q: HyperHermitianStructure) -> bool:
    if not quaternion_check(q):
        raise ValueError("quaternion relations fail")
    n = q.dim // 4
    top = _cpower(holomorphic_symplectic(q), n)
    jbar = top.conj().real_map(lambda f: j_act(q.J, f))
    is_top_type = type_projection(q.I, top, 2 * n, 0).equals(top)
    return jbar.equals(top) and is_top_type


@dataclass
class RicciFoliation:
    kernel: list[np.ndarray]
    rank: int
    pairing_ok: bool
    charpoly: list[Any]


def ricci_foliation(q: HyperHermitianStructure) -> RicciFoliation:
    Theta = obata_ricci(q).Theta
    T = Theta.to_array(exact=q.exact)
    kernel = linalg.nullspace(T)
    r = q.dim - len(kernel)
    M = q.ginv @ T.T            # Theta(X, Y) = g(M X, Y)
    cp = linalg.charpoly(M)
    # +-pairing of eigenvalues: det(x - M) is even or odd in x
    pairing = all(is_zero(cp[k]) for k in range(1, len(cp), 2))
    return RicciFoliation(kernel, r, pairing and r % 2 == 0 and r < q.dim, cp)


def parallel_torsion(q: HyperHermitianStructure) -> bool:
    H = torsion_form(q).to_array(exact=q.exact)
    return array_is_zero(nabla_tensor(bismut_connection(q), H))


@dataclass
class HyperReport:
    hkt: bool
    strong_hkt: bool
    hyperkahler: bool
    balanced: bool
    parallel_torsion: bool
    H: Form
    theta: Form
    obata: Connection | None = None
    Theta: Form | None = None
    holonomy: Holonomy | None = None

    def flags(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in
                ("hkt", "strong_hkt", "hyperkahler", "balanced", "parallel_torsion")}


def classify_hyper(q: HyperHermitianStructure) -> HyperReport:
    def compute() -> HyperReport:
        hkt, H = is_hkt(q)
        theta = lee_form(q)
        strong = hkt and ce_differential(q.algebra, H).is_zero()
        hk = H.is_zero()
        par = hkt and parallel_torsion(q)
        obata = obata_connection(q) if hkt else None
        Theta = obata_ricci(q).Theta if hkt else None
        hol = holonomy_algebra(bismut_connection(q), q.algebra, q.g, q.structures) if hkt else None
        return HyperReport(hkt=hkt, strong_hkt=strong, hyperkahler=hk and hkt, balanced=theta.is_zero(),
                           parallel_torsion=par, H=H, theta=theta, obata=obata, Theta=Theta, holonomy=hol)
    return q.memo("report", compute)


def euler_vector(q: HyperHermitianStructure) -> np.ndarray:
    """V = 1/2 theta^sharp."""
    th = lee_form(q)
    v = sharp(q.g, th) if not th.is_zero() else zeros(q.dim, q.exact)
    return v * (Fraction(1, 2) if q.exact else 0.5)


def lc_from_bismut(q: HyperHermitianStructure) -> Any:
    """Residual of the Levi-Civita/Bismut curvature relation for the common torsion; raises if nonzero."""
    return lc_from_bismut_check(q.algebra, q.g, _require_hkt(q).to_array(exact=q.exact))
