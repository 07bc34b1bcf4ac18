"""Left-invariant connections, their torsion and curvature, and holonomy algebras.

A connection is stored as ``gamma[x, k, y]``: the ``e_k`` component of
``nabla_{e_x} e_y``.  So ``gamma[x]`` is the matrix of ``Lambda(x) = nabla_{e_x}``.

Conventions: ``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``,
``R(X,Y,Z,W) = g(R(X,Y)Z, W)``, ``T(X,Y) = nabla_X Y - nabla_Y X - [X,Y]``.
All traces use the inverse metric, never an orthonormal frame.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import linalg
from .liealg import LieAlgebra
from .multilinear import Form
from .scalar import array_is_zero, common_integers, is_exact_array, is_zero, max_abs, xeinsum, zeros


class HardFailure(RuntimeError):
    """An identity that must hold by construction did not: a convention or transcription bug."""


@dataclass(frozen=True, eq=False)
class Connection:
    gamma: np.ndarray
    name: str = ""

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def on(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """nabla_x y for constant-coefficient vectors."""
        return xeinsum("x,xky,y->k", x, self.gamma, y)

    def lowered(self, g: np.ndarray) -> np.ndarray:
        """low[x, y, z] = g(nabla_{e_x} e_y, e_z)."""
        return xeinsum("xky,kz->xyz", self.gamma, g)

    def __sub__(self, other: "Connection") -> np.ndarray:
        return self.gamma - other.gamma

    def equals(self, other: "Connection") -> bool:
        return array_is_zero(self.gamma - other.gamma)


ConnectionCoefficients = Connection


def from_lowered(g: np.ndarray, low: np.ndarray, ginv: np.ndarray | None = None, name: str = "") -> Connection:
    if ginv is None:
        ginv = linalg.inverse(g)
    return Connection(xeinsum("kz,xyz->xky", ginv, low), name)


def koszul(L: LieAlgebra, g: np.ndarray) -> np.ndarray:
    """low[x,y,z] = g(nabla^LC_x y, z) from 2g(nabla_X Y,Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)."""
    cg = xeinsum("xyk,kz->xyz", L.c, g)  # g([e_x,e_y], e_z)
    two = cg - cg.transpose(2, 0, 1) + cg.transpose(1, 2, 0)
    # cg.transpose(2,0,1)[x,y,z] = cg[y,z,x]; cg.transpose(1,2,0)[x,y,z] = cg[z,x,y]
    return two / 2 if not is_exact_array(two) else two * Fraction(1, 2)


def levi_civita(L: LieAlgebra, g: np.ndarray) -> Connection:
    return from_lowered(g, koszul(L, g), name="LC")


def connection_with_skew_torsion(L: LieAlgebra, g: np.ndarray, H: np.ndarray, coeff: Any = Fraction(1, 2),
                                 name: str = "") -> Connection:
    """g(nabla_X Y, Z) = g(nabla^LC_X Y, Z) + coeff * H(X,Y,Z)."""
    return from_lowered(g, koszul(L, g) + coeff * H, name=name)


def torsion(conn: Connection, L: LieAlgebra) -> np.ndarray:
    """T[x, y, k]: e_k component of T(e_x, e_y)."""
    G = conn.gamma
    return G.transpose(0, 2, 1) - G.transpose(2, 0, 1) - L.c
    # G.transpose(0,2,1)[x,y,k] = G[x,k,y]; G.transpose(2,0,1)[x,y,k] = G[y,k,x]


def lower_torsion(T: np.ndarray, g: np.ndarray) -> np.ndarray:
    return xeinsum("xyk,kz->xyz", T, g)


def curvature_operator(conn: Connection, L: LieAlgebra) -> np.ndarray:
    """Rop[x, y] = matrix of R(e_x, e_y)."""
    G = conn.gamma
    prod = xeinsum("xik,ykj->xyij", G, G)
    return prod - prod.transpose(1, 0, 2, 3) - xeinsum("xym,mij->xyij", L.c, G)


@dataclass(frozen=True, eq=False)
class Curvature:
    op: np.ndarray   # op[x, y, k, z]: e_k component of R(e_x,e_y) e_z
    R: np.ndarray    # R[x, y, z, w] = g(R(e_x,e_y)e_z, e_w)

    def is_zero(self) -> bool:
        return array_is_zero(self.R)


CurvatureTensor = Curvature


def curvature(conn: Connection, L: LieAlgebra, g: np.ndarray) -> Curvature:
    op = curvature_operator(conn, L)
    return Curvature(op, xeinsum("xykz,kw->xyzw", op, g))


def ricci_traces(R: Curvature | np.ndarray, g: np.ndarray, Jmat: np.ndarray | None = None,
                 ginv: np.ndarray | None = None) -> tuple[np.ndarray, Any, np.ndarray | None]:
    """Ric(X,Y) = sum g^{ab} R(e_a,X,Y,e_b); scal = tr_g Ric; rho(X,Y) = 1/2 sum g^{ab} R(X,Y,Je_a,e_b)."""
    R4 = R.R if isinstance(R, Curvature) else R
    if ginv is None:
        ginv = linalg.inverse(g)
    ric = xeinsum("ab,axyb->xy", ginv, R4)
    scal = xeinsum("xy,xy->", ginv, ric)
    rho = None
    if Jmat is not None:
        half = Fraction(1, 2) if is_exact_array(R4) else 0.5
        rho = half * xeinsum("ab,ka,xykb->xy", ginv, Jmat, R4)
    return ric, scal, rho


def h_squared(H: Form | np.ndarray, g: np.ndarray, ginv: np.ndarray | None = None) -> np.ndarray:
    """H^2(X,Y) = sum g^{ja} g^{kb} H(X,e_j,e_k) H(Y,e_a,e_b)."""
    Ha = H.to_array() if isinstance(H, Form) else H
    if ginv is None:
        ginv = linalg.inverse(g)
    return xeinsum("xjk,ja,kb,yab->xy", Ha, ginv, ginv, Ha)


def nabla_tensor(conn: Connection, A: np.ndarray) -> np.ndarray:
    """Covariant derivative of a constant-coefficient covariant tensor; index 0 is the direction.

    (nabla_x A)(Y_1..Y_k) = -sum_i A(.., nabla_x Y_i, ..).
    """
    G = conn.gamma
    k = A.ndim
    if k == 0:
        return zeros((conn.dim,), is_exact_array(A))
    letters = "abcdefghijklmnopqrstuvw"[:k]
    out = None
    for slot in range(k):
        # (nabla_x A)(..Y_slot..) gets A(.., nabla_x Y_slot, ..) = G[x, m, y] A[.., m, ..]
        src = letters[:slot] + "m" + letters[slot + 1:]
        t = xeinsum(f"xm{letters[slot]},{src}->x{letters}", G, A)
        out = t if out is None else out + t
    return -out


def nabla_endomorphism(conn: Connection, A: np.ndarray) -> np.ndarray:
    """(nabla_x A) = [Lambda(x), A] for a constant endomorphism A; index 0 is x."""
    G = conn.gamma
    return xeinsum("xik,kj->xij", G, A) - xeinsum("ik,xkj->xij", A, G)


def nabla_vector(conn: Connection, v: np.ndarray) -> np.ndarray:
    """M[x, k] = e_k component of nabla_{e_x} v."""
    return xeinsum("xky,y->xk", conn.gamma, v)


def bianchi_check(conn: Connection, L: LieAlgebra, R: Curvature | None = None,
                  T: np.ndarray | None = None) -> tuple[bool, bool]:
    """First and second Bianchi identities with torsion.

    First:  S R(X,Y)Z = S [T(T(X,Y),Z) + (nabla_X T)(Y,Z)]
    Second: S [(nabla_X R)(Y,Z) + R(T(X,Y),Z)] = 0
    where S is the cyclic sum over (X,Y,Z).  With T = 0 these are the classical forms.
    """
    if R is None:
        op = curvature_operator(conn, L)
    else:
        op = R.op
    if T is None:
        T = torsion(conn, L)
    exact = is_exact_array(op) and is_exact_array(T) and is_exact_array(conn.gamma)
    if exact:
        # everything is compared at scale D^2, in integer arithmetic
        (G, T, op), D = common_integers(conn.gamma, T, op)
        zero = lambda a: not np.any(a)
    else:
        G, D = conn.gamma, 1
        zero = array_is_zero
    es = np.einsum
    # first identity, as arrays [x,y,z,k]
    lhs = D * op.transpose(0, 1, 3, 2)                # R(x,y)z -> [x,y,z,k]
    TT = es("xym,mzk->xyzk", T, T)                    # T(T(x,y),z)
    # (nabla_x T)(y,z) = nabla_x(T(y,z)) - T(nabla_x y, z) - T(y, nabla_x z)
    nT = (es("xkm,yzm->xyzk", G, T)
          - es("xmy,mzk->xyzk", G, T)
          - es("xmz,ymk->xyzk", G, T))
    f = lhs - TT - nT
    first = zero(f + f.transpose(1, 2, 0, 3) + f.transpose(2, 0, 1, 3))
    # second identity on endomorphisms: (nabla_x R)(y,z) = [G_x, R(y,z)] - R(nabla_x y, z) - R(y, nabla_x z)
    comm = es("xik,yzkj->xyzij", G, op) - es("yzik,xkj->xyzij", op, G)
    nR = comm - es("xmy,mzij->xyzij", G, op) - es("xmz,ymij->xyzij", G, op)
    RT = es("xym,mzij->xyzij", T, op)
    s = nR + RT
    second = zero(s + s.transpose(1, 2, 0, 3, 4) + s.transpose(2, 0, 1, 3, 4))
    return first, second


def ivanov_residual(L: LieAlgebra, g: np.ndarray, H: Form | np.ndarray) -> Any:
    """Max |R^LC - (R^B - 1/2 nabla^B_X H(Y,Z,U) + 1/2 nabla^B_Y H(X,Z,U)
    - 1/2 g(H(X,Y),H(Z,U)) - 1/4 g(H(Y,Z),H(X,U)) + 1/4 g(H(X,Z),H(Y,U)))| over basis quadruples."""
    Ha = H.to_array() if isinstance(H, Form) else H
    exact = is_exact_array(Ha) and is_exact_array(g)
    half = Fraction(1, 2) if exact else 0.5
    quarter = Fraction(1, 4) if exact else 0.25
    ginv = linalg.inverse(g)
    lc = levi_civita(L, g)
    bis = connection_with_skew_torsion(L, g, Ha, half, "B")
    Rlc = curvature(lc, L, g).R
    Rb = curvature(bis, L, g).R
    nH = nabla_tensor(bis, Ha)                           # nH[x,y,z,u]
    gHH = xeinsum("xya,ab,zub->xyzu", Ha, ginv, Ha)    # g(H(X,Y),H(Z,U))
    rhs = (Rb - half * nH + half * nH.transpose(1, 0, 2, 3) - half * gHH
           - quarter * np.einsum("yzxu->xyzu", gHH)      # g(H(Y,Z),H(X,U))
           + quarter * np.einsum("xzyu->xyzu", gHH))     # g(H(X,Z),H(Y,U))
    return max_abs(Rlc - rhs)


def lc_from_bismut_check(L: LieAlgebra, g: np.ndarray, H: Form | np.ndarray) -> Any:
    res = ivanov_residual(L, g, H)
    if not is_zero(res):
        raise HardFailure(f"Levi-Civita/Bismut curvature relation fails, residual {res}")
    return res


# holonomy ---------------------------------------------------------------------

@dataclass
class Holonomy:
    basis: list[np.ndarray]
    label: str = "gl"
    contained_in: dict[str, bool] = field(default_factory=dict)
    annihilated: int = 0

    @property
    def dim(self) -> int:
        return len(self.basis)


def _mat_basis(mats: list[np.ndarray], n: int) -> list[np.ndarray]:
    if not mats:
        return []
    rows = linalg.row_basis([m.reshape(n * n) for m in mats])
    return [r.reshape(n, n) for r in rows]


def holonomy_algebra(conn: Connection, L: LieAlgebra, g: np.ndarray | None = None,
                     structures: Sequence[np.ndarray] | None = None,
                     vectors: Sequence[np.ndarray] = ()) -> Holonomy:
    """Smallest matrix space containing all R(x,y), closed under [Lambda(x), .] and under commutators.

    ``structures`` may hold (I,) for the u/su tests or (I, J, K) for sp.
    """
    n = conn.dim
    op = curvature_operator(conn, L)
    gens = [op[x, y] for x, y in itertools.combinations(range(n), 2)]
    basis = _mat_basis(gens, n)
    G = conn.gamma
    for _ in range(n * n + 1):
        new = list(basis)
        for A in basis:
            new.extend(G[x] @ A - A @ G[x] for x in range(n))
        for A, B in itertools.combinations(basis, 2):
            new.append(A @ B - B @ A)
        nb = _mat_basis(new, n)
        if len(nb) == len(basis):
            break
        basis = nb
    else:
        raise HardFailure("holonomy closure did not stabilize")
    hol = Holonomy(basis)
    _classify_holonomy(hol, g, structures, vectors)
    return hol


def _classify_holonomy(hol: Holonomy, g, structures, vectors) -> None:
    from .multilinear import commutes, is_g_skew
    flags: dict[str, bool] = {"zero": hol.dim == 0}
    if g is not None:
        flags["so"] = all(is_g_skew(g, A) for A in hol.basis)
    if structures:
        I = structures[0]
        flags["u"] = flags.get("so", True) and all(commutes(A, I) for A in hol.basis)
        flags["su"] = flags["u"] and all(is_zero(np.trace(I @ A)) for A in hol.basis)
        if len(structures) >= 3:
            flags["sp"] = flags["u"] and all(commutes(A, L) for A in hol.basis for L in structures)
    label = "gl"
    for name in ("so", "u", "su", "sp", "zero"):
        if flags.get(name):
            label = name
    hol.label = "0" if label == "zero" else label
    hol.contained_in = flags
    hol.annihilated = sum(1 for v in vectors if all(array_is_zero(A @ v) for A in hol.basis))


def is_lie_subalgebra(basis: list[np.ndarray]) -> bool:
    if not basis:
        return True
    n = basis[0].shape[0]
    span = [b.reshape(n * n) for b in basis]
    r = linalg.rank(np.array(span))
    for A, B in itertools.combinations(basis, 2):
        C = (A @ B - B @ A).reshape(n * n)
        if linalg.rank(np.array(span + [C])) != r:
            return False
    return True
