from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import oracle
from hkt import catalog, linalg
from hkt import hermitian as herm
from hkt.curvature import HardFailure, curvature, levi_civita, ricci_traces, torsion
from hkt.liealg import LieAlgebra, classify_algebra
from hkt.multilinear import Form, form_norm_sq, wedge_all
from hkt.scalar import array_is_zero, exact_array

B = Form.basis


def ident(n):
    return exact_array(np.eye(n, dtype=int).tolist())


def flat_r4(reversed_=False):
    J = exact_array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return herm.HermitianStructure(LieAlgebra.abelian(4), ident(4), -J if reversed_ else J, "r4")


def all_hermitian(entries):
    """Every Hermitian structure in the catalog, hyper entries contributing I, J and K."""
    out = []
    for e in entries.values():
        if e.kind == "hyper":
            out.extend((f"{e.name}.{n}", e.data.hermitian[n]) for n in "IJK")
        else:
            out.append((e.name, e.data))
    return out


# Nijenhuis tensor ------------------------------------------------------------------

def test_nijenhuis_examples(hopf):
    assert herm.is_integrable(flat_r4())
    assert herm.is_integrable(hopf.hermitian["I"])
    P = exact_array([[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1]])
    Pi = linalg.inverse(P)
    h = herm.HermitianStructure(hopf.algebra, Pi.T @ Pi, P @ hopf.I @ Pi, "skewed")
    assert not herm.is_integrable(h)
    with pytest.raises(ValueError):
        herm.bismut_torsion(h)


def test_constructor_rejects_incompatible_metric():
    g = ident(4)
    g[0, 0] = Fraction(2)
    with pytest.raises(ValueError):
        herm.HermitianStructure(LieAlgebra.abelian(4), g, flat_r4().J)


# fundamental form -----------------------------------------------------------------------

def test_fundamental_form_follows_g_of_JX_Y():
    w = herm.fundamental_form(flat_r4())
    # omega(e1, e2) = g(J e1, e2) = g(e2, e2) = 1
    assert w.equals(B(4, 0, 1) + B(4, 2, 3))
    assert herm.fundamental_form(flat_r4(True)).equals(-w)


def test_fundamental_form_su3_nondegenerate(su3):
    w = herm.fundamental_form(su3.hermitian["I"])
    assert not wedge_all(w, w, w, w).is_zero()


# Bismut torsion and the connection line ----------------------------------------------------

def test_bismut_torsion_examples(hopf, su3):
    assert herm.bismut_torsion(flat_r4()).is_zero()
    # [e3, e4] = -e2 and cyclic, e1 central: H is the su(2) volume
    assert herm.bismut_torsion(hopf.hermitian["I"]).equals(B(4, 1, 2, 3))
    H = herm.bismut_torsion(su3.hermitian["I"]).to_array()
    bracket = np.einsum("xyk,kz->xyz", su3.algebra.c, su3.g)
    assert (H == -bracket).all()


@pytest.mark.parametrize("name", ["hopf_su2_r", "su3_samelson", "kodaira_thurston", "dotti_fino_nilpotent"])
def test_bismut_torsion_matches_oracle(entries, name):
    d = entries[name].data
    h = d.hermitian["I"] if entries[name].kind == "hyper" else d
    H = oracle.torsion_H(d.algebra.c.astype(float), d.g.astype(float), h.J.astype(float))
    assert np.allclose(H, herm.bismut_torsion(h).to_array(exact=False).astype(float))


def test_connection_axioms_on_every_structure(entries):
    for name, h in all_hermitian(entries):
        for t in (-1, 0, 1, 3):
            res = herm.connection_axioms(h, t)
            assert all(v == 0 for v in res.values()), (name, t, res)


def test_useful_identity_on_every_structure(entries):
    for name, h in all_hermitian(entries):
        assert herm.useful_identity_residual(h) == 0, name


def test_kahler_line_collapses(entries):
    h = entries["aff_r"].data
    lc = levi_civita(h.algebra, h.g)
    for t in (-1, 0, 1, 3, Fraction(5, 7)):
        assert herm.gauduchon_connection(h, t).equals(lc)


def test_samelson_bismut_has_parallel_frame(su3):
    G = herm.bismut_connection(su3.hermitian["I"]).gamma
    assert array_is_zero(G)
    T = torsion(herm.bismut_connection(su3.hermitian["I"]), su3.algebra)
    assert (T == -su3.algebra.c).all()


def test_chern_torsion_has_no_11_part(hopf):
    assert herm.connection_axioms(hopf.hermitian["I"], 1)["torsion_11_zero"] == 0
    T = torsion(herm.chern_connection(hopf.hermitian["I"]), hopf.algebra)
    assert not array_is_zero(T)


# Levi-Civita ------------------------------------------------------------------------------

def test_levi_civita_examples(hopf):
    assert array_is_zero(levi_civita(LieAlgebra.abelian(4), ident(4)).gamma)
    su2 = LieAlgebra.from_brackets(3, [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)], one_based=True)
    G = levi_civita(su2, ident(3)).gamma
    # nabla_X Y = 1/2 [X, Y]
    assert (G == su2.c.transpose(0, 2, 1) / 2).all()
    Gh = levi_civita(hopf.algebra, hopf.g).gamma
    assert array_is_zero(Gh[:, :, 0]) and array_is_zero(Gh[0])


def test_levi_civita_matches_oracle(su3):
    mine = levi_civita(su3.algebra, su3.g).gamma.astype(float)
    assert np.allclose(mine, oracle.levi_civita(su3.algebra.c.astype(float), su3.g.astype(float)))


# Lee form ---------------------------------------------------------------------------------

def test_lee_form_examples(entries, hopf):
    assert herm.lee_form(flat_r4()).is_zero()
    assert herm.lee_form(entries["dotti_fino_nilpotent"].data.hermitian["I"]).is_zero()
    # Hopf: along the dual of the central direction e1
    assert herm.lee_form(hopf.hermitian["I"]).equals(B(4, 0))


@pytest.mark.parametrize("name", ["hopf_su2_r", "su3_samelson", "kodaira_thurston", "hopf_x_hopf"])
def test_lee_form_matches_oracle(entries, name):
    d = entries[name].data
    h = d.hermitian["I"] if entries[name].kind == "hyper" else d
    c, g, J = d.algebra.c.astype(float), d.g.astype(float), h.J.astype(float)
    th = oracle.lee_trace(oracle.torsion_H(c, g, J), J, g)
    mine = np.array([float(herm.lee_form(h)[i]) for i in range(d.algebra.dim)])
    assert np.allclose(th, mine)


def test_lee_form_trace_is_minus_wedge(entries):
    for name, h in all_hermitian(entries):
        if h.dim < 4:
            continue
        assert herm.lee_form(h).equals(-herm.lee_form_from_wedge(h)), name
        herm.lee_form_check(h)


def test_gauduchon_on_unimodular_entries(entries):
    for name, h in all_hermitian(entries):
        if classify_algebra(h.algebra)["unimodular"]:
            assert herm.classify_hermitian(h).gauduchon, name


# Bismut Ricci -------------------------------------------------------------------------------

def test_bismut_ricci_examples(su3, entries):
    assert herm.bismut_ricci(su3.hermitian["I"]).rho_b.is_zero()
    assert herm.bismut_ricci(entries["abelian_r8"].data.hermitian["I"]).rho_b.is_zero()
    kt = herm.bismut_ricci(entries["kodaira_thurston"].data)
    assert herm.classify_hermitian(entries["kodaira_thurston"].data).skt
    assert not kt.rho_b.is_zero() and kt.rhob2_residual == 0


def test_rhob2_on_skt_structures(entries):
    for name, h in all_hermitian(entries):
        rep = herm.classify_hermitian(h)
        if rep.skt:
            assert rep.rhob2_residual == 0, name


# classification ---------------------------------------------------------------------------

def test_classify_flat_and_samelson(entries, su3):
    rep = herm.classify_hermitian(entries["abelian_r8"].data.hermitian["I"])
    assert all(rep.flags().values()) and rep.H.is_zero()
    rep = herm.classify_hermitian(su3.hermitian["I"])
    assert rep.flags() == {"kahler": False, "skt": True, "balanced": False, "cyt": True, "bhe": True,
                           "generalized_einstein": True}
    assert rep.lc_einstein and rep.delta_H_zero


def test_report_invariants(entries):
    for name, h in all_hermitian(entries):
        rep = herm.classify_hermitian(h)
        if rep.kahler:
            assert rep.skt and rep.balanced and rep.H.is_zero(), name
        assert rep.bhe == (rep.skt and rep.cyt), name


def test_solvable_unimodular_bhe_iff_kahler(entries):
    for name, h in all_hermitian(entries):
        f = classify_algebra(h.algebra)
        if f["solvable"] and f["unimodular"]:
            rep = herm.classify_hermitian(h)
            assert rep.bhe == rep.kahler, name


def test_kahler_hyperbolic_plane_calibration(entries):
    # K = -1: Ric = -g and rho = Ric(J., .) = -omega
    h = entries["aff_r"].data
    ric, scal, rho = ricci_traces(curvature(levi_civita(h.algebra, h.g), h.algebra, h.g), h.g, h.J)
    assert (ric == -h.g).all() and scal == -2
    assert (rho == h.J.T @ ric).all()
    assert Form.from_array(rho).equals(-herm.fundamental_form(h))
    assert not classify_algebra(h.algebra)["unimodular"]


def test_torsion_norm_values(entries):
    vals = {"hopf_su2_r": 6, "su3_samelson": 24, "dotti_fino_nilpotent": 12, "hopf_x_hopf": 12,
            "kodaira_thurston": 6, "aff_r": 0}
    for name, v in vals.items():
        d = entries[name].data
        h = d.hermitian["I"] if entries[name].kind == "hyper" else d
        assert herm.classify_hermitian(h).H_norm_sq == v
        assert form_norm_sq(d.g, herm.bismut_torsion(h)) == v
