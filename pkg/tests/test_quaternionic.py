from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import oracle
from hkt import catalog, linalg
from hkt import hermitian as herm
from hkt import quaternionic as quat
from hkt.curvature import holonomy_algebra, levi_civita, nabla_vector, torsion
from hkt.liealg import LieAlgebra, ce_differential, classify_algebra
from hkt.multilinear import Form
from hkt.scalar import array_is_zero, exact_array

B = Form.basis


def hyper_entries(entries):
    return [e for e in entries.values() if e.kind == "hyper"]


def hkt_entries(entries):
    return [e for e in hyper_entries(entries) if quat.classify_hyper(e.data).hkt]


def test_quaternion_check_examples(entries, su3):
    I, J, K = catalog._quaternionic(1)
    assert quat.quaternion_relations(I, J, K)
    assert not quat.quaternion_relations(I, J, -K)
    assert quat.quaternion_check(su3)


def test_swapped_triple_rejected(su3):
    with pytest.raises(ValueError):
        quat.HyperHermitianStructure(su3.algebra, su3.g, su3.I, su3.K, su3.J)


def test_is_hkt_examples(entries, su3):
    ok, H = quat.is_hkt(entries["abelian_r8"].data)
    assert ok and H.is_zero()
    ok, H = quat.is_hkt(su3)
    assert ok
    assert (H.to_array() == -np.einsum("xyk,kz->xyz", su3.algebra.c, su3.g)).all()


def test_is_hkt_false_after_metric_perturbation(su3):
    g = exact_array(np.diag([1, 1, 1, 1, 2, 2, 2, 2]).tolist())
    q = quat.HyperHermitianStructure(su3.algebra, g, su3.I, su3.J, su3.K, "stretched")
    ok, _ = quat.is_hkt(q)
    assert not ok
    c, gf = su3.algebra.c.astype(float), g.astype(float)
    HI = oracle.torsion_H(c, gf, su3.I.astype(float))
    HJ = oracle.torsion_H(c, gf, su3.J.astype(float))
    assert not np.allclose(HI, HJ)


def test_bismut_connections_coincide_on_hkt(entries):
    for e in hkt_entries(entries):
        G = [herm.bismut_connection(e.data.hermitian[n]) for n in "IJK"]
        assert G[0].equals(G[1]) and G[0].equals(G[2]), e.name
        th = [herm.lee_form(e.data.hermitian[n]) for n in "IJK"]
        assert th[0].equals(th[1]) and th[0].equals(th[2]), e.name


# Obata connection -------------------------------------------------------------------------

def test_obata_flat_is_zero(entries):
    assert array_is_zero(quat.obata_connection(entries["abelian_r8"].data).gamma)


def test_obata_axioms_on_hkt(entries):
    for e in hkt_entries(entries):
        q = e.data
        ob = quat.obata_connection(q)
        assert array_is_zero(torsion(ob, q.algebra)), e.name
        for L in q.structures:
            M = np.einsum("xik,kj->xij", ob.gamma, L) - np.einsum("ik,xkj->xij", L, ob.gamma)
            assert array_is_zero(M), e.name
        for roles in ("JKI", "KIJ"):
            assert quat.obata_connection(q, roles).equals(ob), (e.name, roles)


def test_obata_differs_from_bismut_on_su3(su3):
    assert not quat.obata_connection(su3).equals(quat.bismut_connection(su3))
    assert not quat.obata_connection(su3).equals(levi_civita(su3.algebra, su3.g))


# Obata Ricci form and the Ricci foliation ---------------------------------------------------------

def test_obata_ricci_examples(entries, su3, hopf):
    assert quat.obata_ricci(entries["abelian_r8"].data).Theta.is_zero()
    r = quat.obata_ricci(su3)
    # with the trace-formula Lee form the curvature of K_R is minus d theta
    assert r.Theta.equals(-ce_differential(su3.algebra, quat.lee_form(su3)))
    assert quat.obata_ricci(hopf).Theta.is_zero() and not quat.lee_form(hopf).is_zero()


def test_ricci_foliation_hyperkahler(entries):
    f = quat.ricci_foliation(entries["abelian_r8"].data)
    assert f.rank == 0 and len(f.kernel) == 8


def test_ricci_foliation_su3(su3):
    f = quat.ricci_foliation(su3)
    assert f.rank == 4 and f.pairing_ok
    # det(x - M) = x^4 (x^2 + 3)^2
    assert f.charpoly == [1, 0, 6, 0, 9, 0, 0, 0, 0]
    V = quat.euler_vector(su3)
    span = [V] + [L @ V for L in su3.structures]
    assert all(linalg.in_span(f.kernel, v) for v in span)


def test_ricci_foliation_su3_oracle(su3):
    c = su3.algebra.c.astype(float)
    theta = np.zeros(8)
    theta[0] = 2.0
    ev = np.linalg.eigvals(oracle.d_form(c, theta))
    assert np.linalg.matrix_rank(oracle.d_form(c, theta)) == 4
    assert np.allclose(sorted(np.abs(ev.imag)), [0, 0, 0, 0] + [3 ** 0.5] * 4)


def test_ricci_foliation_pairing_all_hkt(entries):
    for e in hkt_entries(entries):
        f = quat.ricci_foliation(e.data)
        assert f.pairing_ok and f.rank % 2 == 0 and f.rank < e.dim, e.name


# q-real ------------------------------------------------------------------------------------

def test_q_real(entries, su3):
    assert quat.q_real_check(entries["abelian_r4"].data)
    assert quat.q_real_check(su3)


# classification -----------------------------------------------------------------------------

def test_classify_su3_and_dotti_fino(entries, su3):
    assert quat.classify_hyper(su3).flags() == {"hkt": True, "strong_hkt": True, "hyperkahler": False,
                                                "balanced": False, "parallel_torsion": True}
    assert quat.classify_hyper(entries["dotti_fino_nilpotent"].data).flags() == {
        "hkt": True, "strong_hkt": False, "hyperkahler": False, "balanced": True, "parallel_torsion": True}


def test_report_invariants(entries):
    for e in hyper_entries(entries):
        r = quat.classify_hyper(e.data)
        if r.hyperkahler:
            assert r.hkt and r.strong_hkt and r.H.is_zero(), e.name
        if r.strong_hkt:
            assert r.hkt, e.name


def test_solvable_dichotomy(entries):
    for e in hyper_entries(entries):
        if classify_algebra(e.data.algebra)["solvable"]:
            r = quat.classify_hyper(e.data)
            assert r.strong_hkt == r.hyperkahler, e.name


def test_holonomy_in_sp_on_hkt(entries):
    for e in hkt_entries(entries):
        hol = quat.classify_hyper(e.data).holonomy
        assert hol.contained_in.get("sp") or hol.dim == 0, e.name


def test_strong_non_hk_euler_field_annihilated(entries):
    for e in hkt_entries(entries):
        r = quat.classify_hyper(e.data)
        if not (r.strong_hkt and not r.hyperkahler):
            continue
        q = e.data
        V = quat.euler_vector(q)
        bis = quat.bismut_connection(q)
        assert array_is_zero(nabla_vector(bis, V)), e.name
        span = [V] + [L @ V for L in q.structures]
        hol = holonomy_algebra(bis, q.algebra, q.g, q.structures, span)
        assert hol.annihilated == 4, e.name


def test_euler_vector_values(entries, su3, hopf):
    assert list(quat.euler_vector(su3)) == [1, 0, 0, 0, 0, 0, 0, 0]
    assert list(quat.euler_vector(hopf)) == [Fraction(1, 2), 0, 0, 0]
