from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from hkt import catalog
from hkt import hermitian as herm
from hkt import quaternionic as quat
from hkt.curvature import (Connection, HardFailure, bianchi_check, curvature, h_squared, holonomy_algebra,
                           is_lie_subalgebra, ivanov_residual, lc_from_bismut_check, levi_civita, ricci_traces,
                           torsion)
from hkt.liealg import LieAlgebra
from hkt.multilinear import Form
from hkt.scalar import array_is_zero, exact_array, zeros

B = Form.basis


def ident(n):
    return exact_array(np.eye(n, dtype=int).tolist())


def su2():
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)], one_based=True)


def test_flat_curvature_and_traces():
    L = LieAlgebra.abelian(4)
    R = curvature(levi_civita(L, ident(4)), L, ident(4))
    assert R.is_zero()
    ric, scal, rho = ricci_traces(R, ident(4), exact_array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]))
    assert array_is_zero(ric) and scal == 0 and array_is_zero(rho)


def test_su2_bi_invariant_curvature():
    L, g = su2(), ident(3)
    R = curvature(levi_civita(L, g), L, g)
    e = [exact_array(r) for r in np.eye(3, dtype=int).tolist()]
    for x in range(3):
        for y in range(3):
            for z in range(3):
                expect = -L.bracket(L.bracket(e[x], e[y]), e[z]) / 4
                assert list(R.op[x, y][:, z]) == list(expect)
    ric, scal, _ = ricci_traces(R, g)
    assert (ric == ident(3) / 2).all() and scal == Fraction(3, 2)


def test_su2_holonomy_is_so3():
    L, g = su2(), ident(3)
    hol = holonomy_algebra(levi_civita(L, g), L, g)
    assert hol.dim == 3 and hol.label == "so"
    assert is_lie_subalgebra(hol.basis)


def test_curvature_matches_oracle(su3, entries):
    for q in (su3, entries["dotti_fino_nilpotent"].data):
        c, g = q.algebra.c.astype(float), q.g.astype(float)
        mine = curvature(levi_civita(q.algebra, q.g), q.algebra, q.g).R.astype(float)
        assert np.allclose(mine, oracle.curvature4(c, g, oracle.levi_civita(c, g)))
        H = oracle.torsion_H(c, g, q.I.astype(float))
        mineB = curvature(quat.bismut_connection(q), q.algebra, q.g).R.astype(float)
        assert np.allclose(mineB, oracle.curvature4(c, g, oracle.bismut(c, g, H)))


def test_samelson_bismut_flat(su3):
    bis = quat.bismut_connection(su3)
    assert curvature(bis, su3.algebra, su3.g).is_zero()
    hol = holonomy_algebra(bis, su3.algebra, su3.g, su3.structures)
    assert hol.dim == 0 and hol.label == "0"


def test_torsion_examples(su3):
    assert array_is_zero(torsion(levi_civita(su3.algebra, su3.g), su3.algebra))
    flat = Connection(zeros((8, 8, 8), True))
    assert (torsion(flat, su3.algebra) == -su3.algebra.c).all()


def test_h_squared_examples(su3):
    assert array_is_zero(h_squared(Form.zero(4, 3), ident(4)))
    assert (h_squared(B(4, 0, 1, 2), ident(4)) == exact_array(np.diag([2, 2, 2, 0]).tolist())).all()
    H = quat.torsion_form(su3)
    ric, _, _ = ricci_traces(curvature(levi_civita(su3.algebra, su3.g), su3.algebra, su3.g), su3.g)
    assert (ric == h_squared(H, su3.g) / 4).all()
    # bi-invariant: Ric = -1/4 Killing = 3/4 g
    assert (ric == ident(8) * Fraction(3, 4)).all()


def test_bianchi(entries, su3):
    for name in ("hopf_su2_r", "kodaira_thurston", "dotti_fino_nilpotent"):
        d = entries[name].data
        assert bianchi_check(levi_civita(d.algebra, d.g), d.algebra) == (True, True)
    first, _ = bianchi_check(quat.bismut_connection(su3), su3.algebra)
    assert first
    for name in ("su3_samelson", "hopf_x_hopf", "dotti_fino_nilpotent"):
        q = entries[name].data
        assert bianchi_check(quat.obata_connection(q), q.algebra)[1]


small = st.integers(-2, 2).map(Fraction)


@given(st.lists(small, min_size=64, max_size=64))
def test_bianchi_holds_for_any_connection(vals):
    # with its own torsion, every invariant connection satisfies both identities
    L = catalog.get("hopf").data.algebra
    G = np.array(vals, dtype=object).reshape(4, 4, 4)
    assert bianchi_check(Connection(G), L) == (True, True)


def test_bianchi_detects_wrong_torsion(entries):
    d = entries["dotti_fino_nilpotent"].data
    lc = levi_civita(d.algebra, d.g)
    first, _ = bianchi_check(lc, d.algebra, T=-d.algebra.c)
    assert not first


def test_lc_from_bismut(entries):
    for e in entries.values():
        if e.kind == "hyper" and quat.classify_hyper(e.data).hkt:
            assert quat.lc_from_bismut(e.data) == 0, e.name


@given(st.lists(small, min_size=4, max_size=4))
def test_curvature_relation_for_any_skew_torsion(vals):
    # the relation holds for the metric connection with any totally skew torsion
    L = catalog.get("kodaira_thurston").data.algebra
    H = Form(4, 3, dict(zip([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], vals))).to_array()
    assert ivanov_residual(L, ident(4), H) == 0


def test_lc_from_bismut_rejects_non_skew_torsion(hopf):
    H = quat.torsion_form(hopf).to_array().copy()
    H[1, 2, 3] += 1                     # no longer alternating
    assert ivanov_residual(hopf.algebra, hopf.g, H) != 0
    with pytest.raises(HardFailure):
        lc_from_bismut_check(hopf.algebra, hopf.g, H)


@pytest.mark.parametrize("name", ["hopf_su2_r", "kodaira_thurston", "dotti_fino_nilpotent"])
def test_metric_connections_skew_in_last_pair(entries, name):
    d = entries[name].data
    h = d.hermitian["I"] if entries[name].kind == "hyper" else d
    for t in (-1, 0, 1, 3):
        R = curvature(herm.gauduchon_connection(h, t), d.algebra, d.g).R
        assert array_is_zero(R + R.transpose(0, 1, 3, 2)), t
        assert array_is_zero(R + R.transpose(1, 0, 2, 3)), t


def test_holonomy_bases_are_lie_algebras(entries):
    for name in ("dotti_fino_nilpotent", "kodaira_thurston", "hopf_x_hopf"):
        d = entries[name].data
        h = d.hermitian["I"] if entries[name].kind == "hyper" else d
        hol = holonomy_algebra(herm.bismut_connection(h), d.algebra, d.g, (h.J,))
        assert is_lie_subalgebra(hol.basis), name


def test_dotti_fino_holonomy_is_sp(entries):
    q = entries["dotti_fino_nilpotent"].data
    hol = quat.classify_hyper(q).holonomy
    assert hol.label == "sp" and hol.dim > 0
