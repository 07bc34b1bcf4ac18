from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle
from hkt.catalog import _quaternionic
from hkt.multilinear import (Form, flat, form_norm_sq, hodge_star, inner, interior, invariance_check, j_act,
                             musical, sharp, wedge, wedge_all)
from hkt.scalar import exact_array

B = Form.basis
E4 = [exact_array(row) for row in np.eye(4, dtype=int).tolist()]


def frac_st():
    return st.integers(-3, 3).map(Fraction)


@st.composite
def forms(draw, dim, degree):
    coeffs = {I: draw(frac_st()) for I in itertools.combinations(range(dim), degree)}
    return Form(dim, degree, coeffs)


@st.composite
def spd(draw, n):
    m = np.array([[Fraction(draw(st.integers(-2, 2))) for _ in range(n)] for _ in range(n)], dtype=object)
    return m.T @ m + exact_array(np.eye(n, dtype=int).tolist())


# wedge ---------------------------------------------------------------------------

def test_wedge_basis_duality():
    assert (B(4, 0) ^ B(4, 1))(E4[0], E4[1]) == 1


def test_wedge_disjoint_pairs():
    assert (B(4, 0, 1) ^ B(4, 2, 3)).equals(B(4, 0, 1, 2, 3))


def test_wedge_square_of_asd_form():
    a = B(4, 0, 1) - B(4, 2, 3)
    assert (a ^ a).equals(B(4, 0, 1, 2, 3) * -2)


def test_wedge_matches_dense_alternation():
    a = B(5, 0, 1) + B(5, 2, 4) * 3
    b = B(5, 1, 3, 4) - B(5, 0, 2, 3) * 2
    dense = oracle.wedge_dense(a.to_array(exact=False).astype(float), b.to_array(exact=False).astype(float))
    assert np.allclose(dense, wedge(a, b).to_array(exact=False).astype(float))


@given(forms(5, 1), forms(5, 2), forms(5, 1))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c).equals(wedge(a, wedge(b, c)))


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_wedge_graded_commutative(p, q, data):
    a, b = data.draw(forms(6, p)), data.draw(forms(6, q))
    assert wedge(a, b).equals(wedge(b, a) * (-1) ** (p * q))


# interior ------------------------------------------------------------------------

def test_interior_examples():
    assert interior(E4[0], B(4, 0, 1)).equals(B(4, 1))
    assert interior(E4[2], B(4, 0, 1)).is_zero()
    assert interior(E4[0], B(4, 0, 1, 2)).equals(B(4, 1, 2))


@given(st.integers(0, 3), st.data())
def test_interior_past_a_function(q, data):
    f = Form.scalar(6, data.draw(frac_st()))
    b = data.draw(forms(6, q))
    v = np.array([data.draw(frac_st()) for _ in range(6)], dtype=object)
    assert interior(v, wedge(f, b)).equals(wedge(f, interior(v, b)))


def test_interior_of_scalar_is_zero():
    r = interior(E4[0], Form.scalar(4, Fraction(3)))
    assert r.degree == 0 and r.is_zero()


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_interior_antiderivation(p, q, data):
    a, b = data.draw(forms(6, p)), data.draw(forms(6, q))
    v = np.array([data.draw(frac_st()) for _ in range(6)], dtype=object)
    lhs = interior(v, wedge(a, b))
    rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b)) * (-1) ** p
    assert lhs.equals(rhs)


# musical isomorphisms ----------------------------------------------------------------

def test_flat_identity_and_scaled():
    g = exact_array(np.eye(4, dtype=int).tolist())
    assert flat(g, E4[0]).equals(B(4, 0))
    g2 = g.copy()
    g2[0, 0] = Fraction(2)
    assert flat(g2, E4[0]).equals(B(4, 0) * 2)


@given(spd(4), st.lists(frac_st(), min_size=4, max_size=4))
def test_sharp_inverts_flat(g, v):
    v = np.array(v, dtype=object)
    assert all(x == y for x, y in zip(sharp(g, flat(g, v)), v))
    assert all(x == y for x, y in zip(musical(g, musical(g, v)), v))


# Hodge star ------------------------------------------------------------------------

def test_hodge_examples():
    g = exact_array(np.eye(4, dtype=int).tolist())
    assert hodge_star(g, E4, B(4, 0, 1)).equals(B(4, 2, 3))
    asd = B(4, 0, 1) - B(4, 2, 3)
    sd = B(4, 0, 1) + B(4, 2, 3)
    assert hodge_star(g, E4, asd).equals(-asd)
    assert hodge_star(g, E4, sd).equals(sd)


@given(forms(4, 2))
def test_hodge_isometry_on_two_forms(a):
    g = exact_array(np.eye(4, dtype=int).tolist())
    assert form_norm_sq(g, hodge_star(g, E4, a)) == form_norm_sq(g, a)


@given(st.integers(0, 4), st.data())
def test_hodge_isometry_all_degrees(k, data):
    # the full index-sum norm of a k-form is k! times the normalized one
    g = exact_array(np.eye(4, dtype=int).tolist())
    a = data.draw(forms(4, k))
    star = hodge_star(g, E4, a)
    assert form_norm_sq(g, star) / factorial(4 - k) == form_norm_sq(g, a) / factorial(k)


@given(st.integers(0, 4), st.data())
def test_hodge_star_squares_to_sign(k, data):
    g = exact_array(np.eye(4, dtype=int).tolist())
    a = data.draw(forms(4, k))
    assert hodge_star(g, E4, hodge_star(g, E4, a)).equals(a * (-1) ** (k * (4 - k)))


# norms -----------------------------------------------------------------------------

def test_norm_examples():
    g = exact_array(np.eye(4, dtype=int).tolist())
    assert form_norm_sq(g, B(4, 0, 1) + B(4, 2, 3)) == 4
    assert form_norm_sq(g, Form.zero(4, 2)) == 0


@given(frac_st(), frac_st(), frac_st())
def test_norm_of_asd_combination(l1, l2, l3):
    g = exact_array(np.eye(4, dtype=int).tolist())
    a = ((B(4, 0, 1) - B(4, 2, 3)) * l1 + (B(4, 0, 2) - B(4, 3, 1)) * l2
         + (B(4, 0, 3) - B(4, 1, 2)) * l3)
    assert form_norm_sq(g, a) == 4 * (l1 * l1 + l2 * l2 + l3 * l3)


@given(st.integers(1, 3), spd(4), st.data())
def test_norm_matches_full_index_sum(k, g, data):
    a = data.draw(forms(4, k))
    b = data.draw(forms(4, k))
    ginv = np.array([[Fraction(x) for x in row] for row in np.linalg.inv(g.astype(float))], dtype=object)
    from hkt import linalg
    ginv = linalg.inverse(g)
    A, Bd = a.to_array(), b.to_array()
    letters = "abcd"[:k]
    up = "pqrs"[:k]
    spec = f"{letters},{up}," + ",".join(f"{x}{y}" for x, y in zip(letters, up)) + "->"
    brute = np.einsum(spec, A, Bd, *[ginv] * k)
    assert inner(g, a, b) == brute


# J action ------------------------------------------------------------------------------

def test_j_act_examples():
    I, _, _ = _quaternionic(1)
    assert j_act(I, B(4, 0, 1)).equals(B(4, 0, 1))
    assert j_act(I, B(4, 0, 2)).equals(B(4, 1, 3))
    # (J a)(X) = a(-JX): with I e1 = e2 this gives +e^2
    assert j_act(I, B(4, 0)).equals(B(4, 1))


def test_j_act_rejects_non_complex_structure():
    with pytest.raises(ValueError):
        j_act(exact_array(np.eye(4, dtype=int).tolist()), B(4, 0))


@given(st.integers(0, 4), st.data())
def test_j_act_squares_to_sign(k, data):
    I, _, _ = _quaternionic(1)
    a = data.draw(forms(4, k))
    assert j_act(I, j_act(I, a)).equals(a * (-1) ** k)


def test_invariance_examples():
    I, J, K = _quaternionic(1)
    assert not invariance_check(B(4, 0, 1) + B(4, 2, 3), [I, J, K])
    assert invariance_check(B(4, 0, 1) + B(4, 2, 3), [I])
    assert invariance_check(B(4, 0, 1) - B(4, 2, 3), [I, J, K])
    assert invariance_check(Form.zero(4, 2), [I, J, K])


def test_wedge_all_volume():
    assert wedge_all(*[B(4, i) for i in range(4)]).equals(B(4, 0, 1, 2, 3))
