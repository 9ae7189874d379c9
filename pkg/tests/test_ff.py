import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from mirrorcount import modp
from mirrorcount.errors import BudgetError, TowerTooSmallError, ValidationError
from mirrorcount.ff import (
    build_tower,
    enumerate_subfield,
    is_irreducible,
    kummer_solve,
    roots_of_unity,
    smallest_irreducible,
)


def _sympy_irreducible(f, p):
    return gf_irreducible_p([ZZ(c) for c in reversed(f)], p, ZZ)


@pytest.mark.parametrize("p,D", [(2, 1), (2, 6), (3, 4), (5, 3), (7, 6), (7, 12), (2, 18)])
def test_smallest_irreducible_agrees_with_sympy(p, D):
    f = smallest_irreducible(p, D)
    assert len(f) == D + 1 and f[-1] == 1
    assert _sympy_irreducible(f, p)


@pytest.mark.parametrize("f,p,expected", [
    ((1, 1, 1), 2, True),
    ((1, 0, 1), 2, False),
    ((1, 0, 1), 3, True),
    ((1, 0, 1), 5, False),  # x^2 + 1 = (x - 2)(x + 2)
    ((2, 0, 1), 7, True),
    ((1, 0, 0, 1), 2, False),
])
def test_is_irreducible_small(f, p, expected):
    assert is_irreducible(f, p) == expected


def test_frozen_moduli():
    # frozen from the search order: constant term first, then increasing degree
    assert build_tower(7, 1, {1, 2, 3, 6}).modulus == (1, 0, 0, 0, 1, 0, 1)
    assert build_tower(2, 2, {1, 3}).modulus == (1, 0, 0, 0, 0, 1, 1)


def test_tower_degrees(tower7):
    assert tower7.D == 6 and tower7.q == 7
    assert tower7.degree_for(3) == 3
    with pytest.raises(TowerTooSmallError):
        tower7.degree_for(4)


def test_tower_budget_and_validation():
    with pytest.raises(BudgetError):
        build_tower(2, 1, {65})
    with pytest.raises(ValidationError):
        build_tower(6, 1, {1})
    with pytest.raises(ValidationError):
        build_tower(3, 1, set())


def test_subfield_basis_is_frobenius_fixed(tower7):
    for d in (1, 2, 3, 6):
        B = tower7.subfield_bases[d]
        assert B.shape == (d, 6)
        fixed = modp.matmul(B, modp.matpow(tower7.frobenius, d, 7), 7)
        assert np.array_equal(fixed, B)


def test_enumerate_subfield_order_and_size(tower4):
    els = list(enumerate_subfield(tower4, 2))
    assert len(set(els)) == 4
    tab = tower4.tables(2)
    assert [tab.index_of(x) for x in els] == [0, 1, 2, 3]


@pytest.mark.parametrize("d", [1, 2, 3, 6])
def test_tables_roundtrip(tower7, d):
    tab = tower7.tables(d)
    assert tab.Q == 7 ** d
    assert sorted(tab.exp_idx.tolist()) == list(range(1, tab.Q))
    g = tab.gamma
    for lg in (0, 1, 5, tab.qm1 - 1):
        assert tab.element_of_log(lg) == g ** lg
        assert tab.log_of(g ** lg) == lg
    # zech: gamma^z(i) = gamma^i + 1
    for i in range(0, tab.qm1, max(1, tab.qm1 // 17)):
        z = tab.zech[i]
        lhs = tab.element_of_log(z) if z >= 0 else tower7.zero()
        assert lhs == g ** i + 1
    assert tab.element_of_log(tab.neg_one_log) == -1


def test_index_of_rejects_outside_subfield(tower7):
    with pytest.raises(ValidationError):
        tower7.tables(2).index_of(tower7.generator())


def test_ambient_components_reconstruct(tower7):
    tab = tower7.tables(2)
    theta = tower7.generator()
    x = theta ** 5 + 3 * theta + 2
    comps = tab.ambient_components(x)
    # basis of F_{7^6} over F_49 is 1, theta, theta^2
    rebuilt = sum((tab.element_of_log(c) * theta ** j for j, c in enumerate(comps)), tower7.zero())
    assert rebuilt == x


def test_roots_of_unity(tower7):
    assert [tower7.tables(1).index_of(z) for z in roots_of_unity(tower7, 1, 3)] == [1, 2, 4]
    assert len(roots_of_unity(tower7, 2, 8)) == 8
    assert len(roots_of_unity(tower7, 1, 5)) == 1


def test_kummer_solve(tower7):
    t = build_tower(7, 1, {1, 6})
    for c in (2, 3, 4, 6):
        u = t.scalar(c)
        s, w = kummer_solve(t, 7, u)
        assert s ** 6 == u
        assert w["N"] == w["order_u"] * 6
    s, w = kummer_solve(t, 7, t.one())
    assert s == 1 and w["exponent"] == 0


def test_kummer_needs_big_enough_tower():
    t = build_tower(7, 1, {1})
    with pytest.raises(TowerTooSmallError):
        kummer_solve(t, 7, t.scalar(2))


def test_element_order_and_frobenius(tower7):
    g = tower7.tables(6).gamma
    assert g.multiplicative_order() == 7 ** 6 - 1
    assert g.min_subfield_degree() == 6
    assert tower7.scalar(2).multiplicative_order() == 3
    assert g.frobenius() == g ** 7
    assert g.frobenius(6) == g


_coords = st.lists(st.integers(0, 6), min_size=6, max_size=6)


@settings(max_examples=60, deadline=None)
@given(_coords, _coords, _coords)
def test_field_axioms(x, y, z):
    t = build_tower(7, 1, {1, 2, 3, 6})
    a, b, c = t.element(x), t.element(y), t.element(z)
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert a ** (7 ** 6 - 1) == 1


def test_polynomial_helpers():
    p = 5
    f = [1, 0, 1]  # x^2 + 1 = (x - 2)(x - 3) mod 5
    assert modp.pgcd(f, [3, 1], p).tolist() == [3, 1]
    assert modp.peval(f, 2, p) == 0
    assert modp.pmod([0, 0, 1], f, p).tolist() == [4]
    assert modp.ppowmod([0, 1], 5, f, p).tolist() == [0, 1]
    assert modp.rank(np.array([[1, 2], [2, 4]]), p) == 1
