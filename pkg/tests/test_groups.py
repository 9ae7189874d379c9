import pytest

from mirrorcount import experiment as ex
from mirrorcount.errors import ConsistencyError, ValidationError
from mirrorcount.groups import (
    GroupAction,
    GroupElement,
    burnside_from_lambdas,
    burnside_quotient_count,
    corollary_group,
    identity,
    lambda_twisted,
    orbit_oracle,
    orbit_oracle_count,
    permutation_group,
    trivial_group,
)
from mirrorcount.varieties import ProjectiveSpace, count_points, dwork

# frozen from tests/oracles.stable_orbits (independent enumeration)
QUOTIENT_K1 = {(7, 2, 0): 9, (7, 2, 3): 9, (7, 2, 5): 9, (7, 2, 6): 9, (3, 3, 0): 16}
QUARTIC_F3_QUOTIENT = [16, 172]
QUARTIC_F5_QUOTIENT = [30, 662, 16110]
QUARTIC_F5_COUNTS = [0, 1112, 15360]


@pytest.mark.parametrize("p,a,n,order", [(7, 1, 2, 9), (2, 2, 2, 9), (5, 1, 3, 64), (3, 1, 3, 8), (5, 1, 2, 1)])
def test_corollary_group_order(p, a, n, order):
    cfg = ex.ExperimentConfig(p=p, a=a, n=n)
    assert ex.group_order(cfg) == order


def test_composition_convention(tower7):
    t = tower7
    g = GroupElement((t.scalar(2), t.one(), t.scalar(3)), (1, 2, 0))
    h = GroupElement((t.one(), t.scalar(4), t.one()), (2, 0, 1))
    x = (t.scalar(1), t.scalar(5), t.scalar(6))
    assert (g * h)(x) == g(h(x))
    assert (g * g.inverse()).is_identity()
    assert g.order() == (g ** g.order() == identity(t, 3)) * g.order()


def test_group_validation(tower7):
    t = tower7
    X = dwork(2, 3, t)
    z = t.scalar(2)
    with pytest.raises(ValidationError):
        GroupAction((identity(t, 3), GroupElement((z, t.one(), t.one()))), X)  # not closed
    with pytest.raises(ValidationError):
        GroupAction((GroupElement((z, z, z)),), X)  # no identity
    with pytest.raises(ValidationError):
        permutation_group([(1, 0, 2)], dwork(2, 3, t).__class__(2, t, (((3, 0, 0), t.one()), ((0, 3, 0), z), ((0, 0, 3), t.one()))))


def test_chart_equals_brute_for_every_element():
    t = ex.tower_for(7, 1, (1, 2, 3, 6))
    X = dwork(2, 3, t)
    G = corollary_group(2, t, X)
    for g in G.elements:
        assert lambda_twisted(X, g, 1, "chart").value == lambda_twisted(X, g, 1, "brute").value
    # k = 2 through the identity-free twists of a group of exponent 3 over F_4
    t4 = ex.tower_for(2, 2, (2, 6))
    X4 = dwork(2, 0, t4)
    for g in corollary_group(2, t4, X4).elements:
        assert lambda_twisted(X4, g, 2, "chart").value == lambda_twisted(X4, g, 2, "brute").value


def test_permutation_twist_closed_form_matches_brute():
    t = ex.tower_for(3, 1, (12,))
    P = ProjectiveSpace(2, t)
    A = permutation_group([(1, 0, 2), (1, 2, 0)], P)
    for g in A.elements:
        for k in (1, 2):
            assert lambda_twisted(P, g, k, "closed-form").value == lambda_twisted(P, g, k, "brute").value


def test_burnside_matches_orbit_oracle():
    for (p, n, lam), expected in QUOTIENT_K1.items():
        cfg = ex.ExperimentConfig(p=p, n=n, lam=lam)
        assert ex.compute_quotient(cfg, 1).value == expected
        assert ex.compute_quotient(cfg, 1, "orbit").value == expected


def test_non_free_quotients():
    cfg = ex.ExperimentConfig(p=3, n=3, lam=0)
    assert [ex.compute_quotient(cfg, k).value for k in (1, 2)] == QUARTIC_F3_QUOTIENT
    assert ex.compute_quotient(cfg, 2, "orbit").value == QUARTIC_F3_QUOTIENT[1]
    cfg = ex.ExperimentConfig(p=5, n=3, lam=0)
    assert [ex.compute_quotient(cfg, k).value for k in (1, 2, 3)] == QUARTIC_F5_QUOTIENT
    assert [ex.compute_count(cfg, k).value for k in (1, 2, 3)] == QUARTIC_F5_COUNTS
    assert ex.compute_quotient(cfg, 1, "orbit").value == QUARTIC_F5_QUOTIENT[0]


def test_non_special_linear_group_breaks_congruence():
    # x^3 + y^3 + z^3 with z -> zeta z: the quotient has 8 points, X has 9
    t = ex.tower_for(7, 1, (1, 3))
    X = dwork(2, 0, t)
    G = GroupAction(tuple(GroupElement((t.one(), t.one(), t.scalar(c))) for c in (1, 2, 4)), X)
    assert burnside_quotient_count(G, 1).value == orbit_oracle_count(G, 1).value == 8
    assert count_points(X, 1).value == 9


def test_dedupe_is_transparent():
    t = ex.tower_for(7, 1, (2, 6))
    X = dwork(2, 5, t)
    G = corollary_group(2, t, X)
    assert burnside_quotient_count(G, 2).value == burnside_quotient_count(G, 2, dedupe_scalars=False).value
    assert burnside_quotient_count(G, 2, workers=3).value == burnside_quotient_count(G, 2).value


def test_orbit_records():
    t = ex.tower_for(3, 1, (6,))
    X = dwork(2, 1, t)
    A = permutation_group([(1, 0, 2), (1, 2, 0)], X)
    count, orbits = orbit_oracle(A, 1)
    assert count == burnside_quotient_count(A, 1).value
    for o in orbits:
        assert len(o.orbit) * o.stabilizer_size == A.order


def test_burnside_divisibility_guard():
    assert burnside_from_lambdas([9, 0, 0], 3) == 3
    with pytest.raises(ConsistencyError):
        burnside_from_lambdas([9, 1, 0], 3)


def test_trivial_group_quotient_is_count():
    t = ex.tower_for(7, 1, (2,))
    X = dwork(2, 3, t)
    assert burnside_quotient_count(trivial_group(X), 2).value == count_points(X, 2).value
