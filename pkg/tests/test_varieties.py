import pytest

import oracles
from mirrorcount import experiment as ex
from mirrorcount.errors import BudgetError, ValidationError
from mirrorcount.varieties import (
    Hypersurface,
    ProjectiveSpace,
    count_points,
    diagonal,
    dwork,
    is_smooth_dwork,
    jacobian_singular_oracle,
    points,
)

# frozen from tests/oracles.py (independent field + brute enumeration)
HESSE_F7 = {0: [9, 63, 324], 1: [21, 147, 1029], 2: [21, 147, 1029], 3: [9, 63, 324],
            4: [21, 147, 1029], 5: [9, 63, 324], 6: [9, 63, 324]}
HESSE_F4 = {(0, 0): [9, 9, 81], (0, 1): [12, 48, 192], (1, 0): [12, 48, 192], (1, 1): [12, 48, 192]}
QUARTIC_F5 = {0: [0, 1112], 1: [16, 776], 2: [16, 776], 3: [16, 776], 4: [16, 776]}
QUARTIC_F3 = {0: [16, 280], 1: [20, 104], 2: [20, 104]}


@pytest.mark.parametrize("strategy", ["naive", "roots"])
def test_hesse_f7(strategy):
    for lam, vals in HESSE_F7.items():
        cfg = ex.ExperimentConfig(p=7, lam=lam, strategy=strategy)
        assert [ex.compute_count(cfg, k).value for k in (1, 2, 3)] == vals


def test_hesse_f4():
    for lam, vals in HESSE_F4.items():
        cfg = ex.ExperimentConfig(p=2, a=2, lam=lam, strategy="naive")
        assert [ex.compute_count(cfg, k).value for k in (1, 2, 3)] == vals


@pytest.mark.parametrize("p,table", [(5, QUARTIC_F5), (3, QUARTIC_F3)])
@pytest.mark.parametrize("strategy", ["naive", "roots"])
def test_dwork_quartic_surfaces(p, table, strategy):
    for lam, vals in table.items():
        cfg = ex.ExperimentConfig(p=p, n=3, lam=lam, strategy=strategy)
        assert [ex.compute_count(cfg, k).value for k in (1, 2)] == vals


def test_live_oracle_k1():
    F = oracles.GF(7, 1)
    for lam in range(7):
        assert oracles.count(F, 2, oracles.dwork_terms(F, 2, lam)) == HESSE_F7[lam][0]


def test_hesse_f7_k4_matches_genus_one_recurrence():
    for lam in (0, 3, 5, 6):
        cfg = ex.ExperimentConfig(p=7, lam=lam, strategy="naive")
        n1 = ex.compute_count(cfg, 1).value
        assert ex.compute_count(cfg, 4).value == oracles.elliptic_counts(7, n1, 4)[3]


@pytest.mark.parametrize("q", [3, 5, 7])
def test_diagonal_strategy_agrees(q):
    t = ex.tower_for(q, 1, (2,))
    for coeffs in ([1, 1, 1, 1], [1, 2, 1, 1], [1, 1, 1, 0]):
        X = diagonal(coeffs, 2, t)
        for k in (1, 2):
            vals = {s: count_points(X, k, s).value for s in ("naive", "roots", "diagonal")}
            assert len(set(vals.values())) == 1, vals


def test_quadric_closed_forms():
    # square discriminant: split, (Q + 1)^2; otherwise Q^2 + 1 until k is even
    for q in (3, 5, 7):
        for k in (1, 2, 3):
            t = ex.tower_for(q, 1, (k,))
            Q = q ** k
            ns = next(c for c in range(2, q) if pow(c, (q - 1) // 2, q) == q - 1)
            a = count_points(diagonal([1, 1, 1, 1], 2, t), k, "diagonal").value
            b = count_points(diagonal([1, 1, 1, ns], 2, t), k, "diagonal").value
            assert a == (Q + 1) ** 2
            assert b == (Q * Q + 1 if k % 2 else (Q + 1) ** 2)


def test_projective_space():
    t = ex.tower_for(5, 1, (1,))
    for n in range(1, 5):
        assert count_points(ProjectiveSpace(n, t), 2).value == sum(25 ** i for i in range(n + 1))


def test_points_are_normalised_and_on_curve(tower7):
    X = dwork(2, 3, tower7)
    tab = tower7.tables(1)
    pts = points(X, tab)
    assert len(pts) == 9
    for row in pts.tolist():
        lead = next(v for v in row if v >= 0)
        assert lead == 0
        assert X.evaluate([tab.element_of_log(v) for v in row]).is_zero()


def test_hypersurface_validation(tower7):
    one = tower7.one()
    with pytest.raises(ValidationError):
        Hypersurface(2, tower7, (((3, 0, 0), one), ((1, 0, 0), one)))
    with pytest.raises(ValidationError):
        Hypersurface(2, tower7, (((3, 0, 0), tower7.zero()),))
    with pytest.raises(ValidationError):
        Hypersurface(2, tower7, (((3, 0, 0), tower7.generator()),))
    with pytest.raises(ValidationError):
        count_points(dwork(2, 0, tower7), 1, "bogus")


def test_budget_error_reports_size(tower7):
    with pytest.raises(BudgetError) as exc:
        count_points(dwork(2, 3, tower7), 3, budget=100)
    assert exc.value.size == 343 ** 2 + 343 + 1 and exc.value.budget == 100


def test_smoothness_closed_form_f7():
    t = ex.tower_for(7, 1, (1,))
    assert [c for c in range(7) if not is_smooth_dwork(2, c, t)] == [1, 2, 4]


def test_jacobian_oracle_matches_independent_search():
    # singular points of the lambda = 1 Hesse cubic over F_7 and F_49
    t = ex.tower_for(7, 1, (1, 2))
    X = dwork(2, 1, t)
    found = jacobian_singular_oracle(X, 2)
    F = oracles.GF(7, 1)
    brute = oracles.singular_points(F, 2, oracles.dwork_terms(F, 2, 1))
    assert len([e for e, _ in found if e == 1]) == len(brute) == 3
    assert jacobian_singular_oracle(X, 2, method="naive") == found


def test_char_p_divides_degree_case():
    # p = 3, n = 2: the Fermat cubic is a cube, singular everywhere; lambda != 0 is smooth
    t = ex.tower_for(3, 1, (1, 2, 3))
    assert not is_smooth_dwork(2, 0, t)
    for lam in (1, 2):
        assert is_smooth_dwork(2, lam, t)
        assert jacobian_singular_oracle(dwork(2, lam, t), 3) == []
    assert jacobian_singular_oracle(dwork(2, 0, t), 1)
