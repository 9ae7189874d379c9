from itertools import product

import numpy as np
import pytest

from mirrorcount import kernels
from mirrorcount._jit import USE_JIT


def _brute(tab, E, C):
    """Direct count with FieldElement arithmetic."""
    t = tab.tower
    els = [t.zero()] + [tab.element_of_log(i) for i in range(tab.qm1)]
    total = 0
    for xs in product(els, repeat=E.shape[1]):
        ok = True
        for r in range(C.shape[1]):
            acc = t.zero()
            for row, c in zip(E, C[:, r]):
                if c < 0:
                    continue
                term = tab.element_of_log(c)
                for x, e in zip(xs, row):
                    term = term * x ** int(e)
                acc = acc + term
            ok &= acc.is_zero()
        total += ok
    return total


@pytest.mark.parametrize("E,C", [
    ([[3, 0], [0, 3], [1, 1]], [[0], [0], [2]]),
    ([[2, 0], [0, 2]], [[0], [3]]),
    ([[1, 0], [0, 1]], [[0, -1], [-1, 0]]),
    ([[3]], [[0]]),
])
def test_count_chart_matches_brute(tower7, E, C):
    tab = tower7.tables(1)
    E, C = np.array(E), np.array(C)
    assert kernels.count_chart(tab, E, C) == _brute(tab, E, C)
    assert kernels.count_chart(tab, E, C, workers=3) == _brute(tab, E, C)


def test_collect_chart_rows_are_zeros(tower7):
    tab = tower7.tables(2)
    E = np.array([[3, 0], [0, 3], [1, 1]])
    C = np.array([[0], [0], [tab.log_of_int(3)]])
    rows = kernels.collect_chart(tab, E, C)
    assert len(rows) == kernels.count_chart(tab, E, C)
    assert len({tuple(r) for r in rows.tolist()}) == len(rows)


def test_zadd_agrees_with_field(tower7):
    tab = tower7.tables(2)
    for a in (-1, 0, 5, 17, 47):
        for b in (-1, 0, 3, 24):
            s = int(kernels.zadd(a, b, tab.zech, tab.qm1))
            lhs = tab.element_of_log(s)
            assert lhs == tab.element_of_log(a) + tab.element_of_log(b)
    a = np.array([-1, 0, 5, 24])
    assert kernels.zadd_vec(a, 24, tab.zech, tab.qm1).tolist() == [
        int(kernels.zadd(int(x), 24, tab.zech, tab.qm1)) for x in a]


def test_roots_rows_counts_distinct_roots(tower7):
    tab = tower7.tables(1)
    # x^3 + y^3 + 1 on the affine chart; rows indexed by x
    E = np.array([[3, 0], [0, 3], [0, 0]])
    coef = np.zeros(3, dtype=np.int64)
    pid = np.zeros(3, dtype=np.int64)
    counts = kernels.roots_rows(tab, E, coef, pid, 1)
    els = [None] + list(range(tab.qm1))
    expected = []
    for xl in els:
        x = tab.element_of_log(xl if xl is not None else -1)
        expected.append(sum(1 for y in range(7) if (x ** 3 + tower7.scalar(y) ** 3 + 1).is_zero()))
    assert counts.tolist() == expected


def test_convolve_hist_is_sum_distribution(tower7):
    tab = tower7.tables(1)
    h = np.bincount((2 * np.arange(6)) % 6 + 1, minlength=7)  # squares of nonzero x
    h[0] += 1
    out = kernels.convolve_hist(h, h, tab)
    assert out.sum() == 49
    # x^2 + y^2 = 0 over F_7 only at (0, 0), since -1 is not a square
    assert out[0] == 1

