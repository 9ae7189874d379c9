"""Projective hypersurfaces over F_q and exact point counts over F_{q^k}.

Projective points are enumerated chart by chart: chart i has x_j = 0 for
j < i and x_i = 1, so every point of P^n appears exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetError, ValidationError
from .ff import FieldElement, FieldTower
from .records import CountRecord

DEFAULT_BUDGET = 10 ** 9

STRATEGIES = {
    "naive": "naive-enumeration",
    "roots": "last-coordinate-roots",
    "diagonal": "diagonal-convolution",
}


@dataclass(frozen=True, eq=False)
class Hypersurface:
    n: int
    tower: FieldTower
    terms: tuple
    name: str = ""

    def __post_init__(self):
        terms = tuple((tuple(int(e) for e in exps), c) for exps, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValidationError("a hypersurface needs at least one term")
        degs = {sum(e) for e, _ in terms}
        if len(degs) != 1 or min(degs) < 1:
            raise ValidationError("terms must be homogeneous of positive degree")
        if any(len(e) != self.n + 1 for e, _ in terms):
            raise ValidationError(f"exponent vectors must have length {self.n + 1}")
        if len({e for e, _ in terms}) != len(terms):
            raise ValidationError("exponent vectors must be distinct")
        base = self.tower.tables(self.tower.a)
        for _, c in terms:
            if c.is_zero():
                raise ValidationError("coefficients must be nonzero")
            base.index_of(c)  # raises unless c lies in F_q

    @property
    def degree(self):
        return sum(self.terms[0][0])

    @property
    def p(self):
        return self.tower.p

    @property
    def a(self):
        return self.tower.a

    @property
    def q(self):
        return self.tower.q

    def evaluate(self, point):
        acc = self.tower.zero()
        for exps, c in self.terms:
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = term * x ** e
            acc = acc + term
        return acc

    def partial_terms(self, i):
        """Terms of the i-th partial derivative (possibly empty)."""
        out = []
        for exps, c in self.terms:
            e = exps[i]
            if e % self.p == 0:
                continue
            new = list(exps)
            new[i] -= 1
            out.append((tuple(new), c * (e % self.p)))
        return out

    def canonical(self):
        """Hashable serialisation used for cache keys and reports."""
        base = self.tower.tables(self.tower.a)
        return [[list(e), base.index_of(c)] for e, c in sorted(self.terms, key=lambda t: t[0])]

    def is_diagonal(self):
        return all(sum(1 for v in e if v) == 1 for e, _ in self.terms)


@dataclass(frozen=True, eq=False)
class ProjectiveSpace:
    """P^n itself: the baseline with no defining equation."""

    n: int
    tower: FieldTower
    name: str = "P^n"

    terms = ()

    @property
    def q(self):
        return self.tower.q

    @property
    def p(self):
        return self.tower.p

    @property
    def a(self):
        return self.tower.a

    def canonical(self):
        return []


def _coerce_lambda(lam, tower):
    if isinstance(lam, FieldElement):
        return lam
    if tower is None:
        raise ValidationError("an integer lambda needs a tower")
    return tower.scalar(int(lam))


def dwork(n, lam, tower=None):
    """x_0^(n+1) + ... + x_n^(n+1) + lam * x_0 ... x_n in P^n."""
    if n < 2:
        raise ValidationError("dwork family needs n >= 2")
    lam = _coerce_lambda(lam, tower)
    t = lam.tower
    terms = []
    for i in range(n + 1):
        e = [0] * (n + 1)
        e[i] = n + 1
        terms.append((tuple(e), t.one()))
    if not lam.is_zero():
        terms.append(((1,) * (n + 1), lam))
    return Hypersurface(n, t, tuple(terms), name=f"dwork(n={n})")


def diagonal(coeffs, d, tower):
    """sum_i a_i x_i^d; coefficients given as ints (prime field) or FieldElements."""
    n = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        c = _coerce_lambda(c, tower)
        if c.is_zero():
            continue
        e = [0] * (n + 1)
        e[i] = d
        terms.append((tuple(e), c))
    return Hypersurface(n, tower, tuple(terms), name=f"diagonal(d={d})")


def is_smooth_dwork(n, lam, tower=None):
    """Closed-form smoothness of the Dwork member, validated against the Jacobian oracle.

    p does not divide n+1: smooth iff lam^(n+1) != (-(n+1))^(n+1).
    p divides n+1: F = (sum x_i^m)^(p^v) + lam * prod x_i, all partials reduce to
    lam * prod_{j != i} x_j, and a singular point needs two zero coordinates
    with the remaining pure powers summing to zero; that happens iff n >= 3 or
    lam = 0.
    """
    lam = _coerce_lambda(lam, tower)
    t = lam.tower
    if (n + 1) % t.p:
        return lam ** (n + 1) != t.scalar(-(n + 1)) ** (n + 1)
    return n == 2 and not lam.is_zero()


def _chart_terms(terms, n, i0):
    """Terms surviving on chart i0 with their free exponent columns."""
    kept = []
    for exps, c in terms:
        if any(exps[j] for j in range(i0)):
            continue
        kept.append((exps[i0 + 1:], c))
    return kept


def _check_budget(cells, budget):
    if cells > budget:
        raise BudgetError(f"enumeration needs {cells} cells, budget is {budget}", size=cells, budget=budget)


def naive_cells(n, Q):
    return sum(Q ** (n - i) for i in range(n + 1))


def count_points(X, k, strategy="naive", workers=1, budget=DEFAULT_BUDGET) -> CountRecord:
    """N_k = #X(F_{q^k})."""
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy {strategy!r}")
    if isinstance(X, ProjectiveSpace):
        return count_projective_space(X.n, X.tower, k)
    d = X.tower.degree_for(k)
    tab = X.tower.tables(d)
    if strategy == "naive":
        value = _count_naive(X, tab, workers, budget)
    elif strategy == "roots":
        value = _count_roots(X, tab, workers, budget)
    else:
        value = _count_diagonal(X, tab, budget)
    return CountRecord(k, value, STRATEGIES[strategy])


def _count_naive(X, tab, workers, budget):
    n = X.n
    _check_budget(naive_cells(n, tab.Q), budget)
    total = 0
    for i0 in range(n + 1):
        kept = _chart_terms(X.terms, n, i0)
        if not kept:
            total += tab.Q ** (n - i0)
            continue
        E = np.array([e for e, _ in kept], dtype=np.int64).reshape(len(kept), n - i0)
        C = np.array([[tab.log_of(c)] for _, c in kept], dtype=np.int64)
        total += kernels.count_chart(tab, E, C, workers)
    return total


def _univariate_charts(polys, n, tab):
    """Yield (i0, E, coef, pid) for each chart, merging several polynomials."""
    for i0 in range(n + 1):
        rows, coefs, pids = [], [], []
        for pi, terms in enumerate(polys):
            for e, c in _chart_terms(terms, n, i0):
                rows.append(e)
                coefs.append(tab.log_of(c))
                pids.append(pi)
        E = np.array(rows, dtype=np.int64).reshape(len(rows), n - i0)
        yield i0, E, np.array(coefs, dtype=np.int64), np.array(pids, dtype=np.int64)


def _count_roots(X, tab, workers, budget):
    n = X.n
    _check_budget(sum(tab.Q ** max(n - i - 1, 0) for i in range(n + 1)) * (X.degree + 1), budget)
    total = 0
    for i0, E, coef, pid in _univariate_charts([X.terms], n, tab):
        if i0 == n:
            C = np.full((len(coef), 1), -1, dtype=np.int64)
            C[:, 0] = coef
            total += kernels.count_chart(tab, E, C)
            continue
        if E.shape[0] == 0:
            total += tab.Q ** (n - i0)
            continue
        total += int(kernels.roots_rows(tab, E, coef, pid, 1, workers).sum())
    return total


def _count_diagonal(X, tab, budget):
    if not X.is_diagonal():
        raise ValidationError("diagonal strategy needs a diagonal equation")
    n, Q, qm1 = X.n, tab.Q, tab.qm1
    if Q ** (n + 1) >= 2 ** 62:
        raise BudgetError("affine count would overflow int64", size=Q ** (n + 1), budget=2 ** 62)
    _check_budget(n * Q * Q, budget)
    hists = []
    by_var = {next(i for i, v in enumerate(e) if v): (sum(e), c) for e, c in X.terms}
    j = np.arange(qm1, dtype=np.int64)
    for i in range(n + 1):
        if i not in by_var:
            hists.append(np.ones(Q, dtype=np.int64))
            continue
        deg, c = by_var[i]
        logs = (tab.log_of(c) + deg * j) % qm1
        h = np.bincount(logs + 1, minlength=Q).astype(np.int64)
        h[0] += 1
        hists.append(h)
    acc = hists[0]
    for h in hists[1:]:
        acc = kernels.convolve_hist(acc, h, tab)
    affine = int(acc[0])
    if (affine - 1) % qm1:
        raise AssertionError("affine cone count not compatible with scaling")
    return (affine - 1) // qm1


def count_projective_space(n, tower, k) -> CountRecord:
    """#P^n(F_{q^k}) as the sum of chart sizes Q^n + Q^(n-1) + ... + 1."""
    Q = tower.q ** k
    return CountRecord(k, sum(Q ** (n - i) for i in range(n + 1)), "closed-form")


def points(X, tab, budget=DEFAULT_BUDGET):
    """All normalised points of X over the subfield described by ``tab``.

    Returns an (N, n+1) array of logs (-1 = zero coordinate); each row has
    its leftmost nonzero coordinate equal to 1 (log 0).
    """
    n = X.n
    _check_budget(naive_cells(n, tab.Q), budget)
    out = []
    for i0 in range(n + 1):
        kept = _chart_terms(X.terms, n, i0)
        E = np.array([e for e, _ in kept], dtype=np.int64).reshape(len(kept), n - i0)
        C = np.array([[tab.log_of(c)] for _, c in kept], dtype=np.int64).reshape(len(kept), 1)
        free = kernels.collect_chart(tab, E, C)
        block = np.full((free.shape[0], n + 1), -1, dtype=np.int64)
        block[:, i0] = 0
        block[:, i0 + 1:] = free
        out.append(block)
    return np.concatenate(out)


def jacobian_singular_oracle(X, search_degree, method="roots", workers=1, budget=DEFAULT_BUDGET):
    """Points where X and all its partial derivatives vanish, over F_{q^e}, e <= search_degree.

    Returns a list of ``(e, point)`` with ``point`` a tuple of subfield indices
    in F_{q^e}; each point is reported once, at the smallest e over which it
    is defined.
    """
    n = X.n
    polys = [list(X.terms)] + [X.partial_terms(i) for i in range(n + 1)]
    polys = [pl for pl in polys if pl]
    found = []
    for e in range(1, search_degree + 1):
        d = X.tower.degree_for(e)
        tab = X.tower.tables(d)
        pts = _common_zeros(polys, n, tab, method, workers, budget)
        for row in pts:
            if _min_degree(row, tab, X.q, e) == e:
                found.append((e, tuple(int(tab.exp_idx[v]) if v >= 0 else 0 for v in row)))
    return found


def _min_degree(row, tab, q, e):
    for e2 in range(1, e + 1):
        if e % e2:
            continue
        Q2 = q ** e2
        if all(v < 0 or (v * (Q2 - 1)) % tab.qm1 == 0 for v in row):
            return e2
    return e


def _common_zeros(polys, n, tab, method, workers, budget):
    Q = tab.Q
    out = []
    if method == "naive":
        _check_budget(naive_cells(n, Q), budget)
        for i0 in range(n + 1):
            monos = {}
            for pi, terms in enumerate(polys):
                for e, c in _chart_terms(terms, n, i0):
                    monos.setdefault(e, {})[pi] = tab.log_of(c)
            keys = sorted(monos)
            E = np.array(keys, dtype=np.int64).reshape(len(keys), n - i0)
            C = np.full((len(keys), len(polys)), -1, dtype=np.int64)
            for r, key in enumerate(keys):
                for pi, lg in monos[key].items():
                    C[r, pi] = lg
            free = kernels.collect_chart(tab, E, C)
            block = np.full((free.shape[0], n + 1), -1, dtype=np.int64)
            block[:, i0] = 0
            block[:, i0 + 1:] = free
            out.extend(block.tolist())
        return out
    _check_budget(sum(Q ** max(n - i - 1, 0) for i in range(n + 1)), budget)
    vals = np.arange(Q, dtype=np.int64) - 1
    for i0, E, coef, pid in _univariate_charts(polys, n, tab):
        f = n - i0
        if f == 0:
            C = np.full((len(coef), len(polys)), -1, dtype=np.int64)
            for r in range(len(coef)):
                C[r, pid[r]] = coef[r]
            if kernels.count_chart(tab, E, C):
                row = [-1] * (n + 1)
                row[i0] = 0
                out.append(row)
            continue
        counts = kernels.roots_rows(tab, E, coef, pid, len(polys), workers)
        for r in np.nonzero(counts)[0]:
            lead = []
            rr = int(r)
            for _ in range(f - 1):
                lead.append(rr % Q - 1)
                rr //= Q
            lead = lead[::-1]
            # recover the roots in the last coordinate by evaluation
            mask = np.ones(Q, dtype=bool)
            for pi in range(len(polys)):
                sel = pid == pi
                C = coef[sel][:, None]
                m = kernels._zero_mask_numpy(E[sel], C, tab.qm1, tab.zech, tuple(lead), vals[None, :])
                mask &= m
            for v in vals[mask]:
                row = [-1] * i0 + [0] + lead + [int(v)]
                out.append(row)
    return out
