"""Monomial group actions, twisted fixed-point counts and quotient counts.

A group element scales coordinates by elements of F_q and then moves
coordinate i to position perm[i]:  (g.x)[perm[i]] = zeta_i * x_i.
Composition is g*h = "apply h, then g".
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import product

import numpy as np

from . import kernels
from .errors import BudgetError, ConsistencyError, ValidationError
from .ff import FieldTower, kummer_solve, roots_of_unity
from .records import CountRecord
from .varieties import DEFAULT_BUDGET, ProjectiveSpace, _chart_terms, _check_budget, naive_cells, points

MAX_GROUP_ORDER = 4096


@dataclass(frozen=True, eq=False)
class GroupElement:
    scalings: tuple
    permutation: tuple | None = None

    def __post_init__(self):
        if any(z.is_zero() for z in self.scalings):
            raise ValidationError("scalings must be nonzero")
        perm = self.permutation
        if perm is None:
            perm = tuple(range(len(self.scalings)))
        perm = tuple(int(i) for i in perm)
        if sorted(perm) != list(range(len(self.scalings))):
            raise ValidationError(f"{perm} is not a permutation")
        object.__setattr__(self, "permutation", perm)

    @property
    def tower(self) -> FieldTower:
        return self.scalings[0].tower

    @property
    def size(self):
        return len(self.scalings)

    def is_diagonal(self):
        return self.permutation == tuple(range(self.size))

    def is_identity(self):
        return self.is_diagonal() and all(z == 1 for z in self.scalings)

    def is_scalar(self):
        return self.is_diagonal() and all(z == self.scalings[0] for z in self.scalings)

    def __mul__(self, other: "GroupElement"):
        perm = tuple(self.permutation[other.permutation[i]] for i in range(self.size))
        sc = tuple(self.scalings[other.permutation[i]] * other.scalings[i] for i in range(self.size))
        return GroupElement(sc, perm)

    def __call__(self, point):
        out = [None] * self.size
        for i, (z, x) in enumerate(zip(self.scalings, point)):
            out[self.permutation[i]] = z * x
        return tuple(out)

    def key(self):
        base = self.tower.tables(self.tower.a)
        return (tuple(base.index_of(z) for z in self.scalings), self.permutation)

    def projective_key(self):
        """Equal for elements that differ by a scalar tuple."""
        base = self.tower.tables(self.tower.a)
        z0 = self.scalings[0]
        return (tuple(base.index_of(z / z0) for z in self.scalings), self.permutation)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def order(self):
        """Order as a linear map of affine space."""
        ident = identity(self.tower, self.size)
        g, m = self, 1
        while g != ident:
            g = g * self
            m += 1
        return m

    def inverse(self):
        return self ** (self.order() - 1)

    def __pow__(self, e):
        result = identity(self.tower, self.size)
        for _ in range(e):
            result = result * self
        return result

    def describe(self):
        base = self.tower.tables(self.tower.a)
        return {"scalings": [base.index_of(z) for z in self.scalings], "permutation": list(self.permutation)}

    def __repr__(self):
        d = self.describe()
        return f"GroupElement({d['scalings']}, perm={d['permutation']})"


def identity(tower, size):
    return GroupElement(tuple(tower.one() for _ in range(size)))


def _substitute(terms, g):
    """Terms of F(g.x)."""
    out = {}
    for exps, c in terms:
        new = tuple(exps[g.permutation[i]] for i in range(g.size))
        coef = c
        for i, z in enumerate(g.scalings):
            e = exps[g.permutation[i]]
            if e:
                coef = coef * z ** e
        out[new] = coef
    return out


@dataclass(frozen=True, eq=False)
class GroupAction:
    elements: tuple
    target: object
    exponent: int = 0
    name: str = ""
    _orders: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        els = tuple(self.elements)
        object.__setattr__(self, "elements", els)
        if not els:
            raise ValidationError("group must be nonempty")
        if len(els) > MAX_GROUP_ORDER:
            raise BudgetError(f"group order {len(els)} exceeds {MAX_GROUP_ORDER}", size=len(els), budget=MAX_GROUP_ORDER)
        n1 = self.target.n + 1
        if any(g.size != n1 for g in els):
            raise ValidationError("group elements must act on the target's coordinates")
        keys = {g.key() for g in els}
        if len(keys) != len(els):
            raise ValidationError("duplicate group elements")
        tower = els[0].tower
        if identity(tower, n1).key() not in keys:
            raise ValidationError("group lacks the identity")
        for g in els:
            for h in els:
                if (g * h).key() not in keys:
                    raise ValidationError("group is not closed under composition")
        for g in els:
            if not any((g * h).is_identity() for h in els):
                raise ValidationError("group lacks inverses")
        F = {e: c for e, c in self.target.terms}
        for g in els:
            if F and not _proportional(F, _substitute(self.target.terms, g)):
                raise ValidationError(f"{g} does not preserve the hypersurface")
        orders = {g.key(): g.order() for g in els}
        self._orders.update(orders)
        object.__setattr__(self, "exponent", reduce(lambda x, y: x * y // math.gcd(x, y), orders.values(), 1))

    @property
    def order(self):
        return len(self.elements)

    def element_order(self, g):
        return self._orders[g.key()]


def _proportional(F, G):
    if set(F) != set(G):
        return False
    ratio = None
    for e in F:
        r = G[e] / F[e]
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return True


def corollary_group(n, t, target=None):
    """All (zeta_0..zeta_n) with zeta_i^(n+1) = 1 in F_q and prod zeta_i = 1."""
    mu = roots_of_unity(t, t.a, n + 1)
    els = []
    for head in product(mu, repeat=n):
        prod = t.one()
        for z in head:
            prod = prod * z
        els.append(GroupElement(tuple(head) + (prod.inverse(),)))
    if target is None:
        target = ProjectiveSpace(n, t)
    return GroupAction(tuple(els), target, name="corollary03")


def trivial_group(target):
    return GroupAction((identity(target.tower, target.n + 1),), target, name="trivial")


def permutation_group(generators, target, name="permutation"):
    """Closure of the given coordinate permutations."""
    t = target.tower
    size = target.n + 1
    gens = [GroupElement(tuple(t.one() for _ in range(size)), tuple(g)) for g in generators]
    els = {identity(t, size).key(): identity(t, size)}
    frontier = list(els.values())
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g * h
                if gh.key() not in els:
                    els[gh.key()] = gh
                    nxt.append(gh)
                    if len(els) > MAX_GROUP_ORDER:
                        raise BudgetError("group order exceeds cap", size=len(els), budget=MAX_GROUP_ORDER)
        frontier = nxt
    ordered = sorted(els.values(), key=lambda g: g.key())
    return GroupAction(tuple(ordered), target, name=name)


# -- twisted fixed points ----------------------------------------------------

def lambda_twisted(X, g, k, method="auto", workers=1, budget=DEFAULT_BUDGET) -> CountRecord:
    """Lambda(g F^k): geometric points x with g(F^k(x)) = x.

    ``method``: "chart" (diagonal g, Kummer cosets over F_{q^k}), "brute"
    (enumerate X over F_{q^(k*m)}), "closed-form" (X = P^n only; a linear
    twist of P^n has #P^n(F_{q^k}) fixed points), or "auto".
    """
    if method == "auto":
        if isinstance(X, ProjectiveSpace):
            method = "closed-form"
        elif g.is_diagonal():
            method = "chart"
        else:
            method = "brute"
    if method == "closed-form":
        if not isinstance(X, ProjectiveSpace):
            raise ValidationError("closed-form twisted count applies to projective space only")
        Q = X.q ** k
        return CountRecord(k, sum(Q ** i for i in range(X.n + 1)), "closed-form")
    if method == "chart":
        if not g.is_diagonal():
            raise ValidationError("chart path needs a diagonal element")
        return CountRecord(k, _lambda_chart(X, g, k, workers, budget), "twisted-chart")
    if method == "brute":
        return CountRecord(k, _lambda_brute(X, g, k, budget), "brute-twisted")
    raise ValidationError(f"unknown method {method!r}")


def _lambda_chart(X, g, k, workers, budget):
    t = X.tower
    n = X.n
    d = t.degree_for(k)
    tab = t.tables(d)
    Q = tab.Q
    _check_budget(naive_cells(n, Q), budget)
    zeta = g.scalings
    solved = {}
    total = 0
    for i0 in range(n + 1):
        s = []
        for i in range(i0 + 1, n + 1):
            u = zeta[i0] / zeta[i]
            if u not in solved:
                solved[u] = kummer_solve(t, Q, u)[0]
            s.append(solved[u])
        kept = _chart_terms(X.terms, n, i0)
        if not kept:
            total += Q ** (n - i0)
            continue
        rows = []
        for exps, c in kept:
            beta = c
            for si, e in zip(s, exps):
                if e:
                    beta = beta * si ** e
            rows.append(tab.ambient_components(beta))
        C = np.array(rows, dtype=np.int64)
        C = C[:, (C >= 0).any(axis=0)]
        E = np.array([e for e, _ in kept], dtype=np.int64).reshape(len(kept), n - i0)
        total += kernels.count_chart(tab, E, C, workers)
    return total


def _log_mul(a, b, qm1):
    return np.where((a < 0) | (b < 0), -1, (a + b) % qm1)


def _twisted_images(pts, g, k, q, tab):
    """Logs of g(F^k(x)) for each row of ``pts`` (not normalised)."""
    Q = q ** k
    qm1 = tab.qm1
    fr = np.where(pts < 0, -1, (pts * (Q % qm1)) % qm1) if qm1 > 1 else pts.copy()
    return _apply(fr, g, tab)


def _apply(pts, g, tab):
    qm1 = tab.qm1
    out = np.empty_like(pts)
    for i, z in enumerate(g.scalings):
        lz = tab.log_of(z)
        col = pts[:, i]
        out[:, g.permutation[i]] = np.where(col < 0, -1, (col + lz) % qm1) if qm1 > 1 else col
    return out


def _same_projective(x, y, qm1):
    """Row-wise test that x and y span the same line, by cross products."""
    ok = np.ones(x.shape[0], dtype=bool)
    m = x.shape[1]
    for i in range(m):
        for j in range(i + 1, m):
            ok &= _log_mul(y[:, i], x[:, j], qm1) == _log_mul(y[:, j], x[:, i], qm1)
    return ok


def _lambda_brute(X, g, k, budget):
    t = X.tower
    m = g.order()
    d = t.degree_for(k * m)
    tab = t.tables(d)
    _check_budget(naive_cells(X.n, tab.Q), budget)
    pts = points(X, tab, budget)
    img = _twisted_images(pts, g, k, X.q, tab)
    return int(_same_projective(pts, img, tab.qm1).sum())


# -- quotient counts -------------------------------------------------------

def burnside_from_lambdas(values, order):
    total = sum(values)
    if total % order:
        raise ConsistencyError(f"sum of twisted counts {total} is not divisible by |G| = {order}")
    return total // order


def burnside_quotient_count(A: GroupAction, k, lambda_fn=None, workers=1, dedupe_scalars=True,
                            method="auto", budget=DEFAULT_BUDGET) -> CountRecord:
    """(1/|G|) * sum over g of Lambda(g F^k)."""
    if lambda_fn is None:
        def lambda_fn(g, k):
            return lambda_twisted(A.target, g, k, method=method, budget=budget).value
    classes = {}
    for g in A.elements:
        key = g.projective_key() if dedupe_scalars else g.key()
        classes.setdefault(key, []).append(g)
    reps = [members[0] for members in classes.values()]
    if workers > 1 and len(reps) > 1:
        with ThreadPoolExecutor(workers) as ex:
            lam = list(ex.map(lambda g: lambda_fn(g, k), reps))
    else:
        lam = [lambda_fn(g, k) for g in reps]
    values = []
    for v, members in zip(lam, classes.values()):
        values.extend([v] * len(members))
    return CountRecord(k, burnside_from_lambdas(values, A.order), "burnside")


@dataclass(frozen=True)
class OrbitRecord:
    orbit: frozenset
    stabilizer_size: int
    frobenius_stable: bool


def _normalise(pts, qm1):
    out = pts.copy()
    lead = np.argmax(pts >= 0, axis=1)
    shift = pts[np.arange(len(pts)), lead]
    nz = out >= 0
    out[nz] = (out[nz] - np.broadcast_to(shift[:, None], out.shape)[nz]) % max(qm1, 1)
    return out


def _row_index(pts, Q):
    """Map normalised rows back to their position in ``pts``."""
    width = pts.shape[1]
    if Q ** width < 2 ** 62:
        weights = Q ** np.arange(width, dtype=np.int64)
        keys = (pts + 1) @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]

        def lookup(rows):
            want = (rows + 1) @ weights
            pos = np.minimum(np.searchsorted(sorted_keys, want), len(sorted_keys) - 1)
            if len(sorted_keys) == 0 or np.any(sorted_keys[pos] != want):
                raise ConsistencyError("group image left the point set")
            return order[pos]
        return lookup
    index = {tuple(r): i for i, r in enumerate(pts.tolist())}

    def lookup(rows):
        try:
            return np.array([index[tuple(r)] for r in rows.tolist()], dtype=np.int64)
        except KeyError as exc:
            raise ConsistencyError("group image left the point set") from exc
    return lookup


def orbit_oracle(A: GroupAction, k, budget=DEFAULT_BUDGET, records=True):
    """Count F^k-stable G-orbits of geometric points, by explicit orbit partition.

    Returns ``(count, orbits)``; ``orbits`` is None when ``records`` is false.
    """
    X = A.target
    t = X.tower
    e = A.exponent
    d = t.degree_for(k * e)
    tab = t.tables(d)
    _check_budget(naive_cells(X.n, tab.Q), budget)
    pts = points(X, tab, budget)
    qm1 = tab.qm1
    lookup = _row_index(pts, tab.Q)
    images = np.empty((len(A.elements), len(pts)), dtype=np.int64)
    for gi, g in enumerate(A.elements):
        images[gi] = lookup(_normalise(_apply(pts, g, tab), qm1))
    Q = X.q ** k
    fr = _normalise(np.where(pts < 0, -1, (pts * (Q % max(qm1, 1))) % max(qm1, 1)), qm1)
    frob = lookup(fr)
    canon = images.min(axis=0)
    # orbit-stabilizer, for every point at once
    sizes = np.bincount(canon, minlength=len(pts))[canon]
    stabs = (images == np.arange(len(pts))).sum(axis=0)
    if np.any(sizes * stabs != A.order):
        raise ConsistencyError("orbit-stabilizer identity failed")
    reps = np.nonzero(canon == np.arange(len(pts)))[0]
    stable = canon[frob[reps]] == reps
    count = int(stable.sum())
    if not records:
        return count, None
    to_idx = lambda v: int(tab.exp_idx[v]) if v >= 0 else 0  # noqa: E731
    orbits = []
    for r, st in zip(reps.tolist(), stable.tolist()):
        members = set(images[:, r].tolist())
        orbit = frozenset(tuple(to_idx(v) for v in pts[j]) for j in members)
        orbits.append(OrbitRecord(orbit, int(stabs[r]), bool(st)))
    return count, orbits


def orbit_oracle_count(A, k, budget=DEFAULT_BUDGET) -> CountRecord:
    return CountRecord(k, orbit_oracle(A, k, budget, records=False)[0], "orbit-oracle")
