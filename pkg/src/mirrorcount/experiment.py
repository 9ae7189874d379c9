"""Experiment configs and the count pipelines shared by the CLI and the test suite.

Every field element that enters a config is given as an integer vector, so
configs, cache keys and reports do not depend on how the ambient field
happens to be represented.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache, reduce
from itertools import product

from sympy import isprime

from . import groups, varieties
from .errors import ValidationError
from .ff import FieldTower, build_tower, enumerate_subfield, smallest_irreducible
from .records import CountRecord, CountSequence

ENGINE_VERSION = "mirrorcount-1"
FAMILIES = ("dwork", "pn", "quadric", "diagonal")
QUOTIENT_METHODS = ("burnside", "orbit", "both")
ASSUMPTIONS = ["smooth", "lifting-hypothesis-assumed"]


@dataclass(frozen=True)
class ExperimentConfig:
    p: int
    a: int = 1
    n: int = 2
    family: str = "dwork"
    lam: tuple = (0,)
    coeffs: tuple | None = None
    degree: int | None = None
    kmax: int = 1
    group: str = "corollary03"
    strategy: str = "auto"
    quotient_method: str = "burnside"
    workers: int = 1
    budget: int = varieties.DEFAULT_BUDGET

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise ValidationError(f"p={self.p} is not prime")
        if self.a < 1:
            raise ValidationError("a must be >= 1")
        if self.kmax < 1:
            raise ValidationError("kmax must be >= 1")
        if self.budget <= 0:
            raise ValidationError("budget must be positive")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.quotient_method not in QUOTIENT_METHODS:
            raise ValidationError(f"unknown quotient method {self.quotient_method!r}")
        if self.strategy != "auto" and self.strategy not in varieties.STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        object.__setattr__(self, "lam", _vector(self.lam, self.p, self.a))
        if self.coeffs is not None:
            object.__setattr__(self, "coeffs", tuple(_vector(c, self.p, self.a) for c in self.coeffs))
        parse_group(self.group, self.n)

    @property
    def q(self):
        return self.p ** self.a

    @property
    def equation_degree(self):
        if self.family == "dwork":
            return self.n + 1
        if self.family == "quadric":
            return 2
        if self.family == "diagonal":
            return self.degree or self.n + 1
        return 1

    def coefficient_vectors(self):
        if self.coeffs is not None:
            if len(self.coeffs) != self.n + 1:
                raise ValidationError(f"need {self.n + 1} coefficients")
            return self.coeffs
        one = (1,) + (0,) * (self.a - 1)
        return (one,) * (self.n + 1)

    def equation_terms(self):
        """Tower-independent description: [exponents, coefficient vector] pairs."""
        n1 = self.n + 1
        if self.family == "pn":
            return []
        if self.family == "dwork":
            d = self.n + 1
            coeffs = ((1,) + (0,) * (self.a - 1),) * n1
        else:
            d = self.equation_degree
            coeffs = self.coefficient_vectors()
        terms = []
        for i, c in enumerate(coeffs):
            if any(c):
                e = [0] * n1
                e[i] = d
                terms.append([e, list(c)])
        if self.family == "dwork" and any(self.lam):
            terms.append([[1] * n1, list(self.lam)])
        return sorted(terms)

    def report_config(self):
        """Config fields that determine the results (worker count excluded)."""
        d = asdict(self)
        d.pop("workers")
        d["lam"] = list(self.lam)
        d["coeffs"] = None if self.coeffs is None else [list(c) for c in self.coeffs]
        d["q"] = str(self.q)
        d["budget"] = str(self.budget)
        return d

    def replace(self, **kw):
        d = asdict(self)
        d.update(kw)
        return ExperimentConfig(**d)


def _vector(v, p, a):
    if isinstance(v, int):
        v = (v,)
    v = tuple(int(c) % p if a > 1 else int(c) % (p ** a) for c in v)
    if len(v) > a:
        raise ValidationError(f"coefficient vector {v} is longer than a={a}")
    return v + (0,) * (a - len(v))


def parse_scalar_text(text, p, a):
    """"3" -> (3,) for a = 1; "1,1" -> (1, 1) for a = 2."""
    try:
        parts = [int(s) for s in str(text).split(",") if s.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"cannot parse field element {text!r}") from exc
    if not parts:
        raise ValidationError("empty field element")
    if a == 1 and len(parts) != 1:
        raise ValidationError("for a = 1 give a single integer")
    return _vector(tuple(parts), p, a)


# -- field and variety construction ------------------------------------------

@lru_cache(maxsize=64)
def tower_for(p, a, degrees):
    return build_tower(p, a, degrees)


def _base_root(t: FieldTower):
    """A root in F_q of the smallest monic irreducible of degree a over F_p."""
    f = smallest_irreducible(t.p, t.a)
    key = ("base-root",)
    if key in t._cache:
        return t._cache[key]
    for x in enumerate_subfield(t, t.a):
        acc = t.zero()
        for c in reversed(f):
            acc = acc * x + c
        if acc.is_zero():
            t._cache[key] = x
            return x
    raise AssertionError("no root of the defining polynomial")  # pragma: no cover


def embed(t: FieldTower, vec):
    """sum c_i alpha^i, alpha a root of the degree-a defining polynomial of F_q."""
    vec = [int(c) for c in vec]
    if t.a == 1:
        return t.scalar(vec[0])
    alpha = _base_root(t)
    acc = t.zero()
    for c in reversed(vec):
        acc = acc * alpha + c
    return acc


def make_variety(cfg: ExperimentConfig, t: FieldTower):
    if cfg.family == "pn":
        return varieties.ProjectiveSpace(cfg.n, t)
    if cfg.family == "dwork":
        return varieties.dwork(cfg.n, embed(t, cfg.lam), t)
    coeffs = [embed(t, c) for c in cfg.coefficient_vectors()]
    return varieties.diagonal(coeffs, cfg.equation_degree, t)


def is_smooth(cfg: ExperimentConfig):
    if cfg.family == "pn":
        return True
    t = tower_for(cfg.p, cfg.a, (1,))
    if cfg.family == "dwork":
        return varieties.is_smooth_dwork(cfg.n, embed(t, cfg.lam), t)
    # a diagonal form is smooth iff p does not divide d and no coefficient vanishes
    return cfg.equation_degree % cfg.p != 0 and all(any(c) for c in cfg.coefficient_vectors())


# -- groups --------------------------------------------------------------

def parse_group(spec, n):
    """"corollary03" | "trivial" | "perm:1,0,2;1,2,0" -> (kind, generators)."""
    if spec in ("corollary03", "trivial"):
        return spec, ()
    if spec.startswith("perm:"):
        gens = []
        for part in spec[5:].split(";"):
            perm = tuple(int(s) for s in part.split(","))
            if sorted(perm) != list(range(n + 1)):
                raise ValidationError(f"{part!r} is not a permutation of 0..{n}")
            gens.append(perm)
        if not gens:
            raise ValidationError("perm group needs generators")
        return "perm", tuple(gens)
    raise ValidationError(f"unknown group spec {spec!r}")


def _perm_closure(gens, size):
    ident = tuple(range(size))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = tuple(g[h[i]] for i in range(size))
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return seen


def _perm_order(perm):
    m, cur, ident = 1, perm, tuple(range(len(perm)))
    while cur != ident:
        cur = tuple(perm[cur[i]] for i in range(len(perm)))
        m += 1
    return m


def group_exponent_bound(cfg: ExperimentConfig):
    """A multiple of every element order, known before the tower is built."""
    kind, gens = parse_group(cfg.group, cfg.n)
    if kind == "trivial":
        return 1
    if kind == "corollary03":
        return math.gcd(cfg.n + 1, cfg.q - 1)
    orders = [_perm_order(g) for g in _perm_closure(gens, cfg.n + 1)]
    return reduce(lambda x, y: x * y // math.gcd(x, y), orders, 1)


def make_group(cfg: ExperimentConfig, X):
    kind, gens = parse_group(cfg.group, cfg.n)
    if kind == "trivial":
        return groups.trivial_group(X)
    if kind == "corollary03":
        return groups.corollary_group(cfg.n, X.tower, X)
    return groups.permutation_group(gens, X, name=cfg.group)


# -- count pipelines -------------------------------------------------------

def auto_strategy(X):
    if isinstance(X, varieties.ProjectiveSpace):
        return "naive"
    if X.is_diagonal():
        return "diagonal"
    return "naive" if X.n <= 2 else "roots"


def compute_count(cfg: ExperimentConfig, k, workers=None) -> CountRecord:
    t = tower_for(cfg.p, cfg.a, (k,))
    X = make_variety(cfg, t)
    strategy = auto_strategy(X) if cfg.strategy == "auto" else cfg.strategy
    return varieties.count_points(X, k, strategy, workers or cfg.workers, cfg.budget)


def compute_quotient(cfg: ExperimentConfig, k, method="burnside", workers=None) -> CountRecord:
    m = group_exponent_bound(cfg)
    t = tower_for(cfg.p, cfg.a, tuple(sorted({k, k * m})))
    X = make_variety(cfg, t)
    A = make_group(cfg, X)
    if method == "orbit":
        return groups.orbit_oracle_count(A, k, cfg.budget)
    return groups.burnside_quotient_count(A, k, workers=workers or cfg.workers, budget=cfg.budget)


def compute_twisted(cfg: ExperimentConfig, scalings, permutation, k, method="auto") -> CountRecord:
    """Lambda(g F^k) for g given by coefficient vectors and a permutation."""
    perm = tuple(permutation) if permutation else tuple(range(cfg.n + 1))
    m = _perm_order(perm) * (cfg.q - 1)
    t = tower_for(cfg.p, cfg.a, tuple(sorted({k, k * m})))
    X = make_variety(cfg, t)
    g = groups.GroupElement(tuple(embed(t, _vector(s, cfg.p, cfg.a)) for s in scalings), perm)
    if len(g.scalings) != cfg.n + 1:
        raise ValidationError(f"need {cfg.n + 1} scalings")
    if any(z.is_zero() for z in g.scalings):
        raise ValidationError("scalings must be nonzero")
    return groups.lambda_twisted(X, g, k, method=method, workers=cfg.workers, budget=cfg.budget)


def sequence(p, a, records):
    return CountSequence.from_records(p, a, records)


def all_scalars(p, a):
    """Every element of F_q as a coefficient vector, in lexicographic order."""
    return list(product(range(p), repeat=a))


def config_from_dict(d: dict) -> ExperimentConfig:
    """Inverse of ``ExperimentConfig.report_config``."""
    d = dict(d)
    d.pop("q", None)
    d["budget"] = int(d["budget"])
    d["lam"] = tuple(d["lam"])
    if d.get("coeffs") is not None:
        d["coeffs"] = tuple(tuple(c) for c in d["coeffs"])
    return ExperimentConfig(**d)


def group_order(cfg: ExperimentConfig):
    m = group_exponent_bound(cfg)
    t = tower_for(cfg.p, cfg.a, tuple(sorted({1, m})))
    return make_group(cfg, make_variety(cfg, t)).order
