"""Exact arithmetic in one ambient finite field F_{p^D}.

Every subfield F_{p^d} (d | D) is realised inside the ambient field as the
fixed space of x -> x^(p^d), so membership and Frobenius questions are
answered by construction.  Hot loops never touch :class:`FieldElement`;
they use the Zech-logarithm tables of :class:`SubfieldTables`.
"""
from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from sympy.ntheory import factorint, isprime

from . import modp
from .errors import BudgetError, TowerTooSmallError, ValidationError

DEFAULT_MAX_DEGREE = 64


def _lcm(values):
    return reduce(lambda x, y: x * y // math.gcd(x, y), values, 1)


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def is_irreducible(f, p):
    """Rabin's test for a monic polynomial ``f`` (constant term first) over F_p."""
    f = modp.ptrim(np.asarray(f, dtype=np.int64) % p)
    D = len(f) - 1
    if D < 1:
        return False
    if D == 1:
        return True
    if f[0] == 0:
        return False
    if any(modp.peval(f, r, p) == 0 for r in range(1, p)):
        return False
    frob = _frobenius_matrix(f, p)
    h = np.zeros(D, dtype=np.int64)
    h[1] = 1
    x = h.copy()
    powers = {}
    for i in range(1, D + 1):
        h = modp.matmul(h, frob, p)
        powers[i] = h
    if not np.array_equal(powers[D], x):
        return False
    for r in factorint(D):
        diff = (powers[D // r] - x) % p
        g = modp.pgcd(f, diff, p)
        if len(g) - 1 > 0:
            return False
    return True


def _frobenius_matrix(f, p):
    """Rows are coordinates of x^(p*j) mod f, so v @ M is the p-th power map."""
    D = len(f) - 1
    xp = modp.ppowmod(np.array([0, 1], dtype=np.int64), p, f, p)
    M = np.zeros((D, D), dtype=np.int64)
    cur = np.array([1], dtype=np.int64)
    for j in range(D):
        M[j, : len(cur)] = cur
        cur = modp.pmulmod(cur, xp, f, p)
    return M


def smallest_irreducible(p, D):
    """Lexicographically smallest monic irreducible of degree D, constant term compared first."""
    # for D > 1 a zero constant term means x | f, so that whole block is skipped
    for c0 in (range(p) if D == 1 else range(1, p)):
        for rest in itertools.product(range(p), repeat=D - 1):
            f = np.array((c0,) + rest + (1,), dtype=np.int64)
            if is_irreducible(f, p):
                return tuple(int(c) for c in f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldTower:
    p: int
    a: int
    D: int
    modulus: tuple
    subfield_bases: dict
    frobenius: np.ndarray = field(repr=False)
    _reduction: np.ndarray = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def q(self):
        return self.p ** self.a

    @property
    def order(self):
        return self.p ** self.D

    def contains_degree(self, d):
        return self.D % d == 0

    def degree_for(self, k):
        """F_p-degree of F_{q^k}, checked against the ambient degree."""
        d = self.a * k
        if self.D % d:
            raise TowerTooSmallError(f"ambient degree {self.D} has no subfield of degree {d}")
        return d

    # -- raw coordinate arithmetic ---------------------------------------
    def _mul(self, x, y):
        p = self.p
        c = np.convolve(x, y) % p
        if self.D == 1:
            return c[:1] % p
        low = c[: self.D].copy()
        high = c[self.D:]
        if high.size:
            low = (low + high @ self._reduction[: high.size]) % p
        return low % p

    def _pow(self, x, e):
        result = np.zeros(self.D, dtype=np.int64)
        result[0] = 1
        base = np.asarray(x, dtype=np.int64)
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _frob_power(self, x, d):
        return modp.matmul(x, self.frobenius_power(d), self.p)

    def frobenius_power(self, d):
        key = ("frob", d)
        M = self._cache.get(key)
        if M is None:
            M = modp.matpow(self.frobenius, d, self.p)
            self._cache[key] = M
        return M

    # -- element constructors ------------------------------------------------
    def element(self, coords):
        c = np.zeros(self.D, dtype=np.int64)
        coords = list(coords)
        c[: len(coords)] = coords
        return FieldElement(self, tuple(int(v) for v in c % self.p))

    def scalar(self, c):
        return self.element([c % self.p])

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def generator(self):
        """The class of x in F_p[x]/(modulus)."""
        if self.D == 1:
            return self.scalar(-self.modulus[0])
        return self.element([0, 1])

    def from_subfield_coords(self, d, digits):
        basis = self.subfield_bases[d]
        return FieldElement(self, tuple(int(v) for v in modp.matmul(np.asarray(digits), basis, self.p)))

    def tables(self, d) -> "SubfieldTables":
        if self.D % d:
            raise ValidationError(f"{d} does not divide ambient degree {self.D}")
        with self._lock:
            t = self._cache.get(("tables", d))
            if t is None:
                t = SubfieldTables(self, d)
                self._cache[("tables", d)] = t
        return t

    def descriptor(self):
        return {"p": self.p, "a": self.a, "q": self.q}


class FieldElement:
    __slots__ = ("tower", "c")

    def __init__(self, tower, c):
        self.tower = tower
        self.c = c

    @property
    def coordinates(self):
        return self.c

    def _arr(self):
        return np.array(self.c, dtype=np.int64)

    def _wrap(self, arr):
        return FieldElement(self.tower, tuple(int(v) for v in arr))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, np.integer)):
            return self.tower.scalar(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap((self._arr() + other._arr()) % self.tower.p)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap((-self._arr()) % self.tower.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.tower._mul(self._arr(), other._arr()))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return self._wrap(self.tower._pow(self._arr(), e))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.tower.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def frobenius(self, d=1):
        """x -> x^(p^d)."""
        return self._wrap(self.tower._frob_power(self._arr(), d))

    def is_zero(self):
        return not any(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.tower.scalar(int(other))
        return isinstance(other, FieldElement) and other.tower is self.tower and other.c == self.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"FieldElement({list(self.c)})"

    def min_subfield_degree(self):
        for d in divisors(self.tower.D):
            if self.frobenius(d) == self:
                return d
        return self.tower.D  # pragma: no cover

    def multiplicative_order(self):
        if self.is_zero():
            raise ValidationError("zero has no multiplicative order")
        d = self.min_subfield_degree()
        n = self.tower.p ** d - 1
        order = n
        for r, mult in factorint(n).items():
            for _ in range(mult):
                if (self ** (order // r)) == 1:
                    order //= r
                else:
                    break
        return order


def build_tower(p, a, degrees_needed, max_degree=DEFAULT_MAX_DEGREE):
    """Ambient field F_{p^D} with D = a * lcm(degrees_needed)."""
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ValidationError(f"p={p} is not prime")
    if a < 1:
        raise ValidationError("a must be positive")
    degrees = sorted({int(d) for d in degrees_needed})
    if not degrees or degrees[0] < 1:
        raise ValidationError("degrees_needed must be a nonempty set of positive integers")
    D = a * _lcm(degrees)
    if D > max_degree:
        raise BudgetError(f"ambient degree {D} exceeds budget {max_degree}", size=D, budget=max_degree)
    modulus = smallest_irreducible(p, D)
    f = np.array(modulus, dtype=np.int64)
    if D == 1:
        frob = np.eye(1, dtype=np.int64)
        red = np.zeros((0, 1), dtype=np.int64)
    else:
        frob = _frobenius_matrix(f, p)
        red = np.zeros((D - 1, D), dtype=np.int64)
        cur = (-f[:D]) % p  # x^D
        for i in range(D - 1):
            red[i] = cur
            top = cur[-1]
            cur = np.concatenate([[0], cur[:-1]])
            cur = (cur - top * f[:D]) % p
    bases = {}
    ident = np.eye(D, dtype=np.int64)
    for d in divisors(D):
        M = (modp.matpow(frob, d, p) - ident) % p
        bases[d] = modp.left_kernel(M, p)
    return FieldTower(p=p, a=a, D=D, modulus=modulus, subfield_bases=bases, frobenius=frob, _reduction=red)


def enumerate_subfield(t: FieldTower, d: int):
    """Yield the p^d elements of F_{p^d} in lexicographic basis-coordinate order."""
    if d < 1 or t.D % d:
        raise ValidationError(f"{d} does not divide ambient degree {t.D}")
    basis = t.subfield_bases[d]
    for digits in itertools.product(range(t.p), repeat=d):
        vec = modp.matmul(np.array(digits, dtype=np.int64), basis, t.p)
        yield FieldElement(t, tuple(int(v) for v in vec))


def roots_of_unity(t: FieldTower, d: int, m: int):
    """All x in F_{p^d} with x^m = 1, sorted by subfield index."""
    if m < 1:
        raise ValidationError("m must be >= 1")
    tab = t.tables(d)
    g = math.gcd(m, tab.qm1)
    step = tab.qm1 // g
    idx = sorted(int(tab.exp_idx[j * step]) for j in range(g))
    return [tab.element_of_index(i) for i in idx]


def kummer_solve(t: FieldTower, Q: int, u: FieldElement):
    """One s with s^(Q-1) = u; every solution is s times an element of F_Q^x.

    Returns ``(s, witness)`` where the witness records the cyclic subgroup
    used: s = h^j with h a generator of mu_N, N = ord(u) * (Q - 1).
    """
    if u.is_zero():
        raise ValidationError("u must be nonzero")
    d = round(math.log(Q, t.p))
    if t.p ** d != Q or t.D % d:
        raise ValidationError(f"Q={Q} is not a subfield size of the tower")
    if u == 1:
        return t.one(), {"order_u": 1, "N": Q - 1, "exponent": 0}
    M = t.order - 1
    o = u.multiplicative_order()
    N = o * (Q - 1)
    if M % N:
        raise TowerTooSmallError(f"y^{Q - 1} = u has no solution in F_{{{t.p}^{t.D}}}")
    primes = list(factorint(N))
    cofactor = M // N
    h = None
    for i in itertools.count(2):
        if i >= t.order:
            raise AssertionError("no generator found")  # pragma: no cover
        digits = [(i // t.p ** j) % t.p for j in range(t.D)]
        y = t.element(digits)
        cand = y ** cofactor
        if all(cand ** (N // r) != 1 for r in primes):
            h = cand
            break
    w = h ** (Q - 1)
    acc = t.one()
    for j in range(o):
        if acc == u:
            s = h ** j
            return s, {"order_u": o, "N": N, "exponent": j}
        acc = acc * w
    raise AssertionError("u not in generated subgroup")  # pragma: no cover


class SubfieldTables:
    """Index, logarithm and Zech tables for F_Q = F_{p^d} inside a tower.

    Elements are identified three ways: ambient coordinates, the subfield
    *index* (base-p digits in the subfield basis, first digit most
    significant, matching :func:`enumerate_subfield` order), and the
    discrete *log* to a fixed primitive element (-1 encodes zero).
    """

    def __init__(self, tower: FieldTower, d: int):
        self.tower = tower
        self.d = d
        p = tower.p
        self.p = p
        self.Q = p ** d
        self.qm1 = self.Q - 1
        self.basis = tower.subfield_bases[d]
        _, piv = modp.rref(self.basis, p)
        self._piv = piv
        self._piv_inv = modp.inverse(self.basis[:, piv], p)
        self.weights = np.array([p ** (d - 1 - i) for i in range(d)], dtype=np.int64)

        # primitive element: first index with full order
        primes = list(factorint(self.qm1)) if self.qm1 > 1 else []
        gamma = None
        for idx in range(1, self.Q):
            cand = self.element_of_index(idx)
            if all(cand ** (self.qm1 // r) != 1 for r in primes):
                gamma = cand
                break
        self.gamma = gamma
        # multiplication by gamma as a d x d map on subfield digits
        Mg = np.zeros((d, d), dtype=np.int64)
        for i in range(d):
            row = tower.element(self.basis[i]) * gamma
            Mg[i] = self.digits_of_coords(np.array(row.c))
        digits = np.zeros((self.qm1, d), dtype=np.int64)
        cur = np.zeros(d, dtype=np.int64)
        cur[:] = self.digits_of_coords(np.array(tower.one().c))
        for j in range(self.qm1):
            digits[j] = cur
            cur = (cur @ Mg) % p
        self.exp_digits = digits
        self.exp_idx = digits @ self.weights
        self.log_of_idx = np.full(self.Q, -1, dtype=np.int64)
        self.log_of_idx[self.exp_idx] = np.arange(self.qm1, dtype=np.int64)
        one_digits = digits[0]
        plus_one = (digits + one_digits) % p
        self.zech = self.log_of_idx[plus_one @ self.weights].astype(np.int64)
        self.neg_one_log = 0 if p == 2 else self.qm1 // 2

    # -- conversions ---------------------------------------------------------
    def digits_of_index(self, idx):
        return [(idx // self.p ** (self.d - 1 - i)) % self.p for i in range(self.d)]

    def digits_of_coords(self, coords):
        return modp.matmul(np.asarray(coords, dtype=np.int64)[self._piv], self._piv_inv, self.p)

    def index_of(self, x: FieldElement):
        digits = self.digits_of_coords(np.array(x.c))
        if not np.array_equal(modp.matmul(digits, self.basis, self.p), np.array(x.c)):
            raise ValidationError(f"element does not lie in the subfield of degree {self.d}")
        return int(digits @ self.weights)

    def element_of_index(self, idx):
        return self.tower.from_subfield_coords(self.d, self.digits_of_index(idx))

    def log_of(self, x: FieldElement):
        return int(self.log_of_idx[self.index_of(x)])

    def element_of_log(self, lg):
        if lg < 0:
            return self.tower.zero()
        return self.element_of_index(int(self.exp_idx[lg % self.qm1]))

    def log_of_int(self, c):
        """Log of the prime-field element c*1."""
        return self.log_of(self.tower.scalar(c))

    # -- decomposition of the ambient field over this subfield --------------
    def _over_basis(self):
        key = "_ambient_inv"
        inv = getattr(self, key, None)
        if inv is None:
            t = self.tower
            r = t.D // self.d
            rows = []
            theta = t.generator()
            for i in range(self.d):
                b = t.element(self.basis[i])
                for j in range(r):
                    rows.append((b * theta ** j).c)
            inv = modp.inverse(np.array(rows, dtype=np.int64), self.p)
            setattr(self, key, inv)
        return inv

    def ambient_components(self, x: FieldElement):
        """Logs (in this subfield) of the coefficients of x on the basis 1, theta, ..., theta^(r-1)."""
        r = self.tower.D // self.d
        c = modp.matmul(np.array(x.c, dtype=np.int64), self._over_basis(), self.p)
        c = c.reshape(self.d, r)
        idx = self.weights @ c
        return [int(self.log_of_idx[i]) for i in idx]
