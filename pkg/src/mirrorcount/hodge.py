"""Primitive middle Hodge numbers of smooth degree-d hypersurfaces in P^n, and polygon comparison."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError


@dataclass(frozen=True)
class HodgeData:
    n: int
    d: int
    primitive: tuple  # primitive[p] = h^{p, w-p}_prim, p = 0..w

    @property
    def weight(self):
        return self.n - 1

    def h(self, p, q):
        if p + q != self.weight or p < 0 or q < 0:
            return 0
        return self.primitive[p]

    def to_dict(self):
        return {"n": self.n, "d": self.d, "weight": self.weight,
                "primitive": [str(h) for h in self.primitive]}


@dataclass(frozen=True)
class HodgePolygon:
    slopes: tuple

    @property
    def length(self):
        return len(self.slopes)

    def ordinate(self, x):
        return sum(self.slopes[:x])

    def to_dict(self):
        return {"slopes": [str(s) for s in self.slopes]}


def _poly_pow(base, e):
    out = [1]
    for _ in range(e):
        nxt = [0] * (len(out) + len(base) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(base):
                nxt[i + j] += x * y
        out = nxt
    return out


def _coefficient(poly, i):
    return poly[i] if 0 <= i < len(poly) else 0


def hodge_numbers_hypersurface(n: int, d: int) -> HodgeData:
    """Coefficients of (1 + t + ... + t^(d-2))^(n+1) at t^((j+1)d - n - 1)."""
    if n < 2 or d < 2:
        raise ValidationError("need n >= 2 and d >= 2")
    gen = _poly_pow([1] * (d - 1), n + 1)
    w = n - 1
    # h^{w-j, j} sits at t^((j+1)d - n - 1); store by the first index
    prim = tuple(_coefficient(gen, (w - p + 1) * d - n - 1) for p in range(w + 1))
    return HodgeData(n, d, prim)


def staircase_count(n: int, d: int, degree: int) -> int:
    """Monomials in n+1 variables of the given degree with every exponent <= d-2.

    These span the Jacobian ring of the Fermat hypersurface in that degree.
    """
    if degree < 0:
        return 0
    return sum(1 for e in itertools.product(range(d - 1), repeat=n + 1) if sum(e) == degree)


def hodge_numbers_staircase(n: int, d: int) -> HodgeData:
    w = n - 1
    prim = tuple(staircase_count(n, d, (w - p + 1) * d - n - 1) for p in range(w + 1))
    return HodgeData(n, d, prim)


def hodge_polygon(H: HodgeData) -> HodgePolygon:
    slopes = []
    for p, h in enumerate(H.primitive):
        slopes.extend([p] * h)
    return HodgePolygon(tuple(slopes))


def curve_hodge_polygon(genus: int) -> HodgePolygon:
    """Full H^1 polygon of a genus-g curve: slopes 0 and 1, each g times."""
    return HodgePolygon((0,) * genus + (1,) * genus)


def newton_above_hodge(Np, Hp) -> dict:
    """Newton ordinate >= Hodge ordinate at each integer abscissa, equal endpoints."""
    if Np.length != Hp.length:
        raise ValidationError(f"polygon lengths differ: {Np.length} vs {Hp.length}")
    gaps = []
    ok = True
    for x in range(Np.length + 1):
        nx = sum(Np.slopes[:x], Fraction(0))
        hx = Fraction(Hp.ordinate(x))
        gaps.append(nx - hx)
        if nx < hx:
            ok = False
    if gaps and gaps[-1] != 0:
        ok = False
    return {"verdict": "pass" if ok else "fail", "gaps": [str(g) for g in gaps]}
