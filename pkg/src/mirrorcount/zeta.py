"""Zeta ratios from count sequences, and q-adic slope checks on their polynomials.

Everything here is exact: Fractions for the series, Python ints for the
fitted polynomials.  Polynomials are coefficient lists, constant term first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .congruence import INF, ord_q
from .errors import ValidationError
from .records import CountSequence


@dataclass(frozen=True)
class ZetaRatio:
    numerator: tuple | None
    denominator: tuple | None
    L: int
    status: str  # saturated | unsaturated | inconclusive | inconsistent
    method: str = "pade"
    note: str = ""

    @property
    def total_degree(self):
        if self.numerator is None:
            return None
        return len(self.numerator) - 1 + len(self.denominator) - 1

    def to_dict(self):
        return {
            "numerator": None if self.numerator is None else [str(c) for c in self.numerator],
            "denominator": None if self.denominator is None else [str(c) for c in self.denominator],
            "L": self.L,
            "status": self.status,
            "method": self.method,
            "note": self.note,
        }


def _trim(poly):
    poly = list(poly)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def _mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def zeta_series(values, L=None):
    """Coefficients z_0..z_L of exp(sum N_k T^k / k), via z_m = (1/m) sum_k N_k z_(m-k)."""
    L = len(values) if L is None else L
    z = [Fraction(1)]
    for m in range(1, L + 1):
        z.append(sum(Fraction(values[k - 1]) * z[m - k] for k in range(1, m + 1)) / m)
    return z


def power_sums(poly, L):
    """s_k = sum alpha^k for poly = prod (1 - alpha T), k = 1..L (Newton's identities)."""
    c = list(poly) + [0] * (L + 1)
    s = []
    for k in range(1, L + 1):
        val = -k * c[k] - sum(c[i] * s[k - i - 1] for i in range(1, k))
        s.append(val)
    return s


def reexpand(numerator, denominator, L):
    """Counts N_1..N_L encoded by numerator / denominator."""
    sn = power_sums(numerator, L)
    sd = power_sums(denominator, L)
    return [d - n for n, d in zip(sn, sd)]


def _solve(rows, rhs):
    """Exact Gaussian elimination; free variables set to zero; None if inconsistent."""
    m = len(rows[0]) if rows else 0
    A = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for col in range(m):
        pr = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][col]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, len(A)):
        if A[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, col in enumerate(piv_cols):
        x[col] = A[i][m]
    return x


def _pade(z, L, max_total):
    """Minimal-total-degree P/Q (constant terms 1) with Q*Z = P mod T^(L+1)."""
    for s in range(0, max_total + 1):
        for dq in range(s, -1, -1):
            dp = s - dq
            rows, rhs = [], []
            for i in range(dp + 1, L + 1):
                rows.append([z[i - j] if i - j >= 0 else 0 for j in range(1, dq + 1)])
                rhs.append(-z[i])
            if dq == 0:
                if any(v != 0 for v in rhs):
                    continue
                qs = []
            else:
                qs = _solve(rows, rhs) if rows else [Fraction(0)] * dq
                if qs is None:
                    continue
            Qp = [Fraction(1)] + qs
            Pp = [sum(Qp[j] * z[i - j] for j in range(len(Qp)) if i - j >= 0) for i in range(dp + 1)]
            return _trim(Pp), _trim(Qp)
    return None


def _as_ints(poly):
    if all(c.denominator == 1 for c in poly):
        return tuple(int(c) for c in poly)
    return None


def fit_ratio(seq: CountSequence) -> ZetaRatio:
    """Rational function exp(sum N_k T^k / k) of minimal total degree matching all L terms."""
    L = seq.L
    if L < 2:
        raise ValidationError("need at least two terms")
    z = zeta_series(seq.values)
    fit = _pade(z, L, L)
    P, Qd = fit
    total = len(P) - 1 + len(Qd) - 1
    Pi, Qi = _as_ints(P), _as_ints(Qd)
    if 2 * total > L:
        return ZetaRatio(None, None, L, "inconclusive", note=f"minimal total degree {total} exceeds L/2")
    if Pi is None or Qi is None:
        return ZetaRatio(None, None, L, "inconclusive", note="fitted coefficients are not integral")
    prev = _pade(zeta_series(seq.values[: L - 1]), L - 1, L - 1)
    status = "saturated" if prev == fit else "unsaturated"
    return ZetaRatio(Pi, Qi, L, status)


def fit_curve(seq: CountSequence, genus: int) -> ZetaRatio:
    """Zeta of a smooth curve: P(T) / ((1 - T)(1 - qT)) with deg P = 2g.

    The coefficients p_1..p_g come from N_1..N_g, the rest from the
    functional equation; the remaining counts are used as a re-expansion check.
    """
    q = seq.q
    if seq.L < genus:
        raise ValidationError("need at least g counts")
    den = (1, -(q + 1), q)
    z = zeta_series(seq.values[:genus], genus)
    prod = _mul(z, list(den))[: genus + 1]
    p = [int(c) for c in prod]
    P = p + [0] * genus
    for j in range(genus):
        P[2 * genus - j] = q ** (genus - j) * p[j]
    expected = reexpand(P, den, seq.L)
    ok = expected == list(seq.values)
    status = "inconsistent" if not ok else ("saturated" if seq.L > genus else "unsaturated")
    return ZetaRatio(tuple(P), den, seq.L, status, method="curve")


def check_root_divisibility(Z: ZetaRatio, p, a=1):
    """ord_q(c_j) >= j for every coefficient of numerator and denominator."""
    if Z.numerator is None:
        return {"verdict": "inconclusive", "failures": []}
    failures = []
    for name, poly in (("numerator", Z.numerator), ("denominator", Z.denominator)):
        for j, c in enumerate(poly):
            if j and ord_q(c, p, a) < j:
                failures.append({"polynomial": name, "j": j, "ord_q": str(ord_q(c, p, a))})
    return {"verdict": "pass" if not failures else "fail", "failures": failures}


def curve_sanity(Z: ZetaRatio, p, a, genus):
    q = p ** a
    P = list(Z.numerator)
    checks = {"degree": len(_trim(P)) - 1 == 2 * genus}
    P = P + [0] * max(0, 2 * genus + 1 - len(P))
    checks["functional_equation"] = all(P[2 * genus - j] == q ** (genus - j) * P[j] for j in range(2 * genus + 1))
    if genus == 1:
        trace = -P[1]
        checks["weil_bound"] = trace * trace <= 4 * q
    checks["verdict"] = "pass" if all(checks.values()) else "fail"
    return checks


def is_squarefree(poly):
    """No repeated factor over Q (gcd with the derivative is constant)."""
    a = [Fraction(c) for c in _trim(poly)]
    if len(a) <= 2:
        return True
    b = [Fraction(i * c) for i, c in enumerate(a)][1:]
    while any(b):
        b = _trim(b)
        a, b = b, _fmod(a, b)
    return len(_trim(a)) == 1


def _fmod(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return a or [Fraction(0)]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple
    slopes: tuple

    @property
    def length(self):
        return len(self.slopes)

    def ordinate(self, x):
        y = self.vertices[0][1]
        for s in self.slopes[:x]:
            y += s
        return y

    def to_dict(self):
        return {"vertices": [[j, str(v)] for j, v in self.vertices], "slopes": [str(s) for s in self.slopes]}


def newton_polygon(poly, p, a=1) -> NewtonPolygon:
    """Lower convex hull of (j, ord_q(c_j)); zero coefficients are skipped."""
    poly = _trim(poly)
    if poly[0] != 1:
        raise ValidationError("constant term must be 1")
    pts = [(j, ord_q(c, p, a)) for j, c in enumerate(poly) if c != 0]
    pts = [(j, v) for j, v in pts if v is not INF]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1) / (x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return NewtonPolygon(tuple((j, Fraction(v)) for j, v in hull), tuple(slopes))
