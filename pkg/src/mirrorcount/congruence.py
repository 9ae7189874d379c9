"""q-adic valuations and congruence verdicts on exact count sequences."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .records import CountSequence

INF = math.inf  # ord of 0; compares greater than every Fraction


def ord_p(x, p):
    if x == 0:
        return INF
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def ord_q(x, p, a=1):
    """ord_p(x) / a as an exact Fraction, or INF for x = 0."""
    v = ord_p(x, p)
    return v if v is INF else Fraction(v, a)


def fmt_ord(v):
    return "inf" if v is INF else str(v)


@dataclass
class CongruenceEntry:
    k: int
    n_x: int
    n_quotient: int
    difference: int
    ord_difference: object
    passes: bool
    passes_intermediate: bool
    ord_unit: object = None
    passes_unit: bool | None = None

    def to_dict(self):
        d = {
            "k": self.k,
            "N_X": str(self.n_x),
            "N_quotient": str(self.n_quotient),
            "difference": str(self.difference),
            "ord_q_difference": fmt_ord(self.ord_difference),
            "pass": self.passes,
            "pass_k_minus_c": self.passes_intermediate,
        }
        if self.ord_unit is not None:
            d["ord_q_N_X_minus_1"] = fmt_ord(self.ord_unit)
            d["pass_unit"] = self.passes_unit
        return d


@dataclass
class CongruenceReport:
    p: int
    a: int
    mode: str
    group_order: int
    c: Fraction
    entries: list = field(default_factory=list)

    @property
    def q(self):
        return self.p ** self.a

    @property
    def verdict(self):
        return all(e.passes and (e.passes_unit is not False) for e in self.entries)

    def first_failure(self):
        for e in self.entries:
            if not e.passes or e.passes_unit is False:
                return e.k
        return None

    def verdicts(self):
        v = {"theorem01": all(e.passes for e in self.entries),
             "intermediate_k_minus_c": all(e.passes_intermediate for e in self.entries)}
        if self.mode == "theorem04":
            v["theorem04"] = all(e.passes_unit and e.passes for e in self.entries)
        return v

    def to_dict(self):
        return {
            "q": {"p": self.p, "a": self.a, "q": str(self.q)},
            "mode": self.mode,
            "k_range": [self.entries[0].k, self.entries[-1].k] if self.entries else [],
            "group_order": str(self.group_order),
            "c": str(self.c),
            "entries": [e.to_dict() for e in self.entries],
            "verdicts": self.verdicts(),
        }


def verify_congruence(seq_x: CountSequence, seq_quotient: CountSequence, mode="theorem01", group_order=1):
    """Check ord_q(N_k(X) - N_k(X/G)) >= k for each k (and N_k = 1 mod q^k in theorem04 mode)."""
    if mode not in ("theorem01", "theorem04"):
        raise ValidationError(f"unknown mode {mode!r}")
    if (seq_x.p, seq_x.a) != (seq_quotient.p, seq_quotient.a):
        raise ValidationError("sequences are over different fields")
    if seq_x.L != seq_quotient.L:
        raise ValidationError("sequences cover different k-ranges")
    p, a = seq_x.p, seq_x.a
    c = ord_q(group_order, p, a)
    report = CongruenceReport(p, a, mode, group_order, c)
    for k, (nx, ny) in enumerate(zip(seq_x.values, seq_quotient.values), start=1):
        diff = nx - ny
        v = ord_q(diff, p, a)
        entry = CongruenceEntry(k, nx, ny, diff, v, v >= k, v >= k - c)
        if mode == "theorem04":
            u = ord_q(nx - 1, p, a)
            uq = ord_q(ny - 1, p, a)
            entry.ord_unit = u
            entry.passes_unit = u >= k and uq >= k
        report.entries.append(entry)
    return report
