from __future__ import annotations

from dataclasses import dataclass, field

PROVENANCES = (
    "naive-enumeration",
    "last-coordinate-roots",
    "diagonal-convolution",
    "twisted-chart",
    "brute-twisted",
    "burnside",
    "orbit-oracle",
    "closed-form",
)


@dataclass(frozen=True)
class CountRecord:
    k: int
    value: int
    provenance: str

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.value < 0:
            raise ValueError("counts are nonnegative")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class CountSequence:
    """Exact counts N_1..N_L over F_{q^k}, k contiguous from 1."""

    p: int
    a: int
    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @classmethod
    def from_records(cls, p, a, records):
        recs = sorted(records, key=lambda r: r.k)
        if [r.k for r in recs] != list(range(1, len(recs) + 1)):
            raise ValueError("count records must cover k = 1..L contiguously")
        return cls(p, a, tuple(r.value for r in recs))

    @property
    def q(self):
        return self.p ** self.a

    @property
    def L(self):
        return len(self.values)

    def entries(self):
        return list(enumerate(self.values, start=1))

    def __getitem__(self, k):
        """N_k, 1-based."""
        return self.values[k - 1]

    def __sub__(self, other):
        if (self.p, self.a, self.L) != (other.p, other.a, other.L):
            raise ValueError("sequences must share q and length")
        return CountSequence(self.p, self.a, tuple(x - y for x, y in zip(self.values, other.values)))

    def prefix(self, L):
        return CountSequence(self.p, self.a, self.values[:L])
