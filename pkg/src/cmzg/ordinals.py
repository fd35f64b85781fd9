"""Ordinals below omega^2, enough for ranks, dimensions and radical layers here."""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class SmallOrdinal:
    """``omega * a + b``."""

    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("ordinal coefficients must be natural")

    @classmethod
    def finite(cls, n: int) -> "SmallOrdinal":
        return cls(0, n)

    def __lt__(self, other):
        return (self.a, self.b) < (other.a, other.b)

    def succ(self) -> "SmallOrdinal":
        return SmallOrdinal(self.a, self.b + 1)

    def __add__(self, other: "SmallOrdinal") -> "SmallOrdinal":
        # ordinal addition: a finite tail is absorbed by a following omega
        if other.a > 0:
            return SmallOrdinal(self.a + other.a, other.b)
        return SmallOrdinal(self.a, self.b + other.b)

    @property
    def is_finite(self) -> bool:
        return self.a == 0

    def __str__(self):
        if self.a == 0:
            return str(self.b)
        head = "omega" if self.a == 1 else f"omega*{self.a}"
        return head if self.b == 0 else f"{head}+{self.b}"

    @classmethod
    def parse(cls, s: str) -> "SmallOrdinal":
        t = s.replace(" ", "").replace("ω", "omega")
        if t.isdigit():
            return cls(0, int(t))
        head, _, tail = t.partition("+")
        if head == "omega":
            a = 1
        elif head.startswith("omega*"):
            a = int(head[6:])
        else:
            raise ValueError(f"cannot parse ordinal {s!r}")
        return cls(a, int(tail) if tail else 0)


OMEGA = SmallOrdinal(1, 0)
