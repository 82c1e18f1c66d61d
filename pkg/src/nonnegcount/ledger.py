"""Ledger records: one exact comparison per entry, serializable to JSON."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction

_RELATIONS = {
    "==": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
    "<=": operator.le,
    "<": operator.lt,
}


def json_number(x) -> int | str:
    """Integers stay integers; other rationals become "num/den"."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Check:
    """``lhs relation rhs``, evaluated exactly.

    ``condition`` is None for unconditional statements; otherwise it records
    whether the hypothesis held.  A statement whose hypothesis fails passes
    vacuously.
    """

    id: str
    anchor: str
    lhs: Fraction
    rhs: Fraction
    relation: str
    condition: bool | None = None

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "lhs", Fraction(self.lhs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    @property
    def passed(self) -> bool:
        return self.condition is False or self.holds

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "paper_anchor": self.anchor,
            "lhs": json_number(self.lhs),
            "rhs": json_number(self.rhs),
            "relation": self.relation,
            "pass": self.passed,
        }
        if self.condition is not None:
            out["condition_held"] = self.condition
        return out


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


def by_id(checks) -> dict[str, Check]:
    return {c.id: c for c in checks}
