"""Ordinal displacement machinery and party-objective comparisons.

Single-peakedness pins down each party's ranking on either side of its
ideal point but says nothing about comparisons across sides.  This
module provides the cross-side agreement check (do both parties rank
every "a steps right" vs "b steps left" pair the same way?), two
constructors that produce cross-side agreement by design, and the
lexicographic objective parties use to compare profiles: electoral
outcome first, own-platform ideology as the tie-break.
"""

import enum
from dataclasses import dataclass
from typing import Mapping

from .model import (
    Instance,
    Outcome,
    Party,
    Profile,
    ValidationError,
    WeakOrder,
    is_single_peaked,
)

__all__ = [
    "Side",
    "Displacement",
    "CrossSideWitness",
    "Comparison",
    "displace",
    "check_cross_side_agreement",
    "from_symmetric_utility",
    "from_common_shape",
    "outcome_class",
    "compare_for_party",
]


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Displacement:
    """A signed step count away from a party's ideal point."""

    side: Side
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("displacement steps must be >= 1")


@dataclass(frozen=True)
class CrossSideWitness:
    """Smallest cross-side pair on which the parties disagree.

    ``direction`` names the failed comparison: ``"right-vs-left"`` means
    the parties disagree on whether ``a`` steps right is at least as
    good as ``b`` steps left; ``"left-vs-right"`` the converse.
    """

    a: int
    b: int
    direction: str


class Comparison(enum.Enum):
    BETTER = 1
    EQUAL = 0
    WORSE = -1


def displace(inst: Instance, party: Party | str, d: Displacement) -> int | None:
    """Policy ``d.steps`` to the given side of the party's ideal, or
    ``None`` when that index falls off the line."""
    ideal = inst.party_spec(party).ideal
    j = ideal + d.steps if d.side is Side.RIGHT else ideal - d.steps
    return j if j in inst.space else None


def check_cross_side_agreement(
    inst: Instance,
) -> tuple[bool, CrossSideWitness | None]:
    """Do the two parties rank every cross-side pair the same way?

    A pair ``(a, b)`` is in scope only when all four displaced policies
    (``a`` right and ``b`` left of each ideal) exist on the line.  On
    disagreement, returns the lexicographically smallest violating pair
    and which of the two comparisons broke.
    """
    m = inst.space.size
    p = inst.party_a.ideal
    q = inst.party_b.ideal
    ta = inst.party_a.order.tier_index
    tb = inst.party_b.order.tier_index
    for a in range(1, m - q + 1):
        for b in range(1, p):
            right_ge_left_a = ta[p + a] <= ta[p - b]
            right_ge_left_b = tb[q + a] <= tb[q - b]
            if right_ge_left_a != right_ge_left_b:
                return False, CrossSideWitness(a, b, "right-vs-left")
            left_ge_right_a = ta[p - b] <= ta[p + a]
            left_ge_right_b = tb[q - b] <= tb[q + a]
            if left_ge_right_a != left_ge_right_b:
                return False, CrossSideWitness(a, b, "left-vs-right")
    return True, None


def from_symmetric_utility(m: int, ideal: int) -> WeakOrder:
    """Weak order ranking policies by distance from ``ideal``.

    Equidistant policies share a tier.  This is the order induced by
    any strictly decreasing function of distance, so no such function
    needs to be supplied.
    """
    if not 1 <= ideal <= m:
        raise ValidationError("index-out-of-range", f"ideal {ideal} outside 1..{m}")
    tiers = []
    for d in range(0, max(ideal - 1, m - ideal) + 1):
        tier = frozenset(j for j in (ideal - d, ideal + d) if 1 <= j <= m)
        tiers.append(tier)
    return WeakOrder(tuple(tiers))


def from_common_shape(m: int, ideal: int, shape: Mapping[int, float]) -> WeakOrder:
    """Weak order ranking policy ``j`` by ``shape[j - ideal]`` descending.

    ``shape`` maps signed displacements to scores and must cover every
    displacement that occurs on the line; equal scores share a tier.
    Two parties built from one shared shape always agree on every
    cross-side pair.  Raises when the induced order is not
    single-peaked with ``ideal`` as the unique best policy.
    """
    if not 1 <= ideal <= m:
        raise ValidationError("index-out-of-range", f"ideal {ideal} outside 1..{m}")
    missing = [j - ideal for j in range(1, m + 1) if (j - ideal) not in shape]
    if missing:
        raise ValidationError(
            "shape-missing-displacement",
            f"shape lacks value(s) for displacement(s) {missing}",
        )
    scores = {j: shape[j - ideal] for j in range(1, m + 1)}
    levels = sorted(set(scores.values()), reverse=True)
    tiers = tuple(
        frozenset(j for j in range(1, m + 1) if scores[j] == level) for level in levels
    )
    order = WeakOrder(tiers)
    if order.tiers[0] != frozenset((ideal,)):
        other = min(j for j in order.tiers[0] if j != ideal)
        raise ValidationError(
            "shape-not-single-peaked",
            f"shape does not make {ideal} the unique best policy",
            witness=tuple(sorted((ideal, other))),
        )
    ok, witness = is_single_peaked(order, ideal)
    if not ok:
        raise ValidationError(
            "shape-not-single-peaked",
            f"shape order is not single-peaked at {ideal}; witness pair {witness}",
            witness=witness,
        )
    return order


def outcome_class(out: Outcome, party: Party | str) -> int:
    """2 for a win, 1 for a tie, 0 for a loss, seen from ``party``."""
    party = Party(party)
    if out is Outcome.T:
        return 1
    return 2 if out.value == party.value else 0


def compare_for_party(
    inst: Instance,
    party: Party | str,
    p1: Profile,
    o1: Outcome,
    p2: Profile,
    o2: Outcome,
) -> Comparison:
    """Rank profile ``p1`` against ``p2`` from ``party``'s viewpoint.

    Win beats tie beats loss; with equal electoral outcomes the party
    compares its own announced platform under its ideological order.
    Outcomes are caller-supplied (the outcome of each profile) so the
    comparison stays a pure function.
    """
    party = Party(party)
    c1 = outcome_class(o1, party)
    c2 = outcome_class(o2, party)
    if c1 != c2:
        return Comparison.BETTER if c1 > c2 else Comparison.WORSE
    order = inst.party_spec(party).order
    own1 = p1.s if party is Party.A else p1.t
    own2 = p2.s if party is Party.A else p2.t
    t1 = order.tier(own1)
    t2 = order.tier(own2)
    if t1 == t2:
        return Comparison.EQUAL
    return Comparison.BETTER if t1 < t2 else Comparison.WORSE
