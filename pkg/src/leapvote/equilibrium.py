"""Best responses, equilibrium verification, and exhaustive enumeration.

Enumeration is deliberately brute force over all m^2 profiles (with the
outcome grid computed once); at the instance sizes this library targets
that costs milliseconds and doubles as the correctness oracle for the
packed campaign kernels.
"""

from dataclasses import dataclass

from . import election
from .model import Instance, Outcome, Party, Profile
from .preferences import Comparison, compare_for_party, outcome_class

__all__ = [
    "EquilibriumRecord",
    "best_responses",
    "is_nash",
    "enumerate_equilibria",
    "classify",
]


@dataclass(frozen=True)
class EquilibriumRecord:
    """A profile with its outcome and classification flags.

    ``reversed_order`` means B's platform lies strictly left of A's;
    ``mutual_leapfrog`` means each platform crosses the other party's
    ideal point (which implies reversed order).  ``classify`` fills the
    flags for arbitrary profiles; only ``enumerate_equilibria`` asserts
    the profile is actually an equilibrium.
    """

    profile: Profile
    outcome: Outcome
    tied: bool
    reversed_order: bool
    mutual_leapfrog: bool


def classify(inst: Instance, profile: Profile) -> EquilibriumRecord:
    """Flags for an arbitrary profile (no equilibrium check)."""
    s, t = profile
    out = election.outcome(inst, profile)
    return EquilibriumRecord(
        profile=Profile(s, t),
        outcome=out,
        tied=out is Outcome.T,
        reversed_order=t < s,
        mutual_leapfrog=t < inst.party_a.ideal and inst.party_b.ideal < s,
    )


def best_responses(
    inst: Instance, party: Party | str, opponent_platform: int
) -> frozenset[int]:
    """All platforms maximal under the party's lexicographic objective
    against a fixed opponent platform (the whole top indifference class;
    never empty)."""
    party = Party(party)
    if opponent_platform not in inst.space:
        raise ValueError(f"opponent platform {opponent_platform} outside policy range")
    tiers = inst.party_spec(party).order.tier_index
    best_key: tuple[int, int] | None = None
    best: list[int] = []
    for x in inst.space.indices:
        profile = (
            Profile(x, opponent_platform)
            if party is Party.A
            else Profile(opponent_platform, x)
        )
        key = (outcome_class(election.outcome(inst, profile), party), -tiers[x])
        if best_key is None or key > best_key:
            best_key = key
            best = [x]
        elif key == best_key:
            best.append(x)
    return frozenset(best)


def is_nash(
    inst: Instance, profile: Profile
) -> tuple[bool, tuple[Party, int] | None]:
    """Is ``profile`` a pure-strategy equilibrium?

    On failure returns one strictly profitable unilateral deviation:
    party A's smallest improving platform index if A has one, otherwise
    party B's smallest.
    """
    s, t = profile
    if (
        s in best_responses(inst, Party.A, t)
        and t in best_responses(inst, Party.B, s)
    ):
        return True, None
    base = election.outcome(inst, profile)
    for party in (Party.A, Party.B):
        for x in inst.space.indices:
            candidate = Profile(x, t) if party is Party.A else Profile(s, x)
            alt = election.outcome(inst, candidate)
            if compare_for_party(inst, party, candidate, alt, profile, base) is Comparison.BETTER:
                return False, (party, x)
    raise AssertionError("no best response found; unreachable for validated instances")


def enumerate_equilibria(inst: Instance) -> list[EquilibriumRecord]:
    """All pure-strategy equilibria in lexicographic (s, t) order."""
    m = inst.space.size
    ta = inst.party_a.order.tier_index
    tb = inst.party_b.order.tier_index
    grid = [[None] * (m + 1)]
    for s in range(1, m + 1):
        grid.append(
            [None] + [election.outcome(inst, Profile(s, t)) for t in range(1, m + 1)]
        )

    def key_a(s: int, t: int) -> tuple[int, int]:
        return (outcome_class(grid[s][t], Party.A), -ta[s])

    def key_b(s: int, t: int) -> tuple[int, int]:
        return (outcome_class(grid[s][t], Party.B), -tb[t])

    col_max = [None] + [
        max(key_a(s, t) for s in range(1, m + 1)) for t in range(1, m + 1)
    ]
    row_max = [None] + [
        max(key_b(s, t) for t in range(1, m + 1)) for s in range(1, m + 1)
    ]
    records = []
    p = inst.party_a.ideal
    q = inst.party_b.ideal
    for s in range(1, m + 1):
        for t in range(1, m + 1):
            if key_a(s, t) == col_max[t] and key_b(s, t) == row_max[s]:
                out = grid[s][t]
                records.append(
                    EquilibriumRecord(
                        profile=Profile(s, t),
                        outcome=out,
                        tied=out is Outcome.T,
                        reversed_order=t < s,
                        mutual_leapfrog=t < p and q < s,
                    )
                )
    return records
