"""The voting stage: turnout, vote counts, and the outcome map.

A voter turns out when at least one announced platform falls inside her
attraction interval; an active voter votes for the platform she strictly
prefers and abstains when indifferent.  The outcome compares the two
support counts.
"""

from dataclasses import dataclass

from .model import Instance, Outcome, Profile

__all__ = ["Tally", "active_voters", "tally", "outcome", "deviation_table"]


@dataclass(frozen=True)
class Tally:
    """Vote counts at one profile.

    ``n_a``/``n_b`` count active voters strictly preferring A's / B's
    platform; ``active`` and ``abstaining_active`` hold 0-based voter
    positions.  Always ``n_a + n_b + len(abstaining_active) == len(active)``.
    """

    n_a: int
    n_b: int
    active: frozenset[int]
    abstaining_active: frozenset[int]


def _check_profile(inst: Instance, profile: Profile) -> Profile:
    s, t = profile
    if s not in inst.space or t not in inst.space:
        raise ValueError(f"profile {profile} outside policy range 1..{inst.space.size}")
    return Profile(s, t)


def active_voters(inst: Instance, profile: Profile) -> frozenset[int]:
    """Positions of voters with at least one platform in their interval."""
    s, t = _check_profile(inst, profile)
    return frozenset(
        k for k, v in enumerate(inst.voters) if v.accepts(s) or v.accepts(t)
    )


def tally(inst: Instance, profile: Profile) -> Tally:
    """Count the votes at ``profile`` over the active voters only."""
    s, t = _check_profile(inst, profile)
    active = []
    n_a = n_b = 0
    abstaining = []
    for k, v in enumerate(inst.voters):
        if not (v.accepts(s) or v.accepts(t)):
            continue
        active.append(k)
        if s == t:
            abstaining.append(k)
        elif v.prefers(s, t):
            n_a += 1
        else:
            n_b += 1
    return Tally(n_a, n_b, frozenset(active), frozenset(abstaining))


def outcome(inst: Instance, profile: Profile) -> Outcome:
    """Majority comparison of active supporters: A, B, or tie."""
    counts = tally(inst, profile)
    if counts.n_a > counts.n_b:
        return Outcome.A
    if counts.n_b > counts.n_a:
        return Outcome.B
    return Outcome.T


def deviation_table(
    inst: Instance, profile: Profile
) -> tuple[tuple[Outcome, ...], tuple[Outcome, ...]]:
    """Outcomes of all unilateral deviations from ``profile``.

    Row one holds the outcome with A's platform replaced by each policy
    in turn (B fixed at ``t``); row two varies B's platform (A fixed at
    ``s``).
    """
    s, t = _check_profile(inst, profile)
    row_a = tuple(outcome(inst, Profile(j, t)) for j in inst.space.indices)
    row_b = tuple(outcome(inst, Profile(s, j)) for j in inst.space.indices)
    return row_a, row_b
