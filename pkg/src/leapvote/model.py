"""Domain model for two-party elections on a finite ordered policy line.

Policies are addressed by 1-based index ``j``, standing for positions
``x_1 < x_2 < ... < x_m`` on a line; one step equals one index.  Two
parties hold weak single-peaked orders over the policies.  Voters hold
strict single-peaked orders plus a contiguous attraction interval that
decides whether they turn out at all.

``validate_instance`` is the only gate from raw data to a usable
:class:`Instance`.  Everything it returns is deeply immutable, so
instances can be shared freely across threads and processes.
"""

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

__all__ = [
    "Party",
    "Outcome",
    "Profile",
    "ValidationError",
    "PolicySpace",
    "WeakOrder",
    "PartySpec",
    "VoterSpec",
    "Instance",
    "validate_instance",
    "is_single_peaked",
    "mirror_instance",
]


class Party(enum.Enum):
    """The two competitors; A's ideal point always lies left of B's."""

    A = "A"
    B = "B"

    @property
    def opponent(self) -> "Party":
        return Party.B if self is Party.A else Party.A


class Outcome(enum.Enum):
    """Result of the majority comparison: A wins, B wins, or a tie."""

    A = "A"
    B = "B"
    T = "T"


class Profile(NamedTuple):
    """A platform pair: ``s`` announced by party A, ``t`` by party B."""

    s: int
    t: int


class ValidationError(Exception):
    """Raised when raw instance data violates a structural rule.

    ``code`` is a stable machine-readable identifier.  ``actor`` names
    the offending party or voter where applicable, and ``witness``
    carries an offending index pair for order violations.
    """

    def __init__(
        self,
        code: str,
        message: str,
        *,
        actor: str | None = None,
        witness: tuple[int, int] | None = None,
    ):
        self.code = code
        self.message = message
        self.actor = actor
        self.witness = witness
        where = f" ({actor})" if actor else ""
        super().__init__(f"{code}{where}: {message}")


def _is_index(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class PolicySpace:
    """The finite line of ``size`` policies, indexed 1..size."""

    size: int

    def __post_init__(self):
        if not _is_index(self.size):
            raise ValidationError("malformed", "policy count must be an integer")
        if self.size < 2:
            raise ValidationError(
                "too-few-policies", f"need at least 2 policies, got {self.size}"
            )

    @property
    def indices(self) -> range:
        return range(1, self.size + 1)

    def __contains__(self, j) -> bool:
        return _is_index(j) and 1 <= j <= self.size


@dataclass(frozen=True)
class WeakOrder:
    """A tiered preference order over policy indices.

    Earlier tiers are strictly better; indices sharing a tier are
    indifferent.  A strict total order is the special case of all
    singleton tiers.
    """

    tiers: tuple[frozenset[int], ...]

    def __post_init__(self):
        tiers = tuple(frozenset(t) for t in self.tiers)
        object.__setattr__(self, "tiers", tiers)
        seen: set[int] = set()
        for tier in tiers:
            if not tier:
                raise ValidationError("weak-order-not-partition", "empty tier")
            for j in tier:
                if not _is_index(j) or j < 1:
                    raise ValidationError(
                        "index-out-of-range",
                        f"policy index {j!r} is not a positive integer",
                    )
                if j in seen:
                    raise ValidationError(
                        "weak-order-not-partition",
                        f"policy {j} appears in more than one tier",
                    )
                seen.add(j)

    @classmethod
    def from_ranking(cls, ranking: Sequence[int]) -> "WeakOrder":
        """Build a strict order from a best-to-worst sequence."""
        return cls(tuple(frozenset((j,)) for j in ranking))

    @cached_property
    def tier_index(self) -> dict[int, int]:
        return {j: k for k, tier in enumerate(self.tiers) for j in tier}

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.tier_index)

    @property
    def is_strict(self) -> bool:
        return all(len(tier) == 1 for tier in self.tiers)

    def tier(self, j: int) -> int:
        return self.tier_index[j]

    def strictly_prefers(self, a: int, b: int) -> bool:
        return self.tier_index[a] < self.tier_index[b]

    def weakly_prefers(self, a: int, b: int) -> bool:
        return self.tier_index[a] <= self.tier_index[b]

    def ranking(self) -> tuple[int, ...]:
        """Best-to-worst sequence; only defined for strict orders."""
        if not self.is_strict:
            raise ValueError("order has ties; no strict ranking exists")
        return tuple(next(iter(tier)) for tier in self.tiers)


@dataclass(frozen=True)
class PartySpec:
    """A party: its ideal policy and its weak order over all policies."""

    ideal: int
    order: WeakOrder


@dataclass(frozen=True)
class VoterSpec:
    """A voter: ideal policy, strict order (best first), and the
    contiguous attraction interval ``(lo, hi)`` of acceptable policies."""

    ideal: int
    ranking: tuple[int, ...]
    attraction: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "ranking", tuple(self.ranking))
        object.__setattr__(self, "attraction", tuple(self.attraction))

    @cached_property
    def rank_index(self) -> dict[int, int]:
        return {j: k for k, j in enumerate(self.ranking)}

    def prefers(self, a: int, b: int) -> bool:
        return self.rank_index[a] < self.rank_index[b]

    def accepts(self, j: int) -> bool:
        lo, hi = self.attraction
        return lo <= j <= hi


@dataclass(frozen=True)
class Instance:
    """A validated game: the policy line, both parties, and the voters.

    Voters are identified by their 0-based position in ``voters``.
    """

    space: PolicySpace
    party_a: PartySpec
    party_b: PartySpec
    voters: tuple[VoterSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "voters", tuple(self.voters))

    @property
    def m(self) -> int:
        return self.space.size

    @property
    def n(self) -> int:
        return len(self.voters)

    def party_spec(self, party: Party | str) -> PartySpec:
        return self.party_a if Party(party) is Party.A else self.party_b


def is_single_peaked(
    order: "WeakOrder | Sequence[int]", peak: int, *, strict: bool = False
) -> tuple[bool, tuple[int, int] | None]:
    """Test peak-monotonicity: preference strictly falls stepping away
    from ``peak`` on either side.

    ``order`` is a :class:`WeakOrder` or a best-first ranked sequence
    over ``1..m``.  With ``strict=True`` the order must additionally be
    a strict total order (no ties anywhere).

    Returns ``(ok, witness)``; on failure ``witness`` is one violating
    index pair ``(a, b)`` with ``a < b``.  Because monotonicity is
    anchored at ``peak``, the check also fails whenever ``peak`` is not
    the unique best policy.
    """
    wo = order if isinstance(order, WeakOrder) else WeakOrder.from_ranking(tuple(order))
    m = len(wo.domain)
    if wo.domain != frozenset(range(1, m + 1)):
        raise ValidationError(
            "weak-order-not-partition", "order must cover a contiguous range 1..m"
        )
    if not _is_index(peak) or not 1 <= peak <= m:
        raise ValidationError("index-out-of-range", f"peak {peak!r} outside 1..{m}")
    if strict and not wo.is_strict:
        tied = next(tier for tier in wo.tiers if len(tier) > 1)
        a, b = sorted(tied)[:2]
        return False, (a, b)
    ti = wo.tier_index
    for j in range(peak, m):
        if ti[j] >= ti[j + 1]:
            return False, (j, j + 1)
    for j in range(peak, 1, -1):
        if ti[j] >= ti[j - 1]:
            return False, (j - 1, j)
    return True, None


# --- validation -----------------------------------------------------------


def _as_int(x, what: str, actor: str | None = None) -> int:
    if not _is_index(x):
        raise ValidationError("malformed", f"{what} must be an integer, got {x!r}", actor=actor)
    return x


def _as_policy_index(x, m: int, what: str, actor: str | None = None) -> int:
    j = _as_int(x, what, actor)
    if not 1 <= j <= m:
        raise ValidationError(
            "index-out-of-range", f"{what} {j} outside 1..{m}", actor=actor
        )
    return j


def _tiers_from_raw(raw_tiers, m: int, actor: str) -> WeakOrder:
    if not isinstance(raw_tiers, Sequence) or isinstance(raw_tiers, (str, bytes)):
        raise ValidationError("malformed", "ranking must be a list of tiers", actor=actor)
    for tier in raw_tiers:
        if not isinstance(tier, Sequence) or isinstance(tier, (str, bytes)):
            raise ValidationError(
                "malformed", "each ranking tier must be a list of indices", actor=actor
            )
        for j in tier:
            _as_policy_index(j, m, "ranking index", actor)
    try:
        order = WeakOrder(tuple(frozenset(tier) for tier in raw_tiers))
    except ValidationError as err:
        raise ValidationError(err.code, err.message, actor=actor, witness=err.witness)
    missing = frozenset(range(1, m + 1)) - order.domain
    if missing:
        raise ValidationError(
            "weak-order-not-partition",
            f"ranking does not mention polic{'y' if len(missing) == 1 else 'ies'} {sorted(missing)}",
            actor=actor,
        )
    return order


def _expand_order(m: int, ideal: int, entry: Mapping, actor: str) -> WeakOrder:
    has_ranking = "ranking" in entry
    has_construct = "construct" in entry
    if has_ranking == has_construct:
        raise ValidationError(
            "malformed", "exactly one of 'ranking' or 'construct' is required", actor=actor
        )
    if has_ranking:
        return _tiers_from_raw(entry["ranking"], m, actor)

    # Lazy import: the constructors live with the rest of the order
    # machinery and themselves depend on this module.
    from . import preferences

    construct = entry["construct"]
    if not isinstance(construct, Mapping):
        raise ValidationError("malformed", "construct must be a mapping", actor=actor)
    mode = construct.get("mode")
    if mode == "symmetric":
        if set(construct) != {"mode"}:
            raise ValidationError(
                "malformed", "symmetric construct takes no extra fields", actor=actor
            )
        return preferences.from_symmetric_utility(m, ideal)
    if mode == "common_shape":
        if set(construct) != {"mode", "shape"}:
            raise ValidationError(
                "malformed", "common_shape construct needs exactly a 'shape' field", actor=actor
            )
        shape_raw = construct["shape"]
        if not isinstance(shape_raw, Mapping):
            raise ValidationError("malformed", "shape must be a mapping", actor=actor)
        shape: dict[int, float] = {}
        for key, value in shape_raw.items():
            try:
                k = int(key)
            except (TypeError, ValueError):
                raise ValidationError(
                    "malformed", f"shape key {key!r} is not an integer displacement", actor=actor
                )
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(
                    "malformed", f"shape value for {k} must be a number", actor=actor
                )
            shape[k] = value
        try:
            return preferences.from_common_shape(m, ideal, shape)
        except ValidationError as err:
            raise ValidationError(err.code, err.message, actor=actor, witness=err.witness)
    raise ValidationError(
        "malformed", f"unknown construct mode {mode!r}", actor=actor
    )


def _party_spec(m: int, entry, actor: str) -> PartySpec:
    if not isinstance(entry, Mapping):
        raise ValidationError("malformed", "party entry must be a mapping", actor=actor)
    extra = set(entry) - {"ideal", "ranking", "construct"}
    if extra:
        raise ValidationError(
            "malformed", f"unknown field(s): {sorted(map(str, extra))}", actor=actor
        )
    ideal = _as_policy_index(entry.get("ideal"), m, "ideal", actor)
    order = _expand_order(m, ideal, entry, actor)
    if order.tiers[0] != frozenset((ideal,)):
        raise ValidationError(
            "peak-not-unique",
            f"top tier {sorted(order.tiers[0])} is not exactly the ideal {{{ideal}}}",
            actor=actor,
        )
    ok, witness = is_single_peaked(order, ideal)
    if not ok:
        raise ValidationError(
            "not-single-peaked",
            f"order is not single-peaked at {ideal}; witness pair {witness}",
            actor=actor,
            witness=witness,
        )
    return PartySpec(ideal, order)


def _attraction(entry_value, m: int, ideal: int, actor: str) -> tuple[int, int]:
    if isinstance(entry_value, Mapping):
        if set(entry_value) != {"members"}:
            raise ValidationError(
                "malformed", "attraction mapping must have exactly a 'members' list", actor=actor
            )
        members = entry_value["members"]
        if not isinstance(members, Sequence) or isinstance(members, (str, bytes)):
            raise ValidationError("malformed", "attraction members must be a list", actor=actor)
        idx = sorted(_as_policy_index(j, m, "attraction member", actor) for j in members)
        if not idx:
            raise ValidationError(
                "attraction-not-interval", "attraction set is empty", actor=actor
            )
        if idx[-1] - idx[0] + 1 != len(set(idx)) or len(set(idx)) != len(idx):
            raise ValidationError(
                "attraction-not-interval",
                f"attraction members {idx} are not a contiguous interval",
                actor=actor,
            )
        lo, hi = idx[0], idx[-1]
    elif isinstance(entry_value, Sequence) and not isinstance(entry_value, (str, bytes)):
        if len(entry_value) != 2:
            raise ValidationError(
                "malformed", "attraction must be a [lo, hi] pair", actor=actor
            )
        lo = _as_policy_index(entry_value[0], m, "attraction lo", actor)
        hi = _as_policy_index(entry_value[1], m, "attraction hi", actor)
        if lo > hi:
            raise ValidationError(
                "attraction-not-interval", f"lo {lo} > hi {hi}", actor=actor
            )
    else:
        raise ValidationError("malformed", "attraction must be a pair or members mapping", actor=actor)
    if not lo <= ideal <= hi:
        raise ValidationError(
            "attraction-missing-ideal",
            f"attraction [{lo},{hi}] does not contain the ideal {ideal}",
            actor=actor,
        )
    return lo, hi


def _voter_spec(m: int, entry, actor: str) -> VoterSpec:
    if not isinstance(entry, Mapping):
        raise ValidationError("malformed", "voter entry must be a mapping", actor=actor)
    extra = set(entry) - {"ideal", "ranking", "construct", "attraction"}
    if extra:
        raise ValidationError(
            "malformed", f"unknown field(s): {sorted(map(str, extra))}", actor=actor
        )
    if "attraction" not in entry:
        raise ValidationError("malformed", "voter needs an attraction interval", actor=actor)
    ideal = _as_policy_index(entry.get("ideal"), m, "ideal", actor)
    order = _expand_order(m, ideal, entry, actor)
    if not order.is_strict:
        raise ValidationError(
            "voter-order-not-strict", "voter orders may not contain ties", actor=actor
        )
    ok, witness = is_single_peaked(order, ideal, strict=True)
    if not ok:
        raise ValidationError(
            "not-single-peaked",
            f"order is not single-peaked at {ideal}; witness pair {witness}",
            actor=actor,
            witness=witness,
        )
    attraction = _attraction(entry["attraction"], m, ideal, actor)
    return VoterSpec(ideal, order.ranking(), attraction)


def validate_instance(raw) -> Instance:
    """Turn document-shaped raw data into a validated Instance.

    ``raw`` follows the instance-file layout: ``policies`` (int),
    ``parties`` (mapping with entries ``"A"`` and ``"B"``), and
    ``voters`` (list).  Orders are tier lists (lists of lists of
    indices) or ``construct`` recipes; a voter's attraction is a
    ``[lo, hi]`` pair or an explicit ``{"members": [...]}`` set.

    Raises :class:`ValidationError` with a stable ``code`` on the first
    violation found; any non-conforming input produces an error, never
    a crash.
    """
    if not isinstance(raw, Mapping):
        raise ValidationError("malformed", "instance data must be a mapping")
    extra = set(raw) - {"policies", "parties", "voters"}
    if extra:
        raise ValidationError("malformed", f"unknown field(s): {sorted(map(str, extra))}")
    for key in ("policies", "parties", "voters"):
        if key not in raw:
            raise ValidationError("malformed", f"missing field '{key}'")
    space = PolicySpace(_as_int(raw["policies"], "policies"))
    m = space.size
    parties = raw["parties"]
    if not isinstance(parties, Mapping) or set(parties) != {"A", "B"}:
        raise ValidationError(
            "malformed", "parties must be a mapping with exactly entries 'A' and 'B'"
        )
    spec_a = _party_spec(m, parties["A"], "party A")
    spec_b = _party_spec(m, parties["B"], "party B")
    if spec_a.ideal >= spec_b.ideal:
        raise ValidationError(
            "party-ideals-not-ordered",
            f"party A ideal {spec_a.ideal} must lie strictly left of party B ideal {spec_b.ideal}",
        )
    voters_raw = raw["voters"]
    if not isinstance(voters_raw, Sequence) or isinstance(voters_raw, (str, bytes)):
        raise ValidationError("malformed", "voters must be a list")
    voters = tuple(
        _voter_spec(m, entry, f"voter {k + 1}") for k, entry in enumerate(voters_raw)
    )
    return Instance(space, spec_a, spec_b, voters)


def mirror_instance(inst: Instance) -> Instance:
    """Reflect the line end-for-end and swap the two parties.

    Policy ``j`` maps to ``m+1-j``; the reflected B becomes the new A
    and vice versa, so the new instance again has A left of B.  Useful
    for left/right symmetry checks.
    """
    m = inst.space.size

    def mu(j: int) -> int:
        return m + 1 - j

    def flip_order(order: WeakOrder) -> WeakOrder:
        return WeakOrder(tuple(frozenset(mu(j) for j in tier) for tier in order.tiers))

    new_a = PartySpec(mu(inst.party_b.ideal), flip_order(inst.party_b.order))
    new_b = PartySpec(mu(inst.party_a.ideal), flip_order(inst.party_a.order))
    voters = tuple(
        VoterSpec(
            mu(v.ideal),
            tuple(mu(j) for j in v.ranking),
            (mu(v.attraction[1]), mu(v.attraction[0])),
        )
        for v in inst.voters
    )
    return Instance(inst.space, new_a, new_b, voters)
