"""Seeded instance generation and falsification campaigns.

A campaign draws instances from a seeded generator, filters them by a
conjecture's precondition, and tests the conjecture's conclusion on
every qualifying instance.  The four supported conjectures:

* ``prop1``  - every reversed-order equilibrium is tied and mutually
  leapfrogged (no precondition).
* ``prop2``  - under fixed participation, no equilibrium exhibits
  mutual leapfrogging.
* ``thm1``   - under cross-side agreement, no equilibrium exhibits
  mutual leapfrogging.
* ``prop4_implies_ax2`` - party orders built by the symmetric or
  common-shape constructors always pass the cross-side agreement check.

Trial seeds derive from ``(config seed, trial index)`` alone, so
reports are reproducible across runs and across any number of workers.
The hot loop runs in the selected kernel backend; violations are rare
and get re-checked and enriched here at the dataclass level, which
makes every reported witness replayable by construction.
"""

import enum
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import _kernel_py, kernels
from .equilibrium import enumerate_equilibria
from .model import Instance, Profile, validate_instance
from .preferences import check_cross_side_agreement

__all__ = [
    "PartyMode",
    "AttractionMode",
    "Conjecture",
    "GenConfig",
    "Violation",
    "CampaignReport",
    "gen_instance",
    "random_single_peaked_ranking",
    "has_fixed_participation",
    "precondition_holds",
    "conclusion_violations",
    "falsify",
]


class PartyMode(enum.Enum):
    FREE_SINGLE_PEAKED = "free_single_peaked"
    SYMMETRIC = "symmetric"
    COMMON_SHAPE = "common_shape"


class AttractionMode(enum.Enum):
    RANDOM_INTERVAL = "random_interval"
    FULL = "full"


class Conjecture(enum.Enum):
    PROP1 = "prop1"
    PROP2 = "prop2"
    THM1 = "thm1"
    PROP4_IMPLIES_AX2 = "prop4_implies_ax2"


_PARTY_MODE_CODE = {
    PartyMode.FREE_SINGLE_PEAKED: _kernel_py.PARTY_FREE,
    PartyMode.SYMMETRIC: _kernel_py.PARTY_SYMMETRIC,
    PartyMode.COMMON_SHAPE: _kernel_py.PARTY_COMMON_SHAPE,
}
_ATTRACTION_CODE = {
    AttractionMode.RANDOM_INTERVAL: _kernel_py.ATTRACTION_RANDOM,
    AttractionMode.FULL: _kernel_py.ATTRACTION_FULL,
}
_CONJECTURE_CODE = {
    Conjecture.PROP1: _kernel_py.CONJ_PROP1,
    Conjecture.PROP2: _kernel_py.CONJ_PROP2,
    Conjecture.THM1: _kernel_py.CONJ_THM1,
    Conjecture.PROP4_IMPLIES_AX2: _kernel_py.CONJ_PROP4,
}
_VIOLATION_KIND = {
    _kernel_py.VIOLATION_REVERSED_NOT_TIED: "reversed-equilibrium-not-tied",
    _kernel_py.VIOLATION_REVERSED_NOT_LEAPFROG: "reversed-equilibrium-not-leapfrogging",
    _kernel_py.VIOLATION_LEAPFROG_EQUILIBRIUM: "mutual-leapfrog-equilibrium",
    _kernel_py.VIOLATION_CROSS_SIDE_DISAGREEMENT: "cross-side-disagreement",
}
_DIRECTION = {1: "right-vs-left", 2: "left-vs-right"}


@dataclass(frozen=True)
class GenConfig:
    """Generator configuration; ``seed`` is a 64-bit unsigned integer.

    Both ranges are inclusive.  Defaults are desk-scale: large enough
    to cover interesting topologies, small enough for six-figure trial
    counts per minute.
    """

    m_range: tuple[int, int] = (5, 9)
    n_range: tuple[int, int] = (2, 6)
    party_mode: PartyMode = PartyMode.FREE_SINGLE_PEAKED
    attraction_mode: AttractionMode = AttractionMode.RANDOM_INTERVAL
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m_range", tuple(self.m_range))
        object.__setattr__(self, "n_range", tuple(self.n_range))
        m_lo, m_hi = self.m_range
        n_lo, n_hi = self.n_range
        if not 2 <= m_lo <= m_hi <= _kernel_py.M_CAP:
            raise ValueError(f"m_range must lie in 2..{_kernel_py.M_CAP} and be nonempty")
        if not 0 <= n_lo <= n_hi <= _kernel_py.N_CAP:
            raise ValueError(f"n_range must lie in 0..{_kernel_py.N_CAP} and be nonempty")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Violation:
    """One replayable counterexample from a campaign.

    ``profile`` is set for equilibrium-based violations; ``witness``
    carries the (a, b, direction) cross-side disagreement otherwise.
    """

    trial: int
    kind: str
    profile: Profile | None
    witness: tuple[int, int, str] | None
    instance: Instance


@dataclass(frozen=True)
class CampaignReport:
    conjecture: Conjecture
    config: GenConfig
    trials: int
    precondition_applied: bool
    injected: bool
    precondition_satisfied: int
    violations: tuple[Violation, ...]
    elapsed_seconds: float
    backend: str
    workers: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _kernel_args(cfg: GenConfig) -> tuple:
    return (
        cfg.seed,
        cfg.m_range[0],
        cfg.m_range[1],
        cfg.n_range[0],
        cfg.n_range[1],
        _PARTY_MODE_CODE[cfg.party_mode],
        _ATTRACTION_CODE[cfg.attraction_mode],
    )


def _unpack(packed) -> Instance:
    m, _p, _q, tier_a, tier_b, ranks, lo, hi = packed

    def tiers_doc(tier):
        depth = max(tier[1:]) + 1
        tiers = [[] for _ in range(depth)]
        for j in range(1, m + 1):
            tiers[tier[j]].append(j)
        return tiers

    voters = []
    for v in range(len(lo)):
        ranking = sorted(range(1, m + 1), key=lambda j: ranks[v][j])
        voters.append(
            {
                "ideal": ranking[0],
                "ranking": [[j] for j in ranking],
                "attraction": [lo[v], hi[v]],
            }
        )
    doc = {
        "policies": m,
        "parties": {
            "A": {"ideal": _p, "ranking": tiers_doc(tier_a)},
            "B": {"ideal": _q, "ranking": tiers_doc(tier_b)},
        },
        "voters": voters,
    }
    return validate_instance(doc)


def _pack(inst: Instance) -> tuple:
    m = inst.space.size
    if m > _kernel_py.M_CAP or inst.n > _kernel_py.N_CAP:
        raise ValueError(
            f"instance exceeds kernel capacity ({_kernel_py.M_CAP} policies / {_kernel_py.N_CAP} voters)"
        )

    def tier_array(order):
        ti = order.tier_index
        return [-1] + [ti[j] for j in range(1, m + 1)]

    ranks = []
    lo = []
    hi = []
    for v in inst.voters:
        ri = v.rank_index
        ranks.append([-1] + [ri[j] for j in range(1, m + 1)])
        lo.append(v.attraction[0])
        hi.append(v.attraction[1])
    return (
        m,
        inst.party_a.ideal,
        inst.party_b.ideal,
        tier_array(inst.party_a.order),
        tier_array(inst.party_b.order),
        ranks,
        lo,
        hi,
    )


def gen_instance(cfg: GenConfig, trial: int) -> Instance:
    """The validated instance a campaign would use at ``trial``.

    Deterministic in (cfg.seed, trial); the result round-trips through
    full validation, so generator bugs surface here rather than deep in
    a campaign.
    """
    if trial < 0:
        raise ValueError("trial index must be nonnegative")
    return _unpack(kernels.impl.generate(cfg.seed, trial, *_kernel_args(cfg)[1:]))


def random_single_peaked_ranking(m: int, peak: int, seed: int) -> tuple[int, ...]:
    """One strict single-peaked order drawn the way the generator draws
    voter orders (best first)."""
    if not 1 <= peak <= m:
        raise ValueError("peak outside 1..m")
    state = _kernel_py.trial_seed(seed, 0)
    _state, pos = _kernel_py._interleave(m, peak, state)
    return tuple(sorted(range(1, m + 1), key=lambda j: pos[j]))


def has_fixed_participation(inst: Instance) -> bool:
    """True iff one fixed voter set is active at every pair of distinct
    platforms."""
    m = inst.space.size
    accept = [None] + [
        frozenset(k for k, v in enumerate(inst.voters) if v.accepts(x))
        for x in range(1, m + 1)
    ]
    base = None
    for s in range(1, m + 1):
        for t in range(s + 1, m + 1):
            union = accept[s] | accept[t]
            if base is None:
                base = union
            elif union != base:
                return False
    return True


def precondition_holds(
    conjecture: Conjecture, inst: Instance, cfg: GenConfig | None = None
) -> bool:
    """Does ``inst`` qualify for the conjecture's conclusion check?

    ``prop4_implies_ax2`` has a configuration-level precondition (the
    party orders must come from a constructor mode), hence the optional
    ``cfg``.
    """
    conjecture = Conjecture(conjecture)
    if conjecture is Conjecture.PROP1:
        return True
    if conjecture is Conjecture.PROP2:
        return has_fixed_participation(inst)
    if conjecture is Conjecture.THM1:
        return check_cross_side_agreement(inst)[0]
    return cfg is not None and cfg.party_mode in (
        PartyMode.SYMMETRIC,
        PartyMode.COMMON_SHAPE,
    )


def conclusion_violations(
    conjecture: Conjecture, inst: Instance
) -> list[tuple[str, object]]:
    """Violations of the conjecture's conclusion on one instance.

    Returns (kind, payload) pairs where payload is the offending
    Profile, or the (a, b, direction) witness for cross-side
    disagreement.  Used to re-check and enrich kernel-reported
    violations, and by tests to replay reported witnesses.
    """
    conjecture = Conjecture(conjecture)
    if conjecture is Conjecture.PROP4_IMPLIES_AX2:
        ok, witness = check_cross_side_agreement(inst)
        if ok:
            return []
        return [("cross-side-disagreement", (witness.a, witness.b, witness.direction))]
    found = []
    for record in enumerate_equilibria(inst):
        if conjecture is Conjecture.PROP1:
            if record.reversed_order and not record.tied:
                found.append(("reversed-equilibrium-not-tied", record.profile))
            if record.reversed_order and not record.mutual_leapfrog:
                found.append(("reversed-equilibrium-not-leapfrogging", record.profile))
        else:
            if record.mutual_leapfrog:
                found.append(("mutual-leapfrog-equilibrium", record.profile))
    return found


def _run_chunk(conjecture_code, apply_precondition, kernel_args, trial_lo, trial_hi, inject):
    return kernels.impl.run_campaign(
        conjecture_code,
        apply_precondition,
        *kernel_args,
        trial_lo,
        trial_hi,
        inject,
    )


def _chunk_bounds(trials: int, workers: int) -> list[tuple[int, int]]:
    size, rem = divmod(trials, workers)
    bounds = []
    start = 0
    for w in range(workers):
        stop = start + size + (1 if w < rem else 0)
        if stop > start:
            bounds.append((start, stop))
        start = stop
    return bounds


def _default_workers() -> int:
    if kernels.BACKEND == "compiled":
        return 1
    return min(os.cpu_count() or 1, 8)


def falsify(
    conjecture: Conjecture | str,
    cfg: GenConfig,
    trials: int,
    *,
    apply_precondition: bool = True,
    inject: Instance | None = None,
    workers: int | None = None,
) -> CampaignReport:
    """Run a falsification campaign and report every violation found.

    ``inject`` replaces trial 0 with a fixed instance (the remaining
    trials generate as usual), which guarantees a known case passes
    through the pipeline.  ``apply_precondition=False`` still counts
    qualifying instances but tests the conclusion on every trial.
    Reports are identical for any ``workers`` value.
    """
    conjecture = Conjecture(conjecture)
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    start = time.perf_counter()
    kernel_args = _kernel_args(cfg)
    inject_packed = _pack(inject) if inject is not None else None
    if workers is None:
        workers = _default_workers()
    workers = max(1, min(workers, trials)) if trials else 1
    conjecture_code = _CONJECTURE_CODE[conjecture]

    chunks = _chunk_bounds(trials, workers)
    results = []
    if len(chunks) <= 1:
        for trial_lo, trial_hi in chunks:
            results.append(
                _run_chunk(
                    conjecture_code,
                    apply_precondition,
                    kernel_args,
                    trial_lo,
                    trial_hi,
                    inject_packed,
                )
            )
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [
                pool.submit(
                    _run_chunk,
                    conjecture_code,
                    apply_precondition,
                    kernel_args,
                    trial_lo,
                    trial_hi,
                    inject_packed if trial_lo == 0 else None,
                )
                for trial_lo, trial_hi in chunks
            ]
            results = [f.result() for f in futures]

    precondition_satisfied = sum(r[0] for r in results)
    raw_violations = [v for r in results for v in r[1]]
    raw_violations.sort(key=lambda v: v[0])

    violations = []
    for trial, code, i, j, direction in raw_violations:
        if inject is not None and trial == 0:
            inst = inject
        else:
            inst = gen_instance(cfg, trial)
        kind = _VIOLATION_KIND[code]
        if code == _kernel_py.VIOLATION_CROSS_SIDE_DISAGREEMENT:
            payload = (i, j, _DIRECTION[direction])
            profile = None
            witness = payload
        else:
            payload = Profile(i, j)
            profile = payload
            witness = None
        # Replay at the dataclass level; a mismatch would mean the
        # kernel and the reference semantics disagree.
        if (kind, payload) not in conclusion_violations(conjecture, inst):
            raise RuntimeError(
                f"kernel violation {kind} at trial {trial} did not replay; "
                "backend disagrees with reference semantics"
            )
        violations.append(Violation(trial, kind, profile, witness, inst))

    return CampaignReport(
        conjecture=conjecture,
        config=cfg,
        trials=trials,
        precondition_applied=apply_precondition,
        injected=inject is not None,
        precondition_satisfied=precondition_satisfied,
        violations=tuple(violations),
        elapsed_seconds=time.perf_counter() - start,
        backend=kernels.BACKEND,
        workers=workers,
    )
