"""Pure-Python campaign kernel: instance generation and per-trial checks.

This module and the compiled twin (``leapvote._kernel``) implement the
same contract over a packed instance tuple

    (m, p, q, tier_a, tier_b, ranks, lo, hi)

where ``tier_a``/``tier_b`` map policy index -> tier (length m+1, slot
0 is -1 padding), ``ranks[v]`` maps policy index -> rank in voter v's
strict order (same padding), and ``lo``/``hi`` are the attraction
bounds per voter.  Outcome grids use +1 for an A win, -1 for a B win,
0 for a tie.

The RNG is SplitMix64 and every draw made by ``generate`` (order and
meaning) is a compatibility contract: trial seeds derive only from the
campaign seed and the trial index, so results are independent of how
trials are partitioned across workers, and any change here must be
mirrored in the compiled twin.
"""

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

# packed-mode codes shared with the compiled twin
PARTY_FREE, PARTY_SYMMETRIC, PARTY_COMMON_SHAPE = 0, 1, 2
ATTRACTION_RANDOM, ATTRACTION_FULL = 0, 1
CONJ_PROP1, CONJ_PROP2, CONJ_THM1, CONJ_PROP4 = 1, 2, 3, 4
VIOLATION_REVERSED_NOT_TIED = 1
VIOLATION_REVERSED_NOT_LEAPFROG = 2
VIOLATION_LEAPFROG_EQUILIBRIUM = 3
VIOLATION_CROSS_SIDE_DISAGREEMENT = 4

M_CAP = 128
N_CAP = 64


def backend_name():
    return "pure"


def _mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def trial_seed(seed, trial):
    """Starting RNG state for one trial, independent of all others."""
    return _mix((seed + (trial + 1) * _GAMMA) & _MASK)


def _next(state):
    state = (state + _GAMMA) & _MASK
    return state, _mix(state)


def splitmix_sequence(seed, count):
    """First ``count`` raw outputs from state ``seed`` (test hook)."""
    state = seed & _MASK
    out = []
    for _ in range(count):
        state, value = _next(state)
        out.append(value)
    return out


def _interleave(m, peak, state):
    """Random single-peaked strict order as a position array.

    Merges the left and right descent chains uniformly at random over
    all interleavings; pos[j] is policy j's rank (0 = best).
    """
    pos = [-1] * (m + 1)
    pos[peak] = 0
    left = peak - 1
    right = m - peak
    next_left = peak - 1
    next_right = peak + 1
    k = 1
    while left + right:
        state, u = _next(state)
        if u % (left + right) < left:
            pos[next_left] = k
            next_left -= 1
            left -= 1
        else:
            pos[next_right] = k
            next_right += 1
            right -= 1
        k += 1
    return state, pos


def _tiers_from_scores(m, ideal, score):
    vals = [score[j - ideal] for j in range(1, m + 1)]
    levels = sorted(set(vals), reverse=True)
    level_pos = {v: i for i, v in enumerate(levels)}
    return [-1] + [level_pos[v] for v in vals]


def generate(seed, trial, m_lo, m_hi, n_lo, n_hi, party_mode, attraction_mode):
    """Deterministic packed instance for (seed, trial)."""
    if not 2 <= m_lo <= m_hi <= M_CAP:
        raise ValueError(f"policy-count range must lie in 2..{M_CAP}")
    if not 0 <= n_lo <= n_hi <= N_CAP:
        raise ValueError(f"voter-count range must lie in 0..{N_CAP}")
    state = trial_seed(seed, trial)
    state, u = _next(state)
    m = m_lo + u % (m_hi - m_lo + 1)
    state, u = _next(state)
    n = n_lo + u % (n_hi - n_lo + 1)
    state, u = _next(state)
    p = 1 + u % (m - 1)
    state, u = _next(state)
    q = p + 1 + u % (m - p)

    if party_mode == PARTY_FREE:
        state, tier_a = _interleave(m, p, state)
        state, tier_b = _interleave(m, q, state)
    elif party_mode == PARTY_SYMMETRIC:
        tier_a = [-1] + [abs(j - p) for j in range(1, m + 1)]
        tier_b = [-1] + [abs(j - q) for j in range(1, m + 1)]
    elif party_mode == PARTY_COMMON_SHAPE:
        # one shared score shape over every displacement either party uses
        score = {0: 0}
        for k in range(1, m - p + 1):
            state, u = _next(state)
            score[k] = score[k - 1] - 1 - u % 3
        for k in range(1, q):
            state, u = _next(state)
            score[-k] = score[-(k - 1)] - 1 - u % 3
        tier_a = _tiers_from_scores(m, p, score)
        tier_b = _tiers_from_scores(m, q, score)
    else:
        raise ValueError(f"unknown party mode {party_mode}")

    ranks = []
    lo = []
    hi = []
    for _ in range(n):
        state, u = _next(state)
        ideal = 1 + u % m
        state, pos = _interleave(m, ideal, state)
        ranks.append(pos)
        if attraction_mode == ATTRACTION_FULL:
            lo.append(1)
            hi.append(m)
        elif attraction_mode == ATTRACTION_RANDOM:
            state, u = _next(state)
            lo.append(1 + u % ideal)
            state, u = _next(state)
            hi.append(ideal + u % (m - ideal + 1))
        else:
            raise ValueError(f"unknown attraction mode {attraction_mode}")
    return (m, p, q, tier_a, tier_b, ranks, lo, hi)


def outcome_grid(packed):
    """(m+1)x(m+1) grid of outcomes; grid[s][t] in {1, -1, 0}."""
    m, _p, _q, _ta, _tb, ranks, lo, hi = packed
    n = len(lo)
    grid = [[0] * (m + 1) for _ in range(m + 1)]
    for s in range(1, m + 1):
        row = grid[s]
        for t in range(1, m + 1):
            n_a = n_b = 0
            for v in range(n):
                lv = lo[v]
                hv = hi[v]
                if (lv <= s <= hv) or (lv <= t <= hv):
                    rv = ranks[v]
                    if rv[s] < rv[t]:
                        n_a += 1
                    elif rv[t] < rv[s]:
                        n_b += 1
            row[t] = 1 if n_a > n_b else (-1 if n_b > n_a else 0)
    return grid


def _equilibria_from_grid(packed, grid):
    m, _p, _q, tier_a, tier_b, _ranks, _lo, _hi = packed
    width = m + 1
    col_max = [0] * (m + 1)
    row_max = [0] * (m + 1)
    for t in range(1, m + 1):
        best = -1
        for s in range(1, m + 1):
            key = (grid[s][t] + 1) * width + (m - tier_a[s])
            if key > best:
                best = key
        col_max[t] = best
    for s in range(1, m + 1):
        best = -1
        for t in range(1, m + 1):
            key = (1 - grid[s][t]) * width + (m - tier_b[t])
            if key > best:
                best = key
        row_max[s] = best
    found = []
    for s in range(1, m + 1):
        for t in range(1, m + 1):
            if (grid[s][t] + 1) * width + (m - tier_a[s]) == col_max[t] and (
                1 - grid[s][t]
            ) * width + (m - tier_b[t]) == row_max[s]:
                found.append((s, t))
    return found


def equilibria(packed):
    """All pure-strategy equilibria as (s, t) pairs in lex order."""
    return _equilibria_from_grid(packed, outcome_grid(packed))


def axiom2_witness(packed):
    """Cross-side agreement check: (1, 0, 0, 0) when the parties agree,
    else (0, a, b, direction) with direction 1 = right-vs-left."""
    m, p, q, tier_a, tier_b, _ranks, _lo, _hi = packed
    for a in range(1, m - q + 1):
        for b in range(1, p):
            if (tier_a[p + a] <= tier_a[p - b]) != (tier_b[q + a] <= tier_b[q - b]):
                return (0, a, b, 1)
            if (tier_a[p - b] <= tier_a[p + a]) != (tier_b[q - b] <= tier_b[q + a]):
                return (0, a, b, 2)
    return (1, 0, 0, 0)


def fixed_participation(packed):
    """True iff the active-voter set is one fixed set at every pair of
    distinct platforms."""
    m, _p, _q, _ta, _tb, _ranks, lo, hi = packed
    n = len(lo)
    masks = [0] * (m + 1)
    for x in range(1, m + 1):
        mask = 0
        for v in range(n):
            if lo[v] <= x <= hi[v]:
                mask |= 1 << v
        masks[x] = mask
    base = -1
    for s in range(1, m + 1):
        for t in range(s + 1, m + 1):
            union = masks[s] | masks[t]
            if base < 0:
                base = union
            elif union != base:
                return False
    return True


def run_campaign(
    conjecture,
    apply_precondition,
    seed,
    m_lo,
    m_hi,
    n_lo,
    n_hi,
    party_mode,
    attraction_mode,
    trial_lo,
    trial_hi,
    inject,
):
    """Run trials [trial_lo, trial_hi) of a falsification campaign.

    ``inject`` is an optional packed instance used verbatim as trial 0.
    Returns (precondition_count, violations) where each violation is a
    tuple (trial, code, i, j, direction); (i, j) is the offending
    profile, or the (a, b) witness pair for cross-side disagreement.
    """
    precondition_count = 0
    violations = []
    for trial in range(trial_lo, trial_hi):
        injected = inject is not None and trial == 0
        packed = (
            inject
            if injected
            else generate(seed, trial, m_lo, m_hi, n_lo, n_hi, party_mode, attraction_mode)
        )
        if conjecture == CONJ_PROP1:
            ok = True
        elif conjecture == CONJ_PROP2:
            ok = fixed_participation(packed)
        elif conjecture == CONJ_THM1:
            ok = axiom2_witness(packed)[0] == 1
        elif conjecture == CONJ_PROP4:
            ok = not injected and party_mode in (PARTY_SYMMETRIC, PARTY_COMMON_SHAPE)
        else:
            raise ValueError(f"unknown conjecture code {conjecture}")
        if ok:
            precondition_count += 1
        elif apply_precondition:
            continue
        if conjecture == CONJ_PROP4:
            result = axiom2_witness(packed)
            if result[0] == 0:
                violations.append(
                    (trial, VIOLATION_CROSS_SIDE_DISAGREEMENT, result[1], result[2], result[3])
                )
            continue
        m, p, q = packed[0], packed[1], packed[2]
        grid = outcome_grid(packed)
        for s, t in _equilibria_from_grid(packed, grid):
            if conjecture == CONJ_PROP1:
                if t < s:
                    if grid[s][t] != 0:
                        violations.append((trial, VIOLATION_REVERSED_NOT_TIED, s, t, 0))
                    if not (t < p and q < s):
                        violations.append((trial, VIOLATION_REVERSED_NOT_LEAPFROG, s, t, 0))
            else:
                if t < p and q < s:
                    violations.append((trial, VIOLATION_LEAPFROG_EQUILIBRIUM, s, t, 0))
    return precondition_count, violations
