# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled campaign kernel; exact twin of ``leapvote._kernel_py``.

See that module for the packed-instance layout and the RNG/draw-order
compatibility contract.  Capacity: 128 policies, 64 voters.
"""

from libc.stdint cimport int64_t, uint64_t

PARTY_FREE, PARTY_SYMMETRIC, PARTY_COMMON_SHAPE = 0, 1, 2
ATTRACTION_RANDOM, ATTRACTION_FULL = 0, 1
CONJ_PROP1, CONJ_PROP2, CONJ_THM1, CONJ_PROP4 = 1, 2, 3, 4
VIOLATION_REVERSED_NOT_TIED = 1
VIOLATION_REVERSED_NOT_LEAPFROG = 2
VIOLATION_LEAPFROG_EQUILIBRIUM = 3
VIOLATION_CROSS_SIDE_DISAGREEMENT = 4

M_CAP = 128
N_CAP = 64

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15UL

# C-level copies of the mode/conjecture codes for use in nogil-style code
cdef int C_PARTY_FREE = 0, C_PARTY_SYMMETRIC = 1, C_PARTY_COMMON_SHAPE = 2
cdef int C_ATTRACTION_RANDOM = 0, C_ATTRACTION_FULL = 1
cdef int C_PROP1 = 1, C_PROP2 = 2, C_THM1 = 3, C_PROP4 = 4


def backend_name():
    return "compiled"


cdef inline uint64_t _mix(uint64_t z) noexcept:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9UL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBUL
    return z ^ (z >> 31)


cdef inline uint64_t _next(uint64_t *state) noexcept:
    state[0] = state[0] + GAMMA
    return _mix(state[0])


cdef inline uint64_t _trial_seed(uint64_t seed, uint64_t trial) noexcept:
    return _mix(seed + (trial + 1) * GAMMA)


def trial_seed(seed, trial):
    """Starting RNG state for one trial, independent of all others."""
    return _trial_seed(<uint64_t>seed, <uint64_t>trial)


def splitmix_sequence(seed, count):
    """First ``count`` raw outputs from state ``seed`` (test hook)."""
    cdef uint64_t state = <uint64_t>seed
    out = []
    for _ in range(count):
        out.append(_next(&state))
    return out


cdef void _interleave(int m, int peak, uint64_t *state, int *pos) noexcept:
    cdef int left = peak - 1
    cdef int right = m - peak
    cdef int next_left = peak - 1
    cdef int next_right = peak + 1
    cdef int k = 1
    cdef uint64_t u
    pos[0] = -1
    pos[peak] = 0
    while left + right:
        u = _next(state)
        if u % <uint64_t>(left + right) < <uint64_t>left:
            pos[next_left] = k
            next_left -= 1
            left -= 1
        else:
            pos[next_right] = k
            next_right += 1
            right -= 1
        k += 1


cdef void _tiers_from_scores(int m, int ideal, int64_t *score, int score_base, int *tier) noexcept:
    # rank distinct score levels descending; equal scores share a tier
    cdef int64_t levels[128]
    cdef int n_levels = 0
    cdef int i, j, k
    cdef int64_t v
    for j in range(1, m + 1):
        v = score[j - ideal + score_base]
        i = 0
        while i < n_levels and levels[i] > v:
            i += 1
        if i < n_levels and levels[i] == v:
            continue
        k = n_levels
        while k > i:
            levels[k] = levels[k - 1]
            k -= 1
        levels[i] = v
        n_levels += 1
    tier[0] = -1
    for j in range(1, m + 1):
        v = score[j - ideal + score_base]
        i = 0
        while levels[i] != v:
            i += 1
        tier[j] = i


cdef int _gen(uint64_t seed, uint64_t trial, int m_lo, int m_hi, int n_lo, int n_hi,
              int party_mode, int attraction_mode,
              int *m_out, int *n_out, int *p_out, int *q_out,
              int *tier_a, int *tier_b, int *ranks, int *lo, int *hi) except -1:
    cdef uint64_t state = _trial_seed(seed, trial)
    cdef uint64_t u
    cdef int m, n, p, q, k, v, ideal, j
    cdef int64_t score[258]
    cdef int score_base

    u = _next(&state)
    m = m_lo + <int>(u % <uint64_t>(m_hi - m_lo + 1))
    u = _next(&state)
    n = n_lo + <int>(u % <uint64_t>(n_hi - n_lo + 1))
    u = _next(&state)
    p = 1 + <int>(u % <uint64_t>(m - 1))
    u = _next(&state)
    q = p + 1 + <int>(u % <uint64_t>(m - p))

    if party_mode == C_PARTY_FREE:
        _interleave(m, p, &state, tier_a)
        _interleave(m, q, &state, tier_b)
    elif party_mode == C_PARTY_SYMMETRIC:
        tier_a[0] = -1
        tier_b[0] = -1
        for j in range(1, m + 1):
            tier_a[j] = j - p if j >= p else p - j
            tier_b[j] = j - q if j >= q else q - j
    elif party_mode == C_PARTY_COMMON_SHAPE:
        score_base = q - 1  # displacement d stored at score[d + score_base]
        score[score_base] = 0
        for k in range(1, m - p + 1):
            u = _next(&state)
            score[k + score_base] = score[k - 1 + score_base] - 1 - <int64_t>(u % 3)
        for k in range(1, q):
            u = _next(&state)
            score[score_base - k] = score[score_base - k + 1] - 1 - <int64_t>(u % 3)
        _tiers_from_scores(m, p, score, score_base, tier_a)
        _tiers_from_scores(m, q, score, score_base, tier_b)
    else:
        raise ValueError(f"unknown party mode {party_mode}")

    for v in range(n):
        u = _next(&state)
        ideal = 1 + <int>(u % <uint64_t>m)
        _interleave(m, ideal, &state, ranks + v * 129)
        if attraction_mode == C_ATTRACTION_FULL:
            lo[v] = 1
            hi[v] = m
        elif attraction_mode == C_ATTRACTION_RANDOM:
            u = _next(&state)
            lo[v] = 1 + <int>(u % <uint64_t>ideal)
            u = _next(&state)
            hi[v] = ideal + <int>(u % <uint64_t>(m - ideal + 1))
        else:
            raise ValueError(f"unknown attraction mode {attraction_mode}")

    m_out[0] = m
    n_out[0] = n
    p_out[0] = p
    q_out[0] = q
    return 0


cdef void _grid(int m, int n, int *ranks, int *lo, int *hi, signed char *grid) noexcept:
    cdef int s, t, v, n_a, n_b, lv, hv
    cdef int *rv
    for s in range(1, m + 1):
        for t in range(1, m + 1):
            n_a = 0
            n_b = 0
            for v in range(n):
                lv = lo[v]
                hv = hi[v]
                if (lv <= s and s <= hv) or (lv <= t and t <= hv):
                    rv = ranks + v * 129
                    if rv[s] < rv[t]:
                        n_a += 1
                    elif rv[t] < rv[s]:
                        n_b += 1
            grid[s * 129 + t] = 1 if n_a > n_b else (-1 if n_b > n_a else 0)


cdef int _equilibria(int m, int *tier_a, int *tier_b, signed char *grid,
                     int *eq_s, int *eq_t) noexcept:
    # returns the number of equilibria, filling eq_s/eq_t in lex order
    cdef int col_max[129]
    cdef int row_max[129]
    cdef int s, t, key, width, count
    width = m + 1
    for t in range(1, m + 1):
        col_max[t] = -1
        for s in range(1, m + 1):
            key = (grid[s * 129 + t] + 1) * width + (m - tier_a[s])
            if key > col_max[t]:
                col_max[t] = key
    for s in range(1, m + 1):
        row_max[s] = -1
        for t in range(1, m + 1):
            key = (1 - grid[s * 129 + t]) * width + (m - tier_b[t])
            if key > row_max[s]:
                row_max[s] = key
    count = 0
    for s in range(1, m + 1):
        for t in range(1, m + 1):
            if ((grid[s * 129 + t] + 1) * width + (m - tier_a[s]) == col_max[t]
                    and (1 - grid[s * 129 + t]) * width + (m - tier_b[t]) == row_max[s]):
                eq_s[count] = s
                eq_t[count] = t
                count += 1
    return count


cdef int _axiom2(int m, int p, int q, int *tier_a, int *tier_b,
                 int *a_out, int *b_out, int *dir_out) noexcept:
    cdef int a, b
    for a in range(1, m - q + 1):
        for b in range(1, p):
            if (tier_a[p + a] <= tier_a[p - b]) != (tier_b[q + a] <= tier_b[q - b]):
                a_out[0] = a
                b_out[0] = b
                dir_out[0] = 1
                return 0
            if (tier_a[p - b] <= tier_a[p + a]) != (tier_b[q - b] <= tier_b[q + a]):
                a_out[0] = a
                b_out[0] = b
                dir_out[0] = 2
                return 0
    a_out[0] = 0
    b_out[0] = 0
    dir_out[0] = 0
    return 1


cdef int _fixed_participation(int m, int n, int *lo, int *hi) noexcept:
    cdef uint64_t masks[129]
    cdef uint64_t base, union_
    cdef int x, v, s, t, have_base
    for x in range(1, m + 1):
        masks[x] = 0
        for v in range(n):
            if lo[v] <= x and x <= hi[v]:
                masks[x] = masks[x] | (<uint64_t>1 << v)
    have_base = 0
    base = 0
    for s in range(1, m + 1):
        for t in range(s + 1, m + 1):
            union_ = masks[s] | masks[t]
            if not have_base:
                base = union_
                have_base = 1
            elif union_ != base:
                return 0
    return 1


# --- python-facing wrappers -------------------------------------------------


cdef _pack_lists(int m, int n, int p, int q, int *tier_a, int *tier_b,
                 int *ranks, int *lo, int *hi):
    cdef int j, v
    ta = [tier_a[j] for j in range(m + 1)]
    tb = [tier_b[j] for j in range(m + 1)]
    rk = [[ranks[v * 129 + j] for j in range(m + 1)] for v in range(n)]
    return (m, p, q, ta, tb, rk, [lo[v] for v in range(n)], [hi[v] for v in range(n)])


cdef int _load_packed(object packed, int *m, int *n, int *p, int *q,
                      int *tier_a, int *tier_b, int *ranks, int *lo, int *hi) except -1:
    cdef int j, v
    m[0] = packed[0]
    p[0] = packed[1]
    q[0] = packed[2]
    ta, tb, rk, lo_l, hi_l = packed[3], packed[4], packed[5], packed[6], packed[7]
    n[0] = len(lo_l)
    if m[0] > 128 or n[0] > 64:
        raise ValueError("packed instance exceeds kernel capacity (128 policies / 64 voters)")
    for j in range(m[0] + 1):
        tier_a[j] = ta[j]
        tier_b[j] = tb[j]
    for v in range(n[0]):
        lo[v] = lo_l[v]
        hi[v] = hi_l[v]
        row = rk[v]
        for j in range(m[0] + 1):
            ranks[v * 129 + j] = row[j]
    return 0


cdef int _check_gen_args(int m_lo, int m_hi, int n_lo, int n_hi) except -1:
    if not (2 <= m_lo <= m_hi <= 128):
        raise ValueError("policy-count range must lie in 2..128")
    if not (0 <= n_lo <= n_hi <= 64):
        raise ValueError("voter-count range must lie in 0..64")
    return 0


def generate(seed, trial, m_lo, m_hi, n_lo, n_hi, party_mode, attraction_mode):
    """Deterministic packed instance for (seed, trial)."""
    cdef int m, n, p, q
    cdef int tier_a[129]
    cdef int tier_b[129]
    cdef int ranks[8256]  # 64 voters x 129 slots
    cdef int lo[64]
    cdef int hi[64]
    _check_gen_args(m_lo, m_hi, n_lo, n_hi)
    _gen(<uint64_t>seed, <uint64_t>trial, m_lo, m_hi, n_lo, n_hi,
         party_mode, attraction_mode, &m, &n, &p, &q, tier_a, tier_b, ranks, lo, hi)
    return _pack_lists(m, n, p, q, tier_a, tier_b, ranks, lo, hi)


def outcome_grid(packed):
    """(m+1)x(m+1) grid of outcomes; grid[s][t] in {1, -1, 0}."""
    cdef int m, n, p, q, s, t
    cdef int tier_a[129]
    cdef int tier_b[129]
    cdef int ranks[8256]
    cdef int lo[64]
    cdef int hi[64]
    cdef signed char grid[16641]  # 129 x 129
    _load_packed(packed, &m, &n, &p, &q, tier_a, tier_b, ranks, lo, hi)
    _grid(m, n, ranks, lo, hi, grid)
    out = [[0] * (m + 1) for _ in range(m + 1)]
    for s in range(1, m + 1):
        row = out[s]
        for t in range(1, m + 1):
            row[t] = grid[s * 129 + t]
    return out


def equilibria(packed):
    """All pure-strategy equilibria as (s, t) pairs in lex order."""
    cdef int m, n, p, q, count, i
    cdef int tier_a[129]
    cdef int tier_b[129]
    cdef int ranks[8256]
    cdef int lo[64]
    cdef int hi[64]
    cdef signed char grid[16641]
    cdef int eq_s[16641]
    cdef int eq_t[16641]
    _load_packed(packed, &m, &n, &p, &q, tier_a, tier_b, ranks, lo, hi)
    _grid(m, n, ranks, lo, hi, grid)
    count = _equilibria(m, tier_a, tier_b, grid, eq_s, eq_t)
    return [(eq_s[i], eq_t[i]) for i in range(count)]


def axiom2_witness(packed):
    """Cross-side agreement check: (1, 0, 0, 0) when the parties agree,
    else (0, a, b, direction) with direction 1 = right-vs-left."""
    cdef int m, n, p, q, a, b, direction, ok
    cdef int tier_a[129]
    cdef int tier_b[129]
    cdef int ranks[8256]
    cdef int lo[64]
    cdef int hi[64]
    _load_packed(packed, &m, &n, &p, &q, tier_a, tier_b, ranks, lo, hi)
    ok = _axiom2(m, p, q, tier_a, tier_b, &a, &b, &direction)
    return (ok, a, b, direction)


def fixed_participation(packed):
    """True iff the active-voter set is one fixed set at every pair of
    distinct platforms."""
    cdef int m, n, p, q
    cdef int tier_a[129]
    cdef int tier_b[129]
    cdef int ranks[8256]
    cdef int lo[64]
    cdef int hi[64]
    _load_packed(packed, &m, &n, &p, &q, tier_a, tier_b, ranks, lo, hi)
    return bool(_fixed_participation(m, n, lo, hi))


def run_campaign(conjecture, apply_precondition, seed, m_lo, m_hi, n_lo, n_hi,
                 party_mode, attraction_mode, trial_lo, trial_hi, inject):
    """Run trials [trial_lo, trial_hi); see the pure twin for the contract."""
    cdef int m, n, p, q, s, t, i, count, ok, a, b, direction
    cdef int inj_m = 0, inj_n = 0, inj_p = 0, inj_q = 0
    cdef int conj = conjecture
    cdef int pm = party_mode
    cdef int am = attraction_mode
    cdef int apply_pre = 1 if apply_precondition else 0
    cdef int has_inject = 1 if inject is not None else 0
    cdef int injected
    cdef uint64_t seed_u = <uint64_t>seed
    cdef int64_t trial, lo_trial = trial_lo, hi_trial = trial_hi
    cdef long precondition_count = 0
    cdef int tier_a[129]
    cdef int tier_b[129]
    cdef int ranks[8256]
    cdef int lo[64]
    cdef int hi[64]
    cdef int inj_tier_a[129]
    cdef int inj_tier_b[129]
    cdef int inj_ranks[8256]
    cdef int inj_lo[64]
    cdef int inj_hi[64]
    cdef signed char grid[16641]
    cdef int eq_s[16641]
    cdef int eq_t[16641]

    _check_gen_args(m_lo, m_hi, n_lo, n_hi)
    if conj < 1 or conj > 4:
        raise ValueError(f"unknown conjecture code {conjecture}")
    if pm not in (0, 1, 2):
        raise ValueError(f"unknown party mode {party_mode}")
    if am not in (0, 1):
        raise ValueError(f"unknown attraction mode {attraction_mode}")
    if has_inject:
        _load_packed(inject, &inj_m, &inj_n, &inj_p, &inj_q,
                     inj_tier_a, inj_tier_b, inj_ranks, inj_lo, inj_hi)

    violations = []
    for trial in range(lo_trial, hi_trial):
        injected = has_inject and trial == 0
        if injected:
            m = inj_m
            n = inj_n
            p = inj_p
            q = inj_q
            for i in range(m + 1):
                tier_a[i] = inj_tier_a[i]
                tier_b[i] = inj_tier_b[i]
            for i in range(n):
                lo[i] = inj_lo[i]
                hi[i] = inj_hi[i]
            for i in range(n * 129):
                ranks[i] = inj_ranks[i]
        else:
            _gen(seed_u, <uint64_t>trial, m_lo, m_hi, n_lo, n_hi, pm, am,
                 &m, &n, &p, &q, tier_a, tier_b, ranks, lo, hi)

        if conj == C_PROP1:
            ok = 1
        elif conj == C_PROP2:
            ok = _fixed_participation(m, n, lo, hi)
        elif conj == C_THM1:
            ok = _axiom2(m, p, q, tier_a, tier_b, &a, &b, &direction)
        else:
            ok = 1 if (not injected and pm in (1, 2)) else 0
        if ok:
            precondition_count += 1
        elif apply_pre:
            continue

        if conj == C_PROP4:
            ok = _axiom2(m, p, q, tier_a, tier_b, &a, &b, &direction)
            if not ok:
                violations.append((int(trial), VIOLATION_CROSS_SIDE_DISAGREEMENT, a, b, direction))
            continue

        _grid(m, n, ranks, lo, hi, grid)
        count = _equilibria(m, tier_a, tier_b, grid, eq_s, eq_t)
        for i in range(count):
            s = eq_s[i]
            t = eq_t[i]
            if conj == C_PROP1:
                if t < s:
                    if grid[s * 129 + t] != 0:
                        violations.append((int(trial), VIOLATION_REVERSED_NOT_TIED, s, t, 0))
                    if not (t < p and q < s):
                        violations.append((int(trial), VIOLATION_REVERSED_NOT_LEAPFROG, s, t, 0))
            else:
                if t < p and q < s:
                    violations.append((int(trial), VIOLATION_LEAPFROG_EQUILIBRIUM, s, t, 0))
    return int(precondition_count), violations
