"""Mann-Whitney U with exact permutation and tie-corrected normal fallback.

U counts pairs where the first sample is below the second, plus half per tie;
swapping samples maps U to m*n - U. Two-sided p doubles the smaller tail and
caps at 1.
"""

import itertools
import math
from dataclasses import dataclass

EXACT_LIMIT = 200_000

TIER_NONE = "none"
TIER_95 = "95"
TIER_99 = "99"
TIER_999 = "99.9"


@dataclass(frozen=True)
class TestResult:
    U: float
    z: float
    p_two_sided: float
    method: str  # "exact" or "normal_approx"
    tier: str


def significance_tier(p: float) -> str:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be within [0, 1]")
    if p < 0.001:
        return TIER_999
    if p < 0.01:
        return TIER_99
    if p < 0.05:
        return TIER_95
    return TIER_NONE


def _midranks(pooled):
    """Rank positions 1..N with ties sharing their average rank."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _u_from_rank_sum(rank_sum: float, m: int, n: int) -> float:
    # rank-sum identity gives pairs-above; flip to the pairs-below convention
    u_greater = rank_sum - m * (m + 1) / 2.0
    return m * n - u_greater


def _tie_term(pooled) -> float:
    total = 0.0
    for v in set(pooled):
        t = pooled.count(v)
        total += t ** 3 - t
    return total


def _normal_p(u: float, m: int, n: int, pooled) -> tuple:
    big_n = m + n
    mu = m * n / 2.0
    var = (m * n / 12.0) * ((big_n + 1) - _tie_term(pooled) / (big_n * (big_n - 1)))
    if var <= 0.0:
        return 0.0, 1.0  # every pooled value identical
    d = u - mu
    if abs(d) <= 0.5:
        z = 0.0
    else:
        z = (d - math.copysign(0.5, d)) / math.sqrt(var)
    p = math.erfc(abs(z) / math.sqrt(2.0))
    return z, min(p, 1.0)


def _exact_p(u_obs: float, m: int, n: int, pooled) -> float:
    ranks = _midranks(pooled)
    le = ge = total = 0
    for combo in itertools.combinations(range(m + n), m):
        rank_sum = 0.0
        for i in combo:
            rank_sum += ranks[i]
        u = _u_from_rank_sum(rank_sum, m, n)
        total += 1
        if u <= u_obs:
            le += 1
        if u >= u_obs:
            ge += 1
    return min(1.0, 2.0 * min(le, ge) / total)


def mann_whitney_u(a, b, method: str = "auto") -> TestResult:
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    m, n = len(a), len(b)
    pooled = a + b
    ranks = _midranks(pooled)
    u = _u_from_rank_sum(sum(ranks[:m]), m, n)

    if method == "auto":
        method = "exact" if math.comb(m + n, m) <= EXACT_LIMIT else "normal_approx"
    if method not in ("exact", "normal_approx"):
        raise ValueError(f"unknown method {method!r}")

    z, p_norm = _normal_p(u, m, n, pooled)
    p = _exact_p(u, m, n, pooled) if method == "exact" else p_norm
    return TestResult(u, z, p, method, significance_tier(p))
