"""Significance machinery: paired t-test, Wilcoxon signed-rank, average ranks."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc


@dataclass(frozen=True)
class SignificanceResult:
    statistic: float
    p_value: float
    n_effective: int
    degenerate: bool = False


def t_sf_two_sided(t: float, df: int) -> float:
    """P(|T_df| >= t) via the regularized incomplete beta function."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def paired_t_test(a, b) -> SignificanceResult:
    """Two-sided paired t-test on per-seed score vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("score vectors must be 1-D and equal length")
    n = a.size
    if n < 2:
        raise ValueError("need at least two pairs")
    d = a - b
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0:
        # all differences identical: nothing to test
        if mean == 0:
            return SignificanceResult(0.0, 1.0, n, degenerate=True)
        return SignificanceResult(math.copysign(math.inf, mean), 0.0, n, degenerate=True)
    t = mean / (sd / math.sqrt(n))
    return SignificanceResult(t, t_sf_two_sided(abs(t), n - 1), n)


def _midranks(values: np.ndarray) -> np.ndarray:
    """Average ranks (1-based) with midrank tie handling."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _wilcoxon_exact_cdf_leq(ranks: np.ndarray, w: float) -> float:
    """P(W+ <= w) under the null, integer ranks, no ties."""
    n = ranks.size
    max_sum = int(ranks.sum())
    counts = np.zeros(max_sum + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in ranks.astype(np.int64):
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: max_sum + 1 - r]
        counts = counts + shifted
    return counts[: int(math.floor(w)) + 1].sum() / 2.0**n


def wilcoxon_signed_rank(a, b, exact_limit: int = 20) -> SignificanceResult:
    """Two-sided Wilcoxon signed-rank test with zero differences dropped.

    Exact enumeration when n_effective <= exact_limit and |d| has no ties,
    else a normal approximation with tie and continuity corrections.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("score vectors must be 1-D and equal length")
    d = a - b
    d = d[d != 0]
    n = d.size
    if n == 0:
        return SignificanceResult(0.0, 1.0, 0, degenerate=True)
    ranks = _midranks(np.abs(d))
    w_pos = float(ranks[d > 0].sum())
    w_neg = float(ranks[d < 0].sum())
    w = min(w_pos, w_neg)

    has_ties = np.unique(np.abs(d)).size < n
    if n <= exact_limit and not has_ties:
        p = min(1.0, 2.0 * _wilcoxon_exact_cdf_leq(ranks, w))
        return SignificanceResult(w, p, n)

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - (tie_counts**3 - tie_counts).sum() / 48.0
    if var == 0:
        return SignificanceResult(w, 1.0, n, degenerate=True)
    z = (w - mean + 0.5) / math.sqrt(var)
    p = min(1.0, math.erfc(-z / math.sqrt(2.0)))
    return SignificanceResult(w, p, n)


def average_ranks(scores_by_method: dict) -> dict:
    """Mean rank per method over seeds; rank 1 = highest score, midranks for ties."""
    methods = list(scores_by_method)
    mat = np.asarray([scores_by_method[m] for m in methods], dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("every method needs the same number of per-seed scores")
    n_methods, n_seeds = mat.shape
    totals = np.zeros(n_methods)
    for s in range(n_seeds):
        totals += _midranks(-mat[:, s])
    return {m: totals[i] / n_seeds for i, m in enumerate(methods)}
