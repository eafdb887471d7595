"""Self-contained statistics: correlation, permutation, and rank tests.

Everything is implemented directly (no statistics library): average-rank
ties, tie-corrected normal approximations, exact enumerations for small
samples, and t / normal tail probabilities through a continued-fraction
regularized incomplete beta and math.erfc (both good to ~1e-12).

Randomized procedures draw replicate r from a counter-based generator keyed
by (seed XOR r), so every replicate is a pure function of (seed, r) and
results cannot depend on evaluation order or worker count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

ALTERNATIVES = ("two_sided", "greater", "less")


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method: str
    alternative: str
    n: int | tuple[int, ...]
    effect_size: float | None = None
    seed: int | None = None
    n_resamples: int | None = None


@dataclass(frozen=True)
class BootstrapCI:
    point: float
    lower: float
    upper: float
    confidence: float
    n_resamples: int
    seed: int
    point_within_interval: bool


def _substream(seed: int, replicate: int) -> np.random.Generator:
    """Counter-based sub-stream: replicate r is a pure function of (seed, r)."""
    return np.random.Generator(np.random.Philox(key=(seed ^ replicate) & (2**64 - 1)))


# ---------------------------------------------------------------------------
# Tail probabilities


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    max_iter = 300
    eps = 1e-15
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError("beta parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided(t: float, df: float) -> float:
    """P(|T_df| >= |t|)."""
    if df <= 0:
        raise ValueError("df must be positive")
    if math.isinf(t):
        return 0.0
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


def student_t_sf(t: float, df: float) -> float:
    """P(T_df > t)."""
    p = student_t_two_sided(t, df) / 2.0
    return p if t >= 0 else 1.0 - p


def normal_sf(z: float) -> float:
    """P(Z > z) for standard normal."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# Ranking and correlation


def rank_average(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned their average rank."""
    x = np.asarray(values, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=np.float64)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> float:
    """Pearson correlation, clamped to [-1, 1]."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D of equal length")
    if len(x) < 2:
        raise ValueError("need at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sx = float(np.sum(xc * xc))
    sy = float(np.sum(yc * yc))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("constant input")
    r = float(np.sum(xc * yc)) / math.sqrt(sx * sy)
    return float(np.clip(r, -1.0, 1.0))


def spearman(
    x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray
) -> tuple[float, float]:
    """Spearman rank correlation with a two-sided t-approximation p-value."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D of equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 observations")
    rho = pearson(rank_average(x), rank_average(y))
    if abs(rho) >= 1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return rho, student_t_two_sided(t, n - 2)


# ---------------------------------------------------------------------------
# Mantel permutation test


def _condensed(values: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(values.shape[0], k=1)
    return values[iu]


def mantel(
    d1,
    d2,
    n_perm: int = 999,
    seed: int = 0,
    method: str = "spearman",
    exhaustive: bool = False,
) -> TestResult:
    """One-sided (greater) Mantel test between two distance matrices.

    Labels must be equal and in the same order. Permutations jointly reorder
    rows and columns of d2; p = (1 + #{perm stat >= observed}) / (n_perm + 1).
    With exhaustive=True all n! permutations are enumerated (identity
    included) and p = #{stat >= observed} / n!.
    """
    if method not in ("spearman", "pearson"):
        raise ValueError("method must be spearman or pearson")
    if tuple(d1.labels) != tuple(d2.labels):
        raise ValueError("label mismatch between matrices")
    d1.validate()
    d2.validate()
    n = d1.n
    if n < 4:
        raise ValueError("need at least 4 labels")
    v1 = _condensed(np.asarray(d1.values, dtype=np.float64))
    v2_full = np.asarray(d2.values, dtype=np.float64)
    v2 = _condensed(v2_full)
    if method == "spearman":
        x = rank_average(v1)
        y_base = rank_average(v2)
    else:
        x = v1
        y_base = v2
    # joint row/col permutation of a symmetric zero-diagonal matrix only
    # permutes the condensed entries, so rank once and gather per permutation
    m = len(v1)
    pair_index = np.zeros((n, n), dtype=np.int64)
    iu = np.triu_indices(n, k=1)
    pair_index[iu] = np.arange(m)
    pair_index = pair_index + pair_index.T
    observed = pearson(x, y_base)

    def permuted_stat(perm: np.ndarray) -> float:
        gathered = y_base[pair_index[np.ix_(perm, perm)][iu]]
        return pearson(x, gathered)

    if exhaustive:
        stats = [permuted_stat(np.array(p)) for p in itertools.permutations(range(n))]
        count = sum(1 for s in stats if s >= observed)
        p = count / math.factorial(n)
        return TestResult(
            statistic=observed,
            p_value=p,
            method=f"mantel_{method}_exhaustive",
            alternative="greater",
            n=n,
            n_resamples=math.factorial(n),
        )
    if n_perm < 1:
        raise ValueError("n_perm must be positive")
    count = 0
    for r in range(n_perm):
        perm = _substream(seed, r).permutation(n)
        if permuted_stat(perm) >= observed:
            count += 1
    p = (count + 1) / (n_perm + 1)
    return TestResult(
        statistic=observed,
        p_value=p,
        method=f"mantel_{method}",
        alternative="greater",
        n=n,
        seed=seed,
        n_resamples=n_perm,
    )


# ---------------------------------------------------------------------------
# Mann-Whitney U


def _u_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """U for sample a: #{a_i > b_j} + 0.5 * #{a_i == b_j}."""
    gt = np.sum(a[:, None] > b[None, :])
    eq = np.sum(a[:, None] == b[None, :])
    return float(gt) + 0.5 * float(eq)


EXACT_LIMIT = 12


def mann_whitney_u(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    alternative: str = "two_sided",
) -> TestResult:
    """Rank-sum test. Exact label enumeration when len(a)+len(b) <= 12,
    otherwise a tie-corrected normal approximation with continuity
    correction. Two-sided exact p doubles the smaller tail (capped at 1)."""
    if alternative not in ALTERNATIVES:
        raise ValueError(f"alternative must be one of {ALTERNATIVES}")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be non-empty 1-D")
    n1, n2 = len(a), len(b)
    u = _u_statistic(a, b)
    if n1 + n2 <= EXACT_LIMIT:
        pooled = np.concatenate([a, b])
        n = n1 + n2
        ge = le = total = 0
        for idx in itertools.combinations(range(n), n1):
            sel = np.zeros(n, dtype=bool)
            sel[list(idx)] = True
            u_perm = _u_statistic(pooled[sel], pooled[~sel])
            total += 1
            if u_perm >= u:
                ge += 1
            if u_perm <= u:
                le += 1
        p_greater = ge / total
        p_less = le / total
        if alternative == "greater":
            p = p_greater
        elif alternative == "less":
            p = p_less
        else:
            p = min(1.0, 2.0 * min(p_greater, p_less))
        method = "mann_whitney_u_exact"
    else:
        mu = n1 * n2 / 2.0
        n = n1 + n2
        _, tie_counts = np.unique(np.concatenate([a, b]), return_counts=True)
        tie_term = float(np.sum(tie_counts**3 - tie_counts)) / (n * (n - 1))
        var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
        if var <= 0.0:
            p = 1.0
        else:
            sd = math.sqrt(var)
            if alternative == "greater":
                p = normal_sf((u - mu - 0.5) / sd)
            elif alternative == "less":
                p = normal_sf((mu - u - 0.5) / sd)
            else:
                p = min(1.0, 2.0 * normal_sf((abs(u - mu) - 0.5) / sd))
        method = "mann_whitney_u_normal"
    return TestResult(
        statistic=u,
        p_value=p,
        method=method,
        alternative=alternative,
        n=(n1, n2),
    )


# ---------------------------------------------------------------------------
# Effect sizes and regression


def cohens_d(
    group1: Sequence[float] | np.ndarray, group2: Sequence[float] | np.ndarray
) -> float:
    """Standardized mean difference with a size-weighted pooled (n-1) sd."""
    x = np.asarray(group1, dtype=np.float64)
    y = np.asarray(group2, dtype=np.float64)
    if len(x) < 2 or len(y) < 2:
        raise ValueError("each group needs at least 2 observations")
    n1, n2 = len(x), len(y)
    v1 = float(np.var(x, ddof=1))
    v2 = float(np.var(y, ddof=1))
    pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / (n1 + n2 - 2)
    if pooled == 0.0:
        raise ValueError("zero pooled variance")
    return float((x.mean() - y.mean()) / math.sqrt(pooled))


def ols_r2(
    x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray
) -> tuple[float, float, float]:
    """Simple least squares: (slope, intercept, r_squared) with r2 = pearson^2."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D of equal length")
    if len(x) < 3:
        raise ValueError("need at least 3 observations")
    xc = x - x.mean()
    sxx = float(np.sum(xc * xc))
    if sxx == 0.0:
        raise ValueError("constant predictor")
    slope = float(np.sum(xc * (y - y.mean()))) / sxx
    intercept = float(y.mean() - slope * x.mean())
    r = pearson(x, y)
    r2 = float(np.clip(r * r, 0.0, 1.0))
    return slope, intercept, r2


def paired_t(
    a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray
) -> TestResult:
    """Two-sided paired t-test on a - b."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D of equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 pairs")
    d = x - y
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        raise ValueError("zero difference variance")
    t = float(d.mean() / (sd / math.sqrt(n)))
    return TestResult(
        statistic=t,
        p_value=student_t_two_sided(t, n - 1),
        method="paired_t",
        alternative="two_sided",
        n=n,
    )


# ---------------------------------------------------------------------------
# Bootstrap


def bootstrap_ci(
    values: Sequence[float] | np.ndarray,
    statistic: Callable[[np.ndarray], float],
    n_resamples: int = 1000,
    confidence: float = 0.95,
    seed: int = 0,
) -> BootstrapCI:
    """Percentile bootstrap interval. Replicate r resamples with a generator
    keyed by seed XOR r, so the interval is bit-identical for a given seed
    regardless of parallelism."""
    vals = np.asarray(values)
    if vals.ndim != 1 or len(vals) < 2:
        raise ValueError("need a 1-D sample with at least 2 values")
    if n_resamples < 100:
        raise ValueError("n_resamples must be at least 100")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    n = len(vals)
    try:
        point = float(statistic(vals))
    except Exception as exc:
        raise ValueError(f"statistic undefined on the original sample: {exc}") from exc
    reps = np.empty(n_resamples, dtype=np.float64)
    for r in range(n_resamples):
        idx = _substream(seed, r).integers(0, n, size=n)
        try:
            reps[r] = float(statistic(vals[idx]))
        except Exception as exc:
            raise ValueError(f"statistic undefined on replicate {r}: {exc}") from exc
    alpha = (1.0 - confidence) / 2.0
    lower = float(np.quantile(reps, alpha, method="linear"))
    upper = float(np.quantile(reps, 1.0 - alpha, method="linear"))
    return BootstrapCI(
        point=point,
        lower=lower,
        upper=upper,
        confidence=confidence,
        n_resamples=n_resamples,
        seed=seed,
        point_within_interval=bool(lower <= point <= upper),
    )
