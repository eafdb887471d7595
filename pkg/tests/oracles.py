"""Independent brute-force reference implementations used only by tests.

Deliberately naive: different algorithms and different code paths from the
library (fsum accumulation, recursive edit distance, from-scratch UPGMA
cluster means, mpmath for t tails, SVD instead of eigh for PCA).
"""

import itertools
import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np


def rank_naive(values):
    """Average ranks (1-based) computed by scanning sorted groups."""
    values = list(values)
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def pearson_naive(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    num = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    dx = math.sqrt(math.fsum((a - mx) ** 2 for a in x))
    dy = math.sqrt(math.fsum((b - my) ** 2 for b in y))
    return num / (dx * dy)


def t_sf_mp(t, df):
    """P(T >= t) for Student t via the regularized incomplete beta, 50 digits."""
    with mpmath.workdps(50):
        x = mpmath.mpf(df) / (df + mpmath.mpf(t) ** 2)
        tail = mpmath.betainc(
            mpmath.mpf(df) / 2, mpmath.mpf("0.5"), 0, x, regularized=True
        ) / 2
        return float(tail if t >= 0 else 1 - tail)


def spearman_naive(x, y):
    # ranks are exact halves, so detect |rho| == 1 in exact rationals;
    # float rounding can land a perfect arrangement at 0.999... and blow
    # up the t tail
    rx = [Fraction(v) for v in rank_naive(x)]
    ry = [Fraction(v) for v in rank_naive(y)]
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    if cov * cov >= vx * vy:
        return (1.0 if cov > 0 else -1.0), 0.0
    rho = float(cov) / math.sqrt(float(vx) * float(vy))
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return rho, 2.0 * t_sf_mp(abs(t), n - 2)


def pearson_p_naive(x, y):
    r = pearson_naive(x, y)
    n = len(x)
    if abs(r) >= 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, 2.0 * t_sf_mp(abs(t), n - 2)


def u_stat_naive(a, b):
    u = 0.0
    for x in a:
        for y in b:
            if x > y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def mwu_exact_naive(a, b, alternative):
    """Exact Mann-Whitney by enumerating all position labelings."""
    pooled = list(a) + list(b)
    n1 = len(a)
    observed = u_stat_naive(a, b)
    stats = []
    for positions in itertools.combinations(range(len(pooled)), n1):
        chosen = [pooled[i] for i in positions]
        rest = [pooled[i] for i in range(len(pooled)) if i not in positions]
        stats.append(u_stat_naive(chosen, rest))
    total = len(stats)
    eps = 1e-12
    ge = sum(1 for s in stats if s >= observed - eps) / total
    le = sum(1 for s in stats if s <= observed + eps) / total
    if alternative == "greater":
        p = ge
    elif alternative == "less":
        p = le
    else:
        p = min(1.0, 2.0 * min(ge, le))
    return observed, p


def cohens_d_naive(a, b):
    na, nb = len(a), len(b)
    ma = math.fsum(a) / na
    mb = math.fsum(b) / nb
    va = math.fsum((x - ma) ** 2 for x in a) / (na - 1)
    vb = math.fsum((x - mb) ** 2 for x in b) / (nb - 1)
    pooled = math.sqrt(((na - 1) * va + (nb - 1) * vb) / (na + nb - 2))
    return (ma - mb) / pooled


def ols_naive(x, y):
    """Normal equations solved directly."""
    n = len(x)
    sx = math.fsum(x)
    sy = math.fsum(y)
    sxx = math.fsum(v * v for v in x)
    sxy = math.fsum(a * b for a, b in zip(x, y))
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    intercept = (sy - slope * sx) / n
    my = sy / n
    ss_res = math.fsum((b - (slope * a + intercept)) ** 2 for a, b in zip(x, y))
    ss_tot = math.fsum((b - my) ** 2 for b in y)
    return slope, intercept, 1.0 - ss_res / ss_tot


def paired_t_naive(a, b):
    d = [x - y for x, y in zip(a, b)]
    n = len(d)
    md = math.fsum(d) / n
    var = math.fsum((v - md) ** 2 for v in d) / (n - 1)
    t = md / math.sqrt(var / n)
    return t, 2.0 * t_sf_mp(abs(t), n - 1)


def condensed_naive(m):
    n = len(m)
    return [m[i][j] for i in range(n) for j in range(i + 1, n)]


def mantel_exhaustive_naive(d1, d2):
    """Exact permutation distribution over all n! joint relabelings,
    Spearman statistic."""
    n = len(d1)
    x = rank_naive(condensed_naive(d1))
    observed = pearson_naive(x, rank_naive(condensed_naive(d2)))
    count = 0
    total = 0
    for perm in itertools.permutations(range(n)):
        permuted = [[d2[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        stat = pearson_naive(x, rank_naive(condensed_naive(permuted)))
        if stat >= observed - 1e-12:
            count += 1
        total += 1
    return observed, count / total


def levenshtein_naive(a, b):
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + cost)

    return d(len(a), len(b))


def upgma_naive(matrix):
    """From-scratch UPGMA: cluster distance recomputed each step as the mean
    over all original leaf pairs. Returns merges [(id_a, id_b, height, size)]
    with the same id scheme as the library (leaves 0..n-1, merge i -> n+i)."""
    m = np.asarray(matrix, dtype=np.float64)
    n = len(m)
    clusters = {i: [i] for i in range(n)}
    merges = []
    next_id = n
    while len(clusters) > 1:
        best = None
        ids = sorted(clusters)
        for ii in range(len(ids)):
            for jj in range(ii + 1, len(ids)):
                a, b = ids[ii], ids[jj]
                d = float(
                    np.mean([m[x, y] for x in clusters[a] for y in clusters[b]])
                )
                if best is None or d < best[0] - 1e-15:
                    best = (d, a, b)
        d, a, b = best
        merges.append((a, b, d, len(clusters[a]) + len(clusters[b])))
        clusters[next_id] = clusters.pop(a) + clusters.pop(b)
        next_id += 1
    return merges


def pca_svd_oracle(points, n_components):
    """PCA via SVD of the centered matrix; components up to sign."""
    x = np.asarray(points, dtype=np.float64)
    mean = x.mean(axis=0)
    centered = x - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    var = s**2 / (len(x) - 1)
    ratio = var / var.sum()
    return vt[:n_components], ratio[:n_components], centered @ vt[:n_components].T


def tree_distance_naive(tree):
    """Second traversal style: enumerate root paths, sum distinct edges."""
    paths = {}

    def walk(node, acc):
        if not hasattr(node, "left"):
            paths[node] = acc
            return
        walk(node.left, acc + [("L", id(node), node.left_length)])
        walk(node.right, acc + [("R", id(node), node.right_length)])

    walk(tree, [])
    leaves = sorted(paths)
    n = len(leaves)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            pa, pb = paths[leaves[i]], paths[leaves[j]]
            shared = 0
            for ea, eb in zip(pa, pb):
                if ea[:2] == eb[:2]:
                    shared += 1
                else:
                    break
            d = sum(e[2] for e in pa[shared:]) + sum(e[2] for e in pb[shared:])
            out[leaves[i], leaves[j]] = out[leaves[j], leaves[i]] = d
    return out
