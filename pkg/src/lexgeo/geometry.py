"""Vector-space operations over embedding stores.

All reductions go through numpy (pairwise summation), so results do not
depend on worker count or iteration order. Corrections fit their basis on
the full concept x language row matrix of the analyzed layer; masked-false
cells are excluded from fits and from every pairwise statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .store import DistanceMatrix, EmbeddingStore


@dataclass(frozen=True)
class CorrectionConfig:
    """Post-hoc anisotropy correction: global mean removal plus top-k
    principal component removal. k=0 with apply_global_mean=False is the
    identity (raw vectors)."""

    k: int = 3
    apply_global_mean: bool = True

    def validate(self) -> None:
        if self.k < 0:
            raise ValueError("k must be non-negative")


RAW = CorrectionConfig(k=0, apply_global_mean=False)
DEFAULT_CORRECTION = CorrectionConfig()


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("zero-norm input")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    return 1.0 - cosine_similarity(u, v)


# ---------------------------------------------------------------------------
# PCA


@dataclass(frozen=True)
class PcaResult:
    components: np.ndarray            # [n_components x dim], orthonormal rows
    explained_variance_ratio: np.ndarray
    projected: np.ndarray             # [n x n_components]
    mean: np.ndarray


def _fix_signs(components: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: flip each component so its
    largest-absolute coordinate is positive; ties break to lowest index."""
    out = components.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def pca_project(points: np.ndarray, n_components: int) -> PcaResult:
    """Exact PCA via symmetric eigendecomposition of the covariance.

    Requires 1 <= n_components <= min(n - 1, dim) and non-identical points.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("points must be 2-D")
    n, dim = x.shape
    if n_components < 1 or n_components > min(n - 1, dim):
        raise ValueError("n_components out of range")
    mean = x.mean(axis=0)
    xc = x - mean
    total_var = float(np.sum(xc * xc)) / (n - 1)
    if total_var == 0.0:
        raise ValueError("all points identical")
    cov = (xc.T @ xc) / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    components = _fix_signs(eigvecs[:, order].T[:n_components])
    ratio = eigvals[:n_components] / np.sum(eigvals)
    projected = xc @ components.T
    return PcaResult(components, ratio, projected, mean)


# ---------------------------------------------------------------------------
# ABTT correction


def abtt_basis(matrix: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Global mean and top-k principal directions of the centered rows."""
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("matrix must be 2-D")
    n, dim = x.shape
    if k >= min(n, dim) and k > 0:
        raise ValueError("k too large for matrix shape")
    mean = x.mean(axis=0)
    if k == 0:
        return mean, np.zeros((0, dim))
    xc = x - mean
    cov = (xc.T @ xc) / max(n - 1, 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:k]
    return mean, _fix_signs(eigvecs[:, order].T)


def remove_components(matrix: np.ndarray, components: np.ndarray) -> np.ndarray:
    """Subtract the projection of each row onto the span of *components*."""
    x = np.asarray(matrix, dtype=np.float64)
    if components.shape[0] == 0:
        return x.copy()
    return x - (x @ components.T) @ components


def abtt_correct(matrix: np.ndarray, config: CorrectionConfig = DEFAULT_CORRECTION) -> np.ndarray:
    """All-but-the-top correction of a row matrix.

    Output is (X - mean) minus its projection onto the top-k principal
    directions of (X - mean); with apply_global_mean=False the projection is
    removed from the raw rows instead. All-identical input with k >= 1 is
    defined to return the all-zero matrix.
    """
    config.validate()
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("matrix must be 2-D")
    mean, components = abtt_basis(x, config.k)
    centered = x - mean
    if config.k >= 1 and np.allclose(centered, 0.0, atol=1e-12 * (1.0 + np.abs(x).max())):
        return np.zeros_like(x)
    base = centered if config.apply_global_mean else x
    return remove_components(base, components)


def correct_layer(
    store: EmbeddingStore, layer: int, correction: CorrectionConfig = DEFAULT_CORRECTION
) -> np.ndarray:
    """Corrected [concepts x languages x dim] slice of one layer.

    The correction basis is fit on the masked-true rows of the layer,
    flattened over (concept, language). Masked-false cells stay zero.
    """
    li = store.layer_index(layer)
    slab = store.tensor[li].astype(np.float64)
    mask = store.mask
    rows = slab[mask]
    if rows.shape[0] == 0:
        raise ValueError("no valid cells in layer")
    corrected = abtt_correct(rows, correction)
    out = np.zeros_like(slab)
    out[mask] = corrected
    return out


def per_language_center(store: EmbeddingStore, layer: int) -> np.ndarray:
    """Layer slice with each language's mean (over its valid concepts)
    subtracted. Masked-false cells stay zero."""
    li = store.layer_index(layer)
    slab = store.tensor[li].astype(np.float64)
    return center_per_language(slab, store.mask)


def center_per_language(slab: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Subtract per-language masked means from a [C x L x D] slab."""
    counts = mask.sum(axis=0)
    if np.any(counts == 0):
        bad = int(np.argmin(counts))
        raise ValueError(f"language index {bad} has no valid concepts")
    valid = mask[:, :, None]
    sums = np.where(valid, slab, 0.0).sum(axis=0)
    centroids = sums / counts[:, None]
    return np.where(valid, slab - centroids[None, :, :], 0.0)


# ---------------------------------------------------------------------------
# Pairwise distances and convergence


def _unit_rows(slab: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Normalize masked-true cells to unit norm; zero elsewhere.

    Raises on zero-norm valid cells (cosine undefined).
    """
    norms = np.linalg.norm(slab, axis=2)
    if np.any(norms[mask] == 0.0):
        raise ValueError("zero-norm input in valid cell")
    safe = np.where(norms == 0.0, 1.0, norms)
    unit = slab / safe[:, :, None]
    return np.where(mask[:, :, None], unit, 0.0)


def pairwise_language_distance(
    store: EmbeddingStore, layer: int, correction: CorrectionConfig = DEFAULT_CORRECTION
) -> DistanceMatrix:
    """Mean cosine distance between language pairs over jointly valid concepts."""
    slab = correct_layer(store, layer, correction)
    mask = store.mask
    unit = _unit_rows(slab, mask)
    # sum over concepts of per-concept cosine gram matrices, clamped per pair
    cos = np.einsum("cld,cmd->clm", unit, unit)
    cos = np.clip(cos, -1.0, 1.0)
    joint = mask[:, :, None] & mask[:, None, :]
    totals = np.where(joint, 1.0 - cos, 0.0).sum(axis=0)
    counts = joint.sum(axis=0)
    n = len(store.languages)
    off = ~np.eye(n, dtype=bool)
    if np.any(counts[off] == 0):
        a, b = np.argwhere(off & (counts == 0))[0]
        raise ValueError(
            f"language pair ({store.codes[a]}, {store.codes[b]}) shares no valid concepts"
        )
    values = np.zeros((n, n))
    values[off] = totals[off] / counts[off]
    values = np.clip((values + values.T) / 2.0, 0.0, 2.0)
    np.fill_diagonal(values, 0.0)
    matrix = DistanceMatrix(tuple(store.codes), values)
    matrix.validate()
    return matrix


def _mean_pair_cosines(unit: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-concept mean pairwise cosine over valid language pairs.

    Returns (scores, counts) where counts is the number of valid languages;
    scores are NaN where counts < 2.
    """
    cos = np.einsum("cld,cmd->clm", unit, unit)
    cos = np.clip(cos, -1.0, 1.0)
    joint = mask[:, :, None] & mask[:, None, :]
    n_lang = mask.shape[1]
    tri = np.triu(np.ones((n_lang, n_lang), dtype=bool), k=1)
    sums = np.where(joint & tri[None, :, :], cos, 0.0).sum(axis=(1, 2))
    counts = mask.sum(axis=1)
    n_pairs = counts * (counts - 1) // 2
    with np.errstate(invalid="ignore", divide="ignore"):
        scores = np.where(n_pairs > 0, sums / np.maximum(n_pairs, 1), np.nan)
    return np.clip(scores, -1.0, 1.0), counts


def convergence_scores(
    store: EmbeddingStore, layer: int, correction: CorrectionConfig = DEFAULT_CORRECTION
) -> tuple[np.ndarray, list[str]]:
    """Convergence for every concept; excluded glosses (< 2 valid languages)
    are listed and their scores are NaN."""
    slab = correct_layer(store, layer, correction)
    unit = _unit_rows(slab, store.mask)
    scores, counts = _mean_pair_cosines(unit, store.mask)
    excluded = [store.concepts[i].gloss for i in np.flatnonzero(counts < 2)]
    return scores, excluded


def convergence_score(
    store: EmbeddingStore,
    layer: int,
    concept: str,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> float:
    """Mean pairwise cosine similarity of one concept across its valid
    languages, computed on corrected vectors."""
    ci = store.concept_index(concept)
    scores, _ = convergence_scores(store, layer, correction)
    if np.isnan(scores[ci]):
        raise ValueError(f"concept {concept!r} has fewer than 2 valid languages")
    return float(scores[ci])


# ---------------------------------------------------------------------------
# UPGMA


@dataclass(frozen=True)
class Dendrogram:
    """Agglomerative merge list. Leaves are 0..n-1; merge i creates id n+i.
    Each entry is (id_a, id_b, height, size) with id_a < id_b."""

    n_leaves: int
    merges: tuple[tuple[int, int, float, int], ...]

    def leaf_order(self) -> list[int]:
        """Depth-first leaf ordering of the final tree."""
        children: dict[int, tuple[int, int]] = {}
        for i, (a, b, _, _) in enumerate(self.merges):
            children[self.n_leaves + i] = (a, b)
        if not self.merges:
            return list(range(self.n_leaves))
        order: list[int] = []
        stack = [self.n_leaves + len(self.merges) - 1]
        while stack:
            node = stack.pop()
            if node < self.n_leaves:
                order.append(node)
            else:
                a, b = children[node]
                stack.append(b)
                stack.append(a)
        return order


def upgma_cluster(matrix: DistanceMatrix) -> Dendrogram:
    """Average-linkage agglomeration; merge heights are the size-weighted
    mean inter-cluster distances, which makes them non-decreasing."""
    matrix.validate()
    n = matrix.n
    if n < 2:
        raise ValueError("need at least 2 items to cluster")
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = float(matrix.values[i, j])
    sizes: dict[int, int] = {i: 1 for i in range(n)}
    active: list[int] = list(range(n))
    merges: list[tuple[int, int, float, int]] = []
    next_id = n
    while len(active) > 1:
        best: tuple[float, int, int] | None = None
        for ai in range(len(active)):
            for bi in range(ai + 1, len(active)):
                a, b = active[ai], active[bi]
                d = dist[(a, b)]
                if best is None or d < best[0]:
                    best = (d, a, b)
        height, a, b = best  # type: ignore[misc]
        size = sizes[a] + sizes[b]
        merges.append((a, b, height, size))
        for c in active:
            if c in (a, b):
                continue
            da = dist[(min(a, c), max(a, c))]
            db = dist[(min(b, c), max(b, c))]
            dist[(min(c, next_id), max(c, next_id))] = (
                sizes[a] * da + sizes[b] * db
            ) / size
        active = [c for c in active if c not in (a, b)] + [next_id]
        sizes[next_id] = size
        next_id += 1
    return Dendrogram(n, tuple(merges))
