"""Planted synthetic stores with known ground truth.

Cell (layer position p, concept c, language l) is generated as

    concept_scale * g_c + decay**p * offset_scale * o_l + noise_scale * eps

with g_c and eps unit Gaussian. Language offsets o_l are either iid Gaussian
or accumulated Brownian steps along a binary tree (per-edge step variance
equals the branch length), which makes expected squared offset distance
proportional to tree path distance. Colexified concept pairs share direction
through Gaussian mixing: g_b = corr * g_a + sqrt(1 - corr^2) * fresh.

Draw order is fixed (concept vectors, colex mixing, offsets, noise), so a
spec is a pure function from seed to store bytes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .store import ConceptMeta, DistanceMatrix, EmbeddingStore, LanguageMeta


@dataclass(frozen=True)
class Tree:
    """Binary tree with branch lengths; leaves are language indices."""

    left: "Tree | int"
    right: "Tree | int"
    left_length: float
    right_length: float

    def leaves(self) -> list[int]:
        out: list[int] = []
        for child in (self.left, self.right):
            if isinstance(child, Tree):
                out.extend(child.leaves())
            else:
                out.append(child)
        return out


def tree_path_distances(tree: Tree, labels: list[str] | None = None) -> DistanceMatrix:
    """Leaf-to-leaf path length matrix; labels default to str(leaf index)."""
    leaves = tree.leaves()
    if len(set(leaves)) != len(leaves):
        raise ValueError("duplicate leaf index")
    n = max(leaves) + 1
    if sorted(leaves) != list(range(n)):
        raise ValueError("leaf indices must cover 0..n-1")
    values = np.zeros((n, n), dtype=np.float64)

    def walk(node: Tree | int) -> dict[int, float]:
        if not isinstance(node, Tree):
            return {node: 0.0}
        sides = []
        for child, length in ((node.left, node.left_length), (node.right, node.right_length)):
            if length < 0:
                raise ValueError("negative branch length")
            sides.append({leaf: d + length for leaf, d in walk(child).items()})
        left, right = sides
        for a, da in left.items():
            for b, db in right.items():
                values[a, b] = values[b, a] = da + db
        left.update(right)
        return left

    walk(tree)
    if labels is None:
        labels = [str(i) for i in range(n)]
    if len(labels) != n:
        raise ValueError("label count does not match leaf count")
    matrix = DistanceMatrix(tuple(labels), values)
    matrix.validate()
    return matrix


def random_binary_tree(
    n_leaves: int, seed: int = 0, mean_depth: float = 1.0
) -> Tree:
    """Random topology by seeded agglomeration; branch lengths are scaled so
    the mean root-to-leaf depth equals *mean_depth*."""
    if n_leaves < 2:
        raise ValueError("need at least 2 leaves")
    rng = np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))
    nodes: list[Tree | int] = list(range(n_leaves))
    while len(nodes) > 1:
        i, j = sorted(rng.choice(len(nodes), size=2, replace=False))
        right = nodes.pop(j)
        left = nodes.pop(i)
        lengths = rng.uniform(0.5, 1.5, size=2)
        nodes.append(Tree(left, right, float(lengths[0]), float(lengths[1])))
    tree = nodes[0]
    assert isinstance(tree, Tree)

    def depths(node: Tree | int, acc: float) -> list[float]:
        if not isinstance(node, Tree):
            return [acc]
        return depths(node.left, acc + node.left_length) + depths(
            node.right, acc + node.right_length
        )

    scale = mean_depth / float(np.mean(depths(tree, 0.0)))

    def rescale(node: Tree | int) -> Tree | int:
        if not isinstance(node, Tree):
            return node
        return Tree(
            rescale(node.left),
            rescale(node.right),
            node.left_length * scale,
            node.right_length * scale,
        )

    out = rescale(tree)
    assert isinstance(out, Tree)
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlantSpec:
    n_concepts: int
    n_languages: int
    dim: int
    n_layers: int = 1
    concept_scale: float = 1.0
    offset_scale: float = 1.0
    noise_scale: float = 0.0
    layer_offset_decay: float | None = None
    tree: Tree | None = None
    colex_pairs: tuple[tuple[tuple[int, int], float], ...] = ()
    seed: int = 0
    condition: str = "contextual"
    concepts: tuple[ConceptMeta, ...] | None = None
    languages: tuple[LanguageMeta, ...] | None = None

    def validate(self) -> None:
        if min(self.n_concepts, self.n_languages, self.dim, self.n_layers) < 1:
            raise ValueError("all axes must be positive")
        for name in ("concept_scale", "offset_scale", "noise_scale"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative")
        if self.layer_offset_decay is not None and not 0.0 <= self.layer_offset_decay <= 1.0:
            raise ValueError("layer_offset_decay must be in [0, 1]")
        if self.tree is not None:
            leaves = self.tree.leaves()
            if sorted(leaves) != list(range(self.n_languages)):
                raise ValueError("tree leaves must cover language indices exactly")
        used: set[int] = set()
        for (a, b), corr in self.colex_pairs:
            if not (0 <= a < self.n_concepts and 0 <= b < self.n_concepts) or a == b:
                raise ValueError(f"bad colex pair ({a}, {b})")
            if a in used or b in used:
                raise ValueError("concept reused across colex pairs")
            used.update((a, b))
            if not 0.0 <= corr <= 1.0:
                raise ValueError("colex correlation must be in [0, 1]")
        if self.concepts is not None and len(self.concepts) != self.n_concepts:
            raise ValueError("concept metadata length mismatch")
        if self.languages is not None and len(self.languages) != self.n_languages:
            raise ValueError("language metadata length mismatch")


@dataclass(frozen=True)
class GroundTruth:
    concept_vectors: np.ndarray          # [C x dim] before scaling
    offsets: np.ndarray                  # [L x dim] before scaling
    colex_pairs: tuple[tuple[tuple[int, int], float], ...]
    tree_distances: DistanceMatrix | None

    def to_json_dict(self) -> dict:
        out: dict = {
            "offsets": self.offsets.tolist(),
            "concept_vectors": self.concept_vectors.tolist(),
            "colex_pairs": [
                {"concept_a": a, "concept_b": b, "correlation": corr}
                for (a, b), corr in self.colex_pairs
            ],
        }
        if self.tree_distances is not None:
            out["tree_distances"] = {
                "labels": list(self.tree_distances.labels),
                "values": self.tree_distances.values.tolist(),
            }
        return out

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True), encoding="utf-8")


def _default_codes(n: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    codes = []
    for combo in itertools.product(letters, repeat=3):
        codes.append("".join(combo) + "_Latn")
        if len(codes) == n:
            return codes
    raise ValueError("too many languages")


def _tree_offsets(tree: Tree, n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Brownian offsets: each edge adds sqrt(length) * N(0, I); deterministic
    left-first traversal order."""
    offsets = np.zeros((n, dim), dtype=np.float64)

    def walk(node: Tree | int, acc: np.ndarray) -> None:
        if not isinstance(node, Tree):
            offsets[node] = acc
            return
        for child, length in ((node.left, node.left_length), (node.right, node.right_length)):
            step = np.sqrt(length) * rng.standard_normal(dim)
            walk(child, acc + step)

    walk(tree, np.zeros(dim))
    return offsets


def gen_planted(spec: PlantSpec) -> tuple[EmbeddingStore, GroundTruth]:
    """Generate a full-mask planted store plus its ground-truth record."""
    spec.validate()
    rng = np.random.Generator(np.random.Philox(key=spec.seed & (2**64 - 1)))
    c, l, d = spec.n_concepts, spec.n_languages, spec.dim
    g = rng.standard_normal((c, d))
    for (a, b), corr in spec.colex_pairs:
        fresh = rng.standard_normal(d)
        g[b] = corr * g[a] + np.sqrt(1.0 - corr * corr) * fresh
    if spec.tree is not None:
        offsets = _tree_offsets(spec.tree, l, d, rng)
    else:
        offsets = rng.standard_normal((l, d))
    noise = rng.standard_normal((spec.n_layers, c, l, d))
    decay = 1.0 if spec.layer_offset_decay is None else spec.layer_offset_decay
    tensor = np.empty((spec.n_layers, c, l, d), dtype=np.float32)
    for p in range(spec.n_layers):
        slab = (
            spec.concept_scale * g[:, None, :]
            + (decay**p) * spec.offset_scale * offsets[None, :, :]
            + spec.noise_scale * noise[p]
        )
        tensor[p] = slab.astype(np.float32)
    concepts = spec.concepts or tuple(
        ConceptMeta(f"c{i:03d}", f"cat{i % 4}", polysemous=False) for i in range(c)
    )
    languages = spec.languages or tuple(
        LanguageMeta(code, "Synthetic", "Latn") for code in _default_codes(l)
    )
    store = EmbeddingStore(
        tensor=tensor,
        concepts=tuple(concepts),
        languages=tuple(languages),
        layers=tuple(range(spec.n_layers)),
        condition=spec.condition,
        mask=np.ones((c, l), dtype=bool),
    )
    store.validate()
    tree_dist = None
    if spec.tree is not None:
        tree_dist = tree_path_distances(spec.tree, labels=[lang.code for lang in languages])
    truth = GroundTruth(
        concept_vectors=g,
        offsets=offsets,
        colex_pairs=spec.colex_pairs,
        tree_distances=tree_dist,
    )
    return store, truth


# ---------------------------------------------------------------------------


def _hadamard(order: int) -> np.ndarray:
    """Sylvester Hadamard matrix; order must be a power of two."""
    if order & (order - 1):
        raise ValueError("order must be a power of two")
    h = np.array([[1.0]])
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]])
    return h


def gen_rank_stable_plant(
    concept_scales: list[float],
    n_languages: int = 16,
    n_offset_dims: int = 8,
    offset_base: float = 40.0,
    extra_dims: int = 4,
    noise_scale: float = 0.0,
    seed: int = 0,
) -> EmbeddingStore:
    """Store whose convergence ranking, when noise-free, is provably
    identical under any top-k removal with k <= n_offset_dims.

    Concept c lives on its own axis with scale concept_scales[c]; language
    offsets occupy disjoint axes with strictly decreasing per-axis variances
    and equal per-language norms (Hadamard sign patterns), so the top
    principal directions are exactly the offset axes and their removal
    shifts every concept's pairwise cosines monotonically in the concept
    scale. n_languages must be a power of two. noise_scale > 0 adds seeded
    isotropic Gaussian noise, trading the exact guarantee for realism.
    """
    scales = np.asarray(concept_scales, dtype=np.float64)
    if len(scales) < 3 or len(set(scales.tolist())) != len(scales):
        raise ValueError("need at least 3 distinct concept scales")
    if n_offset_dims >= n_languages:
        raise ValueError("need n_offset_dims < n_languages")
    c = len(scales)
    dim = c + n_offset_dims + extra_dims
    had = _hadamard(n_languages)
    # columns 1..n_offset_dims are orthogonal and mean-zero over languages
    signs = had[:, 1 : n_offset_dims + 1] / np.sqrt(n_languages)
    sigma = offset_base * (1.0 + np.arange(n_offset_dims)[::-1])
    slab = np.zeros((c, n_languages, dim), dtype=np.float64)
    for i in range(c):
        slab[i, :, i] = scales[i]
    slab[:, :, c : c + n_offset_dims] = (signs * sigma[None, :])[None, :, :]
    if noise_scale > 0.0:
        rng = np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))
        slab = slab + noise_scale * rng.standard_normal(slab.shape)
    tensor = slab[None, :, :, :].astype(np.float32)
    concepts = tuple(ConceptMeta(f"c{i:03d}", "cat0") for i in range(c))
    languages = tuple(
        LanguageMeta(code, "Synthetic", "Latn") for code in _default_codes(n_languages)
    )
    store = EmbeddingStore(
        tensor=tensor,
        concepts=concepts,
        languages=languages,
        layers=(0,),
        condition="contextual",
        mask=np.ones((c, n_languages), dtype=bool),
    )
    store.validate()
    return store


def gen_offset_plant(
    n_pairs: int,
    n_languages: int = 12,
    dim: int = 32,
    offset_noise: float = 0.05,
    seed: int = 0,
) -> tuple[EmbeddingStore, list[tuple[str, str]]]:
    """Store of concept pairs sharing a per-pair direction across languages.

    Concept 2i+1 equals concept 2i minus a pair-specific direction, perturbed
    per language by isotropic noise sized at offset_noise of the direction
    norm. Returns (store, gloss pairs). Expected per-pair offset consistency
    is 1/sqrt(1 + offset_noise^2) before correction.
    """
    if n_pairs < 1 or n_languages < 2:
        raise ValueError("need n_pairs >= 1 and n_languages >= 2")
    rng = np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))
    c = 2 * n_pairs
    g = rng.standard_normal((n_pairs, dim))
    offsets = rng.standard_normal((n_languages, dim))
    deltas = rng.standard_normal((n_pairs, dim))
    slab = np.empty((c, n_languages, dim), dtype=np.float64)
    for i in range(n_pairs):
        base = g[i][None, :] + offsets
        jitter = (
            offset_noise
            * np.linalg.norm(deltas[i])
            / np.sqrt(dim)
            * rng.standard_normal((n_languages, dim))
        )
        slab[2 * i] = base
        slab[2 * i + 1] = base - deltas[i][None, :] + jitter
    tensor = slab[None, :, :, :].astype(np.float32)
    concepts = tuple(ConceptMeta(f"c{i:03d}", "cat0") for i in range(c))
    languages = tuple(
        LanguageMeta(code, "Synthetic", "Latn") for code in _default_codes(n_languages)
    )
    store = EmbeddingStore(
        tensor=tensor,
        concepts=concepts,
        languages=languages,
        layers=(0,),
        condition="contextual",
        mask=np.ones((c, n_languages), dtype=bool),
    )
    store.validate()
    pairs = [(f"c{2 * i:03d}", f"c{2 * i + 1:03d}") for i in range(n_pairs)]
    return store, pairs
