"""Probing experiments over embedding stores, reported in a stable schema.

Every experiment returns an ExperimentReport with five blocks:

    {"experiment", "config", "results", "figure_data", "provenance"}

config echoes enough parameters to re-run bit-identically; figure_data is a
dict of named series ({"columns": [...], "rows": [[...]]}), each exportable
as one CSV file; provenance carries store checksums (callers add paths).
Excluded concepts or pairs are always listed with a reason, never dropped
silently. Serialization is canonical: sorted keys, floats at 17 significant
digits, non-finite floats as bare Infinity/NaN literals (Python json
semantics).
"""

from __future__ import annotations

import csv
import json
import math
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import stats
from .geometry import (
    CorrectionConfig,
    DEFAULT_CORRECTION,
    RAW,
    Dendrogram,
    center_per_language,
    convergence_scores,
    correct_layer,
    cosine_similarity,
    pairwise_language_distance,
    pca_project,
    upgma_cluster,
    _unit_rows,
)
from .store import (
    ColexEdgeList,
    DistanceMatrix,
    EmbeddingStore,
    WordFormTable,
    align_languages,
    store_checksum,
)

BASIC_COLOR_TERMS = (
    "white",
    "black",
    "red",
    "green",
    "yellow",
    "blue",
    "brown",
    "purple",
    "pink",
    "orange",
    "grey",
)
ACHROMATIC_TERMS = ("white", "black", "grey")
_COLOR_ALIASES = {"gray": "grey"}


class ExperimentError(Exception):
    """Raised when an experiment's preconditions cannot be met."""


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    results: dict
    figure_data: dict
    provenance: dict


def _series(columns: Sequence[str], rows: Iterable[Sequence]) -> dict:
    return {"columns": list(columns), "rows": [list(r) for r in rows]}


def _correction_echo(correction: CorrectionConfig) -> dict:
    return {"k": correction.k, "apply_global_mean": correction.apply_global_mean}


def _provenance(**stores: EmbeddingStore) -> dict:
    return {"stores": {name: store_checksum(s) for name, s in stores.items()}}


def _test_echo(res: stats.TestResult) -> dict:
    out = {
        "statistic": res.statistic,
        "p_value": res.p_value,
        "method": res.method,
        "alternative": res.alternative,
        "n": list(res.n) if isinstance(res.n, tuple) else res.n,
    }
    if res.effect_size is not None:
        out["effect_size"] = res.effect_size
    if res.seed is not None:
        out["seed"] = res.seed
    if res.n_resamples is not None:
        out["n_resamples"] = res.n_resamples
    return out


def _ci_echo(ci: stats.BootstrapCI) -> dict:
    return {
        "point": ci.point,
        "lower": ci.lower,
        "upper": ci.upper,
        "confidence": ci.confidence,
        "n_resamples": ci.n_resamples,
        "seed": ci.seed,
        "point_within_interval": ci.point_within_interval,
    }


# ---------------------------------------------------------------------------
# String measures


def levenshtein_similarity(a: str, b: str) -> float:
    """1 - edit_distance / max(len); code-point level; both empty -> 1.0."""
    if not a and not b:
        return 1.0
    m, n = len(a), len(b)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        ca = a[i - 1]
        for j in range(1, n + 1):
            cost = 0 if ca == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return 1.0 - prev[n] / max(m, n)


def _close_map(mapping: dict[str, str]) -> dict[str, str]:
    """Compose substitutions to their fixed point so one pass is idempotent."""
    closed = dict(mapping)
    for _ in range(len(closed) + 1):
        changed = False
        for k, v in closed.items():
            if v in closed and closed[v] != v:
                closed[k] = closed[v]
                changed = True
        if not changed:
            return closed
    raise ValueError("cyclic phonetic mapping")


DEFAULT_PHONETIC_MAP = {
    "b": "p",
    "d": "t",
    "g": "k",
    "v": "f",
    "w": "v",
    "z": "s",
    "ž": "š",  # z-caron -> s-caron
    "ʒ": "š",  # ezh -> s-caron
    "š": "s",
    "đ": "t",  # d-stroke
}


@dataclass(frozen=True)
class PhoneticConfig:
    strip_diacritics: bool = True
    mapping: tuple[tuple[str, str], ...] = tuple(sorted(DEFAULT_PHONETIC_MAP.items()))


@lru_cache(maxsize=32)
def _closed_for(mapping: tuple[tuple[str, str], ...]) -> dict[str, str]:
    return _close_map(dict(mapping))


def phonetic_normalize(text: str, config: PhoneticConfig = PhoneticConfig()) -> str:
    """Lowercase, optionally strip diacritics, then apply the closed
    single-character substitution map left to right. Idempotent."""
    closed = _closed_for(config.mapping)
    s = text.lower()
    if config.strip_diacritics:
        s = "".join(ch for ch in unicodedata.normalize("NFD", s) if not unicodedata.combining(ch))
    else:
        s = unicodedata.normalize("NFC", s)
    return "".join(closed.get(ch, ch) for ch in s)


# ---------------------------------------------------------------------------
# Shared internals


def _valid_scores(
    store: EmbeddingStore, layer: int, correction: CorrectionConfig
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """(scores over all concepts with NaN at exclusions, valid index array,
    excluded gloss list)."""
    scores, excluded = convergence_scores(store, layer, correction)
    valid = np.flatnonzero(~np.isnan(scores))
    return scores, valid, excluded


def _ranking_rows(store: EmbeddingStore, scores: np.ndarray, valid: np.ndarray) -> list[list]:
    order = sorted(valid.tolist(), key=lambda i: (-scores[i], store.concepts[i].gloss))
    return [
        [
            rank + 1,
            store.concepts[i].gloss,
            store.concepts[i].category,
            bool(store.concepts[i].polysemous),
            float(scores[i]),
        ]
        for rank, i in enumerate(order)
    ]


def _masked_centroids(slab: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-concept language-mean of valid cells; returns (centroids, counts)."""
    counts = mask.sum(axis=1)
    sums = np.where(mask[:, :, None], slab, 0.0).sum(axis=1)
    safe = np.maximum(counts, 1)
    return sums / safe[:, None], counts


def _pair_distance_tables(
    unit: np.ndarray, mask: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean cosine-distance tables from unit rows.

    W[c]  = mean distance within concept c over unordered valid language pairs
    M[c,c'] = mean distance between concepts c and c' over all valid language
              combinations (same-language pairs included); M[c,c] covers the
              resampled-duplicate case.
    Exact up to summation order: mean(1 - u.v) = 1 - mean(u.v).
    """
    counts = mask.sum(axis=1).astype(np.float64)
    s = np.where(mask[:, :, None], unit, 0.0).sum(axis=1)
    gram = s @ s.T
    sq = np.einsum("cd,cd->c", s, s)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = 1.0 - (sq - counts) / (counts * (counts - 1.0))
        m = 1.0 - gram / np.outer(counts, counts)
    return w, m, counts


def _ratio_from_tables(w: np.ndarray, m: np.ndarray, idx: np.ndarray) -> float:
    """Between/within ratio over a concept index multiset."""
    k = len(idx)
    within = float(np.mean(w[idx]))
    sub = m[np.ix_(idx, idx)]
    between = float((sub.sum() - np.trace(sub)) / (k * (k - 1)))
    if within == 0.0:
        return math.inf
    return between / within


def _conceptual_tables(
    store: EmbeddingStore, layer: int, correction: CorrectionConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, list[str]]:
    """(w_raw, m_raw, w_centered, m_centered, excluded) over included concepts."""
    slab = correct_layer(store, layer, correction)
    mask = store.mask
    counts = mask.sum(axis=1)
    included = np.flatnonzero(counts >= 2)
    if len(included) < 2:
        raise ExperimentError("need at least 2 concepts with 2+ valid languages")
    excluded = [store.concepts[i].gloss for i in np.flatnonzero(counts < 2)]
    sub_mask = mask[included]
    sub_slab = slab[included]
    unit = _unit_rows(sub_slab, sub_mask)
    w_raw, m_raw, _ = _pair_distance_tables(unit, sub_mask)
    centered = center_per_language(slab, mask)[included]
    unit_c = _unit_rows(centered, sub_mask)
    w_cen, m_cen, _ = _pair_distance_tables(unit_c, sub_mask)
    return w_raw, m_raw, w_cen, m_cen, excluded


def _convex_hull(points: np.ndarray) -> list[int]:
    """Monotone-chain convex hull; returns vertex indices in CCW order."""
    n = len(points)
    if n < 3:
        return list(range(n))
    order = np.lexsort((points[:, 1], points[:, 0]))

    def cross(o, a, b):
        return (points[a][0] - points[o][0]) * (points[b][1] - points[o][1]) - (
            points[a][1] - points[o][1]
        ) * (points[b][0] - points[o][0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(int(i))
    upper: list[int] = []
    for i in order[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(int(i))
    return lower[:-1] + upper[:-1]


# ---------------------------------------------------------------------------
# Experiments


def exp_convergence_ranking(
    store: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> ExperimentReport:
    """Rank concepts by cross-lingual convergence."""
    scores, valid, excluded = _valid_scores(store, layer, correction)
    if len(valid) == 0:
        raise ExperimentError("no concept has 2 or more valid languages")
    rows = _ranking_rows(store, scores, valid)
    vals = scores[valid]
    results = {
        "n_concepts": int(len(valid)),
        "mean": float(np.mean(vals)),
        "sd": float(np.std(vals, ddof=1)) if len(valid) > 1 else None,
        "min": float(np.min(vals)),
        "max": float(np.max(vals)),
        "top": [[r[1], r[4]] for r in rows[:10]],
        "bottom": [[r[1], r[4]] for r in rows[-10:]],
        "excluded": excluded,
    }
    return ExperimentReport(
        experiment="convergence",
        config={
            "experiment": "convergence",
            "layer": layer,
            "correction": _correction_echo(correction),
        },
        results=results,
        figure_data={
            "ranking": _series(["rank", "gloss", "category", "polysemous", "score"], rows)
        },
        provenance=_provenance(store=store),
    )


def exp_surface_regression(
    store: EmbeddingStore,
    layer: int,
    word_forms: WordFormTable,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
    scripts: tuple[str, ...] = ("Latn",),
    phonetic: PhoneticConfig = PhoneticConfig(),
) -> ExperimentReport:
    """Regress convergence on orthographic and phonetic surface similarity."""
    comparable = [l.code for l in store.languages if l.script in scripts]
    if len(comparable) < 2:
        raise ExperimentError("no comparable-script pairs")
    scores, valid, excluded_conv = _valid_scores(store, layer, correction)
    rows = []
    skipped: list[list[str]] = [[g, "no convergence score"] for g in excluded_conv]

    # forms repeat heavily across languages; cache per distinct string (pair)
    norm_cache: dict[str, str] = {}
    sim_cache: dict[tuple[str, str], float] = {}

    def _phon(form: str) -> str:
        s = norm_cache.get(form)
        if s is None:
            s = phonetic_normalize(form, phonetic)
            norm_cache[form] = s
        return s

    def _sim(a: str, b: str) -> float:
        key = (a, b) if a <= b else (b, a)
        v = sim_cache.get(key)
        if v is None:
            v = levenshtein_similarity(*key)
            sim_cache[key] = v
        return v

    for i in valid.tolist():
        meta = store.concepts[i]
        forms = [
            word_forms.form(meta.gloss, code)
            for code in comparable
            if word_forms.form(meta.gloss, code)
        ]
        if len(forms) < 2:
            skipped.append([meta.gloss, "fewer than 2 word forms"])
            continue
        lows = [f.lower() for f in forms]
        phons = [_phon(f) for f in forms]
        orth_vals = []
        phon_vals = []
        for a in range(len(forms)):
            for b in range(a + 1, len(forms)):
                orth_vals.append(_sim(lows[a], lows[b]))
                phon_vals.append(_sim(phons[a], phons[b]))
        rows.append(
            [
                meta.gloss,
                meta.category,
                float(np.mean(orth_vals)),
                float(np.mean(phon_vals)),
                float(scores[i]),
            ]
        )
    if len(rows) < 3:
        raise ExperimentError("word forms available for fewer than 3 concepts")
    orth = [r[2] for r in rows]
    phon = [r[3] for r in rows]
    conv = [r[4] for r in rows]
    slope_o, icept_o, r2_o = stats.ols_r2(orth, conv)
    slope_p, icept_p, r2_p = stats.ols_r2(phon, conv)
    results = {
        "n_concepts": len(rows),
        "comparable_languages": comparable,
        "orthographic": {"slope": slope_o, "intercept": icept_o, "r_squared": r2_o},
        "phonetic": {"slope": slope_p, "intercept": icept_p, "r_squared": r2_p},
        "excluded": skipped,
    }
    return ExperimentReport(
        experiment="surface",
        config={
            "experiment": "surface",
            "layer": layer,
            "correction": _correction_echo(correction),
            "scripts": list(scripts),
            "strip_diacritics": phonetic.strip_diacritics,
        },
        results=results,
        figure_data={
            "scatter": _series(
                ["gloss", "category", "orthographic_similarity", "phonetic_similarity", "convergence"],
                rows,
            )
        },
        provenance=_provenance(store=store),
    )


def exp_category_summary(
    store: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> ExperimentReport:
    """Convergence summarized per semantic category."""
    scores, valid, excluded = _valid_scores(store, layer, correction)
    if len(valid) == 0:
        raise ExperimentError("no concept has 2 or more valid languages")
    groups: dict[str, list[tuple[str, float]]] = {}
    for i in valid.tolist():
        meta = store.concepts[i]
        groups.setdefault(meta.category, []).append((meta.gloss, float(scores[i])))
    summary = []
    for cat, members in groups.items():
        vals = np.array([v for _, v in members])
        summary.append(
            {
                "category": cat,
                "n": len(members),
                "mean": float(vals.mean()),
                "sd": float(vals.std(ddof=1)) if len(members) > 1 else None,
            }
        )
    summary.sort(key=lambda rec: (-rec["mean"], rec["category"]))
    concept_rows = [
        [cat, gloss, score]
        for cat in sorted(groups)
        for gloss, score in sorted(groups[cat])
    ]
    return ExperimentReport(
        experiment="categories",
        config={
            "experiment": "categories",
            "layer": layer,
            "correction": _correction_echo(correction),
        },
        results={"categories": summary, "excluded": excluded},
        figure_data={
            "concepts": _series(["category", "gloss", "score"], concept_rows),
            "categories": _series(
                ["category", "n", "mean", "sd"],
                [[r["category"], r["n"], r["mean"], r["sd"]] for r in summary],
            ),
        },
        provenance=_provenance(store=store),
    )


def exp_group_comparison(
    store_a: EmbeddingStore,
    store_b: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
    alternative: str = "two_sided",
    label_a: str = "a",
    label_b: str = "b",
) -> ExperimentReport:
    """Compare convergence distributions of two stores over shared languages."""
    if store_a.codes != store_b.codes:
        raise ExperimentError("language list mismatch between stores")
    scores_a, valid_a, excl_a = _valid_scores(store_a, layer, correction)
    scores_b, valid_b, excl_b = _valid_scores(store_b, layer, correction)
    if len(valid_a) < 2 or len(valid_b) < 2:
        raise ExperimentError("each store needs 2+ scored concepts")
    va = scores_a[valid_a]
    vb = scores_b[valid_b]
    test = stats.mann_whitney_u(va, vb, alternative=alternative)
    d = stats.cohens_d(va, vb)
    rows = [[label_a, store_a.concepts[i].gloss, float(scores_a[i])] for i in valid_a.tolist()]
    rows += [[label_b, store_b.concepts[i].gloss, float(scores_b[i])] for i in valid_b.tolist()]
    results = {
        "group_a": {"label": label_a, "n": int(len(valid_a)), "mean": float(va.mean()),
                    "sd": float(va.std(ddof=1))},
        "group_b": {"label": label_b, "n": int(len(valid_b)), "mean": float(vb.mean()),
                    "sd": float(vb.std(ddof=1))},
        "mann_whitney": _test_echo(test),
        "cohens_d": d,
        "excluded": {"a": excl_a, "b": excl_b},
    }
    return ExperimentReport(
        experiment="compare",
        config={
            "experiment": "compare",
            "layer": layer,
            "correction": _correction_echo(correction),
            "alternative": alternative,
            "labels": [label_a, label_b],
        },
        results=results,
        figure_data={"scores": _series(["group", "gloss", "score"], rows)},
        provenance=_provenance(store_a=store_a, store_b=store_b),
    )


def exp_isotropy_validation(
    store: EmbeddingStore,
    layer: int,
    k_values: tuple[int, ...] = (0, 1, 3, 5, 10),
) -> ExperimentReport:
    """Stability of the convergence ranking under the correction k-sweep."""
    if not k_values:
        raise ExperimentError("empty k list")
    regimes: list[tuple[str, CorrectionConfig]] = [("raw", RAW)]
    regimes += [(f"k{k}", CorrectionConfig(k=k, apply_global_mean=True)) for k in k_values]
    per_regime: dict[str, np.ndarray] = {}
    valid_ref: np.ndarray | None = None
    excluded: list[str] = []
    for name, cfg in regimes:
        scores, valid, excluded = _valid_scores(store, layer, cfg)
        per_regime[name] = scores
        valid_ref = valid  # exclusions depend only on the mask, not on k
    assert valid_ref is not None
    if len(valid_ref) < 3:
        raise ExperimentError("need 3+ scored concepts to correlate rankings")
    reference = "k3" if 3 in k_values else None
    correlations: dict[str, dict] = {}
    if reference is not None:
        ref_scores = per_regime[reference][valid_ref]
        for k in k_values:
            name = f"k{k}"
            if name == reference:
                continue
            rho, p = stats.spearman(per_regime[name][valid_ref], ref_scores)
            correlations[f"{name}_vs_{reference}"] = {"spearman": rho, "p_value": p}
        rho, p = stats.spearman(per_regime["raw"][valid_ref], ref_scores)
        correlations[f"raw_vs_{reference}"] = {"spearman": rho, "p_value": p}
    ranking_rows = []
    tops: dict[str, list] = {}
    bottoms: dict[str, list] = {}
    for name, _ in regimes:
        rows = _ranking_rows(store, per_regime[name], valid_ref)
        tops[name] = [[r[1], r[4]] for r in rows[:10]]
        bottoms[name] = [[r[1], r[4]] for r in rows[-10:]]
        ranking_rows += [[name, r[1], r[4], r[0]] for r in rows]
    results = {
        "k_values": list(k_values),
        "reference": reference,
        "correlations": correlations,
        "top10": tops,
        "bottom10": bottoms,
        "excluded": excluded,
    }
    return ExperimentReport(
        experiment="isotropy",
        config={"experiment": "isotropy", "layer": layer, "k_values": list(k_values)},
        results=results,
        figure_data={"rankings": _series(["regime", "gloss", "score", "rank"], ranking_rows)},
        provenance=_provenance(store=store),
    )


def exp_carrier_robustness(
    store_contextual: EmbeddingStore,
    store_decontextual: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> ExperimentReport:
    """Agreement of convergence with and without the carrier sentence."""
    if store_contextual.condition != "contextual":
        raise ExperimentError("condition mismatch: first store must be contextual")
    if store_decontextual.condition != "decontextual":
        raise ExperimentError("condition mismatch: second store must be decontextual")
    if store_contextual.glosses != store_decontextual.glosses:
        raise ExperimentError("concept list mismatch")
    if store_contextual.codes != store_decontextual.codes:
        raise ExperimentError("language list mismatch")
    s_ctx, valid_ctx, _ = _valid_scores(store_contextual, layer, correction)
    s_dec, valid_dec, _ = _valid_scores(store_decontextual, layer, correction)
    common = np.intersect1d(valid_ctx, valid_dec)
    excluded = [
        store_contextual.concepts[i].gloss
        for i in range(len(store_contextual.concepts))
        if i not in set(common.tolist())
    ]
    if len(common) < 3:
        raise ExperimentError("need 3+ concepts scored in both conditions")
    x = s_ctx[common]
    y = s_dec[common]
    rho, p = stats.spearman(x, y)
    mean_abs_diff = float(np.mean(np.abs(x - y)))
    try:
        t_res: dict | None = _test_echo(stats.paired_t(x, y))
    except ValueError:
        # zero difference variance: identical shift in every concept
        t_res = None
    exact_equality = bool(np.array_equal(x, y))
    rows = [
        [store_contextual.concepts[i].gloss, float(s_ctx[i]), float(s_dec[i])]
        for i in common.tolist()
    ]
    top20 = sorted(rows, key=lambda r: (-r[1], r[0]))[:20]
    results = {
        "n_concepts": int(len(common)),
        "spearman": {"rho": rho, "p_value": p},
        "mean_abs_diff": mean_abs_diff,
        "paired_t": t_res,
        "exact_equality": exact_equality,
        "note": (
            "paired t tests mean shift between conditions; "
            "rank agreement is the headline measure"
        ),
        "excluded": excluded,
    }
    return ExperimentReport(
        experiment="carrier",
        config={
            "experiment": "carrier",
            "layer": layer,
            "correction": _correction_echo(correction),
        },
        results=results,
        figure_data={
            "scatter": _series(["gloss", "contextual", "decontextual"], rows),
            "slopegraph_top20": _series(["gloss", "contextual", "decontextual"], top20),
        },
        provenance=_provenance(contextual=store_contextual, decontextual=store_decontextual),
    )


def exp_layerwise(
    store: EmbeddingStore,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> ExperimentReport:
    """Convergence and store-ratio trajectories across layers."""
    if len(store.layers) < 2:
        raise ExperimentError("need at least 2 layers")
    mean_conv: list[float] = []
    ratio_raw: list[float] = []
    ratio_cen: list[float] = []
    heatmap: list[list] = []
    excluded: list[str] = []
    for layer in store.layers:
        scores, valid, excluded = _valid_scores(store, layer, correction)
        mean_conv.append(float(np.mean(scores[valid])))
        w_r, m_r, w_c, m_c, _ = _conceptual_tables(store, layer, correction)
        idx = np.arange(len(w_r))
        ratio_raw.append(_ratio_from_tables(w_r, m_r, idx))
        ratio_cen.append(_ratio_from_tables(w_c, m_c, idx))
        heatmap += [
            [store.concepts[i].gloss, layer, float(scores[i])] for i in valid.tolist()
        ]
    diagnostics: list[str] = []
    if all(math.isfinite(r) for r in ratio_cen):
        diffs = np.diff(np.array(ratio_cen))
        jump = int(np.argmax(diffs))  # ties resolve to the lowest index
        transition_layer: int | None = int(store.layers[jump + 1])
    else:
        transition_layer = None
        diagnostics.append("centered ratio non-finite at some layer; transition undefined")
    results = {
        "layers": list(store.layers),
        "mean_convergence": mean_conv,
        "ratio_raw": ratio_raw,
        "ratio_centered": ratio_cen,
        "transition_layer": transition_layer,
        "diagnostics": diagnostics,
        "excluded": excluded,
    }
    return ExperimentReport(
        experiment="layers",
        config={
            "experiment": "layers",
            "correction": _correction_echo(correction),
        },
        results=results,
        figure_data={
            "mean_convergence": _series(
                ["layer", "mean_convergence"], zip(store.layers, mean_conv)
            ),
            "store_ratio": _series(
                ["layer", "ratio_raw", "ratio_centered"],
                zip(store.layers, ratio_raw, ratio_cen),
            ),
            "heatmap": _series(["gloss", "layer", "score"], heatmap),
        },
        provenance=_provenance(store=store),
    )


def exp_phylogenetic(
    store: EmbeddingStore,
    layer: int,
    reference: DistanceMatrix,
    subfamilies: dict[str, str],
    correction: CorrectionConfig = DEFAULT_CORRECTION,
    mapping: dict[str, str] | None = None,
    n_perm: int = 999,
    seed: int = 0,
) -> ExperimentReport:
    """Embedding-space language distances against a reference matrix."""
    aligned_store, aligned_ref = align_languages(store, reference, mapping)
    if aligned_store.tensor.shape[2] < 4:
        raise ExperimentError("need at least 4 shared languages")
    emb = pairwise_language_distance(aligned_store, layer, correction)
    test = stats.mantel(emb, aligned_ref, n_perm=n_perm, seed=seed, method="spearman")
    dendro = upgma_cluster(emb)
    leaf_order = dendro.leaf_order()
    fam = {l.code: l.family for l in aligned_store.languages}
    tier_rows = []
    tier_sums: dict[str, list[float]] = {"same_subfamily": [], "cross_branch": [], "cross_family": []}
    codes = list(emb.labels)
    for i in range(len(codes)):
        for j in range(i + 1, len(codes)):
            a, b = codes[i], codes[j]
            if fam[a] != fam[b]:
                tier = "cross_family"
            elif subfamilies.get(a) is not None and subfamilies.get(a) == subfamilies.get(b):
                tier = "same_subfamily"
            else:
                tier = "cross_branch"
            e = float(emb.values[i, j])
            tier_sums[tier].append(e)
            tier_rows.append([a, b, e, float(aligned_ref.values[i, j]), tier])
    tier_means = {
        tier: (float(np.mean(vals)) if vals else None) for tier, vals in tier_sums.items()
    }
    results = {
        "n_languages": len(codes),
        "mantel": _test_echo(test),
        "tier_means": tier_means,
    }
    merge_rows = [
        [idx, a, b, h, size] for idx, (a, b, h, size) in enumerate(dendro.merges)
    ]
    return ExperimentReport(
        experiment="phylo",
        config={
            "experiment": "phylo",
            "layer": layer,
            "correction": _correction_echo(correction),
            "n_perm": n_perm,
            "seed": seed,
        },
        results=results,
        figure_data={
            "scatter": _series(
                ["lang_a", "lang_b", "embedding_distance", "reference_distance", "tier"],
                tier_rows,
            ),
            "dendrogram": _series(
                ["merge_index", "cluster_a", "cluster_b", "height", "size"], merge_rows
            ),
            "leaf_order": _series(
                ["position", "code"], [[p, codes[i]] for p, i in enumerate(leaf_order)]
            ),
        },
        provenance=_provenance(store=store),
    )


def exp_colexification(
    store: EmbeddingStore,
    layer: int,
    edges: ColexEdgeList,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
    pair_universe: list[tuple[str, str]] | None = None,
    binary_threshold: int = 3,
    alternative: str = "greater",
    similarity: str = "centroid",
) -> ExperimentReport:
    """Embedding similarity of concept pairs against colexification counts."""
    if similarity not in ("centroid", "per_language"):
        raise ExperimentError("similarity must be centroid or per_language")
    glosses = store.glosses
    gloss_pos = {g: i for i, g in enumerate(glosses)}
    if pair_universe is None:
        in_store = [g for g in edges.concepts() if g in gloss_pos]
        pair_universe = [
            (in_store[i], in_store[j])
            for i in range(len(in_store))
            for j in range(i + 1, len(in_store))
        ]
    if not pair_universe:
        raise ExperimentError("empty pair universe")
    for a, b in pair_universe:
        if a not in gloss_pos or b not in gloss_pos:
            raise ExperimentError(f"unknown concept in pair ({a}, {b})")
    slab = correct_layer(store, layer, correction)
    mask = store.mask
    centroids, counts = _masked_centroids(slab, mask)
    count_map = edges.count_map()
    rows: list[list] = []
    diagnostics: list[list[str]] = []
    sims: list[float] = []
    fam_counts: list[int] = []
    for a, b in pair_universe:
        ia, ib = gloss_pos[a], gloss_pos[b]
        fc = count_map.get(frozenset((a, b)), 0)
        if similarity == "centroid":
            if counts[ia] == 0 or counts[ib] == 0:
                diagnostics.append([a, b, "concept with no valid languages"])
                continue
            ca, cb = centroids[ia], centroids[ib]
            if np.linalg.norm(ca) == 0.0 or np.linalg.norm(cb) == 0.0:
                diagnostics.append([a, b, "degenerate zero centroid"])
                continue
            sim = cosine_similarity(ca, cb)
        else:
            shared = np.flatnonzero(mask[ia] & mask[ib])
            if len(shared) == 0:
                diagnostics.append([a, b, "no shared valid languages"])
                continue
            vals = [
                cosine_similarity(slab[ia, l], slab[ib, l]) for l in shared.tolist()
            ]
            sim = float(np.mean(vals))
        sims.append(sim)
        fam_counts.append(fc)
        rows.append([a, b, fc, sim, bool(fc >= binary_threshold)])
    if len(rows) < 3:
        raise ExperimentError("fewer than 3 usable pairs")
    sims_arr = np.array(sims)
    counts_arr = np.array(fam_counts, dtype=np.float64)
    continuous: dict | None
    try:
        rho, p = stats.spearman(counts_arr, sims_arr)
        continuous = {"spearman": rho, "p_value": p, "n_pairs": len(rows)}
    except ValueError as exc:
        continuous = None
        diagnostics.append(["*", "*", f"continuous test degenerate: {exc}"])
    colex = sims_arr[counts_arr >= binary_threshold]
    non_colex = sims_arr[counts_arr < binary_threshold]
    binary: dict | None
    if len(colex) >= 2 and len(non_colex) >= 2:
        test = stats.mann_whitney_u(colex, non_colex, alternative=alternative)
        binary = {
            "mann_whitney": _test_echo(test),
            "cohens_d": stats.cohens_d(colex, non_colex),
            "mean_colexified": float(colex.mean()),
            "mean_non_colexified": float(non_colex.mean()),
            "n_colexified": int(len(colex)),
            "n_non_colexified": int(len(non_colex)),
        }
    else:
        binary = None
        diagnostics.append(["*", "*", "binary split degenerate: a group has fewer than 2 pairs"])
    results = {
        "n_pairs": len(rows),
        "continuous": continuous,
        "binary": binary,
        "diagnostics": diagnostics,
    }
    return ExperimentReport(
        experiment="colex",
        config={
            "experiment": "colex",
            "layer": layer,
            "correction": _correction_echo(correction),
            "binary_threshold": binary_threshold,
            "alternative": alternative,
            "similarity": similarity,
        },
        results=results,
        figure_data={
            "pairs": _series(
                ["concept_a", "concept_b", "family_count", "similarity", "colexified"], rows
            )
        },
        provenance=_provenance(store=store),
    )


def exp_conceptual_store(
    store: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
    n_boot: int = 1000,
    seed: int = 0,
    confidence: float = 0.95,
) -> ExperimentReport:
    """Between/within concept distance ratio, before and after per-language
    centering, with bootstrap intervals over concepts."""
    w_r, m_r, w_c, m_c, excluded = _conceptual_tables(store, layer, correction)
    n = len(w_r)
    idx_all = np.arange(n)
    ratio_raw = _ratio_from_tables(w_r, m_r, idx_all)
    ratio_cen = _ratio_from_tables(w_c, m_c, idx_all)
    diagnostics: list[str] = []
    if math.isinf(ratio_raw):
        diagnostics.append("within-concept distance is zero on corrected vectors; ratio is +Infinity")
    if math.isinf(ratio_cen):
        diagnostics.append("within-concept distance is zero on centered vectors; ratio is +Infinity")
    if math.isfinite(ratio_raw) and math.isfinite(ratio_cen) and ratio_raw != 0.0:
        improvement: float | None = ratio_cen / ratio_raw
    else:
        improvement = None
        diagnostics.append("improvement undefined with non-finite or zero ratio")
    ci_raw = ci_cen = None
    if n_boot > 0:
        ci_raw = _ci_echo(
            stats.bootstrap_ci(
                idx_all,
                lambda idx: _ratio_from_tables(w_r, m_r, np.asarray(idx, dtype=np.intp)),
                n_resamples=n_boot,
                confidence=confidence,
                seed=seed,
            )
        )
        ci_cen = _ci_echo(
            stats.bootstrap_ci(
                idx_all,
                lambda idx: _ratio_from_tables(w_c, m_c, np.asarray(idx, dtype=np.intp)),
                n_resamples=n_boot,
                confidence=confidence,
                seed=seed,
            )
        )
    results = {
        "n_concepts": n,
        "ratio_raw": ratio_raw,
        "ratio_centered": ratio_cen,
        "improvement": improvement,
        "bootstrap_raw": ci_raw,
        "bootstrap_centered": ci_cen,
        "diagnostics": diagnostics,
        "excluded": excluded,
    }
    return ExperimentReport(
        experiment="storeratio",
        config={
            "experiment": "storeratio",
            "layer": layer,
            "correction": _correction_echo(correction),
            "n_boot": n_boot,
            "seed": seed,
            "confidence": confidence,
        },
        results=results,
        figure_data={
            "summary": _series(
                ["kind", "ratio", "ci_lower", "ci_upper"],
                [
                    ["raw", ratio_raw, ci_raw["lower"] if ci_raw else None,
                     ci_raw["upper"] if ci_raw else None],
                    ["centered", ratio_cen, ci_cen["lower"] if ci_cen else None,
                     ci_cen["upper"] if ci_cen else None],
                ],
            )
        },
        provenance=_provenance(store=store),
    )


def _resolve_color_glosses(store: EmbeddingStore) -> dict[str, int]:
    pos: dict[str, int] = {}
    for i, g in enumerate(store.glosses):
        pos[_COLOR_ALIASES.get(g, g)] = i
    missing = [term for term in BASIC_COLOR_TERMS if term not in pos]
    if missing:
        raise ExperimentError(f"missing color terms: {', '.join(missing)}")
    return {term: pos[term] for term in BASIC_COLOR_TERMS}


def exp_color_circle(
    store: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
    n_components: int = 2,
) -> ExperimentReport:
    """Low-dimensional PCA structure of the basic color terms."""
    if n_components not in (2, 3):
        raise ExperimentError("n_components must be 2 or 3")
    color_pos = _resolve_color_glosses(store)
    slab = correct_layer(store, layer, correction)
    mask = store.mask
    points = []
    point_meta = []
    for term, i in color_pos.items():
        for l in np.flatnonzero(mask[i]).tolist():
            points.append(slab[i, l])
            point_meta.append((term, store.codes[l]))
    points_arr = np.array(points)
    if len(points_arr) < n_components + 1:
        raise ExperimentError("not enough valid color vectors for PCA")
    pca = pca_project(points_arr, n_components)
    centroids, counts = _masked_centroids(slab, mask)
    cent_rows = []
    cent_proj = {}
    for term, i in color_pos.items():
        if counts[i] == 0:
            raise ExperimentError(f"color term {term!r} has no valid languages")
        proj = (centroids[i] - pca.mean) @ pca.components.T
        cent_proj[term] = proj
        cent_rows.append([term] + [float(v) for v in proj])
    point_rows = [
        [term, code] + [float(v) for v in pca.projected[r]]
        for r, (term, code) in enumerate(point_meta)
    ]
    hull_rows = []
    for term in BASIC_COLOR_TERMS:
        rows_idx = [r for r, (t, _) in enumerate(point_meta) if t == term]
        pts2 = pca.projected[rows_idx][:, :2]
        for v, hi in enumerate(_convex_hull(pts2)):
            hull_rows.append([term, v, float(pts2[hi, 0]), float(pts2[hi, 1])])
    results: dict = {
        "n_points": int(len(points_arr)),
        "explained_variance_ratio": [float(v) for v in pca.explained_variance_ratio],
    }
    if n_components == 3:
        achrom = np.array([cent_proj[t] for t in ACHROMATIC_TERMS])
        chrom = np.array([cent_proj[t] for t in BASIC_COLOR_TERMS if t not in ACHROMATIC_TERMS])
        gaps = []
        for j in range(3):
            try:
                gaps.append(abs(stats.cohens_d(achrom[:, j], chrom[:, j])))
            except ValueError:
                gaps.append(
                    math.inf if achrom[:, j].mean() != chrom[:, j].mean() else 0.0
                )
        best = int(np.argmax(gaps))
        results["achromatic_gaps"] = gaps
        results["achromatic_component"] = f"pc{best + 1}"
    pc_cols = [f"pc{j + 1}" for j in range(n_components)]
    return ExperimentReport(
        experiment="colors",
        config={
            "experiment": "colors",
            "layer": layer,
            "correction": _correction_echo(correction),
            "n_components": n_components,
        },
        results=results,
        figure_data={
            "points": _series(["gloss", "code"] + pc_cols, point_rows),
            "centroids": _series(["gloss"] + pc_cols, cent_rows),
            "hulls": _series(["gloss", "vertex", "pc1", "pc2"], hull_rows),
        },
        provenance=_provenance(store=store),
    )


def exp_offset_invariance(
    store: EmbeddingStore,
    layer: int,
    pairs: list[tuple[str, str]],
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> ExperimentReport:
    """Cross-lingual consistency of concept-pair difference vectors."""
    if not pairs:
        raise ExperimentError("empty pair list")
    gloss_pos = {g: i for i, g in enumerate(store.glosses)}
    for a, b in pairs:
        if a not in gloss_pos or b not in gloss_pos:
            raise ExperimentError(f"unknown concept in pair ({a}, {b})")
    slab = correct_layer(store, layer, correction)
    mask = store.mask
    fam = [l.family for l in store.languages]
    pair_rows = []
    family_rows = []
    diagnostics: list[list[str]] = []
    consistencies: dict[str, float] = {}
    for a, b in pairs:
        ia, ib = gloss_pos[a], gloss_pos[b]
        shared = np.flatnonzero(mask[ia] & mask[ib]).tolist()
        if len(shared) < 2:
            diagnostics.append([a, b, "fewer than 2 shared languages; pair excluded"])
            continue
        offsets = []
        kept_langs = []
        for l in shared:
            off = slab[ia, l] - slab[ib, l]
            norm = float(np.linalg.norm(off))
            if norm == 0.0:
                diagnostics.append([a, b, f"zero-norm offset in {store.codes[l]}; skipped"])
                continue
            offsets.append(off)
            kept_langs.append(l)
        if len(offsets) < 2:
            diagnostics.append([a, b, "fewer than 2 usable offsets; pair excluded"])
            continue
        offset_arr = np.array(offsets)
        centroid = offset_arr.mean(axis=0)
        scale = float(np.mean(np.linalg.norm(offset_arr, axis=1)))
        if float(np.linalg.norm(centroid)) <= 1e-12 * scale:
            diagnostics.append([a, b, "degenerate zero centroid; pair excluded"])
            continue
        cosines = np.array([cosine_similarity(off, centroid) for off in offset_arr])
        consistency = float(np.mean(cosines))
        key = f"{a}|{b}"
        consistencies[key] = consistency
        pair_rows.append([a, b, len(kept_langs), consistency])
        fam_groups: dict[str, list[float]] = {}
        for l, c in zip(kept_langs, cosines.tolist()):
            fam_groups.setdefault(fam[l], []).append(c)
        for f in sorted(fam_groups):
            vals = fam_groups[f]
            family_rows.append([a, b, f, float(np.mean(vals)), len(vals)])
    if not pair_rows:
        raise ExperimentError("no usable pairs")
    values = [r[3] for r in pair_rows]
    best = max(pair_rows, key=lambda r: (r[3], r[0], r[1]))
    results = {
        "n_pairs": len(pair_rows),
        "mean_consistency": float(np.mean(values)),
        "min_consistency": float(np.min(values)),
        "max_consistency": float(np.max(values)),
        "best_pair": [best[0], best[1], best[3]],
        "per_pair": {k: v for k, v in sorted(consistencies.items())},
        "diagnostics": diagnostics,
    }
    return ExperimentReport(
        experiment="offsets",
        config={
            "experiment": "offsets",
            "layer": layer,
            "correction": _correction_echo(correction),
            "pairs": [[a, b] for a, b in pairs],
        },
        results=results,
        figure_data={
            "pairs": _series(["concept_a", "concept_b", "n_languages", "consistency"], pair_rows),
            "by_family": _series(
                ["concept_a", "concept_b", "family", "consistency", "n_languages"], family_rows
            ),
        },
        provenance=_provenance(store=store),
    )


def exp_concept_map(
    store: EmbeddingStore,
    layer: int,
    correction: CorrectionConfig = DEFAULT_CORRECTION,
) -> ExperimentReport:
    """2-D PCA map of concept centroids with per-family points and
    per-category hulls."""
    slab = correct_layer(store, layer, correction)
    mask = store.mask
    centroids, counts = _masked_centroids(slab, mask)
    included = np.flatnonzero(counts >= 1)
    excluded = [store.concepts[i].gloss for i in np.flatnonzero(counts < 1)]
    if len(included) < 2:
        raise ExperimentError("need at least 2 concepts with valid languages")
    n_components = 2 if len(included) >= 3 else 1
    note = None if n_components == 2 else "only 2 concepts; fell back to 1 component"
    pca = pca_project(centroids[included], n_components)
    cent_rows = []
    for r, i in enumerate(included.tolist()):
        meta = store.concepts[i]
        coords = [float(v) for v in pca.projected[r]]
        cent_rows.append([meta.gloss, meta.category] + coords + [0.0] * (2 - n_components))
    families = sorted({l.family for l in store.languages})
    fam_rows = []
    for f in families:
        lang_idx = [i for i, l in enumerate(store.languages) if l.family == f]
        for i in included.tolist():
            valid = [l for l in lang_idx if mask[i, l]]
            if not valid:
                continue
            fam_centroid = slab[i, valid].mean(axis=0)
            proj = (fam_centroid - pca.mean) @ pca.components.T
            coords = [float(v) for v in proj] + [0.0] * (2 - n_components)
            fam_rows.append([f, store.concepts[i].gloss] + coords)
    hull_rows = []
    if n_components == 2:
        by_cat: dict[str, list[int]] = {}
        for r, i in enumerate(included.tolist()):
            by_cat.setdefault(store.concepts[i].category, []).append(r)
        for cat in sorted(by_cat):
            pts = pca.projected[by_cat[cat]][:, :2]
            for v, hi in enumerate(_convex_hull(pts)):
                hull_rows.append([cat, v, float(pts[hi, 0]), float(pts[hi, 1])])
    results = {
        "n_concepts": int(len(included)),
        "n_components": n_components,
        "explained_variance_ratio": [float(v) for v in pca.explained_variance_ratio],
        "note": note,
        "excluded": excluded,
    }
    return ExperimentReport(
        experiment="conceptmap",
        config={
            "experiment": "conceptmap",
            "layer": layer,
            "correction": _correction_echo(correction),
        },
        results=results,
        figure_data={
            "centroids": _series(["gloss", "category", "pc1", "pc2"], cent_rows),
            "family_points": _series(["family", "gloss", "pc1", "pc2"], fam_rows),
            "hulls": _series(["category", "vertex", "pc1", "pc2"], hull_rows),
        },
        provenance=_provenance(store=store),
    )


# ---------------------------------------------------------------------------
# Report serialization


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj)!r}")


def to_json_dict(report: ExperimentReport) -> dict:
    return {
        "experiment": report.experiment,
        "config": _plain(report.config),
        "results": _plain(report.results),
        "figure_data": _plain(report.figure_data),
        "provenance": _plain(report.provenance),
    }


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _canonical(obj, indent: int) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        inner = ",\n".join(pad + "  " + _canonical(v, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            pad + "  " + json.dumps(str(k)) + ": " + _canonical(obj[k], indent + 1)
            for k in sorted(obj)
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits,
    bare Infinity/NaN literals (Python json semantics), trailing newline."""
    return _canonical(_plain(obj), 0) + "\n"


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def write_report_files(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Write <out>/<name>.json plus one CSV per figure series; returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    json_path = out / f"{report.experiment}.json"
    json_path.write_text(canonical_json(to_json_dict(report)), encoding="utf-8")
    paths.append(json_path)
    for name, series in report.figure_data.items():
        csv_path = out / f"{report.experiment}__{name}.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(series["columns"])
            for row in series["rows"]:
                writer.writerow([_fmt_cell(_plain(v)) for v in row])
        paths.append(csv_path)
    return paths
