"""Degenerate-language screening.

A language whose vectors barely resemble any other language's usually
signals a broken extraction path (wrong script handling, tokenizer
anomaly, untranslated template) rather than typological distance. The
screen scores each language by its mean cosine similarity to the others,
averaged over shared concepts and layers, and flags scores more than 3
median-absolute-deviations below the median. Flagging only reports;
dropping a language is the caller's decision, recorded in the
extraction spec's exclude list.
"""

import math

import numpy as np

SCREENING_RULE = "flag score < median - 3*MAD of mean cross-language cosine"


def language_similarity_scores(
    tensor: np.ndarray, mask: np.ndarray, codes: list[str]
) -> dict[str, float]:
    """Per-language mean cosine to the other languages.

    tensor is [layers, concepts, languages, dim]; mask [concepts,
    languages]. For each other language the cosine is averaged over the
    concept-layer cells valid on both sides, then those per-partner means
    are averaged. A language with no comparable cells scores NaN.
    """
    t = tensor.astype(np.float64)
    norms = np.linalg.norm(t, axis=3)
    valid = mask[None, :, :] & (norms > 0)
    unit = np.zeros_like(t)
    unit[valid] = t[valid] / norms[valid][:, None]
    # [layers, concepts, languages, languages] pairwise cosines
    cos = np.matmul(unit, unit.transpose(0, 1, 3, 2))
    shared = valid[:, :, :, None] & valid[:, :, None, :]
    n_lang = len(codes)
    scores: dict[str, float] = {}
    for gi, code in enumerate(codes):
        per_partner = []
        for mi in range(n_lang):
            if mi == gi:
                continue
            sel = shared[:, :, gi, mi]
            if sel.any():
                per_partner.append(float(cos[:, :, gi, mi][sel].mean()))
        scores[code] = float(np.mean(per_partner)) if per_partner else math.nan
    return scores


def degenerate_languages(scores: dict[str, float]) -> list[str]:
    """Codes flagged by the MAD rule; NaN scores are always flagged.

    With MAD = 0 (heavily tied scores) the rule degenerates to "below the
    median", which is the literal reading of the threshold.
    """
    flagged = [code for code, s in scores.items() if math.isnan(s)]
    vals = np.array([s for s in scores.values() if not math.isnan(s)])
    if len(vals):
        med = float(np.median(vals))
        mad = float(np.median(np.abs(vals - med)))
        cut = med - 3.0 * mad
        flagged += [
            code for code, s in scores.items() if not math.isnan(s) and s < cut
        ]
    return sorted(flagged)
