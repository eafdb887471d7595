"""Extraction pipeline: spec in, embedding store plus log out.

For every (concept, language) cell the pipeline renders the carrier
sentence (or takes the bare form under the decontextual condition),
encodes it, locates the form's token span by character overlap, and
mean-pools the hidden states over that span for each requested layer.
Cells with no form, no overlapping token, or a degenerate pooled vector
are masked out with a diagnostic; nothing is guessed.

The store file is the only artifact the analysis side consumes; the log
JSON records everything needed to audit a run: model id, layer
convention, per-cell span lengths, screening scores and flags, and the
store digest.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lexgeo import ConceptMeta, EmbeddingStore, LanguageMeta, save_store, store_checksum

from .backends import EncoderBackend
from .errors import ExtractionError
from .screening import SCREENING_RULE, degenerate_languages, language_similarity_scores
from .spec import ExtractionSpec
from .tokens import SpanError, render_template, span_for_interval


@dataclass
class ExtractionResult:
    store: EmbeddingStore
    log: dict


def _chunks(items: list, size: int):
    for i in range(0, len(items), size):
        yield items[i:i + size]


def extract_store(spec: ExtractionSpec, backend: EncoderBackend) -> ExtractionResult:
    """Run one extraction under the spec's condition.

    The returned store has already passed validation; the log carries one
    entry per (concept, language) cell in concept-major order, with
    span_length null and a diagnostic wherever the cell is masked.
    """
    for layer in spec.layers:
        if layer >= backend.n_layers:
            raise ExtractionError(
                f"layer {layer} out of range: model exposes {backend.n_layers} "
                f"states ({backend.layer_convention})"
            )
    codes = spec.included_languages()
    if not codes:
        raise ExtractionError("no languages left after exclusions")
    layer_idx = list(spec.layers)
    n_c, n_g = len(spec.concepts), len(codes)
    tensor = np.zeros((len(layer_idx), n_c, n_g, backend.dim), dtype=np.float32)
    mask = np.zeros((n_c, n_g), dtype=bool)
    span_len: dict[tuple[int, int], int | None] = {}
    diag: dict[tuple[int, int], str | None] = {}

    for gi, code in enumerate(codes):
        template = spec.templates.get(code)
        if spec.condition == "contextual" and template is None:
            raise ExtractionError(f"no carrier template for {code}")
        jobs: list[tuple[int, str, tuple[int, int]]] = []
        for ci, concept in enumerate(spec.concepts):
            form = concept.forms.get(code)
            if form is None:
                span_len[ci, gi], diag[ci, gi] = None, "form absent"
                continue
            if spec.condition == "contextual":
                sentence, interval = render_template(template, form)
            else:
                sentence, interval = form, (0, len(form))
            jobs.append((ci, sentence, interval))
        for chunk in _chunks(jobs, spec.batch_size):
            encodings = backend.encode([s for _, s, _ in chunk], lang=code)
            for (ci, sentence, interval), enc in zip(chunk, encodings):
                try:
                    lo, hi = span_for_interval(interval, enc.tokens, len(sentence))
                except SpanError as exc:
                    span_len[ci, gi], diag[ci, gi] = None, str(exc)
                    continue
                pooled = enc.hidden[layer_idx, lo:hi, :].mean(axis=1)
                finite = np.all(np.isfinite(pooled))
                if not finite or np.any(np.linalg.norm(pooled, axis=1) == 0.0):
                    span_len[ci, gi] = None
                    diag[ci, gi] = "degenerate pooled vector"
                    continue
                tensor[:, ci, gi, :] = pooled.astype(np.float32)
                mask[ci, gi] = True
                span_len[ci, gi], diag[ci, gi] = hi - lo, None

    store = EmbeddingStore(
        tensor=tensor,
        concepts=tuple(
            ConceptMeta(c.gloss, c.category, c.polysemous) for c in spec.concepts
        ),
        languages=tuple(
            LanguageMeta(code, spec.families.get(code, "Unknown"), code.split("_")[1])
            for code in codes
        ),
        layers=tuple(spec.layers),
        condition=spec.condition,
        mask=mask,
    )
    store.validate()

    scores = language_similarity_scores(tensor, mask, codes)
    cells = [
        {
            "gloss": spec.concepts[ci].gloss,
            "language": codes[gi],
            "span_length": span_len[ci, gi],
            "diagnostic": diag[ci, gi],
        }
        for ci in range(n_c)
        for gi in range(n_g)
    ]
    log = {
        "model": spec.model,
        "backend": type(backend).__name__,
        "layer_convention": backend.layer_convention,
        "condition": spec.condition,
        "layers": list(spec.layers),
        "dim": backend.dim,
        "batch_size": spec.batch_size,
        "languages": codes,
        "excluded_languages": sorted(spec.exclude_languages),
        "n_concepts": n_c,
        "n_masked_cells": int((~mask).sum()),
        "cells": cells,
        "screening": {
            "rule": SCREENING_RULE,
            "scores": {
                code: (None if np.isnan(s) else s) for code, s in scores.items()
            },
            "flagged": degenerate_languages(scores),
        },
        "store_checksum": store_checksum(store),
    }
    return ExtractionResult(store=store, log=log)


def extract_both(
    spec: ExtractionSpec, backend: EncoderBackend
) -> tuple[ExtractionResult, ExtractionResult]:
    """Contextual and decontextual runs off one spec; metadata apart from
    the condition tag is identical between the two stores."""
    return (
        extract_store(spec.with_condition("contextual"), backend),
        extract_store(spec.with_condition("decontextual"), backend),
    )


def write_result(result: ExtractionResult, out_dir: str | Path) -> tuple[Path, Path]:
    """Write <out>/store_<condition>.lgeo and <out>/log_<condition>.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    condition = result.store.condition
    store_path = out / f"store_{condition}.lgeo"
    log_path = out / f"log_{condition}.json"
    save_store(result.store, store_path)
    log_path.write_text(
        json.dumps(result.log, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return store_path, log_path
