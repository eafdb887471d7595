"""Encoder backends.

A backend turns sentences into offset-annotated tokens plus per-layer
hidden states. Two implementations: a deterministic hash-seeded stub that
needs no model weights (tests, dry runs, format plumbing) and a wrapper
around any encoder or seq2seq encoder half from the transformers library.

Layer indexing is uniform across backends: index 0 is the embedding-layer
output, index i the output of block i. Every backend states this in
`layer_convention` and the extraction log records it.
"""

import hashlib
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import ExtractionError
from .tokens import Token

LAYER_CONVENTION = "hidden_states[0] is the embedding output; block i is index i"


@dataclass(frozen=True)
class Encoding:
    """One encoded sentence: tokens with character offsets and a
    [n_layers, n_tokens, dim] float32 hidden-state array."""

    tokens: tuple[Token, ...]
    hidden: np.ndarray


@runtime_checkable
class EncoderBackend(Protocol):
    model_id: str
    n_layers: int
    dim: int
    layer_convention: str

    def encode(self, texts: list[str], lang: str | None = None) -> list[Encoding]:
        ...


def _seed64(*parts: str) -> int:
    digest = hashlib.blake2s("|".join(parts).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


class StubEncoder:
    """Deterministic, language-blind encoder requiring no weights.

    Tokenization: words split on spaces, long words chopped into pieces of
    up to 4 characters; the first piece of every non-initial word absorbs
    the preceding space into its span, mimicking space-marker tokenizers.
    Hidden states are hash-seeded draws per (token, layer) plus a smaller
    draw keyed by the previous token, so identical words in different
    contexts get different vectors while reruns are bit-identical.
    """

    piece = 4

    def __init__(self, model_id: str = "stub", dim: int = 32, n_layers: int = 6):
        if dim < 1 or n_layers < 1:
            raise ExtractionError("stub needs dim >= 1 and n_layers >= 1")
        self.model_id = model_id
        self.dim = dim
        self.n_layers = n_layers
        self.layer_convention = LAYER_CONVENTION

    def tokenize(self, text: str) -> tuple[Token, ...]:
        tokens: list[Token] = []
        i = 0
        n = len(text)
        while i < n:
            if text[i] == " ":
                i += 1
                continue
            j = i
            while j < n and text[j] != " ":
                j += 1
            start = i
            first = True
            while start < j:
                end = min(start + self.piece, j)
                # non-initial words keep their leading space in the span
                s = start - 1 if first and start > 0 and text[start - 1] == " " else start
                tokens.append(Token(text[s:end], s, end))
                start = end
                first = False
            i = j
        return tuple(tokens)

    def _draw(self, key: str) -> np.ndarray:
        rng = np.random.Generator(np.random.Philox(key=_seed64(self.model_id, key)))
        return rng.standard_normal(self.dim)

    def encode(self, texts: list[str], lang: str | None = None) -> list[Encoding]:
        out = []
        for text in texts:
            tokens = self.tokenize(text)
            hidden = np.empty((self.n_layers, len(tokens), self.dim))
            prev = "^"
            for ti, tok in enumerate(tokens):
                word = tok.text.strip()
                for layer in range(self.n_layers):
                    vec = self._draw(f"{layer}|{word}")
                    vec += 0.1 * self._draw(f"{layer}|{prev}>{word}")
                    hidden[layer, ti] = vec
                prev = word
            out.append(Encoding(tokens=tokens, hidden=hidden.astype(np.float32)))
        return out


class TransformersEncoder:
    """Offset-capable wrapper around a transformers encoder.

    Accepts any hub id or local path whose tokenizer is fast (offset
    mappings come from there). Seq2seq models contribute their encoder
    half. Inference runs on CPU under inference_mode; rerunning the same
    batch reproduces the same floats.
    """

    def __init__(self, model_id: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise ExtractionError(
                "transformers backend needs the transformers and torch packages"
            ) from exc
        self._torch = torch
        try:
            self._tokenizer = AutoTokenizer.from_pretrained(model_id)
            model = AutoModel.from_pretrained(model_id)
        except Exception as exc:
            raise ExtractionError(f"cannot load model {model_id!r}: {exc}") from exc
        if not getattr(self._tokenizer, "is_fast", False):
            raise ExtractionError(
                f"model {model_id!r} has no fast tokenizer; offset mapping unavailable"
            )
        model.eval()
        # seq2seq models contribute their encoder half; plain encoders are
        # used as-is (get_encoder alone is not a reliable signal, some
        # encoder-only models expose it too)
        if getattr(model.config, "is_encoder_decoder", False) and hasattr(model, "get_encoder"):
            model = model.get_encoder()
        self._encoder = model
        cfg = self._encoder.config
        hidden = getattr(cfg, "hidden_size", None) or getattr(cfg, "d_model", None)
        blocks = getattr(cfg, "num_hidden_layers", None) or getattr(cfg, "encoder_layers", None)
        if hidden is None or blocks is None:
            raise ExtractionError(f"cannot read layer/width config of {model_id!r}")
        self.model_id = model_id
        self.dim = int(hidden)
        self.n_layers = int(blocks) + 1
        self.layer_convention = LAYER_CONVENTION

    def encode(self, texts: list[str], lang: str | None = None) -> list[Encoding]:
        tok = self._tokenizer
        if lang is not None and hasattr(tok, "src_lang"):
            tok.src_lang = lang
        enc = tok(
            list(texts),
            return_offsets_mapping=True,
            return_tensors="pt",
            padding=True,
        )
        offsets = enc.pop("offset_mapping")
        with self._torch.inference_mode():
            out = self._encoder(
                input_ids=enc["input_ids"],
                attention_mask=enc["attention_mask"],
                output_hidden_states=True,
                return_dict=True,
            )
        # [n_layers, batch, seq, dim]
        states = self._torch.stack(list(out.hidden_states)).to(self._torch.float32)
        arr = states.cpu().numpy()
        attn = enc["attention_mask"].cpu().numpy()
        results = []
        for bi, text in enumerate(texts):
            keep = np.flatnonzero(attn[bi] == 1)
            tokens = []
            for ti in keep.tolist():
                s, e = (int(v) for v in offsets[bi][ti])
                tokens.append(Token(text[s:e], s, e))
            results.append(
                Encoding(
                    tokens=tuple(tokens),
                    hidden=np.ascontiguousarray(arr[:, bi, keep, :]),
                )
            )
        return results


def backend_for(model_id: str) -> EncoderBackend:
    """Pick a backend from the model identifier: ids starting with "stub"
    get the hash-seeded encoder, anything else goes to transformers."""
    if model_id.startswith("stub"):
        return StubEncoder(model_id)
    return TransformersEncoder(model_id)
