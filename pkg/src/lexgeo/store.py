"""Embedding store: typed containers, the LGEO binary format, resource loaders.

LGEO layout (all integers little-endian):

    magic   4 bytes  b"LGEO"
    version u32      currently 1
    metalen u64      byte length of the metadata block
    meta    bytes    UTF-8 JSON: concepts, languages, layers, condition, dim,
                     mask (row-major concept-major bits, packbits big-endian
                     bit order, base64)
    tensor  bytes    row-major [layer][concept][language][dim] float32 LE
    crc     u64      CRC-64/XZ of the tensor block

Masked-false cells store zero vectors and are skipped by every downstream
operation. Valid (masked-true) cells must be finite with strictly positive
norm.
"""

from __future__ import annotations

import base64
import csv
import json
import re
import struct
import weakref
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"LGEO"
FORMAT_VERSION = 1
CONDITIONS = ("contextual", "decontextual")

_CODE_RE = re.compile(r"^[a-z]{3}_[A-Z][a-z]{3}$")


class LgeoFormatError(Exception):
    """Structured failure while reading or writing an LGEO file."""


class ResourceFormatError(Exception):
    """Structured failure while parsing a CSV resource file."""


# ---------------------------------------------------------------------------
# CRC-64/XZ, slice-by-8. Pure Python keeps the format free of C dependencies;
# throughput (~14 MB/s) only matters for full-scale tensors.

_CRC64_POLY = 0xC96C5795D7870F42
_CRC64_MASK = 0xFFFFFFFFFFFFFFFF


def _crc64_tables() -> list[list[int]]:
    t0 = []
    for i in range(256):
        crc = i
        for _ in range(8):
            crc = (crc >> 1) ^ (_CRC64_POLY if crc & 1 else 0)
        t0.append(crc)
    tables = [t0]
    for k in range(1, 8):
        prev = tables[k - 1]
        tables.append([(prev[i] >> 8) ^ t0[prev[i] & 0xFF] for i in range(256)])
    return tables


_T = _crc64_tables()
_T0, _T1, _T2, _T3, _T4, _T5, _T6, _T7 = _T


def crc64(data: bytes | memoryview, crc: int = 0) -> int:
    """CRC-64/XZ of *data* (check value of b"123456789" is 0x995DC9BBDF1939FA)."""
    crc = (crc ^ _CRC64_MASK) & _CRC64_MASK
    view = memoryview(data)
    end8 = len(view) - (len(view) % 8)
    for (w,) in struct.iter_unpack("<Q", view[:end8]):
        w ^= crc
        crc = (
            _T7[w & 0xFF]
            ^ _T6[(w >> 8) & 0xFF]
            ^ _T5[(w >> 16) & 0xFF]
            ^ _T4[(w >> 24) & 0xFF]
            ^ _T3[(w >> 32) & 0xFF]
            ^ _T2[(w >> 40) & 0xFF]
            ^ _T1[(w >> 48) & 0xFF]
            ^ _T0[(w >> 56) & 0xFF]
        )
    for b in view[end8:]:
        crc = (crc >> 8) ^ _T0[(crc ^ b) & 0xFF]
    return crc ^ _CRC64_MASK


# ---------------------------------------------------------------------------
# Typed containers


@dataclass(frozen=True)
class ConceptMeta:
    gloss: str
    category: str
    polysemous: bool = False


@dataclass(frozen=True)
class LanguageMeta:
    code: str
    family: str
    script: str


@dataclass(frozen=True)
class EmbeddingStore:
    """4-D tensor [layers x concepts x languages x dim] plus metadata.

    tensor is float32; mask is bool [concepts x languages]. Masked-false
    cells hold zero vectors by construction.
    """

    tensor: np.ndarray
    concepts: tuple[ConceptMeta, ...]
    languages: tuple[LanguageMeta, ...]
    layers: tuple[int, ...]
    condition: str
    mask: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.tensor.shape[3])

    @property
    def glosses(self) -> list[str]:
        return [c.gloss for c in self.concepts]

    @property
    def codes(self) -> list[str]:
        return [l.code for l in self.languages]

    def layer_index(self, layer: int) -> int:
        try:
            return self.layers.index(layer)
        except ValueError:
            raise ValueError(f"layer {layer} not in store layers {list(self.layers)}") from None

    def concept_index(self, gloss: str) -> int:
        try:
            return self.glosses.index(_norm_gloss(gloss))
        except ValueError:
            raise ValueError(f"concept {gloss!r} not in store") from None

    def validate(self) -> None:
        t = self.tensor
        if t.ndim != 4:
            raise ValueError("tensor must be 4-D [layers, concepts, languages, dim]")
        n_layers, n_concepts, n_languages, dim = t.shape
        if t.dtype != np.float32:
            raise ValueError("tensor dtype must be float32")
        if n_layers != len(self.layers):
            raise ValueError("layer axis does not match layer list")
        if n_concepts != len(self.concepts):
            raise ValueError("concept axis does not match concept list")
        if n_languages != len(self.languages):
            raise ValueError("language axis does not match language list")
        if dim < 1 or n_concepts < 1 or n_languages < 1:
            raise ValueError("empty axis")
        if len(self.layers) < 1:
            raise ValueError("at least one layer required")
        if any(l < 0 for l in self.layers):
            raise ValueError("layer indices must be non-negative")
        if list(self.layers) != sorted(set(self.layers)):
            raise ValueError("layers must be strictly increasing")
        if self.condition not in CONDITIONS:
            raise ValueError(f"condition must be one of {CONDITIONS}")
        if self.mask.shape != (n_concepts, n_languages) or self.mask.dtype != np.bool_:
            raise ValueError("mask must be bool [concepts x languages]")
        glosses = self.glosses
        if any(not g for g in glosses):
            raise ValueError("empty gloss")
        if len(set(glosses)) != len(glosses):
            raise ValueError("duplicate gloss")
        if any(not c.category for c in self.concepts):
            raise ValueError("empty category")
        codes = self.codes
        if len(set(codes)) != len(codes):
            raise ValueError("duplicate language code")
        for code in codes:
            if not _CODE_RE.match(code):
                raise ValueError(f"language code {code!r} does not match xxx_Yyyy pattern")
        valid = self.mask[None, :, :, None]
        vals = np.where(valid, t, 0.0)
        if not np.all(np.isfinite(vals)):
            raise ValueError("NaN or Inf in masked-true cell")
        norms = np.linalg.norm(np.where(valid, t.astype(np.float64), 0.0), axis=3)
        if not np.all(norms[:, self.mask] > 0.0):
            raise ValueError("masked-true vector with zero norm")


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)

    def validate(self) -> None:
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("distance matrix must be square")
        if v.shape[0] != len(self.labels):
            raise ValueError("label count does not match matrix size")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate label")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite distance")
        if np.any(np.abs(np.diagonal(v)) > 1e-9):
            raise ValueError("nonzero diagonal")
        if not np.allclose(v, v.T, atol=1e-9, rtol=0.0):
            raise ValueError("asymmetric distance matrix")
        if np.any(v < -1e-9):
            raise ValueError("negative distance")


@dataclass(frozen=True)
class ColexEdge:
    concept_a: str
    concept_b: str
    family_count: int


@dataclass(frozen=True)
class ColexEdgeList:
    edges: tuple[ColexEdge, ...]

    def concepts(self) -> list[str]:
        seen: dict[str, None] = {}
        for e in self.edges:
            seen.setdefault(e.concept_a)
            seen.setdefault(e.concept_b)
        return list(seen)

    def count(self, a: str, b: str) -> int:
        a, b = _norm_gloss(a), _norm_gloss(b)
        for e in self.edges:
            if {e.concept_a, e.concept_b} == {a, b}:
                return e.family_count
        return 0

    def count_map(self) -> dict[frozenset[str], int]:
        return {frozenset((e.concept_a, e.concept_b)): e.family_count for e in self.edges}


@dataclass(frozen=True)
class WordFormTable:
    forms: dict[tuple[str, str], str] = field(default_factory=dict)

    def form(self, gloss: str, code: str) -> str | None:
        return self.forms.get((_norm_gloss(gloss), code))

    def languages(self) -> list[str]:
        seen: dict[str, None] = {}
        for _, code in self.forms:
            seen.setdefault(code)
        return list(seen)


def _norm_gloss(gloss: str) -> str:
    return gloss.strip().lower()


# ---------------------------------------------------------------------------
# LGEO save / load


def _meta_json(store: EmbeddingStore) -> bytes:
    packed = np.packbits(store.mask.astype(np.uint8).ravel())
    meta = {
        "concepts": [
            {"gloss": c.gloss, "category": c.category, "polysemous": bool(c.polysemous)}
            for c in store.concepts
        ],
        "languages": [
            {"code": l.code, "family": l.family, "script": l.script} for l in store.languages
        ],
        "layers": list(store.layers),
        "condition": store.condition,
        "dim": store.dim,
        "mask": base64.b64encode(packed.tobytes()).decode("ascii"),
    }
    return json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _tensor_blob(store: EmbeddingStore) -> bytes:
    # Masked-false cells are zeroed on disk: the mask alone decides validity,
    # so whatever garbage the cell held in memory must not leak into the file.
    tensor = np.where(store.mask[None, :, :, None], store.tensor, np.float32(0.0))
    return np.ascontiguousarray(tensor, dtype="<f4").tobytes()


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    """Write *store* to *path* in LGEO format. Deterministic byte-for-byte."""
    store.validate()
    meta = _meta_json(store)
    blob = _tensor_blob(store)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(meta)))
        fh.write(meta)
        fh.write(blob)
        fh.write(struct.pack("<Q", crc64(blob)))


def load_store(path: str | Path) -> EmbeddingStore:
    """Read an LGEO file, verifying structure, checksum, and type invariants.

    Every malformed input raises LgeoFormatError; nothing else escapes.
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise LgeoFormatError(f"unreadable file: {exc}") from exc
    if len(raw) < 16:
        raise LgeoFormatError("truncated header")
    if raw[:4] != MAGIC:
        raise LgeoFormatError("bad magic")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != FORMAT_VERSION:
        raise LgeoFormatError(f"unsupported version {version}")
    (metalen,) = struct.unpack_from("<Q", raw, 8)
    meta_end = 16 + metalen
    if metalen > len(raw) - 16:
        raise LgeoFormatError("truncated metadata")
    try:
        meta = json.loads(raw[16:meta_end].decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise LgeoFormatError(f"corrupt metadata: {exc}") from exc
    try:
        concepts = tuple(
            ConceptMeta(str(c["gloss"]), str(c["category"]), bool(c["polysemous"]))
            for c in meta["concepts"]
        )
        languages = tuple(
            LanguageMeta(str(l["code"]), str(l["family"]), str(l["script"]))
            for l in meta["languages"]
        )
        layers = tuple(int(x) for x in meta["layers"])
        condition = str(meta["condition"])
        dim = int(meta["dim"])
        mask_b64 = str(meta["mask"])
    except (KeyError, TypeError, ValueError) as exc:
        raise LgeoFormatError(f"corrupt metadata: {exc}") from exc
    n_concepts, n_languages, n_layers = len(concepts), len(languages), len(layers)
    if min(n_concepts, n_languages, n_layers) < 1 or dim < 1:
        raise LgeoFormatError("corrupt metadata: empty axis")
    try:
        packed = np.frombuffer(base64.b64decode(mask_b64, validate=True), dtype=np.uint8)
        mask = np.unpackbits(packed, count=n_concepts * n_languages).astype(bool)
    except (ValueError, TypeError) as exc:
        raise LgeoFormatError(f"corrupt mask: {exc}") from exc
    mask = mask.reshape(n_concepts, n_languages)
    n_vals = n_layers * n_concepts * n_languages * dim
    tensor_end = meta_end + 4 * n_vals
    if tensor_end > len(raw) - 8:
        raise LgeoFormatError("truncated tensor")
    if len(raw) != tensor_end + 8:
        raise LgeoFormatError("trailing garbage")
    blob = raw[meta_end:tensor_end]
    (stored_crc,) = struct.unpack_from("<Q", raw, tensor_end)
    if crc64(blob) != stored_crc:
        raise LgeoFormatError("checksum mismatch")
    tensor = (
        np.frombuffer(blob, dtype="<f4")
        .reshape(n_layers, n_concepts, n_languages, dim)
        .astype(np.float32)
    )
    store = EmbeddingStore(tensor, concepts, languages, layers, condition, mask)
    try:
        store.validate()
    except ValueError as exc:
        raise LgeoFormatError(f"invalid store: {exc}") from exc
    return store


# digests memoized per live store object; stores are immutable once built,
# so identity plus a liveness check is a sound cache key
_CHECKSUM_CACHE: dict[int, tuple[weakref.ref, str]] = {}


def store_checksum(store: EmbeddingStore) -> str:
    """Stable hex digest over metadata and tensor, for report provenance.

    Matches on-disk semantics: masked-false cells count as zeros.
    """
    key = id(store)
    entry = _CHECKSUM_CACHE.get(key)
    if entry is not None and entry[0]() is store:
        return entry[1]
    meta = _meta_json(store)
    digest = f"{crc64(_tensor_blob(store), crc=crc64(meta)):016x}"
    ref = weakref.ref(store, lambda _, k=key: _CHECKSUM_CACHE.pop(k, None))
    _CHECKSUM_CACHE[key] = (ref, digest)
    return digest


# ---------------------------------------------------------------------------
# Store surgery


def restrict_languages(store: EmbeddingStore, codes: list[str]) -> EmbeddingStore:
    """Restrict the store to *codes* (kept in the given order)."""
    have = {c: i for i, c in enumerate(store.codes)}
    missing = [c for c in codes if c not in have]
    if missing:
        raise ValueError(f"language codes not in store: {missing}")
    idx = [have[c] for c in codes]
    if not idx:
        raise ValueError("empty language selection")
    return EmbeddingStore(
        tensor=np.ascontiguousarray(store.tensor[:, :, idx, :]),
        concepts=store.concepts,
        languages=tuple(store.languages[i] for i in idx),
        layers=store.layers,
        condition=store.condition,
        mask=np.ascontiguousarray(store.mask[:, idx]),
    )


def restrict_concepts(store: EmbeddingStore, glosses: list[str]) -> EmbeddingStore:
    idx = [store.concept_index(g) for g in glosses]
    if not idx:
        raise ValueError("empty concept selection")
    return EmbeddingStore(
        tensor=np.ascontiguousarray(store.tensor[:, idx, :, :]),
        concepts=tuple(store.concepts[i] for i in idx),
        languages=store.languages,
        layers=store.layers,
        condition=store.condition,
        mask=np.ascontiguousarray(store.mask[idx, :]),
    )


def align_languages(
    store: EmbeddingStore,
    matrix: DistanceMatrix,
    mapping: dict[str, str] | None = None,
) -> tuple[EmbeddingStore, DistanceMatrix]:
    """Intersect store languages with matrix labels via *mapping*.

    mapping translates store codes to matrix labels (identity when None).
    Both outputs are restricted to the intersection in store order; the
    returned matrix is relabeled to store codes so downstream label-equality
    preconditions hold.
    """
    if mapping is not None:
        targets = list(mapping.values())
        if len(set(targets)) != len(targets):
            raise ValueError("mapping is not injective")
    label_pos = {lab: i for i, lab in enumerate(matrix.labels)}
    kept_codes: list[str] = []
    kept_pos: list[int] = []
    for code in store.codes:
        label = mapping.get(code, code) if mapping is not None else code
        pos = label_pos.get(label)
        if pos is not None:
            kept_codes.append(code)
            kept_pos.append(pos)
    if not kept_codes:
        raise ValueError("empty intersection between store languages and matrix labels")
    sub = matrix.values[np.ix_(kept_pos, kept_pos)]
    out_matrix = DistanceMatrix(tuple(kept_codes), np.ascontiguousarray(sub))
    out_matrix.validate()
    return restrict_languages(store, kept_codes), out_matrix


# ---------------------------------------------------------------------------
# Resource loaders


def _read_csv(path: str | Path) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    except OSError as exc:
        raise ResourceFormatError(f"unreadable file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ResourceFormatError(f"non-UTF-8 file {path}: {exc}") from exc


def load_asjp_matrix(path: str | Path) -> DistanceMatrix:
    """Load a reference distance matrix: header row of labels, square body."""
    rows = _read_csv(path)
    if not rows:
        raise ResourceFormatError("empty matrix file")
    labels = tuple(cell.strip() for cell in rows[0])
    body = rows[1:]
    if len(body) != len(labels):
        raise ResourceFormatError(
            f"matrix is not square: {len(labels)} labels, {len(body)} rows"
        )
    try:
        values = np.array([[float(c) for c in row] for row in body], dtype=np.float64)
    except ValueError as exc:
        raise ResourceFormatError(f"non-numeric matrix entry: {exc}") from exc
    if values.shape != (len(labels), len(labels)):
        raise ResourceFormatError("ragged matrix body")
    matrix = DistanceMatrix(labels, values)
    try:
        matrix.validate()
    except ValueError as exc:
        raise ResourceFormatError(str(exc)) from exc
    return matrix


def load_colex_edges(path: str | Path) -> ColexEdgeList:
    """Load colexification edges: concept_a, concept_b, family_count."""
    rows = _read_csv(path)
    if not rows or [c.strip().lower() for c in rows[0][:3]] != [
        "concept_a",
        "concept_b",
        "family_count",
    ]:
        raise ResourceFormatError("expected header concept_a,concept_b,family_count")
    edges: list[ColexEdge] = []
    seen: set[frozenset[str]] = set()
    for row in rows[1:]:
        if len(row) != 3:
            raise ResourceFormatError(f"bad edge row: {row!r}")
        a, b = _norm_gloss(row[0]), _norm_gloss(row[1])
        if not a or not b:
            raise ResourceFormatError("empty concept in edge")
        if a == b:
            raise ResourceFormatError(f"self-loop edge on {a!r}")
        key = frozenset((a, b))
        if key in seen:
            raise ResourceFormatError(f"duplicate pair ({a}, {b})")
        seen.add(key)
        try:
            count = int(row[2])
        except ValueError as exc:
            raise ResourceFormatError(f"non-integer family_count: {row[2]!r}") from exc
        if count < 0:
            raise ResourceFormatError(f"negative family_count for ({a}, {b})")
        edges.append(ColexEdge(a, b, count))
    return ColexEdgeList(tuple(edges))


def load_word_forms(path: str | Path) -> WordFormTable:
    """Load word forms: gloss, language_code, form. Glosses lowercased."""
    rows = _read_csv(path)
    if not rows or [c.strip().lower() for c in rows[0][:3]] != ["gloss", "language_code", "form"]:
        raise ResourceFormatError("expected header gloss,language_code,form")
    forms: dict[tuple[str, str], str] = {}
    for row in rows[1:]:
        if len(row) != 3:
            raise ResourceFormatError(f"bad form row: {row!r}")
        gloss, code, form = _norm_gloss(row[0]), row[1].strip(), row[2].strip()
        if not gloss or not code:
            raise ResourceFormatError(f"empty gloss or code in row {row!r}")
        if not form:
            raise ResourceFormatError(f"empty form for ({gloss}, {code})")
        if (gloss, code) in forms:
            raise ResourceFormatError(f"duplicate form entry ({gloss}, {code})")
        forms[(gloss, code)] = form
    return WordFormTable(forms)


def load_swadesh_metadata(path: str | Path) -> list[ConceptMeta]:
    """Load concept metadata: gloss, category, polysemous."""
    rows = _read_csv(path)
    if not rows or [c.strip().lower() for c in rows[0][:3]] != ["gloss", "category", "polysemous"]:
        raise ResourceFormatError("expected header gloss,category,polysemous")
    out: list[ConceptMeta] = []
    seen: set[str] = set()
    for row in rows[1:]:
        if len(row) != 3:
            raise ResourceFormatError(f"bad concept row: {row!r}")
        gloss, category = _norm_gloss(row[0]), row[1].strip()
        if not gloss or not category:
            raise ResourceFormatError(f"empty gloss or category in row {row!r}")
        if gloss in seen:
            raise ResourceFormatError(f"duplicate gloss {gloss!r}")
        seen.add(gloss)
        flag = row[2].strip().lower()
        if flag not in ("true", "false", "1", "0", "yes", "no"):
            raise ResourceFormatError(f"bad polysemous flag {row[2]!r}")
        out.append(ConceptMeta(gloss, category, flag in ("true", "1", "yes")))
    return out


def load_language_table(path: str | Path) -> list[LanguageMeta]:
    """Load language metadata: code, family, script."""
    rows = _read_csv(path)
    if not rows or [c.strip().lower() for c in rows[0][:3]] != ["code", "family", "script"]:
        raise ResourceFormatError("expected header code,family,script")
    out: list[LanguageMeta] = []
    seen: set[str] = set()
    for row in rows[1:]:
        if len(row) != 3:
            raise ResourceFormatError(f"bad language row: {row!r}")
        code, family, script = (c.strip() for c in row)
        if not _CODE_RE.match(code):
            raise ResourceFormatError(f"language code {code!r} does not match xxx_Yyyy")
        if code in seen:
            raise ResourceFormatError(f"duplicate code {code!r}")
        seen.add(code)
        if not family or not script:
            raise ResourceFormatError(f"empty family or script for {code}")
        out.append(LanguageMeta(code, family, script))
    return out


def load_subfamilies(path: str | Path) -> dict[str, str]:
    """Load subfamily table keyed by language code."""
    rows = _read_csv(path)
    if not rows or [c.strip().lower() for c in rows[0][:2]] != ["language_code", "subfamily"]:
        raise ResourceFormatError("expected header language_code,subfamily")
    out: dict[str, str] = {}
    for row in rows[1:]:
        if len(row) != 2:
            raise ResourceFormatError(f"bad subfamily row: {row!r}")
        code, sub = row[0].strip(), row[1].strip()
        if not code or not sub:
            raise ResourceFormatError(f"empty field in subfamily row {row!r}")
        if code in out:
            raise ResourceFormatError(f"duplicate code {code!r}")
        out[code] = sub
    return out


def load_offset_pairs(path: str | Path) -> list[tuple[str, str]]:
    """Load concept pairs for offset probes: concept_a, concept_b."""
    rows = _read_csv(path)
    if not rows or [c.strip().lower() for c in rows[0][:2]] != ["concept_a", "concept_b"]:
        raise ResourceFormatError("expected header concept_a,concept_b")
    out: list[tuple[str, str]] = []
    seen: set[frozenset[str]] = set()
    for row in rows[1:]:
        if len(row) != 2:
            raise ResourceFormatError(f"bad pair row: {row!r}")
        a, b = _norm_gloss(row[0]), _norm_gloss(row[1])
        if not a or not b or a == b:
            raise ResourceFormatError(f"bad concept pair {row!r}")
        key = frozenset((a, b))
        if key in seen:
            raise ResourceFormatError(f"duplicate pair ({a}, {b})")
        seen.add(key)
        out.append((a, b))
    return out
