"""Build an embedding store by hand, write it to disk, read it back, and
watch the loader refuse corrupted bytes.

The container is a single binary file: a 16-byte header (magic, version,
metadata length), a JSON metadata block, the float32 tensor in
[layer][concept][language][dim] order, and a trailing CRC-64 over the
tensor block. The mask decides which cells are valid; masked-out cells are
written as zeros no matter what the in-memory tensor holds, so the digest
of a store never depends on garbage behind the mask.

Run: python3 demos/01_store_roundtrip.py
"""

import tempfile
from pathlib import Path

import numpy as np

from lexgeo import (
    ConceptMeta,
    EmbeddingStore,
    LanguageMeta,
    LgeoFormatError,
    load_store,
    restrict_languages,
    save_store,
    store_checksum,
)


def build_store() -> EmbeddingStore:
    concepts = (
        ConceptMeta("water", "Nature"),
        ConceptMeta("fire", "Nature"),
        ConceptMeta("hand", "Body"),
    )
    languages = (
        LanguageMeta("eng_Latn", "Indo-European", "Latn"),
        LanguageMeta("spa_Latn", "Indo-European", "Latn"),
        LanguageMeta("fin_Latn", "Uralic", "Latn"),
        LanguageMeta("tur_Latn", "Turkic", "Latn"),
    )
    rng = np.random.Generator(np.random.Philox(key=7))
    tensor = rng.standard_normal((2, 3, 4, 6)).astype(np.float32)
    mask = np.ones((3, 4), dtype=bool)
    mask[2, 3] = False  # pretend the Turkic vector for "hand" is missing
    tensor[:, 2, 3, :] = 99.0  # in-memory garbage behind the mask
    store = EmbeddingStore(
        tensor=tensor,
        concepts=concepts,
        languages=languages,
        layers=(0, 4),
        condition="contextual",
        mask=mask,
    )
    store.validate()
    return store


def main() -> None:
    store = build_store()
    print(f"store: layers {list(store.layers)}, {len(store.concepts)} concepts x "
          f"{len(store.languages)} languages x dim {store.dim}")
    print(f"glosses: {store.glosses}")
    print(f"digest:  {store_checksum(store)}")

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "demo.lgeo"
        save_store(store, path)
        blob = path.read_bytes()
        print(f"\nwrote {path.name}: {len(blob)} bytes "
              f"(magic {blob[:4]!r}, version {int.from_bytes(blob[4:8], 'little')})")

        loaded = load_store(path)
        same_digest = store_checksum(loaded) == store_checksum(store)
        cell = loaded.tensor[:, 2, 3, :]
        print(f"reloaded: digest matches: {same_digest}")
        print(f"masked cell came back as zeros (was 99.0 in memory): "
              f"{bool(np.all(cell == 0.0))}")

        sub = restrict_languages(loaded, ["eng_Latn", "spa_Latn"])
        print(f"restricted to 2 languages: tensor {sub.tensor.shape}, "
              f"mask {sub.mask.shape}")

        # flip one byte inside the tensor block; the trailing CRC catches it
        corrupt = bytearray(blob)
        corrupt[-9] ^= 0xFF
        bad = Path(tmp) / "corrupt.lgeo"
        bad.write_bytes(bytes(corrupt))
        try:
            load_store(bad)
            print("corrupted file loaded (unexpected)")
        except LgeoFormatError as exc:
            print(f"\nflipped tensor byte -> rejected: {exc}")

        # cut the file short; the loader reports structure, not a traceback
        short = Path(tmp) / "short.lgeo"
        short.write_bytes(blob[:20])
        try:
            load_store(short)
            print("truncated file loaded (unexpected)")
        except LgeoFormatError as exc:
            print(f"truncated file    -> rejected: {exc}")


if __name__ == "__main__":
    main()
