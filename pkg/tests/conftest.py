import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lexgeo.store import ConceptMeta, EmbeddingStore, LanguageMeta


def make_store(
    tensor,
    glosses=None,
    codes=None,
    layers=None,
    condition="contextual",
    mask=None,
    categories=None,
    families=None,
):
    """Build a valid store around a [layer][concept][language][dim] array."""
    tensor = np.asarray(tensor, dtype=np.float32)
    _, c, l, _ = tensor.shape
    glosses = glosses or [f"g{i:03d}" for i in range(c)]
    codes = codes or [f"{chr(97 + i // 26)}{chr(97 + i % 26)}a_Latn" for i in range(l)]
    categories = categories or ["cat0"] * c
    families = families or ["Fam0"] * l
    concepts = tuple(ConceptMeta(g, cat) for g, cat in zip(glosses, categories))
    languages = tuple(LanguageMeta(code, fam, "Latn") for code, fam in zip(codes, families))
    if mask is None:
        mask = np.ones((c, l), dtype=bool)
    store = EmbeddingStore(
        tensor=tensor,
        concepts=concepts,
        languages=languages,
        layers=tuple(layers) if layers is not None else tuple(range(tensor.shape[0])),
        condition=condition,
        mask=np.asarray(mask, dtype=bool),
    )
    store.validate()
    return store


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
