import pytest

from lexgeo_extract import StubEncoder


def spec_doc(**overrides) -> dict:
    """A small runnable spec document; keyword overrides replace fields."""
    doc = {
        "model": "stub",
        "condition": "contextual",
        "layers": [0, 2, 5],
        "batch_size": 4,
        "languages": ["eng_Latn", "spa_Latn"],
        "templates": {
            "eng_Latn": "I saw a {word} near the river.",
            "spa_Latn": "Vi un {word} cerca del rio.",
        },
        "concepts": [
            {"gloss": "water", "category": "Nature",
             "forms": {"eng_Latn": "water", "spa_Latn": "agua"}},
            {"gloss": "dog", "category": "Animals",
             "forms": {"eng_Latn": "dog", "spa_Latn": "perro"}},
            {"gloss": "crocodile", "category": "Animals",
             "forms": {"eng_Latn": "crocodile"}},
        ],
    }
    doc.update(overrides)
    return doc


@pytest.fixture
def stub():
    return StubEncoder("stub")
