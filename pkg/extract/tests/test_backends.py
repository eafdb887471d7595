import numpy as np
import pytest

from lexgeo_extract import EncoderBackend, StubEncoder, backend_for


def test_tokenize_offsets_slice_the_text(stub):
    text = "I saw a crocodile near the river."
    tokens = stub.tokenize(text)
    for t in tokens:
        assert t.text == text[t.start:t.end]
    rebuilt = "".join(t.text for t in tokens).replace(" ", "")
    assert rebuilt == text.replace(" ", "")


def test_tokenize_splits_long_words_and_absorbs_spaces(stub):
    tokens = stub.tokenize("a crocodile")
    texts = [t.text for t in tokens]
    assert texts == ["a", " croc", "odil", "e"]
    assert tokens[1].start == 1  # span starts on the space


def test_encode_shapes(stub):
    (enc,) = stub.encode(["a crocodile"])
    assert enc.hidden.shape == (stub.n_layers, len(enc.tokens), stub.dim)
    assert enc.hidden.dtype == np.float32


def test_encode_is_deterministic_across_instances():
    a = StubEncoder("stub").encode(["the water runs"])[0]
    b = StubEncoder("stub").encode(["the water runs"])[0]
    assert a.tokens == b.tokens
    assert np.array_equal(a.hidden, b.hidden)


def test_model_id_changes_the_vectors():
    a = StubEncoder("stub").encode(["water"])[0]
    b = StubEncoder("stub-other").encode(["water"])[0]
    assert not np.array_equal(a.hidden, b.hidden)


def test_same_word_differs_by_context(stub):
    river, money = stub.encode(["river bank", "money bank"])
    # "bank" is the last token in both sentences
    v1 = river.hidden[:, -1, :]
    v2 = money.hidden[:, -1, :]
    assert not np.allclose(v1, v2)
    # but the context term is small relative to the word identity
    assert np.linalg.norm(v1 - v2) < np.linalg.norm(v1)


def test_batching_does_not_change_results(stub):
    together = stub.encode(["a crocodile", "the river"])
    alone = [stub.encode(["a crocodile"])[0], stub.encode(["the river"])[0]]
    for t, a in zip(together, alone):
        assert t.tokens == a.tokens
        assert np.array_equal(t.hidden, a.hidden)


def test_backend_for_dispatches_on_model_id():
    b = backend_for("stub-test")
    assert isinstance(b, StubEncoder)
    assert isinstance(b, EncoderBackend)


def test_stub_rejects_degenerate_config():
    from lexgeo_extract import ExtractionError

    with pytest.raises(ExtractionError):
        StubEncoder("stub", dim=0)
