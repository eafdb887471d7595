import numpy as np
import pytest

from conftest import make_store
from lexgeo.store import (
    ColexEdge,
    DistanceMatrix,
    LgeoFormatError,
    ResourceFormatError,
    align_languages,
    crc64,
    load_asjp_matrix,
    load_colex_edges,
    load_store,
    load_word_forms,
    restrict_concepts,
    restrict_languages,
    save_store,
    store_checksum,
)


def random_store(rng, n_layers=2, c=3, l=4, dim=5, condition="contextual"):
    tensor = rng.normal(size=(n_layers, c, l, dim)).astype(np.float32)
    return make_store(tensor, condition=condition)


def test_crc64_check_value():
    # standard check value for this polynomial/reflection/xor convention
    assert crc64(b"123456789") == 0x995DC9BBDF1939FA


def test_crc64_streaming_matches_oneshot():
    data = bytes(range(256)) * 7
    part = crc64(data[100:], crc=crc64(data[:100]))
    assert part == crc64(data)


def test_roundtrip_bit_exact(tmp_path, rng):
    store = random_store(rng)
    path = tmp_path / "s.lgeo"
    save_store(store, path)
    back = load_store(path)
    assert back.tensor.dtype == np.float32
    assert np.array_equal(back.tensor, store.tensor)
    assert back.concepts == store.concepts
    assert back.languages == store.languages
    assert back.layers == store.layers
    assert back.condition == store.condition
    assert np.array_equal(back.mask, store.mask)


def test_save_deterministic_bytes(tmp_path):
    rng = np.random.default_rng(99)
    tensor = rng.normal(size=(1, 2, 3, 4)).astype(np.float32)
    store = make_store(tensor)
    p1, p2 = tmp_path / "a.lgeo", tmp_path / "b.lgeo"
    save_store(store, p1)
    save_store(store, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_masked_cells_saved_as_zeros(tmp_path, rng):
    tensor = rng.normal(size=(1, 2, 2, 3)).astype(np.float32)
    mask = np.array([[True, False], [True, True]])
    store = make_store(tensor, mask=mask)
    path = tmp_path / "m.lgeo"
    save_store(store, path)
    back = load_store(path)
    assert np.all(back.tensor[0, 0, 1] == 0.0)
    assert np.array_equal(back.mask, mask)
    # masked-true cells survive exactly
    assert np.array_equal(back.tensor[0, 1], store.tensor[0, 1])


def test_load_error_taxonomy(tmp_path, rng):
    store = random_store(rng)
    path = tmp_path / "s.lgeo"
    save_store(store, path)
    raw = bytearray(path.read_bytes())

    def expect(data, match):
        bad = tmp_path / "bad.lgeo"
        bad.write_bytes(bytes(data))
        with pytest.raises(LgeoFormatError, match=match):
            load_store(bad)

    expect(raw[:3], "truncated header")
    expect(b"NOPE" + raw[4:], "bad magic")
    v2 = bytearray(raw)
    v2[4:8] = (2).to_bytes(4, "little")
    expect(v2, "unsupported version")
    expect(raw[:20], "truncated metadata")
    expect(raw[:-9], "truncated tensor")
    expect(raw + b"x", "trailing garbage")
    flipped = bytearray(raw)
    flipped[-12] ^= 0xFF  # inside the tensor block
    expect(flipped, "checksum mismatch")
    # corrupt metadata JSON: flip a byte inside the metadata block
    meta = bytearray(raw)
    meta[16] = 0x00
    with pytest.raises(LgeoFormatError):
        bad = tmp_path / "bad.lgeo"
        bad.write_bytes(bytes(meta))
        load_store(bad)


def test_load_missing_file(tmp_path):
    with pytest.raises(LgeoFormatError, match="unreadable"):
        load_store(tmp_path / "absent.lgeo")


def test_store_checksum_stable_and_sensitive(tmp_path, rng):
    store = random_store(rng)
    c1 = store_checksum(store)
    assert len(c1) == 16 and int(c1, 16) >= 0
    assert store_checksum(store) == c1
    other = store.tensor.copy()
    other[0, 0, 0, 0] += 1.0
    bumped = make_store(other)
    assert store_checksum(bumped) != c1


def test_validate_rejects_bad_stores(rng):
    tensor = rng.normal(size=(1, 2, 2, 3)).astype(np.float32)
    with pytest.raises(ValueError, match="duplicate gloss"):
        make_store(tensor, glosses=["a", "a"])
    with pytest.raises(ValueError, match="condition"):
        make_store(tensor, condition="mystery")
    t2 = rng.normal(size=(2, 2, 2, 3)).astype(np.float32)
    with pytest.raises(ValueError, match="strictly increasing"):
        make_store(t2, layers=[5, 5])
    nan = tensor.copy()
    nan[0, 0, 0, 0] = np.nan
    with pytest.raises(ValueError, match="NaN"):
        make_store(nan)
    zero = tensor.copy()
    zero[0, 1, 1, :] = 0.0
    with pytest.raises(ValueError, match="zero norm"):
        make_store(zero)
    with pytest.raises(ValueError, match="pattern"):
        make_store(tensor, codes=["english", "ab1_Latn"])


def test_layer_and_concept_lookup(rng):
    store = make_store(rng.normal(size=(2, 2, 2, 3)).astype(np.float32), layers=[3, 7])
    assert store.layer_index(7) == 1
    with pytest.raises(ValueError, match="layer 4"):
        store.layer_index(4)
    assert store.concept_index("G000") == 0  # gloss lookup is normalized
    with pytest.raises(ValueError, match="not in store"):
        store.concept_index("missing")


def test_restrict_languages_and_concepts(rng):
    store = random_store(rng, c=4, l=5)
    sub = restrict_languages(store, [store.codes[3], store.codes[1]])
    # selection keeps the requested order
    assert sub.codes == [store.codes[3], store.codes[1]]
    assert np.array_equal(sub.tensor, store.tensor[:, :, [3, 1], :])
    subc = restrict_concepts(store, [store.glosses[2]])
    assert subc.glosses == [store.glosses[2]]
    with pytest.raises(ValueError, match="not in store"):
        restrict_languages(store, ["zzz_Zzzz"])
    with pytest.raises(ValueError, match="empty language selection"):
        restrict_languages(store, [])


def test_align_disjoint_raises(rng):
    store = random_store(rng, l=3)
    m = DistanceMatrix(labels=("xaa_Latn", "xab_Latn"), values=np.zeros((2, 2)))
    with pytest.raises(ValueError, match="empty intersection"):
        align_languages(store, m)


def test_align_identity(rng):
    store = random_store(rng, l=3)
    vals = np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]], dtype=np.float64)
    m = DistanceMatrix(labels=tuple(store.codes), values=vals)
    astore, amat = align_languages(store, m)
    assert astore.codes == store.codes
    assert np.array_equal(amat.values, vals)


def test_align_overlap_order(rng):
    store = random_store(rng, l=5)
    keep = [store.codes[4], store.codes[0], store.codes[2]]
    n = len(keep)
    vals = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                vals[i, j] = abs(i - j)
    m = DistanceMatrix(labels=tuple(keep), values=vals)
    astore, amat = align_languages(store, m)
    # output follows store language order
    assert astore.codes == [store.codes[0], store.codes[2], store.codes[4]]
    assert list(amat.labels) == astore.codes
    # entry for (codes[0], codes[4]) was at matrix position (1, 0)
    assert amat.values[0, 2] == vals[1, 0]


def test_align_with_mapping(rng):
    store = random_store(rng, l=3)
    labels = ("GERMAN", "FRENCH")
    vals = np.array([[0.0, 0.7], [0.7, 0.0]])
    m = DistanceMatrix(labels=labels, values=vals)
    mapping = {store.codes[0]: "FRENCH", store.codes[2]: "GERMAN"}
    astore, amat = align_languages(store, m, mapping)
    assert astore.codes == [store.codes[0], store.codes[2]]
    assert list(amat.labels) == astore.codes
    assert amat.values[0, 1] == 0.7
    with pytest.raises(ValueError, match="injective"):
        align_languages(store, m, {store.codes[0]: "FRENCH", store.codes[1]: "FRENCH"})


def test_load_asjp_matrix(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("a,b\n0,0.5\n0.5,0\n")
    m = load_asjp_matrix(p)
    assert list(m.labels) == ["a", "b"]
    assert m.values[0, 1] == 0.5
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n0,0.5\n")
    with pytest.raises(ResourceFormatError):
        load_asjp_matrix(bad)
    asym = tmp_path / "asym.csv"
    asym.write_text("a,b\n0,0.5\n0.4,0\n")
    with pytest.raises(ResourceFormatError, match="asymmetric"):
        load_asjp_matrix(asym)


def test_load_colex_edges(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("concept_a,concept_b,family_count\narm,hand,45\n")
    edges = load_colex_edges(p)
    assert edges.edges == (ColexEdge("arm", "hand", 45),)
    assert edges.count("Hand", "ARM") == 45
    assert edges.count("arm", "leg") == 0
    for body, match in [
        ("concept_a,concept_b,family_count\narm,arm,3\n", "self-loop"),
        ("concept_a,concept_b,family_count\na,b,3\nb,a,4\n", "duplicate"),
        ("concept_a,concept_b,family_count\na,b,-1\n", "negative"),
        ("wrong,header,here\na,b,1\n", "header"),
    ]:
        bad = tmp_path / "bad.csv"
        bad.write_text(body)
        with pytest.raises(ResourceFormatError, match=match):
            load_colex_edges(bad)


def test_load_word_forms(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("gloss,language_code,form\nWater,eng_Latn,water\nwater,spa_Latn,agua\n")
    forms = load_word_forms(p)
    assert forms.form("water", "eng_Latn") == "water"
    assert forms.form("WATER", "spa_Latn") == "agua"
    assert forms.form("water", "deu_Latn") is None
    assert forms.languages() == ["eng_Latn", "spa_Latn"]
    dup = tmp_path / "dup.csv"
    dup.write_text("gloss,language_code,form\nwater,eng_Latn,water\nWATER,eng_Latn,aqua\n")
    with pytest.raises(ResourceFormatError, match="duplicate"):
        load_word_forms(dup)


def test_bundled_data_loads():
    # the shipped reference tables parse and cross-reference
    from importlib import resources

    from lexgeo.store import (
        load_language_table,
        load_offset_pairs,
        load_subfamilies,
        load_swadesh_metadata,
    )

    root = resources.files("lexgeo") / "data"
    sw = load_swadesh_metadata(str(root / "swadesh_101.csv"))
    assert len(sw) == 101
    langs = load_language_table(str(root / "languages_135.csv"))
    assert len(langs) == 135
    matrix = load_asjp_matrix(str(root / "asjp_88.csv"))
    matrix.validate()
    assert matrix.n == 88
    codes = {l.code for l in langs}
    assert set(matrix.labels) <= codes
    sub = load_subfamilies(str(root / "subfamilies.csv"))
    assert set(sub) <= codes
    glosses = {c.gloss for c in sw}
    edges = load_colex_edges(str(root / "colex_edges.csv"))
    in_list = [g for g in edges.concepts() if g in glosses]
    assert len(in_list) == 54
    pairs = load_offset_pairs(str(root / "offset_pairs.csv"))
    assert len(pairs) == 22
    assert all(a in glosses and b in glosses for a, b in pairs)
    forms = load_word_forms(str(root / "wordforms.csv"))
    assert all(forms.form(g, "eng_Latn") for g in glosses)
