import json

import pytest

from lexgeo_extract import (
    ExtractionSpec,
    ExtractionSpecError,
    default_carriers,
    spec_violations,
    with_default_templates,
)

from conftest import spec_doc


def test_valid_spec_parses():
    spec = ExtractionSpec.from_dict(spec_doc())
    assert spec.model == "stub"
    assert spec.languages == ("eng_Latn", "spa_Latn")
    assert spec.layers == (0, 2, 5)
    assert spec.condition == "contextual"
    assert spec.concepts[0].gloss == "water"
    assert spec.concepts[0].forms["spa_Latn"] == "agua"
    assert spec.included_languages() == ["eng_Latn", "spa_Latn"]


def test_violations_empty_on_valid_doc():
    assert spec_violations(spec_doc()) == []


def test_null_form_means_absent():
    doc = spec_doc()
    doc["concepts"][0]["forms"]["spa_Latn"] = None
    assert spec_violations(doc) == []
    spec = ExtractionSpec.from_dict(doc)
    assert "spa_Latn" not in spec.concepts[0].forms


@pytest.mark.parametrize(
    "mutate, needle",
    [
        (lambda d: d.update(model=""), "model"),
        (lambda d: d.update(condition="raw"), "condition"),
        (lambda d: d.update(layers=[]), "layers"),
        (lambda d: d.update(layers=[2, 0]), "strictly increasing"),
        (lambda d: d.update(layers=[-1]), "non-negative"),
        (lambda d: d.update(batch_size=0), "batch_size"),
        (lambda d: d.update(languages=[]), "languages"),
        (lambda d: d.update(languages=["eng_Latn", "eng_Latn"]), "duplicate"),
        (lambda d: d.update(languages=["english"]), "xxx_Yyyy"),
        (lambda d: d.update(exclude_languages=["fra_Latn"]), "not in languages"),
        (lambda d: d.update(exclude_languages=["eng_Latn", "spa_Latn"]), "every language"),
        (lambda d: d.update(surprise=1), "unknown field"),
        (lambda d: d["templates"].update(eng_Latn="no slot here"), "exactly one"),
        (lambda d: d["templates"].update(eng_Latn="a {word} and {word}"), "exactly one"),
        (lambda d: d["templates"].pop("spa_Latn"), "missing template"),
        (lambda d: d["templates"].update(fra_Latn="un {word}"), "not in languages"),
        (lambda d: d.update(concepts=[]), "concepts"),
        (lambda d: d["concepts"][0].update(gloss=""), "gloss"),
        (lambda d: d["concepts"][1].update(gloss="water"), "duplicate gloss"),
        (lambda d: d["concepts"][0].update(notes="x"), "unknown field"),
        (lambda d: d["concepts"][0]["forms"].update(fra_Latn="eau"), "unknown language"),
        (lambda d: d["concepts"][0]["forms"].update(eng_Latn="  "), "non-empty string"),
        (lambda d: d.update(families={"fra_Latn": "x"}), "not in languages"),
    ],
)
def test_violation_messages_name_the_field(mutate, needle):
    doc = spec_doc()
    mutate(doc)
    violations = spec_violations(doc)
    assert violations, f"expected a violation containing {needle!r}"
    assert any(needle in v for v in violations)


def test_from_dict_raises_with_all_violations():
    doc = spec_doc(model="", condition="raw")
    with pytest.raises(ExtractionSpecError) as err:
        ExtractionSpec.from_dict(doc)
    assert "model" in str(err.value) and "condition" in str(err.value)


def test_decontextual_spec_needs_no_templates():
    doc = spec_doc(condition="decontextual", templates={})
    assert spec_violations(doc) == []


def test_excluded_language_needs_no_template():
    doc = spec_doc(exclude_languages=["spa_Latn"])
    del doc["templates"]["spa_Latn"]
    assert spec_violations(doc) == []
    spec = ExtractionSpec.from_dict(doc)
    assert spec.included_languages() == ["eng_Latn"]


def test_from_json_file_rejects_bad_json(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(ExtractionSpecError, match="not valid JSON"):
        ExtractionSpec.from_json_file(p)
    p.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ExtractionSpecError, match="JSON object"):
        ExtractionSpec.from_json_file(p)


def test_from_json_file_roundtrip(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec_doc()), encoding="utf-8")
    spec = ExtractionSpec.from_json_file(p)
    assert spec == ExtractionSpec.from_dict(spec_doc())


def test_default_carriers_have_one_slot_each():
    carriers = default_carriers()
    assert "eng_Latn" in carriers
    for code, template in carriers.items():
        assert template.count("{word}") == 1, code


def test_with_default_templates_fills_gaps_and_keeps_explicit():
    doc = spec_doc(templates={"eng_Latn": "behold the {word} of legend"})
    doc["condition"] = "decontextual"  # so the gap passes validation
    spec = with_default_templates(ExtractionSpec.from_dict(doc))
    assert spec.templates["eng_Latn"] == "behold the {word} of legend"
    assert spec.templates["spa_Latn"] == default_carriers()["spa_Latn"]
    # only declared languages are kept
    assert set(spec.templates) == {"eng_Latn", "spa_Latn"}


def test_with_condition_switches_and_validates():
    spec = ExtractionSpec.from_dict(spec_doc())
    dec = spec.with_condition("decontextual")
    assert dec.condition == "decontextual"
    assert dec.languages == spec.languages
    with pytest.raises(ValueError):
        spec.with_condition("raw")
