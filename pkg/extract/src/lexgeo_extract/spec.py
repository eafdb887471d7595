"""Extraction job description: which model, which concepts, which
languages, which layers, and the carrier templates that wrap each surface
form.

A spec is a plain JSON document. Validation returns violations as data so
a caller can report every problem at once; `ExtractionSpec.from_dict`
raises only after collecting the full list.
"""

import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

CONDITIONS = ("contextual", "decontextual")
WORD_SLOT = "{word}"

_CODE_RE = re.compile(r"^[a-z]{3}_[A-Z][a-z]{3}$")

_TOP_KEYS = {
    "model", "condition", "layers", "batch_size", "languages", "families",
    "templates", "concepts", "exclude_languages",
}
_CONCEPT_KEYS = {"gloss", "category", "polysemous", "forms"}


class ExtractionSpecError(Exception):
    """Raised when a spec document is not runnable; message lists every
    violation, one per line."""


@dataclass(frozen=True)
class ConceptSpec:
    gloss: str
    category: str = "Concept"
    polysemous: bool = False
    # language code -> surface form; a missing code means the cell is
    # absent and will be masked out, never guessed
    forms: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ExtractionSpec:
    model: str
    languages: tuple[str, ...]
    concepts: tuple[ConceptSpec, ...]
    templates: dict[str, str]
    layers: tuple[int, ...]
    condition: str = "contextual"
    batch_size: int = 8
    families: dict[str, str] = field(default_factory=dict)
    # exclusion is always an explicit, recorded decision; screening only
    # flags, it never drops a language on its own
    exclude_languages: tuple[str, ...] = ()

    def included_languages(self) -> list[str]:
        dropped = set(self.exclude_languages)
        return [l for l in self.languages if l not in dropped]

    def form(self, gloss: str, code: str) -> str | None:
        for c in self.concepts:
            if c.gloss == gloss:
                return c.forms.get(code)
        return None

    def with_condition(self, condition: str) -> "ExtractionSpec":
        if condition not in CONDITIONS:
            raise ValueError(f"condition must be one of {CONDITIONS}")
        return replace(self, condition=condition)

    @staticmethod
    def from_dict(doc: dict) -> "ExtractionSpec":
        violations = spec_violations(doc)
        if violations:
            raise ExtractionSpecError("\n".join(violations))
        concepts = tuple(
            ConceptSpec(
                gloss=str(c["gloss"]).strip(),
                category=str(c.get("category", "Concept")),
                polysemous=bool(c.get("polysemous", False)),
                forms={
                    code: form
                    for code, form in (c.get("forms") or {}).items()
                    if form is not None
                },
            )
            for c in doc["concepts"]
        )
        return ExtractionSpec(
            model=doc["model"],
            languages=tuple(doc["languages"]),
            concepts=concepts,
            templates=dict(doc.get("templates") or {}),
            layers=tuple(int(v) for v in doc["layers"]),
            condition=doc.get("condition", "contextual"),
            batch_size=int(doc.get("batch_size", 8)),
            families=dict(doc.get("families") or {}),
            exclude_languages=tuple(doc.get("exclude_languages") or ()),
        )

    @staticmethod
    def from_json_file(
        path: str | Path, fill_templates: bool = False
    ) -> "ExtractionSpec":
        """Parse a spec document. With fill_templates the shipped carrier
        defaults are merged in before validation (explicit entries win), so
        a contextual spec may leave templates to the defaults entirely."""
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ExtractionSpecError(f"spec is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ExtractionSpecError("spec document must be a JSON object")
        if fill_templates:
            explicit = doc.get("templates") or {}
            langs = doc.get("languages") or []
            if isinstance(explicit, dict) and isinstance(langs, list):
                merged = {**default_carriers(), **explicit}
                doc = dict(doc)
                doc["templates"] = {c: t for c, t in merged.items() if c in langs}
        return ExtractionSpec.from_dict(doc)


def spec_violations(doc: dict) -> list[str]:
    """Every violation in the document, one string each; empty means the
    spec is runnable."""
    v: list[str] = []
    for key in sorted(set(doc) - _TOP_KEYS):
        v.append(f"unknown field {key!r}")

    model = doc.get("model")
    if not isinstance(model, str) or not model.strip():
        v.append("model: must be a non-empty string")

    condition = doc.get("condition", "contextual")
    if condition not in CONDITIONS:
        v.append(f"condition: must be one of {CONDITIONS}")

    layers = doc.get("layers")
    if not isinstance(layers, list) or not layers:
        v.append("layers: must be a non-empty list of layer indices")
        layers = []
    elif any(not isinstance(x, int) or isinstance(x, bool) or x < 0 for x in layers):
        v.append("layers: indices must be non-negative integers")
    elif list(layers) != sorted(set(layers)):
        v.append("layers: indices must be strictly increasing")

    batch = doc.get("batch_size", 8)
    if not isinstance(batch, int) or isinstance(batch, bool) or batch < 1:
        v.append("batch_size: must be a positive integer")

    languages = doc.get("languages")
    if not isinstance(languages, list) or not languages:
        v.append("languages: must be a non-empty list")
        languages = []
    else:
        if len(set(languages)) != len(languages):
            v.append("languages: duplicate code")
        for code in languages:
            if not isinstance(code, str) or not _CODE_RE.match(code):
                v.append(f"languages: code {code!r} does not match xxx_Yyyy pattern")

    excluded = doc.get("exclude_languages") or []
    if not isinstance(excluded, list):
        v.append("exclude_languages: must be a list")
        excluded = []
    else:
        for code in excluded:
            if code not in languages:
                v.append(f"exclude_languages: {code!r} is not in languages")
    included = [l for l in languages if l not in set(excluded)]
    if languages and not included:
        v.append("exclude_languages: every language is excluded")

    templates = doc.get("templates") or {}
    if not isinstance(templates, dict):
        v.append("templates: must be a map of language code to template")
        templates = {}
    for code, tpl in templates.items():
        if code not in languages:
            v.append(f"templates: {code!r} is not in languages")
        if not isinstance(tpl, str) or tpl.count(WORD_SLOT) != 1:
            v.append(f"templates: template for {code!r} must contain exactly one {WORD_SLOT}")
    if condition == "contextual":
        for code in included:
            if code not in templates:
                v.append(f"templates: missing template for {code!r}")

    concepts = doc.get("concepts")
    if not isinstance(concepts, list) or not concepts:
        v.append("concepts: must be a non-empty list")
        concepts = []
    seen: set[str] = set()
    for i, c in enumerate(concepts):
        if not isinstance(c, dict):
            v.append(f"concepts[{i}]: must be an object")
            continue
        for key in sorted(set(c) - _CONCEPT_KEYS):
            v.append(f"concepts[{i}]: unknown field {key!r}")
        gloss = str(c.get("gloss", "")).strip()
        if not gloss:
            v.append(f"concepts[{i}]: gloss must be non-empty")
        elif gloss in seen:
            v.append(f"concepts[{i}]: duplicate gloss {gloss!r}")
        else:
            seen.add(gloss)
        if not str(c.get("category", "Concept")):
            v.append(f"concepts[{i}]: category must be non-empty")
        forms = c.get("forms") or {}
        if not isinstance(forms, dict):
            v.append(f"concepts[{i}]: forms must be a map of language code to form")
            forms = {}
        for code, form in forms.items():
            if code not in languages:
                v.append(f"concepts[{i}]: form for unknown language {code!r}")
            # null means deliberately absent; empty strings are typos
            if form is not None and (not isinstance(form, str) or not form.strip()):
                v.append(f"concepts[{i}]: form for {code!r} must be a non-empty string or null")

    families = doc.get("families") or {}
    if not isinstance(families, dict):
        v.append("families: must be a map of language code to family name")
    else:
        for code in families:
            if code not in languages:
                v.append(f"families: {code!r} is not in languages")
    return v


def load_carriers(path: str | Path) -> dict[str, str]:
    """Read a carrier-template file: {"templates": {code: template}, ...}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    templates = doc.get("templates")
    if not isinstance(templates, dict):
        raise ExtractionSpecError(f"{path}: carrier file needs a 'templates' map")
    for code, tpl in templates.items():
        if not isinstance(tpl, str) or tpl.count(WORD_SLOT) != 1:
            raise ExtractionSpecError(
                f"{path}: template for {code!r} must contain exactly one {WORD_SLOT}"
            )
    return dict(templates)


def default_carriers() -> dict[str, str]:
    """Templates shipped with the package. Only the English entry has been
    checked by a speaker; the rest are unverified machine translations."""
    return load_carriers(Path(__file__).parent / "data" / "carriers.json")


def with_default_templates(spec: ExtractionSpec) -> ExtractionSpec:
    """Fill template gaps from the shipped carrier file; explicit entries
    win."""
    merged = {**default_carriers(), **spec.templates}
    kept = {code: tpl for code, tpl in merged.items() if code in spec.languages}
    return replace(spec, templates=kept)
