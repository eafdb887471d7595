"""Produce a store with the extraction companion package and analyze it.

The extractor (extract/, installed as lexgeo-extract) embeds each concept
in a per-language carrier sentence, pools hidden states over the target
word's subword span, and writes a regular .lgeo store plus a log JSON.
The store file is the only thing the two packages share: this script runs
the extractor's CLI with its deterministic stub backend under both
conditions, then loads the results back through lexgeo and pokes at them.

The stub encoder hashes word pieces, so languages that spell a concept
identically (water/water, arm/arm) get near-identical vectors and the
bare-form condition scores them at cosine 1. That is the surface-form
confound in miniature; on real models the surface regression probe
(exp_surface_regression) quantifies it.

Run: python3 demos/06_extract_to_analysis.py  (needs lexgeo-extract:
pip install --no-build-isolation -e extract/)

Layout under lexgeo_demo_run/extract/: spec.json, store_contextual.lgeo,
store_decontextual.lgeo, and one log per condition.
"""

import json
import shutil
import sys
from pathlib import Path

from lexgeo import convergence_scores, load_store, store_checksum

try:
    from lexgeo_extract.cli import main as lexgeo_extract
except ImportError:
    sys.exit("lexgeo-extract is not installed; run "
             "pip install --no-build-isolation -e extract/")

WS = Path("lexgeo_demo_run") / "extract"

SPEC = {
    "model": "stub",
    "condition": "contextual",
    "layers": [0, 3, 5],
    "batch_size": 8,
    "languages": ["eng_Latn", "spa_Latn", "fra_Latn", "deu_Latn", "nld_Latn"],
    "templates": {
        "eng_Latn": "I saw the {word} near the river.",
        "spa_Latn": "Vi el {word} cerca del rio.",
        "fra_Latn": "J'ai vu le {word} pres de la riviere.",
        "deu_Latn": "Ich sah den {word} am Fluss.",
        "nld_Latn": "Ik zag de {word} bij de rivier.",
    },
    "families": {
        "eng_Latn": "Germanic", "deu_Latn": "Germanic", "nld_Latn": "Germanic",
        "spa_Latn": "Romance", "fra_Latn": "Romance",
    },
    "concepts": [
        {"gloss": "water", "category": "Nature", "forms": {
            "eng_Latn": "water", "spa_Latn": "agua", "fra_Latn": "eau",
            "deu_Latn": "wasser", "nld_Latn": "water"}},
        {"gloss": "fire", "category": "Nature", "forms": {
            "eng_Latn": "fire", "spa_Latn": "fuego", "fra_Latn": "feu",
            "deu_Latn": "feuer", "nld_Latn": "vuur"}},
        {"gloss": "dog", "category": "Animals", "forms": {
            "eng_Latn": "dog", "spa_Latn": "perro", "fra_Latn": "chien",
            "deu_Latn": "hund", "nld_Latn": "hond"}},
        {"gloss": "tree", "category": "Plants", "forms": {
            "eng_Latn": "tree", "spa_Latn": "arbol", "fra_Latn": "arbre",
            "deu_Latn": "baum", "nld_Latn": "boom"}},
        {"gloss": "arm", "category": "Body", "forms": {
            "eng_Latn": "arm", "spa_Latn": "brazo", "fra_Latn": "bras",
            "deu_Latn": "arm", "nld_Latn": "arm"}},
        # no German form on purpose: the cell must come back masked
        {"gloss": "moon", "category": "Sky", "forms": {
            "eng_Latn": "moon", "spa_Latn": "luna", "fra_Latn": "lune",
            "nld_Latn": "maan"}},
    ],
}


def main() -> None:
    if WS.exists():
        shutil.rmtree(WS)
    WS.mkdir(parents=True)
    spec_path = WS / "spec.json"
    spec_path.write_text(json.dumps(SPEC, indent=2), encoding="utf-8")

    rc = lexgeo_extract([str(spec_path), "--out", str(WS), "--both"])
    if rc != 0:
        raise SystemExit(f"extraction failed with exit code {rc}")

    print("\n--- what the analysis side sees ---")
    for condition in ("contextual", "decontextual"):
        store = load_store(WS / f"store_{condition}.lgeo")
        log = json.loads((WS / f"log_{condition}.json").read_text())
        assert store_checksum(store) == log["store_checksum"]
        n_masked = int((~store.mask).sum())
        print(f"\n{condition}: {store.tensor.shape[1]} concepts x "
              f"{store.tensor.shape[2]} languages x {len(store.layers)} layers, "
              f"dim {store.dim}, masked cells {n_masked}")

        scores, excluded = convergence_scores(store, layer=5)
        ranked = sorted(zip(store.glosses, scores), key=lambda t: -t[1])
        print("  convergence at layer 5:",
              ", ".join(f"{g} {s:.3f}" for g, s in ranked))
        if excluded:
            print("  excluded (fewer than 2 valid languages):", excluded)

    log = json.loads((WS / "log_contextual.json").read_text())
    print("\nper-cell audit trail (contextual log):")
    for c in log["cells"]:
        if c["diagnostic"] is not None:
            print(f"  {c['gloss']}/{c['language']}: masked ({c['diagnostic']})")
    lengths = [c["span_length"] for c in log["cells"] if c["span_length"]]
    print(f"  span lengths: min {min(lengths)}, max {max(lengths)} tokens "
          f"over {len(lengths)} extracted cells")
    print(f"  layer convention: {log['layer_convention']}")
    flagged = log["screening"]["flagged"]
    print(f"  screening flagged: {flagged if flagged else 'nothing'}")


if __name__ == "__main__":
    main()
