"""Drive the command-line interface end to end on a synthetic workspace.

`lexgeo synth` writes a planted store plus its ground truth; this script
builds one, derives the tabular resources an analysis run needs (reference
distances from the planted tree, colexification counts for the planted
pairs, word forms, subfamilies, offset pairs), then runs `lexgeo all`,
which executes every experiment whose inputs are configured and prints a
one-line summary each. No color store is configured on purpose, so the
run also shows the skip path. Everything lands under lexgeo_demo_run/.

The battery runs under the default top-3 correction. That correction
removes the per-language offsets, which is precisely where this
generator's tree signal lives, so the phylo probe is expected to read
near zero here; 03_tree_and_colex.py recovers the same tree from the raw
view. Likewise compare and carrier pit the store against its decontextual
twin, which shares the tensor byte for byte, so "no difference" is the
correct answer for both.

Run: python3 demos/05_cli_workspace.py
"""

import csv
import json
import shutil
from pathlib import Path

from lexgeo import load_store
from lexgeo.cli import main as lexgeo

WS = Path("lexgeo_demo_run")

SYNTH = {
    "n_concepts": 30, "n_languages": 12, "dim": 24,
    "offset_scale": 1.0, "noise_scale": 0.1,
    "random_tree": True,
    "colex_pairs": [[2 * i, 2 * i + 1, 0.9] for i in range(4)],
    "seed": 11,
}


def run(argv: list[str]) -> None:
    rc = lexgeo(argv)
    if rc != 0:
        raise SystemExit(f"lexgeo {argv[0]} failed with exit code {rc}")


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def build_workspace() -> Path:
    if WS.exists():
        shutil.rmtree(WS)
    WS.mkdir()

    # three stores from the same seed: the main one, a decontextual twin
    # (same tensor, different condition tag), and a 3-layer variant
    for name, extra in (
        ("synth", {}),
        ("synth_dec", {"condition": "decontextual"}),
        ("synth_layers", {"n_layers": 3, "layer_offset_decay": 0.5}),
    ):
        cfg = WS / f"{name}.json"
        cfg.write_text(json.dumps({"out": str(WS / name), "synth": {**SYNTH, **extra}}))
        run(["synth", "--config", str(cfg)])

    store = load_store(WS / "synth" / "store.lgeo")
    gl = store.glosses
    truth = json.loads((WS / "synth" / "ground_truth.json").read_text())

    td = truth["tree_distances"]
    with open(WS / "asjp.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(td["labels"])
        for row in td["values"]:
            w.writerow([f"{v:.12g}" for v in row])

    # planted pairs carry counts over the binary threshold; the rest of the
    # universe never colexifies
    colex_rows = [[gl[p["concept_a"]], gl[p["concept_b"]], 6 + i]
                  for i, p in enumerate(truth["colex_pairs"])]
    colex_rows += [[gl[8 + 2 * i], gl[9 + 2 * i], 0] for i in range(8)]
    write_csv(WS / "colex.csv", ["concept_a", "concept_b", "family_count"], colex_rows)

    # language 0 diverges in (concept % 5) + 1 positions, so mean surface
    # similarity varies across concepts instead of sitting at a constant
    word = "matalo"
    form_rows = []
    for g_idx, gloss in enumerate(gl):
        cut = (g_idx % 5) + 1
        variant = "zuvike"[:cut] + word[cut:]
        for i, code in enumerate(store.codes):
            form_rows.append([gloss, code, variant if i == 0 else word])
    write_csv(WS / "wordforms.csv", ["gloss", "language_code", "form"], form_rows)

    half = len(store.codes) // 2
    write_csv(WS / "subfamilies.csv", ["language_code", "subfamily"],
              [[c, "s1" if i < half else "s2"] for i, c in enumerate(store.codes)])
    write_csv(WS / "offset_pairs.csv", ["concept_a", "concept_b"],
              [[gl[24], gl[26]], [gl[25], gl[27]]])

    cfg = WS / "run.json"
    cfg.write_text(json.dumps({
        "store": str(WS / "synth" / "store.lgeo"),
        "decontextual_store": str(WS / "synth_dec" / "store.lgeo"),
        "comparison_store": str(WS / "synth_dec" / "store.lgeo"),
        "compare_labels": ["contextual", "decontextual"],
        "layers_store": str(WS / "synth_layers" / "store.lgeo"),
        "asjp": str(WS / "asjp.csv"),
        "colex": str(WS / "colex.csv"),
        "wordforms": str(WS / "wordforms.csv"),
        "subfamilies": str(WS / "subfamilies.csv"),
        "offset_pairs": str(WS / "offset_pairs.csv"),
        "out": str(WS / "out"),
    }, indent=2))
    return cfg


def main() -> None:
    cfg = build_workspace()
    print(f"\nworkspace ready under {WS}/; running the full battery:\n")
    run(["all", "--config", str(cfg)])

    reports = sorted((WS / "out").glob("*.json"))
    csvs = sorted((WS / "out").glob("*.csv"))
    print(f"\nwrote {len(reports)} report files and {len(csvs)} figure tables:")
    for p in reports:
        print(f"  {p}")

    # single experiments take the same config; flags override it
    print("\nsame config, one experiment, correction switched off:\n")
    run(["convergence", "--config", str(cfg), "--k", "0",
         "--out", str(WS / "out_raw")])


if __name__ == "__main__":
    main()
