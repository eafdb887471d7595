import json
from pathlib import Path

import numpy as np
import pytest

from conftest import make_store
from lexgeo.cli import RunConfig, main, validate_config
from lexgeo.geometry import RAW, pairwise_language_distance
from lexgeo.store import load_store, save_store


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


def _run(argv):
    return main([str(a) for a in argv])


@pytest.fixture
def workspace(tmp_path):
    """Planted store plus every resource file the CLI can consume."""
    data = tmp_path / "data"
    synth_cfg = tmp_path / "synth_cfg.json"
    _write(
        synth_cfg,
        json.dumps(
            {
                "out": str(data),
                "synth": {
                    "n_concepts": 12,
                    "n_languages": 6,
                    "dim": 16,
                    "offset_scale": 1.0,
                    "noise_scale": 0.3,
                    "random_tree": True,
                    "colex_pairs": [[0, 1, 0.95], [2, 3, 0.9]],
                    "seed": 11,
                },
            }
        ),
    )
    assert _run(["synth", "--config", synth_cfg]) == 0
    store_path = data / "store.lgeo"
    store = load_store(store_path)
    gl = store.glosses

    ref = pairwise_language_distance(store, 0, RAW)
    lines = [",".join(ref.labels)]
    for row in ref.values:
        lines.append(",".join(f"{v:.17g}" for v in row))
    _write(data / "asjp.csv", "\n".join(lines) + "\n")

    _write(
        data / "colex.csv",
        "concept_a,concept_b,family_count\n"
        + f"{gl[0]},{gl[1]},5\n{gl[2]},{gl[3]},6\n"
        + f"{gl[4]},{gl[5]},0\n{gl[6]},{gl[7]},0\n{gl[8]},{gl[9]},0\n",
    )

    # lang 0 diverges from the shared form in i%5+1 positions, so the mean
    # orthographic similarity varies across concepts (no constant predictor)
    word = "matalo"
    rows = ["gloss,language_code,form"]
    for i, g in enumerate(gl):
        cut = (i % 5) + 1
        variant = "zuvike"[:cut] + word[cut:]
        for j, code in enumerate(store.codes):
            rows.append(f"{g},{code},{variant if j == 0 else word}")
    _write(data / "wordforms.csv", "\n".join(rows) + "\n")

    _write(
        data / "subfamilies.csv",
        "language_code,subfamily\n"
        + "\n".join(f"{c},{'s1' if i < 3 else 's2'}" for i, c in enumerate(store.codes))
        + "\n",
    )
    _write(
        data / "offset_pairs.csv",
        f"concept_a,concept_b\n{gl[0]},{gl[2]}\n{gl[1]},{gl[3]}\n",
    )

    cfg = {
        "store": str(store_path),
        "asjp": str(data / "asjp.csv"),
        "colex": str(data / "colex.csv"),
        "wordforms": str(data / "wordforms.csv"),
        "subfamilies": str(data / "subfamilies.csv"),
        "offset_pairs": str(data / "offset_pairs.csv"),
        "perms": 99,
        "n_boot": 200,
        "k": 0,
        "apply_global_mean": False,
    }
    return tmp_path, cfg


def test_synth_writes_workspace(workspace):
    tmp_path, cfg = workspace
    data = tmp_path / "data"
    store = load_store(data / "store.lgeo")
    assert store.tensor.shape == (1, 12, 6, 16)
    assert store.mask.all()
    truth = json.loads((data / "ground_truth.json").read_text())
    assert truth  # ground truth payload is non-empty
    echo = json.loads((data / "synth.json").read_text())
    assert echo["seed"] == 11


def test_colex_subcommand_writes_report(workspace, capsys):
    tmp_path, cfg = workspace
    out = tmp_path / "out_colex"
    cfg_path = tmp_path / "colex_cfg.json"
    _write(cfg_path, json.dumps({**cfg, "out": str(out)}))
    assert _run(["colex", "--config", cfg_path]) == 0
    stdout = capsys.readouterr().out
    assert "colex:" in stdout

    loaded = json.loads((out / "colex.json").read_text())
    mwu = loaded["results"]["binary"]["mann_whitney"]
    assert {"statistic", "p_value", "method", "alternative"} <= set(mwu)
    assert isinstance(loaded["results"]["binary"]["cohens_d"], float)
    assert isinstance(loaded["results"]["continuous"]["spearman"], float)
    assert loaded["config"]["binary_threshold"] == 3
    assert (out / "colex__pairs.csv").is_file()


def test_unknown_and_missing_subcommand(capsys):
    assert _run(["frobnicate"]) == 1
    assert "error:" in capsys.readouterr().err
    assert _run([]) == 1
    assert "missing subcommand" in capsys.readouterr().err


def test_all_checks_resources_before_computing(workspace, capsys, tmp_path):
    _, cfg = workspace
    partial = {k: v for k, v in cfg.items() if k != "asjp"}
    out = tmp_path / "out_partial"
    cfg_path = tmp_path / "partial_cfg.json"
    _write(cfg_path, json.dumps({**partial, "out": str(out)}))
    assert _run(["all", "--config", cfg_path]) == 1
    assert "asjp: required by all" in capsys.readouterr().err
    assert not out.exists()  # fails validation, writes nothing


def _read_tree(out_dir: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


def test_all_output_is_byte_stable_across_runs_and_threads(
    workspace, capsys, monkeypatch
):
    tmp_path, cfg = workspace
    trees = {}
    for label, threads in (("a", None), ("b", "1"), ("c", "8")):
        if threads is None:
            monkeypatch.delenv("LEXGEO_THREADS", raising=False)
        else:
            monkeypatch.setenv("LEXGEO_THREADS", threads)
        out = tmp_path / f"out_{label}"
        cfg_path = tmp_path / f"all_cfg_{label}.json"
        _write(cfg_path, json.dumps({**cfg, "out": str(out)}))
        assert _run(["all", "--config", cfg_path]) == 0
        trees[label] = _read_tree(out)
    stdout = capsys.readouterr().out
    assert trees["a"] == trees["b"] == trees["c"]
    for name in ("compare", "carrier", "colors", "layers"):
        assert f"skipped {name}:" in stdout
    assert "convergence.json" in trees["a"]
    assert "phylo.json" in trees["a"]
    blocks = {"experiment", "config", "results", "figure_data", "provenance"}
    for name, blob in trees["a"].items():
        if name.endswith(".json"):
            assert set(json.loads(blob)) == blocks, name


def test_thread_env_validation(workspace, capsys, monkeypatch, tmp_path):
    _, cfg = workspace
    cfg_path = tmp_path / "all_cfg.json"
    _write(cfg_path, json.dumps({**cfg, "out": str(tmp_path / "out_t")}))
    monkeypatch.setenv("LEXGEO_THREADS", "zero")
    assert _run(["all", "--config", cfg_path]) == 1
    assert "LEXGEO_THREADS" in capsys.readouterr().err
    monkeypatch.setenv("LEXGEO_THREADS", "0")
    assert _run(["all", "--config", cfg_path]) == 1


def test_flag_overrides_config(workspace, tmp_path):
    _, cfg = workspace
    data2 = tmp_path / "data2"
    synth_cfg = tmp_path / "synth2.json"
    _write(
        synth_cfg,
        json.dumps(
            {
                "out": str(data2),
                "synth": {
                    "n_concepts": 6,
                    "n_languages": 4,
                    "dim": 8,
                    "n_layers": 2,
                    "noise_scale": 0.2,
                    "seed": 3,
                },
            }
        ),
    )
    assert _run(["synth", "--config", synth_cfg]) == 0
    out = tmp_path / "out_flag"
    cfg_path = tmp_path / "conv_cfg.json"
    _write(
        cfg_path,
        json.dumps({"store": str(data2 / "store.lgeo"), "layer": 1, "out": str(out)}),
    )
    assert _run(["convergence", "--config", cfg_path, "--layer", "0"]) == 0
    loaded = json.loads((out / "convergence.json").read_text())
    assert loaded["config"]["layer"] == 0


def test_experiment_precondition_maps_to_exit_1(workspace, capsys, tmp_path):
    _, cfg = workspace
    cfg_path = tmp_path / "colors_cfg.json"
    _write(cfg_path, json.dumps({**cfg, "out": str(tmp_path / "out_c")}))
    assert _run(["colors", "--config", cfg_path]) == 1  # planted glosses lack colors
    assert "missing color terms" in capsys.readouterr().err


def test_validate_config_collects_violations(tmp_path, rng):
    assert validate_config(RunConfig()) == []
    assert validate_config(RunConfig(k=-1)) == ["k: must be non-negative"]
    assert validate_config(RunConfig(perms=0)) == ["perms: must be positive"]
    assert validate_config(RunConfig(n_components=4)) == [
        "n_components: must be 2 or 3"
    ]
    assert validate_config(RunConfig(n_boot=-1)) == ["n_boot: must be non-negative"]
    assert validate_config(RunConfig(binary_threshold=0)) == [
        "binary_threshold: must be positive"
    ]
    assert validate_config(RunConfig(compare_labels=["only"])) == [
        "compare_labels: must have exactly 2 entries"
    ]
    assert validate_config(RunConfig(), "nope") == ["subcommand: unknown name 'nope'"]

    missing = validate_config(RunConfig(store="/no/such.lgeo"), "convergence")
    assert any(v.startswith("store: file not found") for v in missing)

    ctx_path = tmp_path / "ctx.lgeo"
    store = make_store(rng.normal(size=(1, 3, 4, 8)).astype(np.float32))
    save_store(store, ctx_path)
    bad = validate_config(RunConfig(decontextual_store=str(ctx_path)))
    assert any("condition mismatch" in v for v in bad)


def test_config_file_errors(tmp_path, capsys):
    bad_json = tmp_path / "bad.json"
    _write(bad_json, "{nope")
    assert _run(["convergence", "--config", bad_json]) == 1
    assert "malformed config JSON" in capsys.readouterr().err

    unknown = tmp_path / "unknown.json"
    _write(unknown, json.dumps({"stoer": "x"}))
    assert _run(["convergence", "--config", unknown]) == 1
    assert "unknown config keys: stoer" in capsys.readouterr().err

    typed = tmp_path / "typed.json"
    _write(typed, json.dumps({"k": "three"}))
    assert _run(["convergence", "--config", typed]) == 1
    assert "'k' must be int" in capsys.readouterr().err

    booled = tmp_path / "booled.json"
    _write(booled, json.dumps({"k": True}))
    assert _run(["convergence", "--config", booled]) == 1

    assert _run(["convergence", "--config", tmp_path / "absent.json"]) == 2
    assert "i/o error" in capsys.readouterr().err


def test_corrupt_store_maps_to_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.lgeo"
    bad.write_bytes(b"LGEO" + b"\x00" * 16)
    cfg_path = tmp_path / "cfg.json"
    _write(cfg_path, json.dumps({"store": str(bad), "out": str(tmp_path / "o")}))
    assert _run(["convergence", "--config", cfg_path]) == 2
    assert "i/o error" in capsys.readouterr().err
