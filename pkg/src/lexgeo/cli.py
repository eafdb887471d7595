"""Command-line entry point.

    lexgeo <subcommand> [--config cfg.json] [--store PATH] [--out DIR]
                        [--layer N] [--k N] [--seed N] [--perms N]

Subcommands: convergence, surface, categories, compare, isotropy, carrier,
layers, phylo, colex, storeratio, colors, offsets, conceptmap, synth, all.

Settings merge as flag > config file > default. Each run writes
<out>/<experiment>.json (canonical JSON) plus one CSV per figure series and
prints a one-paragraph summary per experiment to stdout.

Exit codes: 0 success; 1 invalid invocation, config, or experiment
precondition (including unknown subcommand and malformed config JSON);
2 unreadable or structurally corrupt input files.

`lexgeo all` runs every experiment whose resources are configured, skipping
(and listing) those whose optional stores are absent. Worker threads only
change scheduling, never output bytes; cap them with LEXGEO_THREADS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

from .experiments import (
    ExperimentError,
    ExperimentReport,
    canonical_json,
    exp_carrier_robustness,
    exp_category_summary,
    exp_colexification,
    exp_color_circle,
    exp_concept_map,
    exp_conceptual_store,
    exp_convergence_ranking,
    exp_group_comparison,
    exp_isotropy_validation,
    exp_layerwise,
    exp_offset_invariance,
    exp_phylogenetic,
    exp_surface_regression,
    write_report_files,
)
from .geometry import CorrectionConfig
from .store import (
    LgeoFormatError,
    ResourceFormatError,
    load_asjp_matrix,
    load_colex_edges,
    load_offset_pairs,
    load_store,
    load_subfamilies,
    load_word_forms,
    save_store,
)
from .synth import PlantSpec, gen_planted, random_binary_tree

SUBCOMMANDS = (
    "convergence",
    "surface",
    "categories",
    "compare",
    "isotropy",
    "carrier",
    "layers",
    "phylo",
    "colex",
    "storeratio",
    "colors",
    "offsets",
    "conceptmap",
    "synth",
    "all",
)

EXPERIMENT_ORDER = tuple(s for s in SUBCOMMANDS if s not in ("synth", "all"))


@dataclass
class RunConfig:
    store: str | None = None
    decontextual_store: str | None = None
    comparison_store: str | None = None
    color_store: str | None = None
    layers_store: str | None = None
    asjp: str | None = None
    asjp_mapping: dict | None = None
    colex: str | None = None
    wordforms: str | None = None
    subfamilies: str | None = None
    offset_pairs: str | None = None
    out: str = "out"
    layer: int | None = None
    k: int = 3
    apply_global_mean: bool = True
    seed: int = 0
    perms: int = 999
    n_boot: int = 1000
    binary_threshold: int = 3
    scripts: list | None = None
    k_values: list | None = None
    n_components: int = 2
    compare_labels: list | None = None
    synth: dict | None = None

    def correction(self) -> CorrectionConfig:
        return CorrectionConfig(k=self.k, apply_global_mean=self.apply_global_mean)


_FIELD_NAMES = {f.name for f in fields(RunConfig)}

_TYPE_CHECKS = {
    "store": str, "decontextual_store": str, "comparison_store": str,
    "color_store": str, "layers_store": str, "asjp": str, "colex": str,
    "wordforms": str, "subfamilies": str, "offset_pairs": str, "out": str,
    "layer": int, "k": int, "seed": int, "perms": int, "n_boot": int,
    "binary_threshold": int, "n_components": int, "apply_global_mean": bool,
    "asjp_mapping": dict, "scripts": list, "k_values": list,
    "compare_labels": list, "synth": dict,
}


class CliError(Exception):
    """Invalid invocation or configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we want 1
        raise CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="lexgeo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, add_help=True)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--store", default=None, help="primary .lgeo store")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--layer", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--perms", type=int, default=None)
    return parser


def _read_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IOError(f"cannot read config file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed config JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError("config root must be a JSON object")
    return data


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = _read_config_file(args.config) if args.config else {}
    unknown = sorted(set(file_cfg) - _FIELD_NAMES)
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(unknown)}")
    for key, val in file_cfg.items():
        want = _TYPE_CHECKS.get(key)
        if val is None or want is None:
            continue
        if want is int and isinstance(val, bool):
            raise CliError(f"config key {key!r} must be {want.__name__}")
        if not isinstance(val, want):
            raise CliError(f"config key {key!r} must be {want.__name__}")
    cfg = RunConfig(**file_cfg)
    for flag in ("store", "out", "layer", "k", "seed", "perms"):
        val = getattr(args, flag)
        if val is not None:
            setattr(cfg, flag, val)
    return cfg


def _require(cfg: RunConfig, names: list[str], sub: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise CliError(f"{sub} requires config values: {', '.join(missing)}")


# resources each subcommand cannot run without
_REQUIRED: dict[str, tuple[str, ...]] = {
    "convergence": ("store",),
    "surface": ("store", "wordforms"),
    "categories": ("store",),
    "compare": ("store", "comparison_store"),
    "isotropy": ("store",),
    "carrier": ("store", "decontextual_store"),
    "layers": (),
    "phylo": ("store", "asjp", "subfamilies"),
    "colex": ("store", "colex"),
    "storeratio": ("store",),
    "colors": (),
    "offsets": ("store", "offset_pairs"),
    "conceptmap": ("store",),
    "synth": (),
    "all": ("store", "asjp", "colex", "wordforms", "subfamilies", "offset_pairs"),
}

_PATH_FIELDS = (
    "store", "decontextual_store", "comparison_store", "color_store",
    "layers_store", "asjp", "colex", "wordforms", "subfamilies",
    "offset_pairs",
)


def validate_config(cfg: RunConfig, subcommand: str | None = None) -> list[str]:
    """Return violations as data, one string per field/constraint; empty
    means runnable. Opens configured stores to check their condition tags."""
    violations = []
    if cfg.k < 0:
        violations.append("k: must be non-negative")
    if cfg.layer is not None and cfg.layer < 0:
        violations.append("layer: must be non-negative")
    if cfg.perms < 1:
        violations.append("perms: must be positive")
    if cfg.n_boot < 0:
        violations.append("n_boot: must be non-negative")
    if cfg.binary_threshold < 1:
        violations.append("binary_threshold: must be positive")
    if cfg.n_components not in (2, 3):
        violations.append("n_components: must be 2 or 3")
    if cfg.compare_labels is not None and len(cfg.compare_labels) != 2:
        violations.append("compare_labels: must have exactly 2 entries")
    if subcommand is not None:
        if subcommand not in _REQUIRED:
            violations.append(f"subcommand: unknown name {subcommand!r}")
        else:
            for name in _REQUIRED[subcommand]:
                if getattr(cfg, name) is None:
                    violations.append(f"{name}: required by {subcommand}")
            if subcommand == "layers" and cfg.layers_store is None and cfg.store is None:
                violations.append("layers_store: required by layers (or store)")
            if subcommand == "colors" and cfg.color_store is None and cfg.store is None:
                violations.append("color_store: required by colors (or store)")
            if subcommand == "synth" and cfg.synth is None:
                violations.append("synth: required by synth")
    for name in _PATH_FIELDS:
        path = getattr(cfg, name)
        if path is not None and not Path(path).is_file():
            violations.append(f"{name}: file not found: {path}")
    if cfg.decontextual_store is not None and Path(cfg.decontextual_store).is_file():
        try:
            dec = _load(cfg.decontextual_store)
            if dec.condition != "decontextual":
                violations.append(
                    "decontextual_store: condition mismatch "
                    f"(expected decontextual, found {dec.condition})"
                )
        except LgeoFormatError as exc:
            violations.append(f"decontextual_store: {exc}")
    return violations


# active only inside a main() invocation, so `all` opens each distinct
# store file once instead of once per experiment
_STORE_CACHE: dict[str, object] | None = None
_STORE_CACHE_LOCK = threading.Lock()


def _load(path: str):
    """Open a store with I/O failures mapped to exit code 2."""
    if _STORE_CACHE is None:
        return load_store(path)
    key = str(Path(path).resolve())
    with _STORE_CACHE_LOCK:
        if key not in _STORE_CACHE:
            _STORE_CACHE[key] = load_store(path)
        return _STORE_CACHE[key]


def _layer_for(cfg: RunConfig, store) -> int:
    return cfg.layer if cfg.layer is not None else store.layers[-1]


# ---------------------------------------------------------------------------
# Per-subcommand runners. Each returns the finished report.


def _run_convergence(cfg: RunConfig):
    _require(cfg, ["store"], "convergence")
    store = _load(cfg.store)
    return exp_convergence_ranking(store, _layer_for(cfg, store), cfg.correction())


def _run_surface(cfg: RunConfig):
    _require(cfg, ["store", "wordforms"], "surface")
    store = _load(cfg.store)
    forms = load_word_forms(cfg.wordforms)
    scripts = tuple(cfg.scripts) if cfg.scripts else ("Latn",)
    return exp_surface_regression(
        store, _layer_for(cfg, store), forms, cfg.correction(), scripts=scripts
    )


def _run_categories(cfg: RunConfig):
    _require(cfg, ["store"], "categories")
    store = _load(cfg.store)
    return exp_category_summary(store, _layer_for(cfg, store), cfg.correction())


def _run_compare(cfg: RunConfig):
    _require(cfg, ["store", "comparison_store"], "compare")
    store_a = _load(cfg.store)
    store_b = _load(cfg.comparison_store)
    labels = cfg.compare_labels if cfg.compare_labels else ["a", "b"]
    if len(labels) != 2:
        raise CliError("compare_labels must have exactly 2 entries")
    return exp_group_comparison(
        store_a,
        store_b,
        _layer_for(cfg, store_a),
        cfg.correction(),
        label_a=str(labels[0]),
        label_b=str(labels[1]),
    )


def _run_isotropy(cfg: RunConfig):
    _require(cfg, ["store"], "isotropy")
    store = _load(cfg.store)
    k_values = tuple(int(k) for k in (cfg.k_values or (0, 1, 3, 5, 10)))
    return exp_isotropy_validation(store, _layer_for(cfg, store), k_values)


def _run_carrier(cfg: RunConfig):
    _require(cfg, ["store", "decontextual_store"], "carrier")
    ctx = _load(cfg.store)
    dec = _load(cfg.decontextual_store)
    return exp_carrier_robustness(ctx, dec, _layer_for(cfg, ctx), cfg.correction())


def _run_layers(cfg: RunConfig):
    path = cfg.layers_store or cfg.store
    if path is None:
        raise CliError("layers requires config values: layers_store or store")
    store = _load(path)
    return exp_layerwise(store, cfg.correction())


def _run_phylo(cfg: RunConfig):
    _require(cfg, ["store", "asjp", "subfamilies"], "phylo")
    store = _load(cfg.store)
    matrix = load_asjp_matrix(cfg.asjp)
    subfam = load_subfamilies(cfg.subfamilies)
    return exp_phylogenetic(
        store,
        _layer_for(cfg, store),
        matrix,
        subfam,
        cfg.correction(),
        mapping=cfg.asjp_mapping,
        n_perm=cfg.perms,
        seed=cfg.seed,
    )


def _run_colex(cfg: RunConfig):
    _require(cfg, ["store", "colex"], "colex")
    store = _load(cfg.store)
    edges = load_colex_edges(cfg.colex)
    return exp_colexification(
        store,
        _layer_for(cfg, store),
        edges,
        cfg.correction(),
        binary_threshold=cfg.binary_threshold,
    )


def _run_storeratio(cfg: RunConfig):
    _require(cfg, ["store"], "storeratio")
    store = _load(cfg.store)
    return exp_conceptual_store(
        store,
        _layer_for(cfg, store),
        cfg.correction(),
        n_boot=cfg.n_boot,
        seed=cfg.seed,
    )


def _run_colors(cfg: RunConfig):
    path = cfg.color_store or cfg.store
    if path is None:
        raise CliError("colors requires config values: color_store or store")
    store = _load(path)
    return exp_color_circle(
        store, _layer_for(cfg, store), cfg.correction(), n_components=cfg.n_components
    )


def _run_offsets(cfg: RunConfig):
    _require(cfg, ["store", "offset_pairs"], "offsets")
    store = _load(cfg.store)
    pairs = load_offset_pairs(cfg.offset_pairs)
    return exp_offset_invariance(store, _layer_for(cfg, store), pairs, cfg.correction())


def _run_conceptmap(cfg: RunConfig):
    _require(cfg, ["store"], "conceptmap")
    store = _load(cfg.store)
    return exp_concept_map(store, _layer_for(cfg, store), cfg.correction())


_RUNNERS = {
    "convergence": _run_convergence,
    "surface": _run_surface,
    "categories": _run_categories,
    "compare": _run_compare,
    "isotropy": _run_isotropy,
    "carrier": _run_carrier,
    "layers": _run_layers,
    "phylo": _run_phylo,
    "colex": _run_colex,
    "storeratio": _run_storeratio,
    "colors": _run_colors,
    "offsets": _run_offsets,
    "conceptmap": _run_conceptmap,
}

# `all` needs these; experiments on the right are skipped when their
# optional store is not configured.
_ALL_BASE = ("store", "asjp", "colex", "wordforms", "subfamilies", "offset_pairs")
_ALL_OPTIONAL = {
    "compare": "comparison_store",
    "carrier": "decontextual_store",
    "colors": "color_store",
    "layers": "layers_store",
}


def _summarize(report: ExperimentReport) -> str:
    r = report.results
    name = report.experiment

    def fnum(x, digits=4):
        if x is None:
            return "n/a"
        return f"{float(x):.{digits}g}"

    if name == "convergence":
        return (
            f"convergence: {r['n_concepts']} concepts; mean {fnum(r['mean'])} "
            f"(sd {fnum(r['sd'])}); top {r['top'][0][0]}, bottom {r['bottom'][-1][0]}."
        )
    if name == "surface":
        return (
            f"surface: {r['n_concepts']} concepts; orthographic R^2 "
            f"{fnum(r['orthographic']['r_squared'])}, phonetic R^2 "
            f"{fnum(r['phonetic']['r_squared'])}."
        )
    if name == "categories":
        best = r["categories"][0]
        worst = r["categories"][-1]
        return (
            f"categories: {len(r['categories'])} groups; highest {best['category']} "
            f"({fnum(best['mean'])}), lowest {worst['category']} ({fnum(worst['mean'])})."
        )
    if name == "compare":
        mw = r["mann_whitney"]
        return (
            f"compare: {r['group_a']['label']} mean {fnum(r['group_a']['mean'])} vs "
            f"{r['group_b']['label']} mean {fnum(r['group_b']['mean'])}; "
            f"U={fnum(mw['statistic'])}, p={fnum(mw['p_value'])}, d={fnum(r['cohens_d'])}."
        )
    if name == "isotropy":
        if r["correlations"]:
            worst = min(v["spearman"] for v in r["correlations"].values())
            return f"isotropy: ranking stability across k; minimum Spearman {fnum(worst, 6)}."
        return "isotropy: no reference k available for correlations."
    if name == "carrier":
        return (
            f"carrier: {r['n_concepts']} concepts; Spearman {fnum(r['spearman']['rho'])}, "
            f"mean abs diff {fnum(r['mean_abs_diff'])}."
        )
    if name == "layers":
        return (
            f"layers: {len(r['layers'])} layers; transition at layer "
            f"{r['transition_layer']}; final mean convergence "
            f"{fnum(r['mean_convergence'][-1])}."
        )
    if name == "phylo":
        m = r["mantel"]
        return (
            f"phylo: {r['n_languages']} languages; Mantel rho {fnum(m['statistic'])}, "
            f"p={fnum(m['p_value'])} ({m['n_resamples']} permutations)."
        )
    if name == "colex":
        cont = r["continuous"]
        binr = r["binary"]
        parts = [f"colex: {r['n_pairs']} pairs"]
        if cont:
            parts.append(f"Spearman {fnum(cont['spearman'])} (p={fnum(cont['p_value'])})")
        if binr:
            parts.append(
                f"U={fnum(binr['mann_whitney']['statistic'])} "
                f"p={fnum(binr['mann_whitney']['p_value'])} d={fnum(binr['cohens_d'])}"
            )
        return "; ".join(parts) + "."
    if name == "storeratio":
        return (
            f"storeratio: raw {fnum(r['ratio_raw'])}, centered {fnum(r['ratio_centered'])}, "
            f"improvement {fnum(r['improvement'])}."
        )
    if name == "colors":
        evr = ", ".join(fnum(v) for v in r["explained_variance_ratio"])
        extra = (
            f"; achromatic axis {r['achromatic_component']}"
            if "achromatic_component" in r
            else ""
        )
        return f"colors: {r['n_points']} vectors; explained variance {evr}{extra}."
    if name == "offsets":
        bp = r["best_pair"]
        return (
            f"offsets: {r['n_pairs']} pairs; mean consistency {fnum(r['mean_consistency'])} "
            f"(range {fnum(r['min_consistency'])} to {fnum(r['max_consistency'])}); "
            f"best {bp[0]}-{bp[1]} ({fnum(bp[2])})."
        )
    if name == "conceptmap":
        evr = ", ".join(fnum(v) for v in r["explained_variance_ratio"])
        return f"conceptmap: {r['n_concepts']} concepts; explained variance {evr}."
    return f"{name}: done."


def _run_synth(cfg: RunConfig) -> list[str]:
    if cfg.synth is None:
        raise CliError("synth requires a 'synth' config block")
    block = dict(cfg.synth)
    known = {
        "n_concepts", "n_languages", "dim", "n_layers", "concept_scale",
        "offset_scale", "noise_scale", "layer_offset_decay", "seed",
        "condition", "colex_pairs", "random_tree", "mean_depth",
    }
    unknown = sorted(set(block) - known)
    if unknown:
        raise CliError(f"unknown synth keys: {', '.join(unknown)}")
    for req in ("n_concepts", "n_languages", "dim"):
        if req not in block:
            raise CliError(f"synth block missing {req!r}")
    seed = int(block.get("seed", cfg.seed))
    tree = None
    if block.get("random_tree"):
        tree = random_binary_tree(
            int(block["n_languages"]), seed=seed, mean_depth=float(block.get("mean_depth", 1.0))
        )
    # config triples [a, b, corr] become the library's ((a, b), corr) form
    colex_pairs = tuple(
        ((int(a), int(b)), float(c)) for a, b, c in block.get("colex_pairs", [])
    )
    try:
        spec = PlantSpec(
            n_concepts=int(block["n_concepts"]),
            n_languages=int(block["n_languages"]),
            dim=int(block["dim"]),
            n_layers=int(block.get("n_layers", 1)),
            concept_scale=float(block.get("concept_scale", 1.0)),
            offset_scale=float(block.get("offset_scale", 1.0)),
            noise_scale=float(block.get("noise_scale", 0.0)),
            layer_offset_decay=(
                float(block["layer_offset_decay"])
                if block.get("layer_offset_decay") is not None
                else None
            ),
            tree=tree,
            colex_pairs=colex_pairs,
            seed=seed,
            condition=str(block.get("condition", "contextual")),
        )
        store, truth = gen_planted(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    store_path = out / "store.lgeo"
    truth_path = out / "ground_truth.json"
    echo_path = out / "synth.json"
    save_store(store, store_path)
    truth.write(truth_path)
    resolved = {k: v for k, v in block.items()}
    resolved.setdefault("seed", seed)
    echo_path.write_text(canonical_json(resolved), encoding="utf-8")
    print(
        f"synth: wrote {store_path} ({spec.n_concepts} concepts x "
        f"{spec.n_languages} languages x dim {spec.dim}), {truth_path}, {echo_path}."
    )
    return [str(store_path), str(truth_path), str(echo_path)]


def _run_all(cfg: RunConfig) -> None:
    _require(cfg, list(_ALL_BASE), "all")
    skipped = []
    jobs: list[str] = []
    for name in EXPERIMENT_ORDER:
        opt = _ALL_OPTIONAL.get(name)
        if opt is not None and getattr(cfg, opt) is None:
            skipped.append((name, opt))
            continue
        jobs.append(name)
    env = os.environ.get("LEXGEO_THREADS", "").strip()
    try:
        max_workers = int(env) if env else min(4, len(jobs))
    except ValueError:
        raise CliError("LEXGEO_THREADS must be an integer") from None
    if max_workers < 1:
        raise CliError("LEXGEO_THREADS must be positive")
    results: dict[str, ExperimentReport] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {name: pool.submit(_RUNNERS[name], cfg) for name in jobs}
        for name in jobs:
            results[name] = futures[name].result()
    for name in jobs:
        write_report_files(results[name], cfg.out)
        print(_summarize(results[name]))
    for name, opt in skipped:
        print(f"skipped {name}: no {opt} configured.")


def main(argv=None) -> int:
    global _STORE_CACHE
    parser = _build_parser()
    _STORE_CACHE = {}
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            raise CliError("missing subcommand")
        cfg = _merge_config(args)
        violations = validate_config(cfg, args.subcommand)
        if violations:
            for v in violations:
                print(f"error: {v}", file=sys.stderr)
            return 1
        if args.subcommand == "synth":
            _run_synth(cfg)
            return 0
        if args.subcommand == "all":
            _run_all(cfg)
            return 0
        report = _RUNNERS[args.subcommand](cfg)
        paths = write_report_files(report, cfg.out)
        print(_summarize(report))
        print(f"wrote {len(paths)} files under {cfg.out}.")
        return 0
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ExperimentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LgeoFormatError, ResourceFormatError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    finally:
        _STORE_CACHE = None


if __name__ == "__main__":
    sys.exit(main())
