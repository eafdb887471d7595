"""Command-line entry point.

    lexgeo-extract <spec.json> [--out DIR] [--both] [--default-templates]

Reads an extraction spec, runs the configured model, and writes the
store(s) plus an extraction log per condition. --both runs contextual and
decontextual off the same spec; --default-templates fills template gaps
from the shipped carrier file (explicit spec entries win).

Exit codes: 0 success; 1 invalid spec or extraction precondition;
2 unreadable input files.
"""

import argparse
import sys

from .backends import backend_for
from .errors import ExtractionError
from .pipeline import extract_both, extract_store, write_result
from .spec import ExtractionSpec, ExtractionSpecError


def _describe(store) -> str:
    return (
        f"{len(store.concepts)} concepts x {len(store.languages)} languages "
        f"x {len(store.layers)} layers, dim {store.dim}"
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lexgeo-extract",
        description="embed concepts in carrier sentences and write an embedding store",
    )
    parser.add_argument("spec", help="extraction spec JSON")
    parser.add_argument("--out", default="extract_out", help="output directory")
    parser.add_argument(
        "--both", action="store_true",
        help="run contextual and decontextual conditions off the same spec",
    )
    parser.add_argument(
        "--default-templates", action="store_true",
        help="fill missing carrier templates from the shipped defaults",
    )
    args = parser.parse_args(argv)
    try:
        spec = ExtractionSpec.from_json_file(
            args.spec, fill_templates=args.default_templates
        )
        backend = backend_for(spec.model)
        results = (
            extract_both(spec, backend) if args.both else (extract_store(spec, backend),)
        )
        for result in results:
            store_path, log_path = write_result(result, args.out)
            print(f"wrote {store_path} ({_describe(result.store)}), {log_path}")
            flagged = result.log["screening"]["flagged"]
            if flagged:
                scores = result.log["screening"]["scores"]
                detail = ", ".join(
                    f"{code} (score {scores[code]:.4f})" if scores[code] is not None
                    else f"{code} (no score)"
                    for code in flagged
                )
                print(f"screening flagged: {detail}; exclusion stays a spec decision")
        return 0
    except FileNotFoundError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (ExtractionSpecError, ExtractionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
