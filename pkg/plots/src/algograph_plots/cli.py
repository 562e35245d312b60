"""`algograph-plots <figure-spec>`: render sweep CSVs into figure panels.

`--self-check <path>` additionally dumps the plotted series back to CSV
(using the input files' exact cell strings) so fidelity can be verified.
Exit codes: 0 success, 2 spec/input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import render, self_check_csv
from .spec import FigureSpecError, load_figure_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="algograph-plots",
        description="Render mean/std figure panels from algograph sweep CSVs.",
    )
    parser.add_argument("spec", help="figure-spec file")
    parser.add_argument(
        "--self-check",
        metavar="PATH",
        help="also dump the plotted series back to CSV for fidelity checks",
    )
    args = parser.parse_args(argv)

    try:
        spec = load_figure_spec(args.spec)
        series = render(spec)
    except FigureSpecError as err:
        print(f"figure error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {spec.out} ({len(series)} panels)")
    if args.self_check:
        Path(args.self_check).write_text(self_check_csv(series), encoding="utf-8")
        print(f"wrote self-check series to {args.self_check}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
