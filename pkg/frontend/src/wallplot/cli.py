"""Entry point: plot <kind> <run-dir>... -o <image>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import PlotDataError
from .render import KINDS, PlotJob, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from wallwalk run directories."
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("run_dirs", nargs="+", metavar="run-dir",
                        help="one run directory (sigma-curves accepts several to overlay)")
    parser.add_argument("-o", "--output", required=True, type=Path, metavar="image")
    parser.add_argument("--cmap", default="viridis")
    parser.add_argument("--label", action="append", default=[],
                        help="legend label per run (repeatable)")
    args = parser.parse_args(argv)
    try:
        job = PlotJob(run_dirs=tuple(args.run_dirs), kind=args.kind, output=args.output,
                      cmap=args.cmap, labels=tuple(args.label))
        render(job)
    except PlotDataError as err:
        print(f"plot error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
