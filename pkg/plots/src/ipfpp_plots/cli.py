"""Command-line surface for figure rendering.

Exit codes: 0 success, 2 usage error, 3 parse or render error.
"""

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, SchemaError, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ipfpp-plots",
        description="Render figures from ipfpp grid/slice CSV and fit JSON",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render one figure")
    p.add_argument("--kind", choices=FIGURE_KINDS, required=True)
    p.add_argument("--grid", default=None, help="grid CSV (heatmap)")
    p.add_argument("--slice", action="append", default=[], dest="slices",
                   help="slice CSV; repeat for multiple curves")
    p.add_argument("--label", action="append", default=[], dest="labels",
                   help="legend label for the matching --slice")
    p.add_argument("--fit", default=None, help="fit JSON (regression)")
    p.add_argument("--summary", default=None,
                   help="experiment summary JSON; adds K to the heatmap legend")
    p.add_argument("--level", type=float, default=0.1,
                   help="level-curve value for the heatmap overlay")
    p.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            out_path=args.out,
            grid_path=args.grid,
            slice_paths=tuple(args.slices),
            slice_labels=tuple(args.labels),
            fit_path=args.fit,
            summary_path=args.summary,
            level=args.level,
        )
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
