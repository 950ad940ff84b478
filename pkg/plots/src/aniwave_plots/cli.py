"""Command-line entry point: one figure per invocation.

Exit codes: 0 success, 2 missing or schema-invalid input.
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureJob, SchemaError, StyleOptions, render

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aniwave-plots",
        description="Render figures from simulator CSV/JSON artifacts",
    )
    p.add_argument("inputs", nargs="+", help="input artifact file(s) for the figure")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--out", "-o", required=True, help="output image (.png, .svg, or .pdf)")
    p.add_argument("--dpi", type=int, default=150)
    p.add_argument("--title", default=None)
    p.add_argument("--no-annotate", action="store_true", help="suppress text annotations")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        job = FigureJob(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            style=StyleOptions(dpi=args.dpi, title=args.title, annotate=not args.no_annotate),
        )
        path = render(job)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
