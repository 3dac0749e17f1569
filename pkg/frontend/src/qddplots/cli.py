"""Command-line entry: one figure per invocation.

Usage:
    qdd-plot --spec figure.yaml
    qdd-plot <kind> <input.csv> <output.png> [--columns a b c] [--logx]
"""
from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import KINDS, PlotSpec, PlotSpecError, load_spec


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdd-plot", description=__doc__)
    ap.add_argument("--spec", help="YAML plot specification")
    ap.add_argument("kind", nargs="?", choices=KINDS)
    ap.add_argument("csv", nargs="?")
    ap.add_argument("out", nargs="?")
    ap.add_argument("--columns", nargs="+", default=())
    ap.add_argument("--logx", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.spec:
            spec = load_spec(args.spec)
        elif args.kind and args.csv and args.out:
            spec = PlotSpec(kind=args.kind, csv=args.csv, out=args.out,
                            columns=tuple(args.columns), logx=args.logx)
        else:
            print("error: provide --spec or 'kind csv out'", file=sys.stderr)
            return 1
        path = render(spec)
    except PlotSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
