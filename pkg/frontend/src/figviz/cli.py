"""Command line front end: render one recipe's artifacts to an image."""

from __future__ import annotations

import argparse
import sys

from .errors import FigvizError
from .render import render
from .specs import spec_for


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; keep 1 = user error, 2 = internal
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="figviz",
                     description="regenerate figures from sweep artifacts")
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="render one recipe's data directory")
    rend.add_argument("recipe", help="recipe name, e.g. fig2")
    rend.add_argument("--data", required=True,
                      help="directory holding the recipe's CSV/JSON artifacts")
    rend.add_argument("--out", required=True, help="output directory")
    rend.add_argument("--format", choices=("svg", "png"), default="svg",
                      help="image format (default svg)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = spec_for(args.recipe, args.data)
        out_path = render(spec, args.out, fmt=args.format)
    except FigvizError as exc:
        print(f"figviz: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"figviz: {exc}", file=sys.stderr)
        return 1
    print(out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
