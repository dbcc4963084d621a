"""Command-line entry point.

Exit codes: 0 on success, 1 for configuration problems (including argument
parsing), 2 for a numerical failure in a single-point command or an
unexpected internal error. Sweeps never exit nonzero on per-cell numerical
failures; those become NaN cells plus warnings on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import traceback

from .diagnostics import symmetry_report
from .errors import ConfigError, LadderError
from .model import Boundary
from .recipes import list_recipes, run_recipe
from .spectra import (
    band_overlap,
    exceptional_points,
    pt_threshold_closed_form,
    pt_threshold_gamma,
)
from .sweep import (
    SweepConfig,
    config_echo,
    gbz_rows,
    load_config,
    mode_rows,
    output_paths,
    phase_rows,
    run_sweep,
    spectrum_rows,
    write_csv,
    write_metadata,
)
from .topology import z2_invariant

__all__ = ["main", "build_parser"]

SPECTRUM_HEADER = (
    "index", "re_E", "im_E", "class", "ipr", "imbalance",
    "abs_beta1", "abs_beta2", "abs_beta3", "abs_beta4",
)
GBZ_HEADER = (
    "index", "re_E", "im_E",
    "abs_beta1", "abs_beta2", "abs_beta3", "abs_beta4", "middle_modulus",
)
MODES_HEADER = ("kind", "index", "re_E", "im_E", "residual")
PROFILE_HEADER = ("mode_index", "cell", "re_a", "im_a", "re_b", "im_b")


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors, so they exit 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub, config_required: bool = True):
    sub.add_argument("--config", required=config_required,
                     help="flat YAML parameter file")
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads for sweep cells")
    sub.add_argument("--seedless", action="store_true",
                     help="reserved; nothing here draws random numbers")


def build_parser() -> _Parser:
    parser = _Parser(prog="nhladder", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("spectrum", "eigenvalues, classes, and factor moduli at one parameter point"),
        ("gbz", "non-Bloch factor sample of the open chain at one parameter point"),
        ("modes", "boundary/compact mode family at one parameter point"),
        ("diagnose", "regime flags, symmetry residuals, and derived scales"),
    ):
        _add_common(subs.add_parser(name, help=help_text))

    phase = subs.add_parser("phase", help="grid sweep of a scalar or table quantity")
    _add_common(phase)

    recipe = subs.add_parser("recipe", help="run a bundled figure recipe")
    recipe.add_argument("name", help="recipe name; see list-recipes")
    _add_common(recipe, config_required=False)

    listing = subs.add_parser("list-recipes", help="enumerate bundled recipes")
    listing.add_argument("--seedless", action="store_true",
                         help="reserved; nothing here draws random numbers")
    return parser


def _single_point_config(args) -> SweepConfig:
    cfg = load_config(args.config)
    if cfg.axes:
        raise ConfigError("axes belong to the phase command; remove axis1_*/axis2_*")
    return cfg


def _warn(messages) -> None:
    for m in messages:
        print(f"warning: {m}", file=sys.stderr)


def _cmd_spectrum(args) -> int:
    cfg = _single_point_config(args)
    csv_path, meta_path = output_paths(args.out, "spectrum")
    write_csv(csv_path, SPECTRUM_HEADER, spectrum_rows(cfg.params))
    write_metadata(meta_path, {"command": "spectrum", "config": config_echo(cfg),
                               "files": [os.path.basename(csv_path)]})
    print(csv_path)
    return 0


def _cmd_gbz(args) -> int:
    cfg = _single_point_config(args)
    csv_path, meta_path = output_paths(args.out, "gbz")
    write_csv(csv_path, GBZ_HEADER, gbz_rows(cfg.params))
    write_metadata(meta_path, {"command": "gbz", "config": config_echo(cfg),
                               "files": [os.path.basename(csv_path)]})
    print(csv_path)
    return 0


def _cmd_modes(args) -> int:
    cfg = _single_point_config(args)
    summary, profiles = mode_rows(cfg.params)
    csv_path, meta_path = output_paths(args.out, "modes")
    prof_path = os.path.join(args.out, "mode_profiles.csv")
    write_csv(csv_path, MODES_HEADER, summary)
    write_csv(prof_path, PROFILE_HEADER, profiles)
    write_metadata(meta_path, {
        "command": "modes",
        "config": config_echo(cfg),
        "files": [os.path.basename(csv_path), os.path.basename(prof_path)],
    })
    print(csv_path)
    print(prof_path)
    return 0


def _cmd_phase(args) -> int:
    cfg = load_config(args.config)
    if cfg.quantity is None:
        raise ConfigError("phase needs a quantity key in the config")
    if not cfg.axes:
        raise ConfigError("phase needs at least one axis (axis1_*)")
    if args.threads < 1:
        raise ConfigError("--threads must be at least 1")
    result = run_sweep(cfg, threads=args.threads)
    _warn(result.warnings)
    stem = f"phase_{cfg.quantity}"
    csv_path, meta_path = output_paths(args.out, stem)
    files = [csv_path]
    if result.values is not None:
        write_csv(csv_path, result.header, phase_rows(result))
    else:
        write_csv(csv_path, result.header, result.rows)
        if result.profiles is not None:
            prof_path = os.path.join(args.out, f"{stem}_profiles.csv")
            write_csv(prof_path,
                      tuple(f"axis{i + 1}" for i in range(len(cfg.axes)))
                      + PROFILE_HEADER,
                      result.profiles)
            files.append(prof_path)
    write_metadata(meta_path, {
        "command": "phase",
        "config": config_echo(cfg),
        "warnings": list(result.warnings),
        "files": [os.path.basename(f) for f in files],
    })
    for f in files:
        print(f)
    return 0


def _cmd_diagnose(args) -> int:
    cfg = _single_point_config(args)
    p = cfg.params
    doc = {
        "params": config_echo(cfg)["params"],
        "regime": {
            "antisymmetric_legs": p.is_antisymmetric_legs,
            "symmetric_legs": p.is_symmetric_legs,
            "balanced": p.is_balanced,
            "equal_cross": p.is_equal_cross,
        },
        "symmetry_residuals": dataclasses.asdict(symmetry_report(p)),
    }

    def attempt(key, fn):
        try:
            doc[key] = fn()
        except LadderError as exc:
            doc[key] = f"unavailable: {exc}"

    attempt("exceptional_momenta",
            lambda: list(exceptional_points(p.replace(gamma=0.0)).momenta)
            if p.is_antisymmetric_legs else None)
    attempt("pt_threshold_closed_form", lambda: pt_threshold_closed_form(p))
    attempt("pt_threshold_bisection",
            lambda: pt_threshold_gamma(p.replace(gamma=0.0))
            if p.is_antisymmetric_legs else None)
    attempt("band_overlap", lambda: band_overlap(p))
    attempt("z2_invariant", lambda: z2_invariant(p) if p.is_balanced else None)
    body = json.dumps(doc, indent=2, sort_keys=True, default=str)
    print(body)
    if args.out != ".":
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "diagnose.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    return 0


def _cmd_recipe(args) -> int:
    if args.threads < 1:
        raise ConfigError("--threads must be at least 1")
    files = run_recipe(args.name, args.out, threads=args.threads)
    for f in files:
        print(f)
    return 0


def _cmd_list_recipes(args) -> int:
    for name, description, style, sources in list_recipes():
        tags = ", ".join(f"{k}={v}" for k, v in sorted(sources.items()))
        print(f"{name:10s} [{style}] {description} ({tags})")
    return 0


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "gbz": _cmd_gbz,
    "modes": _cmd_modes,
    "phase": _cmd_phase,
    "diagnose": _cmd_diagnose,
    "recipe": _cmd_recipe,
    "list-recipes": _cmd_list_recipes,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"nhladder: config error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"nhladder: config error: {exc}", file=sys.stderr)
        return 1
    except LadderError as exc:
        print(f"nhladder: numerical failure: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
