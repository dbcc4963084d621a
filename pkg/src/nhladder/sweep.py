"""Structured configuration, parameter-grid execution, and deterministic
CSV/JSON export.

Configs are flat YAML whose keys are exactly the LadderParams field names
plus the sweep controls; unknown keys are rejected so a typo in a physics
parameter cannot silently fall back to a default. Grid cells are independent
work items executed concurrently; output assembly is ordered by cell index,
and payload files contain no wall-clock data, so reruns are byte-identical.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import os

import numpy as np
import yaml

from .diagnostics import classify_states, total_imbalance
from .edgemodes import (
    build_compact_modes,
    build_zero_modes,
    gamma_shifted_modes,
    pseudo_inversion_zero_modes,
)
from .errors import ConfigError, LadderError
from .model import Boundary, LadderParams
from .nonbloch import beta_roots, gbz_from_obc
from .spectra import pt_threshold_gamma
from .topology import awn, hybrid_winding, z2_invariant

__all__ = [
    "AxisSpec",
    "SweepConfig",
    "SweepResult",
    "load_config",
    "run_sweep",
    "spectrum_rows",
    "gbz_rows",
    "mode_rows",
    "write_csv",
    "write_metadata",
    "format_value",
]

SCALAR_QUANTITIES = ("awn", "z2", "ti", "hybrid_winding", "pt_threshold")
TABLE_QUANTITIES = ("spectrum", "gbz", "zero_modes")
AXIS_FIELDS = ("j_amp", "eta", "delta", "gamma")

_PARAM_KEYS = ("j_amp", "eta_a", "eta_b", "delta", "t0", "gamma", "n_cells", "boundary")
_CONTROL_KEYS = ("quantity", "eta", "eta_lock", "n_k", "n_phi")
_AXIS_KEYS = tuple(
    f"axis{i}_{part}" for i in (1, 2) for part in ("field", "start", "stop", "num")
)


@dataclasses.dataclass(frozen=True)
class AxisSpec:
    field: str
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.field not in AXIS_FIELDS:
            raise ConfigError(
                f"axis field {self.field!r} is not sweepable; choose one of {AXIS_FIELDS}"
            )
        if self.num < 2:
            raise ConfigError("an axis needs at least 2 steps")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    params: LadderParams
    quantity: str | None = None
    axes: tuple = ()
    eta_lock: str | None = None
    n_k: int | None = None
    n_phi: int | None = None

    def __post_init__(self):
        if self.quantity is not None and self.quantity not in (
            SCALAR_QUANTITIES + TABLE_QUANTITIES
        ):
            raise ConfigError(
                f"unknown quantity {self.quantity!r}; choose one of "
                f"{SCALAR_QUANTITIES + TABLE_QUANTITIES}"
            )
        if len(self.axes) > 2:
            raise ConfigError("at most two sweep axes are supported")
        fields = [a.field for a in self.axes]
        if len(set(fields)) != len(fields):
            raise ConfigError("sweep axes must be disjoint fields")
        if "eta" in fields and self.eta_lock is None:
            raise ConfigError("an eta axis needs eta_lock: antisymmetric or symmetric")
        if self.eta_lock not in (None, "antisymmetric", "symmetric"):
            raise ConfigError("eta_lock must be antisymmetric or symmetric")
        if self.quantity == "pt_threshold" and "gamma" in fields:
            raise ConfigError("pt_threshold scans gamma internally; drop the gamma axis")


@dataclasses.dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    values: np.ndarray | None
    rows: tuple | None
    header: tuple
    warnings: tuple
    profiles: tuple | None = None


def _as_float(key, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
    return float(value)


def _as_int(key, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
    return value


def load_config(path_or_mapping) -> SweepConfig:
    """Parse and validate a flat YAML config (path, text stream, or dict)."""
    if isinstance(path_or_mapping, dict):
        raw = dict(path_or_mapping)
    else:
        with open(path_or_mapping, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
        if raw is None:
            raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat mapping of keys to values")

    allowed = set(_PARAM_KEYS) | set(_CONTROL_KEYS) | set(_AXIS_KEYS)
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "eta" in raw and ("eta_a" in raw or "eta_b" in raw):
        raise ConfigError("give either eta (with eta_lock) or eta_a/eta_b, not both")

    eta_lock = raw.get("eta_lock")
    kwargs = {}
    if "eta" in raw:
        if eta_lock not in ("antisymmetric", "symmetric"):
            raise ConfigError("eta needs eta_lock: antisymmetric or symmetric")
        eta = _as_float("eta", raw["eta"])
        kwargs["eta_a"] = eta
        kwargs["eta_b"] = -eta if eta_lock == "antisymmetric" else eta
    for key in ("j_amp", "eta_a", "eta_b", "delta", "t0", "gamma"):
        if key in raw:
            kwargs[key] = _as_float(key, raw[key])
    if "n_cells" in raw:
        kwargs["n_cells"] = _as_int("n_cells", raw["n_cells"])
    if "boundary" in raw:
        kwargs["boundary"] = raw["boundary"]
    needed = [k for k in ("j_amp", "eta_a", "eta_b", "delta") if k not in kwargs]
    if needed:
        raise ConfigError(f"missing required config keys: {', '.join(needed)}")
    params = LadderParams(**kwargs)

    axes = []
    for i in (1, 2):
        keys = [f"axis{i}_{part}" for part in ("field", "start", "stop", "num")]
        present = [k for k in keys if k in raw]
        if not present:
            continue
        missing = [k for k in keys if k not in raw]
        if missing:
            raise ConfigError(f"incomplete axis{i}: missing {', '.join(missing)}")
        axes.append(
            AxisSpec(
                field=str(raw[keys[0]]),
                start=_as_float(keys[1], raw[keys[1]]),
                stop=_as_float(keys[2], raw[keys[2]]),
                num=_as_int(keys[3], raw[keys[3]]),
            )
        )
    if "axis2_field" in raw and "axis1_field" not in raw:
        raise ConfigError("axis2 given without axis1")

    n_k = _as_int("n_k", raw["n_k"]) if "n_k" in raw else None
    n_phi = _as_int("n_phi", raw["n_phi"]) if "n_phi" in raw else None
    return SweepConfig(
        params=params,
        quantity=raw.get("quantity"),
        axes=tuple(axes),
        eta_lock=eta_lock,
        n_k=n_k,
        n_phi=n_phi,
    )


def apply_axis(params: LadderParams, field: str, value: float,
               eta_lock: str | None) -> LadderParams:
    if field == "eta":
        if eta_lock == "symmetric":
            return params.replace(eta_a=value, eta_b=value)
        return params.replace(eta_a=value, eta_b=-value)
    return params.replace(**{field: value})


def _scalar_value(quantity: str, params: LadderParams, cfg: SweepConfig,
                  warnings: list, tag: str) -> float:
    if quantity == "awn":
        res = awn(params, n_k=cfg.n_k or 512, n_phi=cfg.n_phi or 64)
        if not res.reliable:
            warnings.append(f"{tag}: winding average skipped too many singular slices")
        return res.value
    if quantity == "z2":
        return z2_invariant(params, n_k=cfg.n_k or 4096)
    if quantity == "ti":
        return total_imbalance(params)
    if quantity == "hybrid_winding":
        return hybrid_winding(params, n_k=cfg.n_k or 4096).w_plus
    if quantity == "pt_threshold":
        return pt_threshold_gamma(params)
    raise ConfigError(f"{quantity!r} is not a scalar quantity")


def spectrum_rows(params: LadderParams, prefix: tuple = ()) -> list:
    """Long-format spectrum rows: classification plus open-chain factor moduli."""
    report = classify_states(params)
    with_betas = params.boundary is Boundary.OPEN
    rows = []
    for i, st in enumerate(report.states):
        row = list(prefix) + [
            i,
            st.eigenvalue.real,
            st.eigenvalue.imag,
            st.label,
            st.ipr,
            st.imbalance,
        ]
        if with_betas:
            try:
                mods = np.sort(np.abs(beta_roots(params, st.eigenvalue).betas))
                row.extend(float(m) for m in mods)
            except LadderError:
                row.extend(float("nan") for _ in range(4))
        else:
            row.extend("" for _ in range(4))
        rows.append(tuple(row))
    return rows


def gbz_rows(params: LadderParams, prefix: tuple = ()) -> list:
    sample = gbz_from_obc(params)
    rows = []
    for i, (e, quartet, mid) in enumerate(
        zip(sample.energies, sample.quartets, sample.middle_moduli)
    ):
        mods = np.sort(np.abs(quartet.betas))
        rows.append(
            tuple(
                list(prefix)
                + [i, e.real, e.imag]
                + [float(m) for m in mods]
                + [float(mid)]
            )
        )
    return rows


def _select_mode_set(params: LadderParams):
    p = params
    if p.is_antisymmetric_legs and p.gamma > 0.0:
        return gamma_shifted_modes(p)
    if p.is_balanced:
        at_flat = abs(p.j_amp - p.t0) <= 1e-10 and (
            abs(p.delta - p.eta_a) <= 1e-10 or abs(p.delta + p.eta_a) <= 1e-10
        )
        if at_flat:
            return build_compact_modes(p)
        return build_zero_modes(p)
    if p.is_symmetric_legs and p.gamma == 0.0:
        return pseudo_inversion_zero_modes(p)
    raise ConfigError("no boundary-mode construction applies in this regime")


def mode_rows(params: LadderParams, prefix: tuple = ()) -> tuple:
    """Mode summary rows and per-cell profile rows for the applicable family."""
    mode_set = _select_mode_set(params)
    n = params.n_cells
    summary, profiles = [], []
    for i, mode in enumerate(mode_set.modes):
        summary.append(
            tuple(
                list(prefix)
                + [mode_set.kind, i, mode.eigenvalue.real, mode.eigenvalue.imag,
                   mode.residual]
            )
        )
        amp = mode.amplitudes
        for j in range(n):
            profiles.append(
                tuple(
                    list(prefix)
                    + [i, j + 1, amp[j].real, amp[j].imag,
                       amp[n + j].real, amp[n + j].imag]
                )
            )
    return summary, profiles


def run_sweep(config: SweepConfig, threads: int = 1) -> SweepResult:
    """Execute the configured grid; scalar quantities produce a value array,
    table quantities produce ordered long-format rows.

    A cell whose numerics fail contributes NaN (scalar) or no rows (table)
    plus a warning; the sweep itself always completes.
    """
    cfg = config
    if cfg.quantity is None:
        raise ConfigError("run_sweep needs a quantity")
    warnings: list = []
    axes_values = [a.values for a in cfg.axes]

    cells = []
    if len(cfg.axes) == 0:
        cells.append(((), cfg.params))
    elif len(cfg.axes) == 1:
        for v in axes_values[0]:
            cells.append(
                (
                    (float(v),),
                    apply_axis(cfg.params, cfg.axes[0].field, float(v), cfg.eta_lock),
                )
            )
    else:
        for v1 in axes_values[0]:
            p1 = apply_axis(cfg.params, cfg.axes[0].field, float(v1), cfg.eta_lock)
            for v2 in axes_values[1]:
                cells.append(
                    (
                        (float(v1), float(v2)),
                        apply_axis(p1, cfg.axes[1].field, float(v2), cfg.eta_lock),
                    )
                )

    scalar = cfg.quantity in SCALAR_QUANTITIES

    def worker(item):
        prefix, params = item
        tag = "cell " + ",".join(format_value(v) for v in prefix) if prefix else "point"
        local: list = []
        try:
            if scalar:
                out = _scalar_value(cfg.quantity, params, cfg, local, tag)
            elif cfg.quantity == "spectrum":
                out = spectrum_rows(params, prefix)
            elif cfg.quantity == "gbz":
                out = gbz_rows(params, prefix)
            else:
                out = mode_rows(params, prefix)
        except LadderError as exc:
            local.append(f"{tag}: {exc}")
            out = float("nan") if scalar else ([], []) if cfg.quantity == "zero_modes" else []
        return out, local

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(worker, cells))
    else:
        outputs = [worker(c) for c in cells]
    for _, local in outputs:
        warnings.extend(local)

    axis_headers = tuple(f"axis{i + 1}" for i in range(len(cfg.axes)))
    if scalar:
        flat = np.array([out for out, _ in outputs], dtype=float)
        if len(cfg.axes) == 2:
            values = flat.reshape(cfg.axes[0].num, cfg.axes[1].num)
        else:
            values = flat
        return SweepResult(
            config=cfg,
            values=values,
            rows=None,
            header=axis_headers + ("value",),
            warnings=tuple(warnings),
        )

    rows: list = []
    prof_rows: list = []
    for out, _ in outputs:
        if cfg.quantity == "zero_modes":
            summary, profiles = out
            rows.extend(summary)
            prof_rows.extend(profiles)
        else:
            rows.extend(out)
    if cfg.quantity == "spectrum":
        header = axis_headers + (
            "index", "re_E", "im_E", "class", "ipr", "imbalance",
            "abs_beta1", "abs_beta2", "abs_beta3", "abs_beta4",
        )
    elif cfg.quantity == "gbz":
        header = axis_headers + (
            "index", "re_E", "im_E",
            "abs_beta1", "abs_beta2", "abs_beta3", "abs_beta4", "middle_modulus",
        )
    else:
        header = axis_headers + ("kind", "index", "re_E", "im_E", "residual")
    return SweepResult(
        config=cfg,
        values=None,
        rows=tuple(rows),
        header=header,
        warnings=tuple(warnings),
        profiles=tuple(prof_rows) if cfg.quantity == "zero_modes" else None,
    )


def format_value(value) -> str:
    """Deterministic cell formatting: shortest round-trippable decimal."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if np.isnan(v):
        return "nan"
    return f"{v:.12g}"


def write_csv(path: str, header: tuple, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def phase_rows(result: SweepResult) -> list:
    """Flatten a scalar sweep into (axis..., value) rows, axis1-major."""
    cfg = result.config
    rows = []
    if len(cfg.axes) == 2:
        v1, v2 = cfg.axes[0].values, cfg.axes[1].values
        for i, a in enumerate(v1):
            for j, b in enumerate(v2):
                rows.append((float(a), float(b), float(result.values[i, j])))
    elif len(cfg.axes) == 1:
        for a, val in zip(cfg.axes[0].values, result.values):
            rows.append((float(a), float(val)))
    else:
        rows.append((float(result.values[0]),))
    return rows


def config_echo(cfg: SweepConfig) -> dict:
    p = cfg.params
    echo = {
        "params": {
            "j_amp": p.j_amp,
            "eta_a": p.eta_a,
            "eta_b": p.eta_b,
            "delta": p.delta,
            "t0": p.t0,
            "gamma": p.gamma,
            "n_cells": p.n_cells,
            "boundary": p.boundary.value,
        },
        "quantity": cfg.quantity,
        "axes": [
            {"field": a.field, "start": a.start, "stop": a.stop, "num": a.num}
            for a in cfg.axes
        ],
    }
    if cfg.eta_lock:
        echo["eta_lock"] = cfg.eta_lock
    if cfg.n_k:
        echo["n_k"] = cfg.n_k
    if cfg.n_phi:
        echo["n_phi"] = cfg.n_phi
    return echo


def write_metadata(path: str, payload: dict) -> None:
    import datetime

    body = dict(payload)
    body["created"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(body, fh, indent=2, sort_keys=True)
        fh.write("\n")


def output_paths(out_dir: str, stem: str) -> tuple:
    os.makedirs(out_dir, exist_ok=True)
    return (
        os.path.join(out_dir, f"{stem}.csv"),
        os.path.join(out_dir, f"{stem}_meta.json"),
    )
