"""Figure assembly from validated artifact tables.

Built on the object API (`matplotlib.figure.Figure`) so rendering needs no
backend selection and keeps no global state. Conventions across panels:
periodic-boundary bands are lines, open-chain eigenvalues are dots grouped
by localization class, decay-factor sets are dots against reference circles
or the unit-modulus line.
"""

from __future__ import annotations

import os

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Circle

from .errors import SchemaError
from .io import read_meta, read_table
from .specs import ROLE_COLUMNS, FigureSpec, file_roles

# stable colors for the localization classes of the state classifier
CLASS_COLORS = {
    "extended": "#7f7f7f",
    "skin_left": "#1f77b4",
    "skin_right": "#d62728",
    "scale_free": "#2ca02c",
    "edge": "#9467bd",
}
_FALLBACK_COLOR = "#bcbd22"
_BETA_COLORS = ("#aec7e8", "#98df8a", "#ff9896", "#c5b0d5")


def _class_color(label: str) -> str:
    return CLASS_COLORS.get(str(label), _FALLBACK_COLOR)


def _load(spec: FigureSpec):
    """Validate and parse every input of a spec.

    Returns (meta, tables) where tables is a list of (basename, role, Table)
    in catalog order.
    """
    meta_path = spec.input_files[0]
    meta = read_meta(meta_path, spec.recipe_name)
    roles = file_roles(spec.recipe_name)
    tables = []
    for path in spec.input_files[1:]:
        table = read_table(path)
        role = roles[os.path.basename(path)]
        table.require(ROLE_COLUMNS[role])
        tables.append((os.path.basename(path), role, table))
    return meta, tables


def _by_role(tables, role):
    return [(name, t) for name, r, t in tables if r == role]


def _no_data(fig: Figure, title: str) -> None:
    ax = fig.add_subplot(1, 1, 1)
    ax.set_title(title)
    ax.text(0.5, 0.5, "no data", ha="center", va="center",
            transform=ax.transAxes, fontsize=14, color="#888888")


def _obc_scatter(ax, table, marker="o", size=12, suffix=""):
    """Open-chain eigenvalues as dots, one group per localization class."""
    classes = table.col("class")
    re_e, im_e = table.col("re_E"), table.col("im_E")
    for label in sorted(set(classes)):
        mask = classes == label
        ax.scatter(re_e[mask], im_e[mask], s=size, marker=marker,
                   color=_class_color(label), label=f"{label}{suffix}",
                   zorder=3)


def _pbc_lines(ax, table):
    ax.plot(table.col("re_E_plus"), table.col("im_E_plus"),
            color="#444444", lw=1.0, label="band +")
    ax.plot(table.col("re_E_minus"), table.col("im_E_minus"),
            color="#444444", lw=1.0, ls="--", label="band -")


def _circle_panel(ax, gbz_table, reference_radii=()):
    """Decay-factor moduli placed on circles, angles spread by row order."""
    r = gbz_table.col("middle_modulus")
    m = len(r)
    theta = np.linspace(0.0, 2.0 * np.pi, m, endpoint=False)
    ax.scatter(r * np.cos(theta), r * np.sin(theta), s=10, color="#1f77b4",
               zorder=3, label="factor pair")
    ax.add_patch(Circle((0, 0), 1.0, fill=False, ls=":", color="#999999",
                        lw=1.0))
    for radius in reference_radii:
        ax.add_patch(Circle((0, 0), float(radius), fill=False, ls="-",
                            color="#d62728", lw=0.8))
    lim = max(1.05, float(np.max(r)) * 1.1 if m else 1.05)
    if reference_radii:
        lim = max(lim, 1.1 * max(float(x) for x in reference_radii))
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_xlabel("Re beta")
    ax.set_ylabel("Im beta")


def _profile_panel(ax, table, title=""):
    cell = table.col("cell")
    a2 = table.col("re_a") ** 2 + table.col("im_a") ** 2
    b2 = table.col("re_b") ** 2 + table.col("im_b") ** 2
    ax.plot(cell, table.col("mass"), color="#333333", lw=1.2, marker=".",
            ms=4, label="cell mass")
    ax.plot(cell, a2, color="#1f77b4", lw=0.8, ls="--", label="leg a")
    ax.plot(cell, b2, color="#d62728", lw=0.8, ls="--", label="leg b")
    ax.set_xlabel("cell")
    ax.set_ylabel("mass")
    if title:
        ax.set_title(title, fontsize=9)


def _obc_label_suffix(name: str, recipe: str) -> str:
    stem = name[: -len(".csv")] if name.endswith(".csv") else name
    tail = stem.removeprefix(f"{recipe}_obc").lstrip("_")
    return f" ({tail})" if tail else ""


# --- style renderers --------------------------------------------------------


def _render_spectrum_plane(fig, spec, meta, tables):
    gbz = _by_role(tables, "gbz")
    profiles = _by_role(tables, "profile")
    if gbz or profiles:
        grid = fig.add_gridspec(2, 2)
        ax_spec = fig.add_subplot(grid[0, 0])
        ax_gbz = fig.add_subplot(grid[0, 1])
        ax_profiles = [fig.add_subplot(grid[1, i]) for i in range(2)]
    else:
        ax_spec = fig.add_subplot(1, 1, 1)
        ax_gbz = None
        ax_profiles = []

    for name, table in _by_role(tables, "pbc"):
        _pbc_lines(ax_spec, table)
    markers = ("o", "s", "^", "D")
    for i, (name, table) in enumerate(_by_role(tables, "obc")):
        _obc_scatter(ax_spec, table, marker=markers[i % len(markers)],
                     size=14 - 3 * i,
                     suffix=_obc_label_suffix(name, spec.recipe_name))
    ax_spec.set_xlabel("Re E")
    ax_spec.set_ylabel("Im E")
    ax_spec.set_title("spectrum", fontsize=9)
    handles, labels = ax_spec.get_legend_handles_labels()
    if 0 < len(labels) <= 8:
        ax_spec.legend(fontsize=6, loc="best")

    if ax_gbz is not None and gbz:
        _circle_panel(ax_gbz, gbz[0][1],
                      reference_radii=meta.get("circle_radii", ()))
        ax_gbz.set_title("decay factors", fontsize=9)
    for ax, (name, table) in zip(ax_profiles, profiles):
        label = name[: -len(".csv")].rsplit("_", 1)[-1]
        _profile_panel(ax, table, title=f"anchor profile: {label}")
        ax.legend(fontsize=6, loc="best")


def _render_phase_raster(fig, spec, meta, tables):
    rasters = _by_role(tables, "raster")
    cuts = _by_role(tables, "scan")
    if cuts:
        grid = fig.add_gridspec(len(cuts), 2, width_ratios=(2.4, 1.0))
        ax_r = fig.add_subplot(grid[:, 0])
        cut_axes = [fig.add_subplot(grid[i, 1]) for i in range(len(cuts))]
    else:
        ax_r = fig.add_subplot(1, 1, 1)
        cut_axes = []

    name, table = rasters[0]
    a1, a2, value = table.col("axis1"), table.col("axis2"), table.col("value")
    x = np.unique(a1)
    y = np.unique(a2)
    grid_vals = np.full((len(x), len(y)), np.nan)
    grid_vals[np.searchsorted(x, a1), np.searchsorted(y, a2)] = value
    vmax = float(np.nanmax(np.abs(value))) if len(value) else 1.0
    mesh = ax_r.pcolormesh(x, y, grid_vals.T, shading="nearest",
                           cmap="coolwarm", vmin=-vmax, vmax=vmax)
    fig.colorbar(mesh, ax=ax_r, shrink=0.85)
    ax_r.set_xlabel("axis 1")
    ax_r.set_ylabel("axis 2")
    ax_r.set_title(name[: -len(".csv")], fontsize=9)

    for ax, (cut_name, cut) in zip(cut_axes, cuts):
        ax.plot(cut.col("axis1"), cut.col("value"), color="#1f77b4", lw=1.0)
        ax.axhline(0.0, color="#cccccc", lw=0.6, zorder=0)
        ax.set_title(cut_name[: -len(".csv")], fontsize=7)
        ax.tick_params(labelsize=6)


def _render_gbz_plane(fig, spec, meta, tables):
    axes = fig.subplots(1, 3)
    ax_spec, ax_mod, ax_circle = axes

    obc = _by_role(tables, "obc")
    if obc:
        _obc_scatter(ax_spec, obc[0][1])
        handles, labels = ax_spec.get_legend_handles_labels()
        if 0 < len(labels) <= 8:
            ax_spec.legend(fontsize=6, loc="best")
    ax_spec.set_xlabel("Re E")
    ax_spec.set_ylabel("Im E")
    ax_spec.set_title("open-chain spectrum", fontsize=9)

    name, gbz = _by_role(tables, "gbz")[0]
    re_e = gbz.col("re_E")
    for i, color in enumerate(_BETA_COLORS, start=1):
        ax_mod.scatter(re_e, gbz.col(f"abs_beta{i}"), s=6, color=color,
                       label=f"|beta{i}|")
    ax_mod.scatter(re_e, gbz.col("middle_modulus"), s=10, color="#000000",
                   label="middle pair")
    ax_mod.axhline(1.0, color="#888888", lw=0.8, ls=":")
    ax_mod.set_yscale("log")
    ax_mod.set_xlabel("Re E")
    ax_mod.set_ylabel("factor modulus")
    ax_mod.set_title("decay-factor moduli", fontsize=9)
    ax_mod.legend(fontsize=6, loc="best")

    _circle_panel(ax_circle, gbz)
    ax_circle.set_title("middle pair on the modulus circle", fontsize=9)


def _render_profile(fig, spec, meta, tables):
    profiles = _by_role(tables, "profile")
    axes = fig.subplots(1, max(1, len(profiles)), squeeze=False)[0]
    for ax, (name, table) in zip(axes, profiles):
        _profile_panel(ax, table, title=name[: -len(".csv")])
        ax.legend(fontsize=6, loc="best")


def _render_curve(fig, spec, meta, tables):
    roles = {r for _, r, _ in tables}
    if "bloch" in roles:
        _, table = _by_role(tables, "bloch")[0]
        ax_k, ax_loop = fig.subplots(1, 2)
        k = table.col("k")
        for col, color in (("re_h0", "#7f7f7f"), ("im_h0", "#bbbbbb"),
                           ("hx", "#1f77b4"), ("hy", "#d62728"),
                           ("hz", "#2ca02c")):
            ax_k.plot(k, table.col(col), lw=1.0, label=col)
        ax_k.set_xlabel("k")
        ax_k.legend(fontsize=6, loc="best")
        ax_k.set_title("cell-matrix components", fontsize=9)
        ax_loop.plot(table.col("hx"), table.col("hy"), color="#1f77b4", lw=1.0)
        ax_loop.scatter([0.0], [0.0], marker="+", color="#000000")
        ax_loop.set_aspect("equal")
        ax_loop.set_xlabel("hx")
        ax_loop.set_ylabel("hy")
        ax_loop.set_title("planar loop", fontsize=9)
        return
    if "vortices" in roles:
        _, table = _by_role(tables, "vortices")[0]
        ax = fig.add_subplot(1, 1, 1)
        k, phi, charge = table.col("k"), table.col("phi"), table.col("charge")
        for sign, color in ((1, "#d62728"), (-1, "#1f77b4")):
            mask = np.sign(charge) == sign
            ax.scatter(k[mask], phi[mask], s=60, marker="o", color=color,
                       label=f"charge {sign:+d}")
        for kk, pp, cc in zip(k, phi, charge):
            ax.annotate(f"{cc:+.0f}", (kk, pp), textcoords="offset points",
                        xytext=(6, 6), fontsize=7)
        ax.set_xlim(-np.pi, np.pi)
        ax.set_ylim(-np.pi, np.pi)
        ax.set_xlabel("k")
        ax.set_ylabel("phi")
        ax.legend(fontsize=6, loc="best")
        ax.set_title("band-touching vortices", fontsize=9)
        return
    if "migration" in roles:
        _, table = _by_role(tables, "migration")[0]
        ax = fig.add_subplot(1, 1, 1)
        n, targets = table.col("n_cells"), table.col("target")
        for label, color in zip(sorted(set(targets)),
                                ("#1f77b4", "#d62728", "#2ca02c")):
            mask = targets == label
            ax.plot(n[mask], table.col("m_n")[mask], marker="o", ms=4,
                    lw=1.0, color=color, label=f"target {label}")
            asym = table.col("m_asymptotic")[mask]
            if len(asym):
                ax.axhline(float(asym[0]), color=color, lw=0.8, ls=":")
        ax.set_xlabel("chain length")
        ax.set_ylabel("finite-size migration")
        ax.legend(fontsize=6, loc="best")
        return
    if "scan_spectra" in roles:
        ax_top, ax_bot = fig.subplots(2, 1, sharex=True)
        _, spectra = _by_role(tables, "scan_spectra")[0]
        classes = spectra.col("class")
        axis1, re_e = spectra.col("axis1"), spectra.col("re_E")
        for label in sorted(set(classes)):
            mask = classes == label
            ax_top.scatter(axis1[mask], re_e[mask], s=2,
                           color=_class_color(label), label=label)
        ax_top.set_ylabel("Re E")
        handles, labels = ax_top.get_legend_handles_labels()
        if 0 < len(labels) <= 8:
            ax_top.legend(fontsize=6, loc="best", markerscale=3)
        _, inv = _by_role(tables, "scan")[0]
        ax_bot.plot(inv.col("axis1"), inv.col("value"), color="#1f77b4",
                    lw=1.0)
        ax_bot.set_xlabel("axis 1")
        ax_bot.set_ylabel("invariant")
        return
    # plain scans: one panel per file
    scans = _by_role(tables, "scan")
    axes = fig.subplots(1, max(1, len(scans)), squeeze=False)[0]
    for ax, (name, table) in zip(axes, scans):
        ax.plot(table.col("axis1"), table.col("value"), color="#1f77b4",
                lw=1.0)
        ax.set_xlabel("axis 1")
        ax.set_ylabel("value")
        ax.set_title(name[: -len(".csv")], fontsize=9)


_RENDERERS = {
    "spectrum_plane": _render_spectrum_plane,
    "phase_raster": _render_phase_raster,
    "gbz_plane": _render_gbz_plane,
    "profile": _render_profile,
    "curve": _render_curve,
}

_FIGSIZE = {
    "spectrum_plane": (8.0, 6.0),
    "phase_raster": (8.0, 5.0),
    "gbz_plane": (10.0, 3.4),
    "profile": (8.0, 3.2),
    "curve": (7.0, 4.0),
}


def build_figure(spec: FigureSpec) -> Figure:
    """Validate the spec's inputs and assemble the figure in memory."""
    meta, tables = _load(spec)
    fig = Figure(figsize=_FIGSIZE[spec.style], layout="constrained")
    fig.suptitle(spec.recipe_name, fontsize=11)
    if sum(len(t) for _, _, t in tables) == 0:
        _no_data(fig, spec.recipe_name)
        return fig
    _RENDERERS[spec.style](fig, spec, meta, tables)
    return fig


def render(spec: FigureSpec, out_dir: str, fmt: str = "svg") -> str:
    """Render one figure to `<out_dir>/<recipe>.<fmt>` and return the path.

    Inputs are never written to; re-rendering replaces the output with an
    identical file (SVG ids are salted with the recipe name and timestamps
    are stripped, so repeated renders are byte-identical).
    """
    if fmt not in ("svg", "png"):
        raise SchemaError(f"unsupported format {fmt!r}; use svg or png")
    fig = build_figure(spec)
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, f"{spec.recipe_name}.{fmt}")
    metadata = {"Date": None} if fmt == "svg" else {"Software": None}
    with matplotlib.rc_context({"svg.hashsalt": spec.recipe_name}):
        fig.savefig(out_path, format=fmt, metadata=metadata, dpi=150)
    return out_path
