"""Catalog of renderable figures.

Each bundled data recipe of the ladder CLI maps to exactly one FigureSpec.
The catalog pins the artifact file names a recipe writes and the role each
file plays in the figure; roles drive both schema validation and panel
layout. The JSON metadata sidecar is always the first input file: it is the
manifest that ties a data directory back to its recipe.
"""

from __future__ import annotations

import dataclasses
import os

from .errors import UnknownRecipeError

STYLES = ("spectrum_plane", "phase_raster", "gbz_plane", "profile", "curve")

# role -> columns the CSV must carry (validated against the header)
ROLE_COLUMNS = {
    "bloch": ("k", "re_h0", "im_h0", "hx", "hy", "hz"),
    "raster": ("axis1", "axis2", "value"),
    "scan": ("axis1", "value"),
    "vortices": ("k", "phi", "charge", "raw_winding"),
    "obc": ("index", "re_E", "im_E", "class", "ipr", "imbalance",
            "abs_beta1", "abs_beta2", "abs_beta3", "abs_beta4"),
    "pbc": ("k", "re_E_plus", "im_E_plus", "re_E_minus", "im_E_minus"),
    "migration": ("n_cells", "target", "re_target", "im_target",
                  "m_n", "m_asymptotic"),
    "scan_spectra": ("axis1", "index", "re_E", "im_E", "class", "ipr",
                     "imbalance", "abs_beta1", "abs_beta2", "abs_beta3",
                     "abs_beta4"),
    "gbz": ("index", "re_E", "im_E", "abs_beta1", "abs_beta2", "abs_beta3",
            "abs_beta4", "middle_modulus"),
    "profile": ("cell", "re_a", "im_a", "re_b", "im_b", "mass"),
}


@dataclasses.dataclass(frozen=True)
class FigureSpec:
    recipe_name: str
    input_files: tuple
    style: str


# recipe -> (style, ((csv basename, role), ...)); the meta sidecar is implied
_CATALOG = {
    "fig1b": ("curve", (("fig1b_bloch.csv", "bloch"),)),
    "fig2": ("phase_raster", (
        ("fig2_awn.csv", "raster"),
        ("fig2_cut_eta_d03.csv", "scan"),
        ("fig2_cut_eta_d06.csv", "scan"),
        ("fig2_cut_delta_j03.csv", "scan"),
        ("fig2_cut_delta_j06.csv", "scan"),
    )),
    "fig3": ("curve", (("fig3_vortices.csv", "vortices"),)),
    "fig4a": ("spectrum_plane", (
        ("fig4a_obc.csv", "obc"), ("fig4a_pbc.csv", "pbc"),
    )),
    "fig4b": ("spectrum_plane", (
        ("fig4b_obc_n8.csv", "obc"),
        ("fig4b_obc_n68.csv", "obc"),
        ("fig4b_obc_n568.csv", "obc"),
        ("fig4b_pbc.csv", "pbc"),
    )),
    "fig4c": ("spectrum_plane", (
        ("fig4c_obc.csv", "obc"), ("fig4c_pbc.csv", "pbc"),
    )),
    "fig5a": ("curve", (("fig5a_migration.csv", "migration"),)),
    "fig5b": ("curve", (("fig5b_ti.csv", "scan"),)),
    "fig5c": ("curve", (("fig5c_ti.csv", "scan"),)),
    "fig6a": ("phase_raster", (("fig6a_z2.csv", "raster"),)),
    "fig6b": ("spectrum_plane", (
        ("fig6b_obc.csv", "obc"), ("fig6b_pbc.csv", "pbc"),
    )),
    "fig6c": ("spectrum_plane", (
        ("fig6c_obc.csv", "obc"), ("fig6c_pbc.csv", "pbc"),
    )),
    "fig6d": ("curve", (
        ("fig6d_spectra.csv", "scan_spectra"),
        ("fig6d_invariant.csv", "scan"),
    )),
    "fig7a": ("gbz_plane", (
        ("fig7a_gbz.csv", "gbz"), ("fig7a_obc.csv", "obc"),
    )),
    "fig7b": ("gbz_plane", (
        ("fig7b_gbz.csv", "gbz"), ("fig7b_obc.csv", "obc"),
    )),
    "fig8a": ("spectrum_plane", (
        ("fig8a_obc.csv", "obc"),
        ("fig8a_pbc.csv", "pbc"),
        ("fig8a_gbz.csv", "gbz"),
        ("fig8a_profile_plus.csv", "profile"),
        ("fig8a_profile_minus.csv", "profile"),
    )),
    "fig8b": ("spectrum_plane", (
        ("fig8b_obc.csv", "obc"),
        ("fig8b_pbc.csv", "pbc"),
        ("fig8b_gbz.csv", "gbz"),
        ("fig8b_profile_plus.csv", "profile"),
        ("fig8b_profile_minus.csv", "profile"),
    )),
}


def catalog() -> tuple:
    """All (recipe_name, style) pairs, in registration order."""
    return tuple((name, style) for name, (style, _) in _CATALOG.items())


def file_roles(recipe_name: str) -> dict:
    """Basename -> role mapping for one recipe's CSV inputs."""
    if recipe_name not in _CATALOG:
        known = ", ".join(sorted(_CATALOG))
        raise UnknownRecipeError(
            f"unknown recipe {recipe_name!r}; known recipes: {known}"
        )
    return dict(_CATALOG[recipe_name][1])


def spec_for(recipe_name: str, data_dir: str) -> FigureSpec:
    """Resolve the catalog entry against a data directory.

    The first input file is always the recipe's JSON metadata sidecar.
    """
    if recipe_name not in _CATALOG:
        known = ", ".join(sorted(_CATALOG))
        raise UnknownRecipeError(
            f"unknown recipe {recipe_name!r}; known recipes: {known}"
        )
    style, files = _CATALOG[recipe_name]
    paths = [os.path.join(data_dir, f"{recipe_name}_meta.json")]
    paths.extend(os.path.join(data_dir, name) for name, _ in files)
    return FigureSpec(recipe_name=recipe_name, input_files=tuple(paths),
                      style=style)
