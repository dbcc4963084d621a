"""State-resolved diagnostics: participation ratios, left-right weight
imbalance, symmetry residuals of the assembled chain, and a coarse
classification of every eigenstate by localization character."""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import ConfigError, NumericsError
from .model import LadderParams, build_realspace, symmetry_operator
from .nonbloch import sf_classify

__all__ = [
    "StateDiagnostics",
    "LocalizationReport",
    "SymmetryReport",
    "ipr",
    "ipr_closed_form",
    "unidirectional_chain",
    "unidirectional_modes",
    "half_masses",
    "state_imbalance",
    "total_imbalance",
    "fit_cell_decay",
    "classify_states",
    "symmetry_report",
]


@dataclasses.dataclass(frozen=True)
class StateDiagnostics:
    eigenvalue: complex
    ipr: float
    imbalance: float
    label: str
    margin: float


@dataclasses.dataclass(frozen=True)
class LocalizationReport:
    states: tuple
    total_imbalance: float


@dataclasses.dataclass(frozen=True)
class SymmetryReport:
    """Relative residuals of the candidate symmetries on the assembled chain.

    Each entry is || transformed - target || / || H ||, so zero means the
    symmetry holds exactly at these parameters.
    """

    parity: float
    time_reversal: float
    parity_time: float
    sublattice: float
    pseudo_inversion: float
    hidden_chiral: float


def ipr(state: np.ndarray) -> float:
    """Inverse participation ratio, normalization independent."""
    w = np.abs(np.asarray(state, dtype=complex)) ** 2
    total = w.sum()
    if total == 0.0:
        raise NumericsError("ipr of a null vector")
    return float((w**2).sum() / total**2)


def ipr_closed_form(zeta: float, n: int) -> float:
    """Participation ratio of the twisted-ring skin modes at link scale zeta.

    Every mode of the ring shares the same value; zeta = 1 gives the uniform
    1/n and zeta = 0 the fully trapped limit 1.
    """
    if zeta < 0:
        raise ConfigError("link scale must be non-negative")
    if n < 1:
        raise ConfigError("need at least one site")
    if zeta == 0.0:
        return 1.0
    if abs(zeta - 1.0) < 1e-14:
        return 1.0 / n
    z2 = zeta**2
    zn = zeta ** (2.0 / n)
    return float((z2 + 1.0) * (zn - 1.0) / ((z2 - 1.0) * (zn + 1.0)))


def unidirectional_chain(zeta: float, n: int) -> np.ndarray:
    """One-way ring: unit hops forward, a single closing link scaled by zeta."""
    if n < 2:
        raise ConfigError("need at least two sites")
    h = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        h[j, j + 1] = 1.0
    h[n - 1, 0] = zeta
    return h


def unidirectional_modes(zeta: float, n: int) -> np.ndarray:
    """Columns are the exact ring modes: a common geometric envelope times
    the n twisted phase patterns."""
    if zeta <= 0:
        raise ConfigError("closed forms need a positive link scale")
    j = np.arange(n)
    envelope = zeta ** (j / n)
    modes = np.empty((n, n), dtype=complex)
    for m in range(n):
        modes[:, m] = envelope * np.exp(1j * 2.0 * np.pi * m * j / n)
        modes[:, m] /= np.linalg.norm(modes[:, m])
    return modes


def half_masses(state: np.ndarray, n_cells: int) -> tuple:
    """Left and right half weights of a ladder state, leg-resolved.

    Cells 1..floor(N/2) count as left and ceil(N/2)+1..N as right; the middle
    cell of an odd chain belongs to neither. Returns ((aL, aR), (bL, bR)).
    """
    state = np.asarray(state)
    if state.shape[0] != 2 * n_cells:
        raise ConfigError("state length does not match 2 * n_cells")
    lo = n_cells // 2
    hi = (n_cells + 1) // 2
    out = []
    for leg in (state[:n_cells], state[n_cells:]):
        w = np.abs(leg) ** 2
        out.append((float(w[:lo].sum()), float(w[hi:].sum())))
    return tuple(out)


def state_imbalance(state: np.ndarray, n_cells: int) -> float:
    """Leg-summed |left - right| weight asymmetry, normalized to unit mass."""
    (al, ar), (bl, br) = half_masses(state, n_cells)
    total = float(np.sum(np.abs(state) ** 2))
    if total == 0.0:
        raise NumericsError("imbalance of a null vector")
    return (abs(al - ar) + abs(bl - br)) / total


def total_imbalance(params: LadderParams, eigenvectors: np.ndarray | None = None) -> float:
    """Sum of the per-state weight asymmetries over the full spectrum."""
    if eigenvectors is None:
        h = build_realspace(params)
        _, eigenvectors = np.linalg.eig(h)
    return float(
        sum(state_imbalance(eigenvectors[:, i], params.n_cells)
            for i in range(eigenvectors.shape[1]))
    )


def fit_cell_decay(amplitudes: np.ndarray, n_cells: int, fraction: float = 0.6) -> float:
    """Log-linear slope of the cell mass profile across the chain interior.

    Fits ln(|a_j|^2 + |b_j|^2) against the cell index over the central
    `fraction` of the chain, skipping cells that carry no weight (staggered
    profiles occupy every other cell). The slope is per cell index, so a
    profile stepping by z per occupied-cell pair fits ln|z|."""
    amplitudes = np.asarray(amplitudes)
    if amplitudes.shape[0] != 2 * n_cells:
        raise ConfigError("amplitude length does not match 2 * n_cells")
    mass = np.abs(amplitudes[:n_cells]) ** 2 + np.abs(amplitudes[n_cells:]) ** 2
    peak = mass.max()
    if peak == 0.0:
        raise NumericsError("decay fit of a null profile")
    lo = int(np.ceil(n_cells * (1.0 - fraction) / 2.0))
    hi = n_cells - lo
    idx = np.arange(1, n_cells + 1)
    keep = (idx >= lo + 1) & (idx <= hi) & (mass > 1e-14 * peak)
    if keep.sum() < 2:
        raise NumericsError("not enough occupied interior cells for a decay fit")
    slope = np.polyfit(idx[keep], np.log(mass[keep]), 1)[0]
    return float(slope)


def classify_states(params: LadderParams,
                    sf_tol: float = 1e-3,
                    imbalance_cut: float = 0.5) -> LocalizationReport:
    """Label every eigenstate of the chain by its localization character.

    Labels: "compact" (two or fewer occupied cells), "edge" (strongly
    one-sided with near-vanishing energy in a regime without bulk skin
    accumulation), "skin_left"/"skin_right", "scale_free", "extended". The
    margin records the distance of the deciding quantity from its cut, and
    the report also carries the spectrum-summed imbalance.
    """
    p = params
    h = build_realspace(p)
    eigenvalues, vectors = np.linalg.eig(h)
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    eigenvalues, vectors = eigenvalues[order], vectors[:, order]
    scale = max(np.max(np.abs(eigenvalues)), 1e-12)
    n = p.n_cells
    states = []
    total = 0.0
    for i in range(eigenvalues.shape[0]):
        vec = vectors[:, i]
        energy = complex(eigenvalues[i])
        imb = state_imbalance(vec, n)
        total += imb
        mass = np.abs(vec[:n]) ** 2 + np.abs(vec[n:]) ** 2
        occupied = int((mass > 1e-10).sum())
        if occupied <= 2:
            states.append(StateDiagnostics(energy, ipr(vec), imb, "compact",
                                           float(2 - occupied + 1)))
            continue
        label = None
        margin = 0.0
        if p.is_balanced:
            if abs(energy) < 1e-6 * scale and imb > imbalance_cut:
                label, margin = "edge", imb - imbalance_cut
            else:
                try:
                    verdict = sf_classify(p, energy, tol=sf_tol)
                    cut = 1.0 - verdict.tol
                    if verdict.scale_free:
                        label, margin = "scale_free", cut - verdict.modulus
                    else:
                        label, margin = "extended", verdict.modulus - cut
                except (NumericsError, ConfigError, ZeroDivisionError):
                    pass
        if label is None:
            if imb > imbalance_cut:
                (al, ar), (bl, br) = half_masses(vec, n)
                side = "skin_left" if (al + bl) >= (ar + br) else "skin_right"
                label, margin = side, imb - imbalance_cut
            else:
                label, margin = "extended", imbalance_cut - imb
        states.append(StateDiagnostics(energy, ipr(vec), imb, label, float(margin)))
    return LocalizationReport(states=tuple(states), total_imbalance=float(total))


def symmetry_report(params: LadderParams) -> SymmetryReport:
    """Evaluate the six candidate symmetries on the assembled chain."""
    p = params
    h = build_realspace(p)
    norm = np.linalg.norm(h)
    n = p.n_cells

    par = symmetry_operator("parity", n)
    sub = symmetry_operator("sublattice", n)
    chi = symmetry_operator("hidden_chiral", n)

    parity = np.linalg.norm(par @ h @ par - h) / norm
    time_reversal = np.linalg.norm(h.conj() - h) / norm
    parity_time = np.linalg.norm(par @ h.conj() @ par - h) / norm
    sublattice = np.linalg.norm(sub @ h @ sub - h) / norm
    pseudo_inv = np.linalg.norm(par @ h @ par - h.conj().T) / norm
    # chi squares to -1, so its inverse is -chi
    hidden = np.linalg.norm(chi @ h @ (-chi) + h) / norm
    return SymmetryReport(
        parity=float(parity),
        time_reversal=float(time_reversal),
        parity_time=float(parity_time),
        sublattice=float(sublattice),
        pseudo_inversion=float(pseudo_inv),
        hidden_chiral=float(hidden),
    )
