"""Spectra of the ladder: momentum-space dispersion, full non-Hermitian
diagonalization with biorthogonal eigenvector pairs, exceptional-point
geometry, and the closed-form open-chain results available in the
equal-leg regime."""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg

from .errors import ConfigError, NumericsError
from .model import Boundary, LadderParams, build_bloch, build_realspace

__all__ = [
    "ComplexSpectrum",
    "EpSet",
    "ExactObcSpectrum",
    "SimilarityReport",
    "RungReference",
    "k_grid",
    "dispersion",
    "diagonalize",
    "exceptional_points",
    "pt_threshold_gamma",
    "pt_threshold_closed_form",
    "band_overlap",
    "exact_obc_sublattice",
    "sublattice_block_similarity",
    "rung_reference_spectrum",
]


@dataclasses.dataclass(frozen=True)
class ComplexSpectrum:
    """Sorted eigenvalues with biorthonormalized left/right eigenvectors.

    Columns of right_vectors and left_vectors correspond to eigenvalues[i];
    after rescaling, left_vectors.conj().T @ right_vectors = identity up to
    biorth_residual. Pairs whose left-right overlap fell below 1e-6 (near a
    spectral degeneracy) are listed in flagged_pairs and left unit-normalized
    instead of rescaled.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    biorth_residual: float
    flagged_pairs: tuple = ()


@dataclasses.dataclass(frozen=True)
class EpSet:
    """Exceptional momenta of the balanced ladder and the cos^2 parameter xi."""

    xi: float
    momenta: np.ndarray


@dataclasses.dataclass(frozen=True)
class ExactObcSpectrum:
    """Closed-form open-chain spectrum in the equal-leg regime, two families."""

    plus: np.ndarray
    minus: np.ndarray
    d_plus: float
    d_minus: float


@dataclasses.dataclass(frozen=True)
class SimilarityReport:
    """Diagonal scaling of one leg-block family onto a symmetric tridiagonal."""

    family: int
    scaling: np.ndarray
    transformed: np.ndarray
    target: np.ndarray
    max_deviation: float


@dataclasses.dataclass(frozen=True)
class RungReference:
    """Open-chain spectrum of the rung-coupled reference ladder."""

    plus: np.ndarray
    minus: np.ndarray
    gbz_radius: float


def k_grid(n_cells: int) -> np.ndarray:
    """Periodic-chain momenta k_m = 2 pi m / N, m = 0..N-1."""
    return 2.0 * np.pi * np.arange(n_cells) / n_cells


def dispersion(params: LadderParams, k) -> tuple:
    """Bloch bands E_pm(k) = h0 +- sqrt(hx^2 + hy^2 - hz^2), principal branch.

    Accepts a scalar momentum or an array; returns (E_plus, E_minus) with the
    same shape. Valid for every parameter regime, since the cell matrix is
    always two-band.
    """
    p = params
    k = np.asarray(k, dtype=float)
    c, s = np.cos(k), np.sin(k)
    h0 = 2.0 * p.j_amp * c + 1j * p.j_amp * (p.eta_a + p.eta_b) * s
    hx = 2.0 * p.t0 * c
    hy = -2.0 * p.t0 * p.delta * s
    hz = p.j_amp * (p.eta_a - p.eta_b) * s + p.gamma
    root = np.sqrt((hx**2 + hy**2 - hz**2).astype(complex))
    return h0 + root, h0 - root


def diagonalize(subject) -> ComplexSpectrum:
    """Full diagonalization with left eigenvectors.

    Accepts a LadderParams (the real-space matrix is built first) or an
    explicit square complex matrix. Eigenvalues are sorted lexicographically
    by (Re, Im). Left vectors are solved blockwise inside near-degenerate
    clusters so that <L_i|R_j> = delta_ij; a cluster whose overlap block is
    singular has no biorthogonal frame at all and is flagged instead.
    """
    if isinstance(subject, LadderParams):
        h = build_realspace(subject)
    else:
        h = np.asarray(subject, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ConfigError("diagonalize needs a square matrix or LadderParams")
    w, vl, vr = scipy.linalg.eig(h, left=True, right=True)
    order = np.lexsort((w.imag, w.real))
    w, vl, vr = w[order], vl[:, order], vr[:, order]

    # repair left frames inside near-degenerate clusters: solving the overlap
    # block handles both the pairing and the in-block normalization, and a
    # singular block is exactly the defective (exceptional) case
    dim = len(w)
    defective = []
    i = 0
    while i < dim:
        j = i + 1
        while j < dim and abs(w[j] - w[i]) < 1e-8:
            j += 1
        if j - i > 1:
            block = vl[:, i:j].conj().T @ vr[:, i:j]
            singular = np.linalg.svd(block, compute_uv=False)
            if singular[-1] < 1e-10 * max(1.0, singular[0]):
                defective.extend(range(i, j))
            else:
                vl[:, i:j] = vl[:, i:j] @ np.linalg.inv(block).conj().T
        i = j

    overlaps = np.einsum("ij,ij->j", vl.conj(), vr)
    flagged = tuple(sorted(set(defective)
                           | set(int(t) for t in np.nonzero(np.abs(overlaps) < 1e-6)[0])))
    scale = np.where(np.abs(overlaps) < 1e-6, 1.0, overlaps.conj())
    vl = vl / scale
    gram = vl.conj().T @ vr
    residual = float(np.max(np.abs(gram - np.eye(dim))))
    return ComplexSpectrum(
        eigenvalues=w,
        right_vectors=vr,
        left_vectors=vl,
        biorth_residual=residual,
        flagged_pairs=flagged,
    )


def _require_balanced(params: LadderParams, what: str) -> None:
    if not params.is_balanced:
        raise ConfigError(
            f"{what} requires opposite leg asymmetries and gamma = 0 "
            f"(eta_a={params.eta_a}, eta_b={params.eta_b}, gamma={params.gamma})"
        )


def exceptional_points(params: LadderParams) -> EpSet:
    """Momenta where the balanced ladder's band root vanishes.

    The root vanishes where cos^2 k equals
        xi = (J^2 eta^2 - t0^2 delta^2) / (t0^2 (1 - delta^2) + J^2 eta^2).
    Negative xi means no exceptional momenta; xi = 0 (the threshold line
    |J eta| = |t0 delta|) leaves the degenerate pair at +-pi/2.
    """
    _require_balanced(params, "exceptional_points")
    p = params
    num = p.j_amp**2 * p.eta_a**2 - p.t0**2 * p.delta**2
    den = p.t0**2 * (1.0 - p.delta**2) + p.j_amp**2 * p.eta_a**2
    if den <= 0.0:
        raise NumericsError("degenerate band geometry: xi denominator vanished")
    xi = num / den
    if abs(abs(p.j_amp * p.eta_a) - abs(p.t0 * p.delta)) <= 1e-12:
        return EpSet(xi=xi, momenta=np.array([-np.pi / 2, np.pi / 2]))
    if xi < 0.0:
        return EpSet(xi=xi, momenta=np.array([]))
    k1 = float(np.arccos(np.sqrt(xi)))
    k2 = np.pi - k1
    return EpSet(xi=xi, momenta=np.array([-k2, -k1, k1, k2]))


def pt_threshold_closed_form(params: LadderParams) -> float:
    """Threshold gain-loss strength 2|t0 delta| - 2|J eta|, clipped at zero."""
    g = 2.0 * abs(params.t0 * params.delta) - 2.0 * abs(params.j_amp * params.eta_a)
    return max(0.0, g)


def pt_threshold_gamma(
    params: LadderParams,
    gamma_range: tuple = (0.0, 4.0),
    im_tol: float = 1e-8,
    gamma_tol: float = 1e-6,
    n_k: int = 2048,
) -> float:
    """Smallest gamma where the periodic spectrum leaves the real axis.

    Bisection on max_k |Im E(k)| over a dense momentum grid. The gamma field
    of `params` is ignored; the scan starts at gamma_range[0]. Returns 0.0
    when the spectrum is already complex without gain and loss.
    """
    if abs(params.eta_a + params.eta_b) > 1e-12:
        raise ConfigError("pt_threshold_gamma requires opposite leg asymmetries")
    ks = -np.pi + (np.arange(n_k) + 0.5) * (2.0 * np.pi / n_k)

    def max_im(g: float) -> float:
        ep, em = dispersion(params.replace(gamma=g), ks)
        return float(max(np.max(np.abs(ep.imag)), np.max(np.abs(em.imag))))

    lo, hi = float(gamma_range[0]), float(gamma_range[1])
    if max_im(lo) > im_tol:
        return 0.0
    if max_im(hi) <= im_tol:
        raise NumericsError(
            f"spectrum stays real on gamma in [{lo}, {hi}]; widen the range"
        )
    while hi - lo > gamma_tol:
        mid = 0.5 * (lo + hi)
        if max_im(mid) > im_tol:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def band_overlap(params: LadderParams, n_k: int = 2001) -> bool:
    """Whether the two real band intervals share energies.

    With exceptional momenta present the comparison uses the inner lower-band
    arc [0, k1] against the outer upper-band arc [k2, pi]; without them the
    full-range real intervals of both bands are compared.
    """
    eps = exceptional_points(params)
    if len(eps.momenta) == 4:
        k1 = eps.momenta[2]
        k2 = eps.momenta[3]
        ks_lo = np.linspace(0.0, k1, n_k)
        ks_hi = np.linspace(k2, np.pi, n_k)
        _, e_m = dispersion(params, ks_lo)
        e_p, _ = dispersion(params, ks_hi)
    else:
        ks = np.linspace(0.0, np.pi, n_k)
        e_p, e_m = dispersion(params, ks)
    lo_i = (float(np.min(e_m.real)), float(np.max(e_m.real)))
    hi_i = (float(np.min(e_p.real)), float(np.max(e_p.real)))
    return max(lo_i[0], hi_i[0]) <= min(lo_i[1], hi_i[1])


def _require_equal_cross(params: LadderParams, what: str) -> None:
    if not params.is_equal_cross:
        raise ConfigError(
            f"{what} requires equal leg asymmetries, delta = 0, gamma = 0"
        )


def _family_d(params: LadderParams, family: int) -> float:
    j, eta, t0 = params.j_amp, params.eta_a, params.t0
    return (j + family * t0) ** 2 - (j * eta) ** 2


def exact_obc_sublattice(params: LadderParams) -> ExactObcSpectrum:
    """Closed-form open-chain spectrum for equal legs and delta = 0.

    Each family is E_{s,j} = 2 sqrt(d_s) cos(j pi / (N+1)), j = 1..N, with
    d_s = (J + s t0)^2 - (J eta)^2 and s = +-1. Negative d_s gives a purely
    imaginary family; the principal root is used.
    """
    _require_equal_cross(params, "exact_obc_sublattice")
    n = params.n_cells
    js = np.arange(1, n + 1)
    base = np.cos(js * np.pi / (n + 1))
    dp, dm = _family_d(params, +1), _family_d(params, -1)
    plus = 2.0 * np.sqrt(complex(dp)) * base
    minus = 2.0 * np.sqrt(complex(dm)) * base
    return ExactObcSpectrum(plus=plus, minus=minus, d_plus=dp, d_minus=dm)


def sublattice_block_similarity(params: LadderParams, family: int = 1) -> SimilarityReport:
    """Diagonal scaling taking one decoupled leg-block family to symmetric form.

    In the equal-leg regime the open-chain matrix decouples (after the leg
    rotation) into the two N x N tridiagonal blocks with hopping pairs
    J(1 +- eta) +- t0. Scaling by powers of r = (J + s t0 + J eta)/(J + s t0 - J eta)
    symmetrizes the block onto off-diagonal entries sqrt(d_s) exactly; when
    both hopping amplitudes are negative an alternating sign is folded into
    the scaling so the literal sqrt(d_s) form is still reproduced. Requires
    r > 0: with opposite-sign amplitudes no real diagonal scaling exists.
    """
    _require_equal_cross(params, "sublattice_block_similarity")
    if family not in (1, -1):
        raise ConfigError("family must be +1 or -1")
    p = params
    n = p.n_cells
    upper = p.j_amp * (1.0 + p.eta_a) + family * p.t0
    lower = p.j_amp * (1.0 - p.eta_a) + family * p.t0
    if upper == 0.0 or lower == 0.0 or (upper / lower) <= 0.0:
        raise NumericsError(
            "no real diagonal scaling: the two hopping amplitudes of the "
            f"family {family:+d} block have ratio {upper}/{lower}"
        )
    r = upper / lower
    ns = np.arange(1, n + 1)
    scaling = r ** ((2.0 * ns - 1.0 - n) / 4.0)
    if upper < 0.0:
        scaling = scaling * (-1.0) ** ns
    block = np.zeros((n, n))
    idx = np.arange(n - 1)
    block[idx, idx + 1] = upper
    block[idx + 1, idx] = lower
    transformed = (scaling[:, None] * block) / scaling[None, :]
    d = _family_d(p, family)
    target = np.zeros((n, n))
    target[idx, idx + 1] = np.sqrt(d)
    target[idx + 1, idx] = np.sqrt(d)
    dev = float(np.max(np.abs(transformed - target)))
    return SimilarityReport(
        family=family,
        scaling=scaling,
        transformed=transformed,
        target=target,
        max_deviation=dev,
    )


def rung_reference_spectrum(params: LadderParams) -> RungReference:
    """Open-chain spectrum of the ladder with on-rung coupling instead of
    crossed diagonal bonds: E_{s,j} = 2 J sqrt(1 - eta^2) cos(j pi/(N+1)) + s t0.

    Its non-Bloch zone is a single circle of radius sqrt((1-eta)/(1+eta)),
    offered for side-by-side comparisons with the crossed-bond ladder.
    """
    eta = params.eta
    if abs(eta) >= 1.0:
        raise NumericsError("rung reference needs |eta| < 1")
    n = params.n_cells
    js = np.arange(1, n + 1)
    base = 2.0 * params.j_amp * np.sqrt(1.0 - eta**2) * np.cos(js * np.pi / (n + 1))
    return RungReference(
        plus=base + params.t0,
        minus=base - params.t0,
        gbz_radius=float(np.sqrt((1.0 - eta) / (1.0 + eta))),
    )
