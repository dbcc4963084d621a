"""Winding diagnostics on the synthetic two-parameter torus, the averaged
winding number, point-degeneracy charges, the sign-of-determinant invariant,
and the composite band winding used for the equal-leg open chain."""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import ConfigError, NumericsError
from .model import LadderParams
from .spectra import exceptional_points

__all__ = [
    "WindingResult",
    "VortexCharge",
    "HybridWinding",
    "winding_phi",
    "awn",
    "vortex_charge",
    "diabolic_points",
    "z2_invariant",
    "z2_closed_form",
    "hybrid_winding",
]


@dataclasses.dataclass(frozen=True)
class WindingResult:
    """A winding value together with the grid it was computed on.

    For averaged windings, singular_slices lists the fixed-coordinate values
    whose slice passed within the gap tolerance of a degeneracy and was
    excluded from the mean; more than 1% of excluded slices clears `reliable`.
    """

    value: float
    n_k: int
    n_phi: int = 1
    singular_slices: tuple = ()
    reliable: bool = True


@dataclasses.dataclass(frozen=True)
class VortexCharge:
    center: tuple
    radius: float
    charge: int
    raw: float


@dataclasses.dataclass(frozen=True)
class HybridWinding:
    """Windings of the two composite band loops around the open-chain spectrum."""

    w_plus: int
    w_minus: int
    raw_plus: float
    raw_minus: float
    reference: complex
    perturbed: bool


def _planar_field(params: LadderParams, k: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Complex field (hx - hz cos phi) + i (hy - hz sin phi) on a (phi, k) grid."""
    p = params
    hx = 2.0 * p.t0 * np.cos(k)
    hy = -2.0 * p.t0 * p.delta * np.sin(k)
    hz = p.j_amp * (p.eta_a - p.eta_b) * np.sin(k) + p.gamma
    return (hx + 1j * hy)[None, :] - hz[None, :] * np.exp(1j * phi)[:, None]


def _loop_winding(points: np.ndarray) -> float:
    """Accumulated phase of a closed complex loop, in units of 2 pi."""
    return float(np.sum(np.angle(np.roll(points, -1) / points)) / (2.0 * np.pi))


def winding_phi(
    params: LadderParams, phi: float, n_k: int = 2048, singular_tol: float = 1e-8
) -> WindingResult:
    """Winding of the planar field along the momentum loop at fixed phi.

    Returns NaN with the slice marked singular when the field passes within
    singular_tol of zero, where the winding is undefined.
    """
    ks = -np.pi + (np.arange(n_k) + 0.5) * (2.0 * np.pi / n_k)
    q = _planar_field(params, ks, np.array([phi]))[0]
    if np.min(np.abs(q)) <= singular_tol:
        return WindingResult(
            value=float("nan"),
            n_k=n_k,
            singular_slices=(float(phi),),
            reliable=False,
        )
    return WindingResult(value=_loop_winding(q), n_k=n_k)


def awn(
    params: LadderParams,
    n_k: int = 512,
    n_phi: int = 64,
    singular_tol: float = 1e-8,
    axis: str = "k",
) -> WindingResult:
    """Averaged winding number over the synthetic torus.

    axis="k" (default) winds along momentum and averages over a midpoint grid
    of the synthetic angle; axis="phi" does the converse, which is the natural
    reading for rung-coupled comparisons where the fixed-momentum loop is the
    circle traced by the synthetic angle.
    """
    if axis not in ("k", "phi"):
        raise ConfigError("axis must be 'k' or 'phi'")
    ks = -np.pi + (np.arange(n_k) + 0.5) * (2.0 * np.pi / n_k)
    phis = -np.pi + (np.arange(n_phi) + 0.5) * (2.0 * np.pi / n_phi)
    q = _planar_field(params, ks, phis)  # shape (n_phi, n_k)
    if axis == "phi":
        q = q.T  # wind along the phi direction at fixed momentum
        slice_coords = ks
    else:
        slice_coords = phis
    mins = np.min(np.abs(q), axis=1)
    good = mins > singular_tol
    singular = tuple(float(c) for c in slice_coords[~good])
    if not np.any(good):
        return WindingResult(
            value=float("nan"),
            n_k=n_k,
            n_phi=n_phi,
            singular_slices=singular,
            reliable=False,
        )
    w = np.sum(np.angle(np.roll(q[good], -1, axis=1) / q[good]), axis=1) / (2.0 * np.pi)
    value = float(np.sum(w) / w.size)
    reliable = (len(singular) / len(slice_coords)) <= 0.01
    return WindingResult(
        value=value,
        n_k=n_k,
        n_phi=n_phi,
        singular_slices=singular,
        reliable=reliable,
    )


def vortex_charge(
    params: LadderParams,
    center: tuple,
    radius: float = 0.1,
    n_loop: int = 720,
) -> VortexCharge:
    """Charge of a planar-field zero, from a small circular loop around it."""
    k0, phi0 = center
    th = (np.arange(n_loop) + 0.5) * (2.0 * np.pi / n_loop)
    ks = k0 + radius * np.cos(th)
    phis = phi0 + radius * np.sin(th)
    p = params
    hx = 2.0 * p.t0 * np.cos(ks)
    hy = -2.0 * p.t0 * p.delta * np.sin(ks)
    hz = p.j_amp * (p.eta_a - p.eta_b) * np.sin(ks) + p.gamma
    q = (hx + 1j * hy) - hz * np.exp(1j * phis)
    if np.min(np.abs(q)) < 1e-6:
        raise NumericsError(
            f"loop around {center} passes within 1e-6 of a field zero; "
            "move the center or shrink the radius"
        )
    raw = _loop_winding(q)
    return VortexCharge(
        center=(float(k0), float(phi0)),
        radius=float(radius),
        charge=int(np.rint(raw)),
        raw=raw,
    )


def diabolic_points(params: LadderParams) -> tuple:
    """The (k, phi) locations where the planar field vanishes.

    The momenta are the exceptional momenta of the underlying ladder; at each,
    the synthetic angle is fixed by phi = Arg[(hx + i hy)/hz].
    """
    eps = exceptional_points(params)
    pts = []
    p = params
    for k in eps.momenta:
        hx = 2.0 * p.t0 * np.cos(k)
        hy = -2.0 * p.t0 * p.delta * np.sin(k)
        hz = p.j_amp * (p.eta_a - p.eta_b) * np.sin(k)
        if abs(hz) < 1e-14:
            raise NumericsError(f"field zero at k={k} has no defined angle (hz = 0)")
        pts.append((float(k), float(np.angle((hx + 1j * hy) / hz))))
    return tuple(pts)


def z2_invariant(params: LadderParams, n_k: int = 4096) -> float:
    """Average sign of det H(k) over the momentum circle, midpoint rule.

    Requires opposite leg asymmetries without gain and loss, where the
    determinant is real. A grid point landing on a determinant zero triggers
    one resample on an offset grid.
    """
    if not params.is_balanced:
        raise ConfigError("z2_invariant requires the balanced regime")
    p = params
    for shift in (0.0, 0.25):
        ks = -np.pi + (np.arange(n_k) + 0.5 + shift) * (2.0 * np.pi / n_k)
        c, s = np.cos(ks), np.sin(ks)
        det = (
            4.0 * (p.j_amp**2 - p.t0**2) * c**2
            + 4.0 * (p.j_amp**2 * p.eta_a**2 - p.t0**2 * p.delta**2) * s**2
        )
        if np.min(np.abs(det)) > 1e-12:
            return float(np.sum(np.sign(det)) / n_k)
    raise NumericsError("determinant vanishes on both sampling grids")


def z2_closed_form(params: LadderParams) -> float:
    """Closed-form value of the sign-of-determinant average."""
    if not params.is_balanced:
        raise ConfigError("z2_closed_form requires the balanced regime")
    a = params.j_amp**2 - params.t0**2
    b = params.j_amp**2 * params.eta_a**2 - params.t0**2 * params.delta**2
    if a == 0.0 and b == 0.0:
        raise NumericsError("determinant identically zero")
    if a == 0.0:
        return float(np.sign(b))
    if b == 0.0:
        return float(np.sign(a))
    if a > 0.0 and b > 0.0:
        return 1.0
    if a < 0.0 and b < 0.0:
        return -1.0
    if a > 0.0:  # b < 0: positive lobes around k = 0 and pi
        k_star = np.arctan(np.sqrt(a / -b))
        return float(4.0 * k_star / np.pi - 1.0)
    k_star = np.arctan(np.sqrt(-a / b))  # a < 0 < b: positive lobes around +-pi/2
    return float(1.0 - 4.0 * k_star / np.pi)


def hybrid_winding(params: LadderParams, n_k: int = 4096) -> HybridWinding:
    """Windings of the two composite band loops of the equal-leg chain.

    Each loop follows one band over half the momentum circle and the other
    band over the complementary half, switching where the bands touch. The
    reference point is the centroid of the enclosed open-chain family, which
    is identically zero; if the loop passes through it (the equal-coupling
    degenerate case) the reference is shifted by 1e-6 of the loop scale and
    the shift is reported.
    """
    if not params.is_equal_cross:
        raise ConfigError("hybrid_winding requires equal legs with delta = 0")
    p = params

    def arc(k: np.ndarray, s: int) -> np.ndarray:
        return 2.0 * (
            p.j_amp * np.cos(k)
            + 1j * p.j_amp * p.eta_a * np.sin(k)
            + s * p.t0 * np.abs(np.cos(k))
        )

    half = n_k // 2
    k_in = np.linspace(-np.pi / 2, np.pi / 2, half, endpoint=False)
    k_out = np.linspace(np.pi / 2, 3 * np.pi / 2, half, endpoint=False)
    loop_plus = np.concatenate([arc(k_in, +1), arc(k_out, -1)])
    loop_minus = np.concatenate([arc(k_in, -1), arc(k_out, +1)])

    ref = 0.0 + 0.0j
    scale = max(np.max(np.abs(loop_plus)), np.max(np.abs(loop_minus)))
    perturbed = False
    if min(np.min(np.abs(loop_plus - ref)), np.min(np.abs(loop_minus - ref))) < 1e-9 * scale:
        ref = ref + 1e-6 * scale
        perturbed = True
    raw_p = _loop_winding(loop_plus - ref)
    raw_m = _loop_winding(loop_minus - ref)
    return HybridWinding(
        w_plus=int(np.rint(raw_p)),
        w_minus=int(np.rint(raw_m)),
        raw_plus=raw_p,
        raw_minus=raw_m,
        reference=complex(ref),
        perturbed=perturbed,
    )
