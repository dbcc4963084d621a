"""Hamiltonian builders for a two-leg ladder with direction-dependent hoppings,
cross-leg couplings, and optional balanced gain and loss.

Real-space basis ordering is [a_1 .. a_N, b_1 .. b_N]: first all cells of leg a,
then all cells of leg b. Momentum-space matrices use the convention

    H(k) = h0 * I + hx * sigma_x + hy * sigma_y + i * hz * sigma_z

so the diagonal entries are h0 +- i*hz and the off-diagonal ones hx -+ i*hy.
"""

from __future__ import annotations

import dataclasses
import enum

import numpy as np

from .errors import ConfigError

__all__ = [
    "Boundary",
    "LadderParams",
    "BlochMatrix",
    "build_bloch",
    "build_realspace",
    "build_hermitian_counterpart",
    "symmetry_operator",
]

# tolerance for detecting locked parameter regimes
_REGIME_TOL = 1e-12


class Boundary(str, enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclasses.dataclass(frozen=True)
class LadderParams:
    """Couplings and geometry of the ladder.

    Parameters
    ----------
    j_amp : float
        Mean intra-leg hopping amplitude J.
    eta_a, eta_b : float
        Hopping asymmetry on leg a and leg b, each in [-1, 1]. Forward and
        backward amplitudes on a leg are J*(1 + eta) and J*(1 - eta).
    delta : float
        Cross-coupling asymmetry in [-1, 1]; the two diagonal inter-leg bonds
        are t0*(1 - delta) and t0*(1 + delta).
    t0 : float
        Mean inter-leg coupling, positive.
    gamma : float
        Gain-loss strength, nonnegative: +i*gamma on leg a, -i*gamma on leg b.
    n_cells : int
        Number of unit cells N, at least 2.
    boundary : Boundary
        Open or periodic chain termination.
    """

    j_amp: float
    eta_a: float
    eta_b: float
    delta: float
    t0: float = 1.0
    gamma: float = 0.0
    n_cells: int = 2
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self) -> None:
        if isinstance(self.boundary, str) and not isinstance(self.boundary, Boundary):
            try:
                object.__setattr__(self, "boundary", Boundary(self.boundary))
            except ValueError:
                raise ConfigError(f"unknown boundary {self.boundary!r}") from None
        for name in ("eta_a", "eta_b", "delta"):
            v = getattr(self, name)
            if not -1.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [-1, 1], got {v}")
        if self.t0 <= 0.0:
            raise ConfigError(f"t0 must be positive, got {self.t0}")
        if self.gamma < 0.0:
            raise ConfigError(f"gamma must be nonnegative, got {self.gamma}")
        if not isinstance(self.n_cells, (int, np.integer)) or self.n_cells < 2:
            raise ConfigError(f"n_cells must be an integer >= 2, got {self.n_cells}")

    # the two diagonal cross couplings
    @property
    def t1(self) -> float:
        return self.t0 * (1.0 - self.delta)

    @property
    def t2(self) -> float:
        return self.t0 * (1.0 + self.delta)

    # --- locked-regime predicates -------------------------------------------------

    @property
    def is_antisymmetric_legs(self) -> bool:
        """Leg asymmetries opposite (eta_a = -eta_b)."""
        return abs(self.eta_a + self.eta_b) <= _REGIME_TOL

    @property
    def is_symmetric_legs(self) -> bool:
        """Leg asymmetries equal (eta_a = eta_b)."""
        return abs(self.eta_a - self.eta_b) <= _REGIME_TOL

    @property
    def is_balanced(self) -> bool:
        """Antisymmetric legs without gain and loss."""
        return self.is_antisymmetric_legs and self.gamma == 0.0

    @property
    def is_equal_cross(self) -> bool:
        """Symmetric cross couplings (delta = 0) with equal legs, no gain-loss."""
        return (
            self.is_symmetric_legs
            and abs(self.delta) <= _REGIME_TOL
            and self.gamma == 0.0
        )

    @property
    def eta(self) -> float:
        """The single asymmetry value in a locked regime (leg a)."""
        if not (self.is_antisymmetric_legs or self.is_symmetric_legs):
            raise ConfigError(
                "eta is only defined when the leg asymmetries are locked "
                f"(eta_a={self.eta_a}, eta_b={self.eta_b})"
            )
        return self.eta_a

    def replace(self, **kw) -> "LadderParams":
        return dataclasses.replace(self, **kw)


@dataclasses.dataclass(frozen=True)
class BlochMatrix:
    """Momentum-space cell matrix decomposed over the Pauli basis."""

    k: float
    h0: complex
    hx: complex
    hy: complex
    hz: complex

    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.h0 + 1j * self.hz, self.hx - 1j * self.hy],
                [self.hx + 1j * self.hy, self.h0 - 1j * self.hz],
            ],
            dtype=complex,
        )


def build_bloch(params: LadderParams, k: float) -> BlochMatrix:
    """Bloch matrix of the ladder at momentum k.

    Components for general leg asymmetries:
        h0 = 2 J cos k + i J (eta_a + eta_b) sin k
        hx = 2 t0 cos k
        hy = -2 t0 delta sin k
        hz = J (eta_a - eta_b) sin k + gamma
    """
    p = params
    c, s = np.cos(k), np.sin(k)
    h0 = 2.0 * p.j_amp * c + 1j * p.j_amp * (p.eta_a + p.eta_b) * s
    hx = 2.0 * p.t0 * c
    hy = -2.0 * p.t0 * p.delta * s
    hz = p.j_amp * (p.eta_a - p.eta_b) * s + p.gamma
    return BlochMatrix(k=float(k), h0=h0, hx=complex(hx), hy=complex(hy), hz=complex(hz))


def build_realspace(params: LadderParams) -> np.ndarray:
    """Real-space Hamiltonian, a 2N x 2N complex matrix.

    Index layout: a_j -> j-1, b_j -> N+j-1 (j = 1..N). The enhanced leg
    amplitude J*(1 + eta) sits on the upper diagonal H[a_j, a_{j+1}], the
    reduced one on the lower; the cross bonds put t1 on the (a_{j+1}, b_j)
    pair and t2 on the (a_j, b_{j+1}) pair, both symmetric.
    """
    p = params
    n = p.n_cells
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    ja_u, ja_l = p.j_amp * (1.0 + p.eta_a), p.j_amp * (1.0 - p.eta_a)
    jb_u, jb_l = p.j_amp * (1.0 + p.eta_b), p.j_amp * (1.0 - p.eta_b)

    def a(j):  # 1-indexed cell labels
        return j - 1

    def b(j):
        return n + j - 1

    for j in range(1, n):
        h[a(j), a(j + 1)] = ja_u
        h[a(j + 1), a(j)] = ja_l
        h[b(j), b(j + 1)] = jb_u
        h[b(j + 1), b(j)] = jb_l
        h[a(j + 1), b(j)] = p.t1
        h[b(j), a(j + 1)] = p.t1
        h[b(j + 1), a(j)] = p.t2
        h[a(j), b(j + 1)] = p.t2
    if p.boundary is Boundary.PERIODIC:
        # accumulate: at N = 2 the wrap doubles the bonds already placed
        h[a(n), a(1)] += ja_u
        h[a(1), a(n)] += ja_l
        h[b(n), b(1)] += jb_u
        h[b(1), b(n)] += jb_l
        h[a(1), b(n)] += p.t1
        h[b(n), a(1)] += p.t1
        h[b(1), a(n)] += p.t2
        h[a(n), b(1)] += p.t2
    if p.gamma != 0.0:
        h[: n, : n] += 1j * p.gamma * np.eye(n)
        h[n:, n:] -= 1j * p.gamma * np.eye(n)
    return h


def build_hermitian_counterpart(params: LadderParams) -> np.ndarray:
    """The reciprocal reference ladder: same mean couplings, no asymmetry, no gain-loss."""
    return build_realspace(
        params.replace(eta_a=0.0, eta_b=0.0, delta=0.0, gamma=0.0)
    )


def symmetry_operator(kind: str, n_cells: int) -> np.ndarray:
    """Unitary part of a lattice symmetry, acting on the [a_1..a_N, b_1..b_N] basis.

    Kinds
    -----
    "parity"        leg swap combined with cell reflection j -> N+1-j
    "sublattice"    plain leg swap
    "hidden_chiral" leg swap with reflection and the alternating phases
                    i^N * (-1)^(n+1); squares to -1 and anticommutes with the
                    open-chain Hamiltonian when the leg asymmetries are opposite
    """
    n = n_cells
    refl = np.fliplr(np.eye(n))
    if kind == "parity":
        op = np.zeros((2 * n, 2 * n), dtype=complex)
        op[:n, n:] = refl
        op[n:, :n] = refl
        return op
    if kind == "sublattice":
        op = np.zeros((2 * n, 2 * n), dtype=complex)
        op[:n, n:] = np.eye(n)
        op[n:, :n] = np.eye(n)
        return op
    if kind == "hidden_chiral":
        ups = np.zeros((n, n), dtype=complex)
        phase = (1j) ** n
        for row in range(1, n + 1):
            ups[row - 1, n - row] = phase * (-1.0) ** (row + 1)
        op = np.zeros((2 * n, 2 * n), dtype=complex)
        op[:n, n:] = ups
        op[n:, :n] = ups
        return op
    raise ConfigError(f"unknown symmetry kind {kind!r}")
