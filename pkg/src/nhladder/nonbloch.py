"""Non-Bloch characterization of the open chain: decay-root quartets, the
boundary matching system, amplitude ratios, spectral migration measures, and
two-wave profile decompositions of individual eigenstates."""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import ConfigError, NumericsError
from .model import Boundary, LadderParams, build_realspace
from .spectra import exact_obc_sublattice

__all__ = [
    "BetaQuartet",
    "GbzSample",
    "AmplitudeRatios",
    "BoundaryReport",
    "SfVerdict",
    "FiniteMigration",
    "ProfileDecomposition",
    "ModeWeightRatio",
    "a_roots",
    "beta_roots",
    "gbz_circle_radii",
    "gbz_from_obc",
    "x_ratios",
    "boundary_system",
    "sf_classify",
    "migration",
    "migration_finite_n",
    "migration_asymptote",
    "profile_decomposition",
    "mode_weight_ratio",
]


@dataclasses.dataclass(frozen=True)
class BetaQuartet:
    """The four decay roots of the bulk equation at a given energy.

    Storage order depends on the regime: with equal legs and delta = 0 the
    roots are stored by family pairs, positions (0, 3) for the inter-band
    family and (1, 2) for the intra-band one, ascending modulus within each
    pair; in every other regime the four roots are sorted by ascending
    (modulus, angle). middle_modulus is the geometric mean of the two middle
    moduli of the plain modulus sort, which is the common modulus of the
    conjugate pair whenever one exists.
    """

    energy: complex
    betas: np.ndarray
    regime: str
    a_pair: tuple | None = None

    @property
    def middle_modulus(self) -> float:
        mods = np.sort(np.abs(self.betas))
        return float(np.sqrt(mods[1] * mods[2]))


@dataclasses.dataclass(frozen=True)
class GbzSample:
    """Quartets sampled over a full open-chain spectrum."""

    energies: np.ndarray
    quartets: tuple
    middle_moduli: np.ndarray


@dataclasses.dataclass(frozen=True)
class AmplitudeRatios:
    """Leg-amplitude ratios of the two boundary-compatible waves at an energy,
    with the derived interference coefficient and migration measure."""

    energy: complex
    x_plus_1: complex
    x_minus_1: complex
    x_plus_2: complex
    x_minus_2: complex
    lambda_coeff: complex
    migration: float


@dataclasses.dataclass(frozen=True)
class BoundaryReport:
    """Boundary matching system at an energy: the 2x2 system, its determinant
    (normalized by the squared largest entry), the wave weight ratio, and the
    closed-form estimate of beta2^(N+1)."""

    energy: complex
    parity_sign: int
    k_matrix: np.ndarray
    det_residual: float
    weight_ratio: complex
    beta2_pow_estimate: complex


@dataclasses.dataclass(frozen=True)
class SfVerdict:
    """Scale-free versus extended verdict for one open-chain eigenvalue."""

    scale_free: bool
    modulus: float
    raw: float
    tol: float


@dataclasses.dataclass(frozen=True)
class FiniteMigration:
    """Finite-size migration estimate -N ln(middle modulus) at the open-chain
    eigenvalue nearest the requested target."""

    m_n: float
    eigenvalue: complex
    middle_modulus: float


@dataclasses.dataclass(frozen=True)
class ProfileDecomposition:
    """Two-wave least-squares decomposition of one eigenstate's leg profile."""

    eigenvalue: complex
    lambda_fit: complex
    lambda_analytic: complex
    residual: float
    envelope: np.ndarray
    envelope_rescaled: np.ndarray
    m_value: float
    ok: bool


@dataclasses.dataclass(frozen=True)
class ModeWeightRatio:
    """Relative boundary weight of the two zero-mode wave families."""

    value: float
    log_value: float


def a_roots(params: LadderParams, energy: complex) -> tuple:
    """Roots of the bulk equation in the symmetric variable A = beta + 1/beta.

    Defined in the balanced regime. When the quadratic coefficient
    chi = t0^2 (1 - delta^2) - J^2 (1 - eta^2) vanishes the equation is linear
    and a single root (reduced multiplicity) is returned.
    """
    if not params.is_balanced:
        raise ConfigError("a_roots requires the balanced regime")
    p = params
    e = complex(energy)
    chi = p.t0**2 * (1.0 - p.delta**2) - p.j_amp**2 * (1.0 - p.eta_a**2)
    cross = p.t0**2 * p.delta**2 - p.j_amp**2 * p.eta_a**2
    if abs(chi) < 1e-14:
        if abs(2.0 * p.j_amp * e) < 1e-14:
            raise NumericsError("bulk equation degenerates at this energy")
        return ((e**2 - 4.0 * cross) / (2.0 * p.j_amp * e),)
    f = (p.t0**2 * (1.0 - p.delta**2) + p.j_amp**2 * p.eta_a**2) * e**2 - 4.0 * chi * cross
    root = np.sqrt(complex(f))
    return ((-p.j_amp * e - root) / chi, (-p.j_amp * e + root) / chi)


def _quartic_roots(params: LadderParams, energy: complex) -> np.ndarray:
    """All four decay roots from the quartic bulk polynomial (any regime)."""
    p = params
    e = complex(energy)
    pa = np.array([p.j_amp * (1.0 + p.eta_a), 1j * p.gamma - e, p.j_amp * (1.0 - p.eta_a)])
    pb = np.array([p.j_amp * (1.0 + p.eta_b), -1j * p.gamma - e, p.j_amp * (1.0 - p.eta_b)])
    pab = np.array([p.t2, 0.0, p.t1])
    pba = np.array([p.t1, 0.0, p.t2])
    poly = np.polymul(pa, pb) - np.polymul(pab, pba)
    if abs(poly[0]) < 1e-14:
        raise NumericsError(
            "leading quartic coefficient vanished: fewer than four decay roots"
        )
    return np.roots(poly)


def beta_roots(params: LadderParams, energy: complex) -> BetaQuartet:
    """Decay-root quartet at an energy, with regime-appropriate ordering."""
    p = params
    e = complex(energy)
    if p.is_equal_cross:
        quartet = []
        for family in (-1, +1):
            den = 2.0 * (p.j_amp * (1.0 + p.eta_a) + family * p.t0)
            if abs(den) < 1e-14:
                raise NumericsError(
                    f"family {family:+d} quadratic degenerates (vanishing enhanced hop)"
                )
            d = (p.j_amp + family * p.t0) ** 2 - (p.j_amp * p.eta_a) ** 2
            root = np.sqrt(complex(e**2 - 4.0 * d))
            pair = sorted([(e - root) / den, (e + root) / den], key=abs)
            quartet.append(pair)
        betas = np.array(
            [quartet[0][0], quartet[1][0], quartet[1][1], quartet[0][1]], dtype=complex
        )
        return BetaQuartet(energy=e, betas=betas, regime="equal_cross")
    roots = _quartic_roots(params, e)
    order = np.lexsort((np.angle(roots), np.abs(roots)))
    betas = roots[order]
    apair = None
    if p.is_balanced:
        apair = a_roots(params, e)
    return BetaQuartet(
        energy=e,
        betas=betas,
        regime="balanced" if p.is_balanced else "general",
        a_pair=apair,
    )


def gbz_circle_radii(params: LadderParams) -> tuple:
    """Moduli of the two non-Bloch circles of the equal-leg open chain.

    r_minus^2 = |(J - t0 - J eta)/(J - t0 + J eta)| and the same with +t0.
    Returned as (r_minus, r_plus).
    """
    if not params.is_equal_cross:
        raise ConfigError("gbz_circle_radii requires equal legs with delta = 0")
    p = params
    out = []
    for family in (-1, +1):
        num = p.j_amp + family * p.t0 - p.j_amp * p.eta_a
        den = p.j_amp + family * p.t0 + p.j_amp * p.eta_a
        if den == 0.0:
            raise NumericsError("circle radius undefined (vanishing enhanced hop)")
        out.append(float(np.sqrt(abs(num / den))))
    return tuple(out)


def gbz_from_obc(params: LadderParams) -> GbzSample:
    """Quartets at every open-chain eigenvalue.

    Equal-leg chains use the closed-form spectrum; other regimes diagonalize
    the assembled matrix.
    """
    if params.boundary is not Boundary.OPEN:
        raise ConfigError("gbz_from_obc is defined for open chains")
    if params.is_equal_cross:
        exact = exact_obc_sublattice(params)
        energies = np.concatenate([exact.plus, exact.minus])
    else:
        energies = np.linalg.eigvals(build_realspace(params))
        energies = energies[np.lexsort((energies.imag, energies.real))]
    quartets = tuple(beta_roots(params, e) for e in energies)
    return GbzSample(
        energies=energies,
        quartets=quartets,
        middle_moduli=np.array([q.middle_modulus for q in quartets]),
    )


def x_ratios(params: LadderParams, energy: complex, quartet: BetaQuartet | None = None) -> AmplitudeRatios:
    """Leg-amplitude ratios of the two small-root waves at an energy.

    For each decay root the two chiralities are
        X^(s) = [E - J A - s J eta B] / [t0 A + s t0 delta B],
    A = beta + 1/beta, B = beta - 1/beta. Defined in the balanced regime; the
    two smallest-modulus roots beta_1, beta_2 are used.
    """
    if not params.is_balanced:
        raise ConfigError("x_ratios requires the balanced regime")
    p = params
    e = complex(energy)
    if quartet is None:
        quartet = beta_roots(params, e)
    b1, b2 = quartet.betas[0], quartet.betas[1]

    def ratio(beta: complex, sign: int) -> complex:
        big_a = beta + 1.0 / beta
        big_b = beta - 1.0 / beta
        num = e - p.j_amp * big_a - sign * p.j_amp * p.eta_a * big_b
        den = p.t0 * big_a + sign * p.t0 * p.delta * big_b
        if abs(den) < 1e-12 * max(1.0, abs(num)):
            raise NumericsError(f"singular amplitude ratio at beta={beta}")
        return num / den

    xp1, xm1 = ratio(b1, +1), ratio(b1, -1)
    xp2, xm2 = ratio(b2, +1), ratio(b2, -1)
    if xp1 == xp2:
        mig = float("inf")
        lam = complex(np.inf)
    else:
        # infinities are meaningful here (coalescing ratios), not errors
        with np.errstate(divide="ignore", invalid="ignore"):
            mig = float(np.log(abs((1.0 - xp1 * xp2) / (xp1 - xp2))))
            lam = (xp1 - xp2) / (xm2 - xp1)
    return AmplitudeRatios(
        energy=e,
        x_plus_1=xp1,
        x_minus_1=xm1,
        x_plus_2=xp2,
        x_minus_2=xm2,
        lambda_coeff=lam,
        migration=mig,
    )


def boundary_system(
    params: LadderParams, energy: complex, parity_sign: int | None = None
) -> BoundaryReport:
    """Open-boundary matching system for the two small-root waves.

    The 2x2 system acts on the wave weights (mu_1, mu_2); a true open-chain
    eigenvalue makes it singular. With parity_sign unset both signs are tried
    and the one with the smaller normalized determinant is reported.
    """
    p = params
    e = complex(energy)
    quartet = beta_roots(params, e)
    ratios = x_ratios(params, e, quartet)
    b1, b2 = quartet.betas[0], quartet.betas[1]
    n1 = p.n_cells + 1
    x1, x2 = ratios.x_plus_1, ratios.x_plus_2

    def build(sign: int):
        k = np.array(
            [
                [1.0 + sign * b1**n1 * x1, 1.0 + sign * b2**n1 * x2],
                [x1 + sign * b1**n1, x2 + sign * b2**n1],
            ],
            dtype=complex,
        )
        scale = np.max(np.abs(k))
        det = k[0, 0] * k[1, 1] - k[0, 1] * k[1, 0]
        return k, abs(det) / scale**2 if scale > 0 else abs(det)

    signs = (parity_sign,) if parity_sign in (1, -1) else (1, -1)
    best = None
    for s in signs:
        k, res = build(s)
        if best is None or res < best[2]:
            best = (s, k, res)
    sign, k_matrix, det_res = best
    xm2 = ratios.x_minus_2
    weight = (x2 - xm2) / (xm2 - x1)
    estimate = sign * (x1 - x2) / (1.0 - x1 * x2)
    return BoundaryReport(
        energy=e,
        parity_sign=sign,
        k_matrix=k_matrix,
        det_residual=float(det_res),
        weight_ratio=weight,
        beta2_pow_estimate=estimate,
    )


def sf_classify(params: LadderParams, energy: complex, tol: float = 1e-3) -> SfVerdict:
    """Scale-free versus extended classification of a balanced-chain energy.

    The discriminator is q = |(X1 - X2)/(1 - X1 X2)|, the closed-form modulus
    of beta2^(N+1); extended states have q = 1, scale-free ones q strictly
    inside the unit interval. The verdict uses m = min(q, 1/q) so a parity
    flip cannot push a borderline value outside.
    """
    ratios = x_ratios(params, energy)
    x1, x2 = ratios.x_plus_1, ratios.x_plus_2
    with np.errstate(divide="ignore", invalid="ignore"):
        q = abs((x1 - x2) / (1.0 - x1 * x2))
    if np.isnan(q):
        # both discriminating combinations vanish: indistinguishable from extended
        return SfVerdict(scale_free=False, modulus=1.0, raw=float("nan"), tol=tol)
    m = min(q, 1.0 / q) if q > 0 else 0.0
    return SfVerdict(scale_free=bool(m < 1.0 - tol), modulus=m, raw=q, tol=tol)


def migration(params: LadderParams, energy: complex) -> float:
    """Asymptotic migration measure ln |(1 - X1 X2)/(X1 - X2)| at an energy."""
    return x_ratios(params, energy).migration


def migration_finite_n(params: LadderParams, target: complex) -> FiniteMigration:
    """Finite-size migration -N ln |beta_2| at the open-chain eigenvalue
    nearest the target energy.

    The middle moduli split at finite N as |beta_2| = 1 - M/N + O(1/N^2) and
    |beta_3| = 1/|beta_2|; their geometric mean is exactly 1 whenever the
    quartet pairs beta <-> 1/beta, so the decay factor must be the second
    modulus in ascending order, not the pair mean.
    """
    if params.boundary is not Boundary.OPEN:
        raise ConfigError("migration_finite_n needs an open chain")
    ev = np.linalg.eigvals(build_realspace(params))
    e = ev[int(np.argmin(np.abs(ev - complex(target))))]
    quartet = beta_roots(params, e)
    mod = float(np.sort(np.abs(quartet.betas))[1])
    return FiniteMigration(
        m_n=float(-params.n_cells * np.log(mod)),
        eigenvalue=complex(e),
        middle_modulus=mod,
    )


def migration_asymptote(params: LadderParams, k: float) -> float:
    """Large-J migration asymptote at momentum k (strong intra-leg coupling).

    At k = +-pi/2 the expression collapses to ln |J (1 + eta^2)/t0|.
    """
    if not params.is_balanced:
        raise ConfigError("migration_asymptote requires the balanced regime")
    p = params
    eta = p.eta_a
    z2 = np.exp(2j * k)
    num = (z2 - 1.0) * (z2 * (1.0 - eta) ** 2 - (1.0 + eta) ** 2) * p.j_amp * eta
    den = (z2**2 * (1.0 - eta) ** 2 - (1.0 + eta) ** 2) * p.t0
    if abs(den) < 1e-14:
        raise NumericsError("asymptote undefined at this momentum")
    return float(np.log(abs(num / den)))


def profile_decomposition(params: LadderParams, target: complex) -> ProfileDecomposition:
    """Two-wave decomposition of the eigenstate nearest the target energy.

    The leg-a amplitudes are fitted by c beta2^j + d beta2^{-j}; the ratio
    d/c is the interference coefficient and is compared with the closed-form
    one. The per-cell envelope |beta2|^{2j} + |Lambda|^2 |beta2|^{-2j} is
    returned both on the raw cell index and on the rescaled coordinate
    j/N (useful for size-independent comparisons). A relative fit residual
    above 10% clears the ok flag, signalling that a two-wave picture does not
    describe the state.
    """
    if params.boundary is not Boundary.OPEN:
        raise ConfigError("profile_decomposition needs an open chain")
    n = params.n_cells
    h = build_realspace(params)
    ev, vr = np.linalg.eig(h)
    idx = int(np.argmin(np.abs(ev - complex(target))))
    e, state = ev[idx], vr[:, idx]
    quartet = beta_roots(params, e)
    ratios = x_ratios(params, e, quartet)
    b2 = quartet.betas[1]
    js = np.arange(1, n + 1)
    design = np.stack([b2**js, b2 ** (-js.astype(float))], axis=1)
    coef, *_ = np.linalg.lstsq(design, state[:n], rcond=None)
    c, d = coef
    fit = design @ coef
    residual = float(np.linalg.norm(fit - state[:n]) / np.linalg.norm(state[:n]))
    lam_fit = d / c if c != 0 else complex(np.inf)
    lam = ratios.lambda_coeff
    mod = abs(b2)
    envelope = mod ** (2.0 * js) + abs(lam) ** 2 * mod ** (-2.0 * js)
    ls = js / n
    m_val = ratios.migration
    rescaled = np.exp(-2.0 * m_val * ls) + abs(lam) ** 2 * np.exp(2.0 * m_val * ls)
    return ProfileDecomposition(
        eigenvalue=complex(e),
        lambda_fit=complex(lam_fit),
        lambda_analytic=complex(lam),
        residual=residual,
        envelope=envelope,
        envelope_rescaled=rescaled,
        m_value=m_val,
        ok=bool(residual <= 0.10),
    )


def mode_weight_ratio(params: LadderParams) -> ModeWeightRatio:
    """Boundary weight ratio of the two wave families at zero energy for the
    equal-leg chain, computed in log scale to survive large chains."""
    if not params.is_equal_cross:
        raise ConfigError("mode_weight_ratio requires equal legs with delta = 0")
    quartet = beta_roots(params, 0.0)
    b1, b2, b3, b4 = quartet.betas
    n1 = params.n_cells + 1

    def log_diff(big: complex, small: complex) -> float:
        # log |big^n1 - small^n1| with |big| >= |small|
        if abs(big) < abs(small):
            big, small = small, big
        lead = n1 * np.log(abs(big))
        corr = abs(1.0 - (small / big) ** n1) if abs(big) > 0 else 0.0
        if corr == 0.0:
            return float("-inf")
        return float(lead + np.log(corr))

    log_num = log_diff(b3, b2)
    log_den = log_diff(b4, b1)
    logv = log_num - log_den
    value = float(np.exp(logv)) if logv < 700 else float("inf")
    return ModeWeightRatio(value=value, log_value=float(logv))
