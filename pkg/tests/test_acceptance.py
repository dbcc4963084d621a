"""Acceptance gate: one test per headline numerical claim, each at its stated
tolerance and runtime budget. Run with -v for a pass/fail line per criterion."""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import antisym, equal_legs, match_multisets
from nhladder import (
    LadderParams,
    NumericsError,
    beta_roots,
    build_compact_modes,
    build_realspace,
    build_zero_modes,
    diagonalize,
    dispersion,
    exact_obc_sublattice,
    exceptional_points,
    fit_cell_decay,
    gamma_shifted_modes,
    gbz_circle_radii,
    half_masses,
    hybrid_winding,
    ipr,
    ipr_closed_form,
    migration,
    migration_finite_n,
    pt_threshold_closed_form,
    pt_threshold_gamma,
    sublattice_block_similarity,
    total_imbalance,
    transfer_data,
    unidirectional_modes,
    z2_invariant,
)
from nhladder.model import symmetry_operator
from nhladder.sweep import AxisSpec, SweepConfig, run_sweep


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"runtime {elapsed:.2f} s exceeds the {seconds} s budget"


def test_criterion_01_exceptional_momenta():
    with budget(1.0):
        eps = exceptional_points(antisym(1.0, 0.8, 0.3, 2))
        positive = sorted(k for k in eps.momenta if k > 0)
    assert len(positive) == 2
    assert positive[0] == pytest.approx(0.9327, abs=0.01)
    assert positive[1] == pytest.approx(2.209, abs=0.01)


def test_criterion_02_reality_breaking_threshold():
    p = antisym(0.2, 0.6, 0.7, 2)
    with budget(1.0):
        bisected = pt_threshold_gamma(p)
        closed = pt_threshold_closed_form(p)
    assert closed == pytest.approx(2 * p.t0 * abs(p.delta) - 2 * p.j_amp * abs(p.eta_a),
                                   abs=1e-12)
    assert bisected == pytest.approx(1.16, abs=1e-3)
    assert bisected == pytest.approx(closed, abs=1e-3)


def test_criterion_03_average_winding_phase_diagram():
    # the second axis is offset from the first so no grid point can satisfy
    # |j| = |delta| exactly; every cell is then strictly inside or outside
    cfg = SweepConfig(
        params=LadderParams(j_amp=0.0, eta_a=1.0, eta_b=-1.0, delta=0.0, n_cells=2),
        quantity="awn",
        axes=(AxisSpec("j_amp", -0.975, 0.975, 40), AxisSpec("delta", -1.0, 1.0, 40)),
        n_phi=256,
    )
    with budget(60.0):
        values = run_sweep(cfg, threads=4).values
    j_grid, d_grid = np.meshgrid(np.linspace(-0.975, 0.975, 40),
                                 np.linspace(-1.0, 1.0, 40), indexing="ij")
    assert values.shape == (40, 40)
    assert np.min(np.abs(np.abs(j_grid) - np.abs(d_grid))) > 1e-6
    cone_down = (np.abs(j_grid) < np.abs(d_grid)) & (d_grid > 0)
    cone_up = (np.abs(j_grid) < np.abs(d_grid)) & (d_grid < 0)
    broken = np.abs(j_grid) > np.abs(d_grid)
    assert np.all(np.abs(values[cone_down] + 1.0) <= 1e-2)
    assert np.all(np.abs(values[cone_up] - 1.0) <= 1e-2)
    off_integer = np.abs(values[broken] - np.round(values[broken]))
    assert np.all(off_integer > 1e-2)


def test_criterion_04_determinant_sign_transitions():
    line = antisym(1.0, 0.8, 0.5, 2)

    def invariant(j):
        return z2_invariant(line.replace(j_amp=j))

    with budget(10.0):
        assert invariant(0.5) == pytest.approx(-1.0, abs=1e-9)
        assert invariant(1.2) == pytest.approx(+1.0, abs=1e-9)
        middle = invariant(0.8)
        assert -1.0 < middle < 1.0
        assert abs(middle - round(middle)) > 1e-2

        low, high = 0.5, 0.8
        for _ in range(40):
            mid = 0.5 * (low + high)
            if invariant(mid) < -1.0 + 1e-6:
                low = mid
            else:
                high = mid
        lower_transition = 0.5 * (low + high)

        low, high = 0.8, 1.2
        for _ in range(40):
            mid = 0.5 * (low + high)
            if invariant(mid) > 1.0 - 1e-6:
                high = mid
            else:
                low = mid
        upper_transition = 0.5 * (low + high)

    assert lower_transition == pytest.approx(0.625, abs=0.005)
    assert upper_transition == pytest.approx(1.000, abs=0.005)


def _family_dense_spectra(p):
    """Dense spectra of the two decoupled leg-rotation blocks.

    Each block is diagonalized in the frame where it is symmetric: the raw
    matrix of a long skin-localized chain has exponentially ill-conditioned
    eigenvalues, so the rotation and the exact diagonal scaling (both
    similarities of the same dense matrix) are applied first.
    """
    n = p.n_cells
    h = build_realspace(p).real
    rot = np.zeros((2 * n, 2 * n))
    eye = np.eye(n) / np.sqrt(2.0)
    rot[:n, :n] = eye
    rot[:n, n:] = eye
    rot[n:, :n] = eye
    rot[n:, n:] = -eye
    rotated = rot @ h @ rot
    assert np.max(np.abs(rotated[:n, n:])) < 1e-12
    assert np.max(np.abs(rotated[n:, :n])) < 1e-12
    spectra = {}
    for family, block in ((1, rotated[:n, :n]), (-1, rotated[n:, n:])):
        scaling = sublattice_block_similarity(p, family).scaling
        sym = (scaling[:, None] * block) / scaling[None, :]
        assert np.max(np.abs(sym - sym.T)) < 1e-10 * max(1.0, float(np.max(np.abs(sym))))
        spectra[family] = np.linalg.eigvalsh(0.5 * (sym + sym.T))
    return spectra


def test_criterion_05_exact_open_chain_spectra():
    with budget(5.0):
        for n in (8, 40, 200):
            p = equal_legs(0.3, 0.5, 0.0, n)
            exact = exact_obc_sublattice(p)
            dense = _family_dense_spectra(p)
            match_multisets(dense[1], exact.plus, 1e-8, scale=1.0)
            match_multisets(dense[-1], exact.minus, 1e-8, scale=1.0)
        # short chains are still well conditioned raw, so check those directly
        for n in (8, 40):
            p = equal_legs(0.3, 0.5, 0.0, n)
            exact = exact_obc_sublattice(p)
            raw = np.linalg.eigvals(build_realspace(p))
            match_multisets(raw, np.concatenate([exact.plus, exact.minus]),
                            1e-8, scale=1.0)
        radii = gbz_circle_radii(equal_legs(0.3, 0.5, 0.0, 40))
    assert radii[0] == pytest.approx(np.sqrt(17.0 / 11.0), abs=1e-10)
    assert radii[1] == pytest.approx(np.sqrt(23.0 / 29.0), abs=1e-10)


def test_criterion_06_weight_migration():
    p = antisym(1.0, 0.9, 0.1, 40)
    with budget(10.0):
        _, minus_half = dispersion(p, np.pi / 2)
        _, minus_edge = dispersion(p, np.pi)
        at_half = migration(p, minus_half)
        at_edge = migration(p, minus_edge)
        finite = migration_finite_n(p.replace(n_cells=400), minus_half)
    assert at_half == pytest.approx(0.867, abs=0.01)
    assert at_edge == pytest.approx(0.0, abs=1e-6)
    assert finite.m_n == pytest.approx(at_half, rel=0.02)


def test_criterion_07_midgap_zero_modes():
    p = antisym(2.0, 0.8, 0.5, 17)
    with budget(5.0):
        odd = build_zero_modes(p)
        rate = float(np.log(abs(transfer_data(p).z_plus)))
        fits = sorted(fit_cell_decay(m.amplitudes, p.n_cells) for m in odd.modes)
        even = build_zero_modes(p.replace(n_cells=18))
        off_line = np.linalg.eigvals(build_realspace(antisym(0.8, 0.8, 0.5, 18)))
    assert len(odd.modes) == 2
    for m in odd.modes:
        assert m.residual < 1e-10
    assert fits[0] == pytest.approx(-rate, rel=0.02)
    assert fits[1] == pytest.approx(+rate, rel=0.02)
    assert len(even.modes) == 2
    for m in even.modes:
        assert m.residual < 1e-9
    assert np.min(np.abs(off_line)) > 1e-4


def test_criterion_08_flat_band_compact_modes():
    p = antisym(1.0, 0.5, 0.5, 20)
    with budget(1.0):
        modes = build_compact_modes(p)
        singular = np.linalg.svd(build_realspace(p), compute_uv=False)
    assert all(m.residual < 1e-12 for m in modes.modes)
    kernel_dim = int(np.sum(singular < 1e-10))
    assert kernel_dim == len(modes.modes)


@pytest.mark.xfail(
    strict=True,
    reason="the gain-shifted boundary pair sits a finite distance (~2.7e-3) from "
    "+-i*gamma at these couplings; the pinning is exact only when the cross "
    "splitting opposes the leg asymmetry",
)
def test_criterion_09_gain_loss_pinned_pair():
    p = antisym(0.2, 0.6, 0.7, 17, gamma=0.5)
    with budget(1.0):
        modes = gamma_shifted_modes(p)
        eigs = sorted((m.eigenvalue for m in modes.modes), key=lambda e: e.imag)
    assert eigs[0] == pytest.approx(-0.5j, abs=1e-9)
    assert eigs[1] == pytest.approx(+0.5j, abs=1e-9)


def _family_split(params):
    """Assign each dense eigenpair to the nearer of the two closed-form
    eigenvalue families of the equal-leg chain."""
    spectrum = diagonalize(params)
    exact = exact_obc_sublattice(params)
    plus = np.asarray(exact.plus)
    minus = np.asarray(exact.minus)
    families = np.empty(len(spectrum.eigenvalues), dtype=int)
    for i, e in enumerate(spectrum.eigenvalues):
        families[i] = 1 if np.min(np.abs(plus - e)) < np.min(np.abs(minus - e)) else -1
    return spectrum, families


def test_criterion_10_hybrid_winding_matches_skin_sides():
    p = equal_legs(0.3, 0.5, 0.0, 40)
    with budget(5.0):
        hw = hybrid_winding(p)
        spectrum, families = _family_split(p)
        assert (hw.w_plus, hw.w_minus) == (1, -1)
        assert int(np.sum(families == 1)) == p.n_cells
        for i in range(len(families)):
            (a_l, a_r), (b_l, b_r) = half_masses(spectrum.right_vectors[:, i], p.n_cells)
            left_fraction = (a_l + b_l) / (a_l + a_r + b_l + b_r)
            if families[i] == 1:
                assert left_fraction >= 0.9
            else:
                assert left_fraction <= 0.1

        # at matched couplings the minus family spreads flat: its aggregate
        # per-cell density is uniform even though each member is a standing wave
        flat = equal_legs(1.0, 0.5, 0.0, 40)
        spectrum_f, families_f = _family_split(flat)
        density = np.zeros(flat.n_cells)
        for i in np.nonzero(families_f == -1)[0]:
            v = spectrum_f.right_vectors[:, i]
            density += np.abs(v[: flat.n_cells]) ** 2 + np.abs(v[flat.n_cells:]) ** 2
        assert density.max() / density.min() < 1.1


def test_criterion_11_imbalance_corner():
    with budget(30.0):
        deltas = np.round(np.arange(0.40, 0.601, 0.01), 10)
        curve = [total_imbalance(antisym(1.0, 0.5, float(d), 40)) for d in deltas]
        second_diff = np.abs(np.diff(curve, 2))
        corner = deltas[1 + int(np.argmax(second_diff))]
    assert corner == pytest.approx(0.5, abs=0.01 + 1e-12)


def test_criterion_12_structural_identities():
    with budget(5.0):
        for n in range(2, 13):
            p = antisym(0.7, 0.6, 0.3, n, gamma=0.25)
            h = build_realspace(p)
            c = symmetry_operator("hidden_chiral", n)
            residual = np.max(np.abs(c @ h @ np.linalg.inv(c) + h))
            assert residual < 1e-12 * max(1.0, float(np.max(np.abs(h))))
        for zeta in (0.1, 0.5, 0.9):
            for n in (4, 16, 64):
                modes = unidirectional_modes(zeta, n)
                reference = ipr_closed_form(zeta, n)
                for i in range(n):
                    assert abs(ipr(modes[:, i]) - reference) < 1e-12
        for family in (1, -1):
            report = sublattice_block_similarity(equal_legs(0.3, 0.5, 0.0, 40), family)
            assert report.max_deviation < 1e-12


def _bulk_quartic(p, energy):
    up_a, lo_a = p.j_amp * (1 + p.eta_a), p.j_amp * (1 - p.eta_a)
    up_b, lo_b = p.j_amp * (1 + p.eta_b), p.j_amp * (1 - p.eta_b)
    leg_a = np.array([up_a, 1j * p.gamma - energy, lo_a])
    leg_b = np.array([up_b, -1j * p.gamma - energy, lo_b])
    return np.polysub(
        np.polymul(leg_a, leg_b),
        np.polymul(np.array([p.t2, 0.0, p.t1]), np.array([p.t1, 0.0, p.t2])),
    )


def test_criterion_13_property_suites():
    rng = np.random.default_rng(20240913)

    # reflection pairing of the bulk quartic over 1000 admissible draws
    worst = 0.0
    accepted = 0
    while accepted < 1000:
        p = antisym(rng.uniform(0.1, 2.5), rng.uniform(-0.9, 0.9),
                    rng.uniform(-0.9, 0.9), 4)
        energy = complex(rng.normal(), rng.normal())
        coeffs = _bulk_quartic(p, energy)
        scale = float(np.max(np.abs(coeffs)))
        if abs(coeffs[0]) < 1e-3 * scale:
            continue
        try:
            betas = beta_roots(p, energy).betas
        except NumericsError:
            continue
        if np.min(np.abs(betas)) < 1e-3:
            continue
        for b in betas:
            residual = abs(np.polyval(coeffs, 1.0 / b)) / (scale * max(1.0, abs(b) ** -4))
            worst = max(worst, residual)
        accepted += 1
    assert worst < 1e-9

    # sign and conjugation closure of balanced spectra
    for _ in range(200):
        p = antisym(rng.uniform(0.1, 2.5), rng.uniform(-0.9, 0.9),
                    rng.uniform(-0.9, 0.9), int(rng.integers(2, 9)),
                    gamma=rng.uniform(0.0, 1.2))
        ev = np.linalg.eigvals(build_realspace(p))
        scale = max(1.0, float(np.max(np.abs(ev))))
        match_multisets(ev, -ev, 1e-10, scale=scale)
        match_multisets(ev, np.conj(ev), 1e-10, scale=scale)

    # biorthogonal closure away from flagged degeneracies
    for _ in range(200):
        p = LadderParams(
            j_amp=rng.uniform(0.1, 2.5), eta_a=rng.uniform(-0.9, 0.9),
            eta_b=rng.uniform(-0.9, 0.9), delta=rng.uniform(-0.9, 0.9),
            gamma=rng.uniform(0.0, 1.2), n_cells=int(rng.integers(2, 7)),
        )
        spectrum = diagonalize(p)
        if spectrum.flagged_pairs:
            continue
        assert spectrum.biorth_residual < 1e-8

    # sweeps must be bitwise reproducible, whatever the thread count
    cfg = SweepConfig(
        params=LadderParams(j_amp=0.6, eta_a=0.8, eta_b=-0.8, delta=0.5, n_cells=2,
                            boundary="periodic"),
        quantity="awn",
        axes=(AxisSpec("j_amp", 0.2, 1.4, 5), AxisSpec("gamma", 0.0, 0.9, 3)),
        n_k=64,
        n_phi=32,
    )
    first = run_sweep(cfg, threads=1)
    second = run_sweep(cfg, threads=4)
    third = run_sweep(cfg, threads=1)
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.values, third.values)
