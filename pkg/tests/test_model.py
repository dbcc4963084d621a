"""Real-space and momentum-space builders against hand-assembled matrices."""

import numpy as np
import pytest

from conftest import antisym, match_multisets
from nhladder import (
    Boundary,
    LadderParams,
    build_bloch,
    build_hermitian_counterpart,
    build_realspace,
    k_grid,
    symmetry_operator,
)
from nhladder.errors import ConfigError

J, EA, EB, D, T0, G = 0.7, 0.4, -0.2, 0.3, 1.1, 0.25


def _reference_matrix(n, periodic):
    """Entry-by-entry construction, no shared code with the package."""
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    a = lambda j: j
    b = lambda j: n + j
    bonds = [(j, j + 1) for j in range(n - 1)]
    if periodic:
        bonds.append((n - 1, 0))
    for j, jn in bonds:
        h[a(j), a(jn)] += J * (1 + EA)
        h[a(jn), a(j)] += J * (1 - EA)
        h[b(j), b(jn)] += J * (1 + EB)
        h[b(jn), b(j)] += J * (1 - EB)
        # diagonal cross bonds: weak one leans forward on leg b, strong one back
        h[a(jn), b(j)] += T0 * (1 - D)
        h[b(j), a(jn)] += T0 * (1 - D)
        h[b(jn), a(j)] += T0 * (1 + D)
        h[a(j), b(jn)] += T0 * (1 + D)
    for j in range(n):
        h[a(j), a(j)] += 1j * G
        h[b(j), b(j)] -= 1j * G
    return h


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("boundary", [Boundary.OPEN, Boundary.PERIODIC])
def test_realspace_matches_reference(n, boundary):
    p = LadderParams(j_amp=J, eta_a=EA, eta_b=EB, delta=D, t0=T0, gamma=G,
                     n_cells=n, boundary=boundary)
    ref = _reference_matrix(n, boundary is Boundary.PERIODIC)
    np.testing.assert_allclose(build_realspace(p), ref, atol=0, rtol=0)


def test_periodic_spectrum_equals_bloch_union():
    p = LadderParams(j_amp=J, eta_a=EA, eta_b=EB, delta=D, t0=T0, gamma=G,
                     n_cells=7, boundary=Boundary.PERIODIC)
    dense = np.linalg.eigvals(build_realspace(p))
    bloch = []
    for k in k_grid(7):
        bloch.extend(np.linalg.eigvals(build_bloch(p, k).matrix()))
    match_multisets(dense, bloch, 1e-10)


def test_two_cell_ring_spectrum_equals_bloch_union():
    # N = 2 is the degenerate ring: open and wrap bonds join the same cells
    p = LadderParams(j_amp=J, eta_a=EA, eta_b=EB, delta=D, t0=T0, gamma=G,
                     n_cells=2, boundary=Boundary.PERIODIC)
    dense = np.linalg.eigvals(build_realspace(p))
    bloch = []
    for k in k_grid(2):
        bloch.extend(np.linalg.eigvals(build_bloch(p, k).matrix()))
    match_multisets(dense, bloch, 1e-10)


def test_bloch_components_literal():
    p = antisym(1.3, 0.6, 0.4, 2, gamma=0.2)
    for k in (0.3, 1.1, -2.0):
        m = build_bloch(p, k)
        assert m.h0 == pytest.approx(2 * 1.3 * np.cos(k), abs=1e-14)
        assert m.hx == pytest.approx(2 * np.cos(k), abs=1e-14)
        assert m.hy == pytest.approx(-2 * 0.4 * np.sin(k), abs=1e-14)
        # leg-antisymmetric case: hz = 2 J eta sin k plus the gain-loss offset
        assert m.hz == pytest.approx(2 * 1.3 * 0.6 * np.sin(k) + 0.2, abs=1e-14)
        expect = (m.h0 * np.eye(2)
                  + m.hx * np.array([[0, 1], [1, 0]])
                  + m.hy * np.array([[0, -1j], [1j, 0]])
                  + 1j * m.hz * np.array([[1, 0], [0, -1]]))
        np.testing.assert_allclose(m.matrix(), expect, atol=1e-14)


def test_bloch_general_legs_h0_is_complex():
    p = LadderParams(j_amp=1.0, eta_a=0.5, eta_b=0.1, delta=0.0, n_cells=2)
    m = build_bloch(p, 0.7)
    assert m.h0 == pytest.approx(2 * np.cos(0.7) + 1j * 0.6 * np.sin(0.7), abs=1e-14)
    assert m.hz == pytest.approx(0.4 * np.sin(0.7), abs=1e-14)


def test_hermitian_counterpart_strips_nonreciprocity():
    p = antisym(0.9, 0.7, 0.2, 5, gamma=0.3)
    ref = build_hermitian_counterpart(p)
    np.testing.assert_allclose(ref, ref.conj().T, atol=1e-14)
    np.testing.assert_allclose(
        ref, build_realspace(p.replace(eta_a=0.0, eta_b=0.0, delta=0.0, gamma=0.0)),
        atol=0)


@pytest.mark.parametrize("kw,frag", [
    (dict(n_cells=1), "n_cells"),
    (dict(t0=0.0), "t0"),
    (dict(t0=-0.5), "t0"),
    (dict(eta_a=1.2), "eta_a"),
    (dict(eta_b=-1.01), "eta_b"),
    (dict(delta=1.5), "delta"),
    (dict(gamma=-0.1), "gamma"),
])
def test_params_validation(kw, frag):
    base = dict(j_amp=1.0, eta_a=0.5, eta_b=-0.5, delta=0.3, n_cells=4)
    base.update(kw)
    with pytest.raises(ConfigError, match=frag):
        LadderParams(**base)


def test_regime_flags():
    p = antisym(1.0, 0.5, 0.3, 4)
    assert p.is_antisymmetric_legs and p.is_balanced
    assert not p.is_symmetric_legs and not p.is_equal_cross
    assert p.eta == 0.5
    q = LadderParams(j_amp=1.0, eta_a=0.5, eta_b=0.5, delta=0.0, n_cells=4)
    assert q.is_symmetric_legs and q.is_equal_cross and not q.is_balanced
    assert p.replace(delta=0.0).delta == 0.0
    assert p.t1 == pytest.approx(0.7) and p.t2 == pytest.approx(1.3)


def test_symmetry_operator_structure():
    par = symmetry_operator("parity", 4)
    assert par.shape == (8, 8)
    np.testing.assert_allclose(par @ par, np.eye(8), atol=1e-15)
    with pytest.raises(ConfigError):
        symmetry_operator("nonsense", 4)


def test_hidden_chiral_flips_sign():
    p = antisym(1.1, 0.6, 0.4, 5, gamma=0.3)
    h = build_realspace(p)
    c = symmetry_operator("hidden_chiral", 5)
    np.testing.assert_allclose(c @ h @ np.linalg.inv(c), -h, atol=1e-12)
