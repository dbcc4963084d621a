"""Shared helpers for the test suite."""

import numpy as np
import pytest

from nhladder import LadderParams


def match_multisets(got, expected, tol, scale=None):
    """Greedy nearest-neighbor matching of two complex multisets.

    Returns the largest matched distance. Sorting complex arrays is not a
    reliable pairing strategy near ties, so each expected value consumes its
    closest remaining candidate instead.
    """
    got = list(np.asarray(got, dtype=complex))
    expected = np.asarray(expected, dtype=complex)
    assert len(got) == len(expected), "multiset sizes differ"
    if scale is None:
        scale = max(1.0, float(np.max(np.abs(expected))) if len(expected) else 1.0)
    worst = 0.0
    for e in expected:
        dist = [abs(g - e) for g in got]
        i = int(np.argmin(dist))
        worst = max(worst, dist[i])
        got.pop(i)
    assert worst <= tol * scale, f"multiset mismatch: worst {worst:.3e} > {tol * scale:.3e}"
    return worst


def antisym(j_amp, eta, delta, n_cells, **kw):
    """Balanced ladder: equal-magnitude opposite leg asymmetries."""
    return LadderParams(j_amp=j_amp, eta_a=eta, eta_b=-eta, delta=delta,
                        n_cells=n_cells, **kw)


def equal_legs(j_amp, eta, delta, n_cells, **kw):
    return LadderParams(j_amp=j_amp, eta_a=eta, eta_b=eta, delta=delta,
                        n_cells=n_cells, **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
