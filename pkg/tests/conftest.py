"""Shared fixtures: seeded curvature samples and speed catalogs."""

import numpy as np
import pytest

from pinchflow.speeds import DEGREE_ONE_CATALOG, parse_speed


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def degree_one_speeds():
    return [parse_speed(name) for name in DEGREE_ONE_CATALOG]


@pytest.fixture(scope="session")
def steep_annulus_profile():
    """Shared steep-annulus body (ratio 3.5, transition radius 0.05), m=4096."""
    from pinchflow.counterexample import PinchProfileSpec, build_profile
    return build_profile(PinchProfileSpec(r1=3.5, u0=0.05), m=4096)


def sample_curvatures(rng, count, ratio_max=50.0):
    """Log-uniform kappa1 with uniform ratio in [1+1e-6, ratio_max]."""
    k1 = np.exp(rng.uniform(np.log(1e-2), np.log(1e2), count))
    ratio = rng.uniform(1.0 + 1e-6, ratio_max, count)
    return k1, k1 * ratio
