import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistsection.smooth import BumpProfile, TwistProfile, psi, psi_prime, psi_table

PROF = BumpProfile()


def test_psi_examples():
    assert psi(PROF, 0.2) == 1.0
    assert psi(PROF, 0.7) == 0.0
    assert psi(PROF, PROF.plateau_end) == 1.0
    assert psi(PROF, PROF.support_end) == 0.0


def test_psi_prime_examples():
    assert psi_prime(PROF, 0.1) == 0.0
    assert psi_prime(PROF, 0.9) == 0.0
    h = 1e-5
    fd = (psi(PROF, 0.45 + h) - psi(PROF, 0.45 - h)) / (2 * h)
    assert psi_prime(PROF, 0.45) < 0
    assert psi_prime(PROF, 0.45) == pytest.approx(fd, rel=1e-6)


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        psi(PROF, -0.1)
    with pytest.raises(ValueError):
        psi_prime(PROF, [0.1, -1e-3])


@pytest.mark.parametrize("kwargs", [
    dict(plateau_end=0.7, support_end=0.6),
    dict(support_end=0.7),
    dict(steepness=0.0),
])
def test_bad_profiles(kwargs):
    with pytest.raises(ValueError):
        BumpProfile(**kwargs)


def test_grid_invariants():
    r = np.linspace(0, 1, 10_000)
    v = psi(PROF, r)
    assert np.max(np.abs(v[r <= 1 / 3] - 1)) < 1e-12
    assert np.max(np.abs(v[r >= PROF.support_end])) < 1e-12
    assert np.all(np.diff(v) <= 0)
    assert np.all(psi_prime(PROF, r) <= 0)


@pytest.mark.parametrize("prof", [PROF, BumpProfile(support_end=0.62), BumpProfile(steepness=2.0)])
def test_psi_prime_matches_central_differences(prof):
    h = 1e-5
    r = np.linspace(h, 1 - h, 4001)
    fd = (psi(prof, r + h) - psi(prof, r - h)) / (2 * h)
    d = psi_prime(prof, r)
    assert np.all(np.abs(fd - d) <= np.maximum(1e-6, 1e-6 * np.abs(d)))


@given(st.floats(0, 1), st.floats(0, 1))
def test_monotone(a, b):
    lo, hi = sorted((a, b))
    assert psi(PROF, lo) >= psi(PROF, hi)
    assert 0.0 <= psi(PROF, lo) <= 1.0


def test_smooth_gluing():
    # the transition side flattens faster than any power at both gluing radii
    assert abs(psi_prime(PROF, PROF.plateau_end + 1e-3)) < 1e-100
    assert abs(psi_prime(PROF, PROF.support_end - 1e-3)) < 1e-100


def test_twist_profile_endpoints():
    eta = TwistProfile()
    assert eta(0.0) == 0.0 and eta(0.05) == 0.0
    assert eta(1.0) == 1.0 and eta(0.95) == 1.0
    s = np.linspace(0, 1, 2001)
    assert np.all(np.diff(eta(s)) >= 0)
    h = 1e-5
    inner = s[(s > h) & (s < 1 - h)]
    fd = (eta(inner + h) - eta(inner - h)) / (2 * h)
    assert np.max(np.abs(fd - eta.prime(inner))) < 1e-6


def test_psi_table_shape():
    tab = psi_table(PROF)
    assert tab.shape == (10_000, 3)
    assert tab[0, 1] == 1.0 and tab[-1, 1] == 0.0
