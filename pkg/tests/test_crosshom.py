import numpy as np
import pytest

from twistsection import charts as ch
from twistsection import crosshom as cx
from twistsection.crosshom import TwistVector
from twistsection.curve import ChartPiece, ExteriorStub, TrackedLoop, generator_loop
from twistsection.loopclass import loop_class
from twistsection.smooth import BumpProfile, psi_prime

PROF = BumpProfile()


def test_twist_vector_arithmetic():
    a, b = TwistVector.parse("0110"), TwistVector.parse("1100")
    assert str(a + b) == "1010"
    assert (a + a).is_zero()
    assert TwistVector.unit(2, 3) == TwistVector((0, 1, 0))
    with pytest.raises(ValueError):
        a + TwistVector.zero(3)


def test_derivative_along_slide_segment():
    f = ch.slide(1, 2)
    path = cx.derivative_along(f, generator_loop(1, f, 3))
    # the chart piece runs over [0.25, 0.75] with s = 1/3 -> 1
    for s in (0.4, 0.5, 0.55):
        t = 0.25 + 0.5 * (s - 1 / 3) / (2 / 3)
        want = np.eye(3)
        want[2, 0] = psi_prime(PROF, s)
        assert np.allclose(path(t), want, atol=1e-6)
    assert np.array_equal(path(0.1), np.eye(3))
    assert loop_class(path) == 0


def test_flip_path_on_middle_segment():
    g = ch.flip(1)
    loop = generator_loop(1, g, 3)
    path = cx.derivative_along(g, loop)
    a, b = loop.marks["gamma2"]
    for t in np.linspace(a, b, 9):
        assert np.allclose(path(t), np.diag([-1.0, -1.0, 1.0]), atol=1e-12)
    assert loop_class(path) == 0


def test_twisting_examples():
    assert cx.twisting_of(ch.slide(1, 2), 3).is_zero()
    assert cx.twisting_of(ch.flip(2), 3).is_zero()
    assert cx.twisting_of(ch.sphere_twist(2), 3) == TwistVector.unit(2, 3)
    assert cx.twisting_of(ch.sphere_twist(2).inverse(), 3) == TwistVector.unit(2, 3)
    assert cx.twisting_of(ch.sphere_twist(2).with_power(2), 3).is_zero()


def test_twisting_stable_under_refinement():
    t = ch.sphere_twist(1)
    assert cx.twisting_of(t, 2, 1024, 512) == cx.twisting_of(t, 2)


def test_deck_invariance():
    f = ch.slide(1, 3)
    p = np.array([0.45, 0.05, 0.3])
    for k in (-2, 1, 5):
        assert np.allclose(cx.derivative_matrix(f, p, k), cx.derivative_matrix(f, p), atol=1e-14)


@pytest.mark.parametrize("cmap", [ch.slide(1, 2), ch.flip(1), ch.sphere_twist(1)], ids=str)
def test_cocycle_same_chart(cmap):
    rng = np.random.default_rng(7)
    for p in ch.random_interior_points(cmap.chart, rng, 100, margin=1e-6):
        assert cx.cocycle_check(cmap, cmap, p) < 1e-8
        assert cx.cocycle_check(cmap.inverse(), cmap, p) < 1e-8


def test_cocycle_disjoint_and_identity():
    f, g = ch.slide(1, 2), ch.flip(3)
    rng = np.random.default_rng(8)
    for p in ch.random_interior_points(g.chart, rng, 50):
        assert cx.cocycle_check(f, g, p) == 0.0
    for p in ch.random_interior_points(f.chart, rng, 50):
        assert cx.cocycle_check(f.with_power(0), f, p) < 1e-12


def test_incompatible_charts():
    with pytest.raises(cx.IncompatibleCharts):
        cx.cocycle_check(ch.slide(1, 2), ch.slide(1, 3), [0.5, 0.0, 0.2])


def test_discontinuity_detected():
    f = ch.slide(1, 2)
    s = np.linspace(1.0, 0.45, 50)
    pts = np.column_stack([s, np.zeros_like(s), np.zeros_like(s)])
    loop = TrackedLoop((ExteriorStub(0.0, 0.2),
                        ChartPiece("N1,2", np.linspace(0.2, 0.8, 50), pts),
                        ExteriorStub(0.8, 1.0)))
    with pytest.raises(cx.DiscontinuityError):
        cx.derivative_along(f, loop)
