"""Local models for the supports of the slide, flip and sphere-twist maps.

Three chart families:

* ``TorusChart(i, j)`` -- a solid torus D^2 x S^1 with coordinates (x, y, θ),
  θ in R/Z, minus a ball of radius 1/3 about (0, 0, 0) whose boundary is the
  sphere A_i.  Its universal cover is the solid cylinder minus the balls C_m
  of radius 1/3 centred at heights m.  The disk θ = 1/2 is where the torus
  meets A_j.
* ``BallChart(j)`` -- the unit ball minus two balls of radius 1/12 centred at
  (±1/6, 0, 0), the two sides A_j^- (x > 0) and A_j^+ (x < 0) of A_j.
* ``CollarChart(i)`` -- the shell 1 <= |v| <= 2 modelling a collar of A_i on
  its A_i^+ side.

Each map is stored with an integer ``power``; power k means the k-fold
composite, so ``power=-1`` is the analytic inverse and ``power=0`` is the
identity-profile map.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from .smooth import BumpProfile, TwistProfile, psi, psi_prime

CROSSING_LEVEL = 0.5
TORUS_HOLE_RADIUS = 1.0 / 3.0
BALL_HOLE_OFFSET = 1.0 / 6.0
BALL_HOLE_RADIUS = 1.0 / 12.0
INNER_RADIUS = 1.0 / 3.0
DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    """A point lies outside a chart or inside one of its removed balls."""


@dataclass(frozen=True)
class RemovedBall:
    sphere: int
    side: int  # -1: the A^- side, +1: the A^+ side
    center: tuple[float, float, float]
    radius: float


def wrap_half(d):
    """Reduce a period-1 difference into [-1/2, 1/2)."""
    return (np.asarray(d, dtype=float) + 0.5) % 1.0 - 0.5


def _as_points(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1] != 3:
        raise ValueError(f"chart points have 3 coordinates, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TorusChart:
    i: int
    j: int
    hole_radius: float = TORUS_HOLE_RADIUS
    crossing_level: float = CROSSING_LEVEL

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("torus chart needs i != j")
        if not self.hole_radius**2 < 1.0 / 9.0 + 1e-15:
            raise ValueError("removed ball must fit in x^2 + y^2 < 1/9")
        # distance of the crossing disk from the hole's height θ = 0
        if min(self.crossing_level, 1.0 - self.crossing_level) < 0.25:
            raise ValueError("crossing level must stay 1/4 away from the hole")

    @property
    def chart_id(self) -> str:
        return f"N{self.i},{self.j}"

    @property
    def spheres(self) -> frozenset[int]:
        return frozenset((self.i, self.j))

    @property
    def removed_balls(self) -> tuple[RemovedBall, ...]:
        return (RemovedBall(self.i, +1, (0.0, 0.0, 0.0), self.hole_radius),)

    def hole_distance(self, p) -> np.ndarray:
        p = _as_points(p)
        dz = wrap_half(p[..., 2])
        return np.sqrt(p[..., 0] ** 2 + p[..., 1] ** 2 + dz**2) - self.hole_radius

    def boundary_distance(self, p) -> np.ndarray:
        p = _as_points(p)
        return 1.0 - np.hypot(p[..., 0], p[..., 1])

    def in_domain(self, p, tol: float = DOMAIN_TOL) -> np.ndarray:
        return (self.boundary_distance(p) >= -tol) & (self.hole_distance(p) >= -tol)

    def difference(self, a, b) -> np.ndarray:
        d = _as_points(a) - _as_points(b)
        d[..., 2] = wrap_half(d[..., 2])
        return d

    def which_sphere(self, p, tol: float = 1e-9):
        if abs(float(self.hole_distance(p))) <= tol:
            return self.removed_balls[0]
        return None


@dataclass(frozen=True)
class BallChart:
    j: int
    hole_offset: float = BALL_HOLE_OFFSET
    hole_radius: float = BALL_HOLE_RADIUS

    def __post_init__(self):
        if not self.hole_offset + self.hole_radius < INNER_RADIUS:
            raise ValueError("removed balls must lie inside the inner region |v| < 1/3")
        if not self.hole_radius < self.hole_offset:
            raise ValueError("removed balls must not meet the z-axis")

    @property
    def chart_id(self) -> str:
        return f"P{self.j}"

    @property
    def spheres(self) -> frozenset[int]:
        return frozenset((self.j,))

    @property
    def removed_balls(self) -> tuple[RemovedBall, ...]:
        d, rad = self.hole_offset, self.hole_radius
        return (
            RemovedBall(self.j, -1, (d, 0.0, 0.0), rad),
            RemovedBall(self.j, +1, (-d, 0.0, 0.0), rad),
        )

    def hole_distance(self, p) -> np.ndarray:
        p = _as_points(p)
        dists = [np.linalg.norm(p - np.array(b.center), axis=-1) - b.radius for b in self.removed_balls]
        return np.minimum(*dists)

    def boundary_distance(self, p) -> np.ndarray:
        return 1.0 - np.linalg.norm(_as_points(p), axis=-1)

    def in_domain(self, p, tol: float = DOMAIN_TOL) -> np.ndarray:
        return (self.boundary_distance(p) >= -tol) & (self.hole_distance(p) >= -tol)

    def difference(self, a, b) -> np.ndarray:
        return _as_points(a) - _as_points(b)

    def which_sphere(self, p, tol: float = 1e-9):
        p = _as_points(p)
        for ball in self.removed_balls:
            if abs(np.linalg.norm(p - np.array(ball.center)) - ball.radius) <= tol:
                return ball
        return None


@dataclass(frozen=True)
class CollarChart:
    i: int
    inner: float = 1.0
    outer: float = 2.0

    @property
    def chart_id(self) -> str:
        return f"C{self.i}"

    @property
    def spheres(self) -> frozenset[int]:
        return frozenset((self.i,))

    @property
    def removed_balls(self) -> tuple[RemovedBall, ...]:
        return (RemovedBall(self.i, +1, (0.0, 0.0, 0.0), self.inner),)

    def hole_distance(self, p) -> np.ndarray:
        return np.linalg.norm(_as_points(p), axis=-1) - self.inner

    def boundary_distance(self, p) -> np.ndarray:
        return self.outer - np.linalg.norm(_as_points(p), axis=-1)

    def in_domain(self, p, tol: float = DOMAIN_TOL) -> np.ndarray:
        return (self.boundary_distance(p) >= -tol) & (self.hole_distance(p) >= -tol)

    def difference(self, a, b) -> np.ndarray:
        return _as_points(a) - _as_points(b)

    def which_sphere(self, p, tol: float = 1e-9):
        if abs(float(self.hole_distance(p))) <= tol:
            return self.removed_balls[0]
        return None


Chart = Union[TorusChart, BallChart, CollarChart]


@dataclass(frozen=True)
class ChartMap:
    kind: str  # "F" slide, "G" flip, "T" sphere twist
    chart: Chart
    profile: Union[BumpProfile, TwistProfile] = field(default_factory=BumpProfile)
    power: int = 1

    def __post_init__(self):
        expected = {"F": TorusChart, "G": BallChart, "T": CollarChart}
        if self.kind not in expected:
            raise ValueError(f"unknown map kind {self.kind!r}")
        if not isinstance(self.chart, expected[self.kind]):
            raise TypeError(f"{self.kind} maps live on {expected[self.kind].__name__}")
        want = TwistProfile if self.kind == "T" else BumpProfile
        if not isinstance(self.profile, want):
            raise TypeError(f"{self.kind} maps need a {want.__name__}")

    @property
    def chart_id(self) -> str:
        return self.chart.chart_id

    def inverse(self) -> "ChartMap":
        return replace(self, power=-self.power)

    def with_power(self, power: int) -> "ChartMap":
        return replace(self, power=power)

    def indices(self) -> tuple[int, ...]:
        c = self.chart
        if self.kind == "F":
            return (c.i, c.j)
        return (c.j,) if self.kind == "G" else (c.i,)

    def __str__(self):
        args = ",".join(str(k) for k in self.indices())
        suffix = "" if self.power == 1 else f"^{self.power}"
        return f"{self.kind}({args}){suffix}"

    # rotation angle about the z-axis (G, T) as a function of |v|, and its radial derivative
    def _angle(self, rho):
        if self.kind == "G":
            return self.power * np.pi * psi(self.profile, rho)
        return self.power * 2.0 * np.pi * self.profile(rho - self.chart.inner)

    def _angle_prime(self, rho):
        if self.kind == "G":
            return self.power * np.pi * psi_prime(self.profile, rho)
        return self.power * 2.0 * np.pi * self.profile.prime(rho - self.chart.inner)


def slide(i: int, j: int, profile: BumpProfile | None = None) -> ChartMap:
    """F(i, j): twists the solid torus N_{i,j} along its core; realizes a_i -> a_i a_j."""
    return ChartMap("F", TorusChart(i, j), profile or BumpProfile())


def flip(j: int, profile: BumpProfile | None = None) -> ChartMap:
    """G(j): half-turn of the inner region of P_j; realizes a_j -> a_j^-1."""
    return ChartMap("G", BallChart(j), profile or BumpProfile())


def sphere_twist(i: int, profile: TwistProfile | None = None) -> ChartMap:
    """T(i): full-turn twist in a collar of the core sphere A_i."""
    return ChartMap("T", CollarChart(i), profile or TwistProfile())


def check_domain(chart: Chart, p, what: str = "point") -> np.ndarray:
    p = _as_points(p)
    ok = chart.in_domain(p)
    if not np.all(ok):
        bad = p[~ok][0] if p.ndim > 1 else p
        raise DomainError(f"{what} {bad} is outside chart {chart.chart_id}")
    return p


def rotation_z(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    c, s = np.cos(alpha), np.sin(alpha)
    out = np.zeros(alpha.shape + (3, 3))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


def _rotation_z_prime(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    c, s = np.cos(alpha), np.sin(alpha)
    out = np.zeros(alpha.shape + (3, 3))
    out[..., 0, 0] = -s
    out[..., 0, 1] = -c
    out[..., 1, 0] = c
    out[..., 1, 1] = -s
    return out


def _apply_unchecked(cmap: ChartMap, p: np.ndarray) -> np.ndarray:
    if cmap.kind == "F":
        r = np.hypot(p[..., 0], p[..., 1])
        out = p.copy()
        out[..., 2] = np.mod(p[..., 2] + cmap.power * psi(cmap.profile, r), 1.0)
        return out
    rho = np.linalg.norm(p, axis=-1)
    rot = rotation_z(cmap._angle(rho))
    return np.einsum("...ij,...j->...i", rot, p)


def apply(cmap: ChartMap, p) -> np.ndarray:
    p = check_domain(cmap.chart, p)
    return _apply_unchecked(cmap, p)


def apply_inverse(cmap: ChartMap, p) -> np.ndarray:
    return apply(cmap.inverse(), p)


def project(q) -> np.ndarray:
    """Covering projection (x, y, z) -> (x, y, z mod 1) of the cylinder onto the torus chart."""
    q = _as_points(q).copy()
    q[..., 2] = np.mod(q[..., 2], 1.0)
    return q


def lift_apply(cmap: ChartMap, q) -> np.ndarray:
    """The lift (x, y, z) -> (x, y, z + kψ(r)) of a slide map to the universal cover."""
    if cmap.kind != "F":
        raise TypeError("only slide maps have a cover lift here")
    q = _as_points(q)
    check_domain(cmap.chart, project(q), what="cover point")
    r = np.hypot(q[..., 0], q[..., 1])
    out = q.copy()
    out[..., 2] = q[..., 2] + cmap.power * psi(cmap.profile, r)
    return out


def lift_jacobian(cmap: ChartMap, q) -> np.ndarray:
    """Jacobian of the cover lift: identity plus the shear row ∂z'/∂(x, y) = kψ'(r)(x, y)/r."""
    q = _as_points(q)
    x, y = q[..., 0], q[..., 1]
    r = np.hypot(x, y)
    dpsi = cmap.power * psi_prime(cmap.profile, r)
    safe_r = np.where(r > 0, r, 1.0)
    jac = np.broadcast_to(np.eye(3), q.shape[:-1] + (3, 3)).copy()
    # ψ' vanishes on the plateau, so r = 0 contributes nothing
    jac[..., 2, 0] = np.where(r > 0, dpsi * x / safe_r, 0.0)
    jac[..., 2, 1] = np.where(r > 0, dpsi * y / safe_r, 0.0)
    return jac


def jacobian_analytic(cmap: ChartMap, p) -> np.ndarray:
    p = check_domain(cmap.chart, p)
    if cmap.kind == "F":
        # θ is a local lift coordinate, so the chart Jacobian is the cover Jacobian
        return lift_jacobian(cmap, p)
    rho = np.linalg.norm(p, axis=-1)
    alpha = cmap._angle(rho)
    safe_rho = np.where(rho > 0, rho, 1.0)
    grad = (np.where(rho > 0, cmap._angle_prime(rho) / safe_rho, 0.0))[..., None] * p
    moved = np.einsum("...ij,...j->...i", _rotation_z_prime(alpha), p)
    return rotation_z(alpha) + moved[..., :, None] * grad[..., None, :]


def jacobian_fd(cmap: ChartMap, p, h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian; a test oracle only."""
    if h <= 0:
        raise ValueError("step must be positive")
    p = check_domain(cmap.chart, p)
    cols = []
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = h
        plus = check_domain(cmap.chart, p + e, what="stencil point")
        minus = check_domain(cmap.chart, p - e, what="stencil point")
        diff = cmap.chart.difference(_apply_unchecked(cmap, plus), _apply_unchecked(cmap, minus))
        cols.append(diff / (2.0 * h))
    return np.stack(cols, axis=-1)


def random_interior_points(chart: Chart, rng: np.random.Generator, count: int,
                           margin: float = 1e-4) -> np.ndarray:
    """Uniform rejection sample of chart points at least ``margin`` from every boundary."""
    out = []
    while sum(len(o) for o in out) < count:
        if isinstance(chart, TorusChart):
            xy = rng.uniform(-1, 1, size=(4 * count, 2))
            cand = np.column_stack([xy, rng.uniform(0, 1, size=4 * count)])
        else:
            outer = chart.outer if isinstance(chart, CollarChart) else 1.0
            cand = rng.uniform(-outer, outer, size=(4 * count, 3))
        keep = (chart.boundary_distance(cand) > margin) & (chart.hole_distance(cand) > margin)
        out.append(cand[keep])
    return np.concatenate(out)[:count]
