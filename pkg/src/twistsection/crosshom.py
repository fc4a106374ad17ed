"""Derivative crossed homomorphism along tracked loops, and the twisting
crossed homomorphism as a vector in (Z/2)^n = Hom(π1(M_n), Z/2).

For a map F and a point p, D(F)(p) is determined by

    D(F)^-1(p) = σ0(p)^-1 · [DF^-1]_{F(p)} · σ0(F(p)),

where σ0 is the chosen frame section.  On the torus chart the frame is the
push-forward of the Euclidean frame of the universal cover, and the formula
is evaluated on a lift q of p with the lifted map f̃.  Ball and collar charts
use their Euclidean chart frame.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from . import charts as ch
from .charts import ChartMap, TorusChart
from .curve import ChartPiece, CrossingEvent, ExteriorStub, TrackedLoop, generator_loop
from .loopclass import MatrixPath, loop_class

CONTINUITY_TOL = 1e-6


class DiscontinuityError(RuntimeError):
    pass


class IncompatibleCharts(ValueError):
    pass


@dataclass(frozen=True)
class TwistVector:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) % 2 for b in self.bits)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def zero(cls, n: int) -> "TwistVector":
        return cls((0,) * n)

    @classmethod
    def unit(cls, i: int, n: int) -> "TwistVector":
        return cls(tuple(1 if k == i else 0 for k in range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "TwistVector":
        return cls(tuple(int(c) for c in text))

    def __len__(self):
        return len(self.bits)

    def __add__(self, other: "TwistVector") -> "TwistVector":
        if len(self) != len(other):
            raise ValueError("twist vectors of different lengths")
        return TwistVector(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def as_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8)

    def is_zero(self) -> bool:
        return not any(self.bits)

    def __str__(self):
        return "".join(str(b) for b in self.bits)


def frame(chart, p) -> np.ndarray:
    """σ0(p) as a matrix in chart coordinates.

    On the torus chart this is Dπ_q ∘ b_q for any lift q of p; in (x, y, θ)
    coordinates the covering projection has identity derivative, so the frame
    is the coordinate frame whatever lift is used.
    """
    return np.eye(3)


def cover_frame(q) -> np.ndarray:
    """b_q: the Euclidean frame ∂x, ∂y, ∂z of the universal cover at q."""
    return np.eye(3)


def derivative_inverse(cmap: ChartMap, p, lift_shift: int = 0) -> np.ndarray:
    """D(F)^-1(p) from the analytic inverse Jacobian at F(p)."""
    p = np.asarray(p, dtype=float)
    if cmap.kind == "F":
        q = p + np.array([0.0, 0.0, lift_shift])
        fq = ch.lift_apply(cmap, q)
        dinv = ch.lift_jacobian(cmap.inverse(), fq)
        return np.linalg.inv(cover_frame(q)) @ dinv @ cover_frame(fq)
    fp = ch.apply(cmap, p)
    dinv = ch.jacobian_analytic(cmap.inverse(), fp)
    return np.linalg.inv(frame(cmap.chart, p)) @ dinv @ frame(cmap.chart, fp)


def derivative_matrix(cmap: ChartMap, p, lift_shift: int = 0) -> np.ndarray:
    return np.linalg.inv(derivative_inverse(cmap, p, lift_shift))


class _PieceEvaluator:
    def __init__(self, cmap: ChartMap, piece: ChartPiece):
        self.cmap = cmap
        self.params = piece.params
        points = piece.points.copy()
        if isinstance(cmap.chart, TorusChart):
            # lift θ continuously so interpolation never jumps across the seam
            points[:, 2] = np.unwrap(points[:, 2], period=1.0)
        self.points = points

    def point(self, t: float) -> np.ndarray:
        k = int(np.searchsorted(self.params, t, side="right")) - 1
        k = min(max(k, 0), len(self.params) - 2)
        t0, t1 = self.params[k], self.params[k + 1]
        f = min(max((t - t0) / (t1 - t0), 0.0), 1.0)
        return (1.0 - f) * self.points[k] + f * self.points[k + 1]

    def __call__(self, t: float) -> np.ndarray:
        p = self.point(t)
        if isinstance(self.cmap.chart, TorusChart):
            shift = np.floor(p[2])
            p = p - np.array([0.0, 0.0, shift])
            return derivative_matrix(self.cmap, p, lift_shift=int(shift))
        return derivative_matrix(self.cmap, p)


def derivative_along(cmap: ChartMap, loop: TrackedLoop, samples: int = 256,
                     tol: float = CONTINUITY_TOL) -> MatrixPath:
    """The matrix loop t -> D(F)(γ(t)), identity wherever the loop is outside the support."""
    pieces = [e for e in loop.events if isinstance(e, ChartPiece) and e.chart_id == cmap.chart_id]
    evaluators = [_PieceEvaluator(cmap, e) for e in pieces]
    starts = [e.t0 for e in pieces]
    eye = np.eye(3)

    def ev(t: float) -> np.ndarray:
        k = bisect.bisect_right(starts, t) - 1
        if k >= 0 and t <= pieces[k].t1:
            return evaluators[k](t)
        return eye

    _check_continuity(loop, cmap, evaluators, pieces, tol)
    return MatrixPath(ev, samples=samples)


def _check_continuity(loop, cmap, evaluators, pieces, tol):
    by_id = {id(p): e for p, e in zip(pieces, evaluators)}
    events = loop.events

    def end_value(e, at_start: bool):
        if isinstance(e, ChartPiece) and id(e) in by_id:
            return by_id[id(e)](e.t0 if at_start else e.t1)
        return np.eye(3)

    for k, e in enumerate(events):
        if isinstance(e, CrossingEvent):
            left, right = end_value(events[k - 1], False), end_value(events[k + 1], True)
        elif isinstance(e, ChartPiece) and id(e) in by_id:
            left = right = None
            for nb, at_start in ((k - 1, True), (k + 1, False)):
                if isinstance(events[nb], ExteriorStub):
                    val = end_value(e, at_start)
                    if np.max(np.abs(val - np.eye(3))) > tol:
                        raise DiscontinuityError(f"{cmap} is not the identity where the loop leaves its chart")
            continue
        else:
            continue
        if np.max(np.abs(left - right)) > tol:
            raise DiscontinuityError(f"derivative jumps across crossing at t={e.param}")


def twisting_of(cmap: ChartMap, n: int, loop_samples: int = 512, path_samples: int = 256) -> TwistVector:
    """Bit k is the class of D(F) along the generator loop a_k."""
    bits = []
    for k in range(1, n + 1):
        loop = generator_loop(k, cmap, n, loop_samples)
        bits.append(loop_class(derivative_along(cmap, loop, samples=path_samples)))
    return TwistVector(tuple(bits))


def _supports_disjoint(a: ChartMap, b: ChartMap) -> bool:
    return a.chart_id != b.chart_id and not (a.chart.spheres & b.chart.spheres)


def cocycle_check(a: ChartMap, b: ChartMap, p) -> float:
    """Max-entry residual of D(a∘b)(p) = D(a)(b(p)) · D(b)(p); p lies in b's chart.

    On a shared chart, a∘b is the same family with powers added, so its
    derivative comes from the closed form rather than from the chain rule.
    """
    p = np.asarray(p, dtype=float)
    db = derivative_matrix(b, p)
    if a.power == 0 or _supports_disjoint(a, b):
        # a is the identity near b(p)
        lhs = db
        rhs = np.eye(3) @ db
    elif a.chart == b.chart and a.kind == b.kind and a.profile == b.profile:
        composite = a.with_power(a.power + b.power)
        lhs = derivative_matrix(composite, p)
        rhs = derivative_matrix(a, ch.apply(b, p)) @ db
    else:
        raise IncompatibleCharts(f"{a} and {b} overlap without sharing a chart")
    return float(np.max(np.abs(lhs - rhs)))
