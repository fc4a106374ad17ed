"""Based loops in M_n as event lists and the crossing-word reading of π1.

A loop is a sequence of events ordered by parameter t in [0, 1]:

* ``ExteriorStub`` -- time spent outside every chart; carries no crossings.
* ``ChartPiece`` -- a sampled polyline in one chart's coordinates.
* ``CrossingEvent`` -- an instantaneous passage through a core sphere A_k.
  Sign +1 means entering the A_k^- side and emerging from A_k^+.

The glued spheres are never embedded: a crossing is a teleport event, and
since every map is chart-supported only the local geometry at the two ends
of a crossing matters.

Orientation conventions (fixed once so that F(i, j) reads as a_i a_j):

* the loop a_i passes through A_i first and then runs radially outward in
  the torus chart N_{i,j}, from the hole (whose boundary is the A_i^+ side)
  to the outer boundary;
* the core of N_{i,j} is oriented toward decreasing θ, so a passage through
  the disk θ = 1/2 with θ decreasing is the letter a_j (``CORE_ORIENTATION``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import charts as ch
from .charts import BallChart, ChartMap, CollarChart, TorusChart, wrap_half
from .freegroup import NielsenAuto, RankError, Word, reduce

CORE_ORIENTATION = -1
DEFAULT_SAMPLES = 512
MAX_STEP = 0.05
VERTEX_MARGIN = 1e-9


class LoopError(ValueError):
    pass


class UndersampledError(LoopError):
    pass


class TransversalityError(LoopError):
    pass


@dataclass(frozen=True)
class ExteriorStub:
    t0: float
    t1: float


@dataclass(frozen=True, eq=False)
class ChartPiece:
    chart_id: str
    params: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        points = np.asarray(self.points, dtype=float)
        if points.shape != (len(params), 3) or len(params) < 2:
            raise LoopError("piece needs at least two (param, point) samples")
        if np.any(np.diff(params) <= 0):
            raise LoopError("piece params must be strictly increasing")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "points", points)

    @property
    def t0(self) -> float:
        return float(self.params[0])

    @property
    def t1(self) -> float:
        return float(self.params[-1])


@dataclass(frozen=True)
class CrossingEvent:
    param: float
    sphere_index: int
    sign: int

    @property
    def t0(self) -> float:
        return self.param

    @property
    def t1(self) -> float:
        return self.param


Event = Union[ExteriorStub, ChartPiece, CrossingEvent]


@dataclass(frozen=True, eq=False)
class TrackedLoop:
    events: tuple[Event, ...]
    marks: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        ev = tuple(self.events)
        object.__setattr__(self, "events", ev)
        if not ev or not isinstance(ev[0], ExteriorStub) or not isinstance(ev[-1], ExteriorStub):
            raise LoopError("a loop starts and ends at the basepoint, in the exterior")
        if ev[0].t0 != 0.0 or ev[-1].t1 != 1.0:
            raise LoopError("loop parameter must run over [0, 1]")
        last_cross = -np.inf
        for a, b in zip(ev, ev[1:]):
            if b.t0 < a.t1:
                raise LoopError(f"events out of order at t={b.t0}")
        for e in ev:
            if isinstance(e, CrossingEvent):
                if e.param <= last_cross:
                    raise LoopError("crossing params must be strictly increasing")
                if e.sign not in (1, -1):
                    raise LoopError("crossing sign must be +1 or -1")
                last_cross = e.param

    def crossings(self) -> list[CrossingEvent]:
        return [e for e in self.events if isinstance(e, CrossingEvent)]

    def pieces(self) -> list[ChartPiece]:
        return [e for e in self.events if isinstance(e, ChartPiece)]


def _plain_loop(k: int) -> TrackedLoop:
    return TrackedLoop((ExteriorStub(0.0, 0.5), CrossingEvent(0.5, k, 1), ExteriorStub(0.5, 1.0)))


def _radial_loop(chart_id: str, k: int, start, end, samples: int) -> TrackedLoop:
    s = np.linspace(0.0, 1.0, samples)
    points = np.outer(1.0 - s, start) + np.outer(s, end)
    piece = ChartPiece(chart_id, 0.25 + 0.5 * s, points)
    return TrackedLoop((ExteriorStub(0.0, 0.25), CrossingEvent(0.25, k, 1), piece, ExteriorStub(0.75, 1.0)))


def _segment(a, b, num: int, include_start: bool = True) -> np.ndarray:
    s = np.linspace(0.0, 1.0, num)
    if not include_start:
        s = s[1:]
    return np.outer(1.0 - s, a) + np.outer(s, b)


def _flip_loop(chart: BallChart, samples: int) -> TrackedLoop:
    """a_j through P_j as γ1 * γ2 * γ3: down the z-axis, through the sphere, back up."""
    top = np.array([0.0, 0.0, 1.0])
    gate = np.array([0.0, 0.0, ch.INNER_RADIUS])
    minus, plus = chart.removed_balls
    cm, cp = np.array(minus.center), np.array(plus.center)
    enter = cm + minus.radius * (gate - cm) / np.linalg.norm(gate - cm)
    leave = cp + plus.radius * (gate - cp) / np.linalg.norm(gate - cp)

    half = max(samples // 2, 2)
    g1 = _segment(top, gate, half)
    g2a = _segment(gate, enter, half, include_start=False)
    g2b = _segment(leave, gate, half)
    g3 = _segment(gate, top, half, include_start=False)
    u = np.linspace(0.0, 1.0, half)
    t1 = 0.05 + 0.30 * u
    t2a = 0.35 + 0.15 * u[1:]
    t2b = 0.50 + 0.15 * u
    t3 = 0.65 + 0.30 * u[1:]
    piece_a = ChartPiece(chart.chart_id, np.concatenate([t1, t2a]), np.vstack([g1, g2a]))
    piece_b = ChartPiece(chart.chart_id, np.concatenate([t2b, t3]), np.vstack([g2b, g3]))
    marks = {"gamma1": (0.05, 0.35), "gamma2": (0.35, 0.65), "gamma3": (0.65, 0.95)}
    return TrackedLoop(
        (ExteriorStub(0.0, 0.05), piece_a, CrossingEvent(0.5, chart.j, 1), piece_b, ExteriorStub(0.95, 1.0)),
        marks,
    )


def generator_loop(k: int, cmap: ChartMap, n: int, samples: int = DEFAULT_SAMPLES) -> TrackedLoop:
    """The standard representative of a_k relative to the chart layout of ``cmap``."""
    if not 1 <= k <= n:
        raise RankError(f"generator index {k} out of range for rank {n}")
    if max(cmap.indices()) > n:
        raise RankError(f"{cmap} does not live in rank {n}")
    chart = cmap.chart
    if isinstance(chart, TorusChart) and k == chart.i:
        start = np.array([chart.hole_radius, 0.0, 0.0])
        return _radial_loop(chart.chart_id, k, start, np.array([1.0, 0.0, 0.0]), samples)
    if isinstance(chart, BallChart) and k == chart.j:
        return _flip_loop(chart, samples)
    if isinstance(chart, CollarChart) and k == chart.i:
        return _radial_loop(chart.chart_id, k, np.array([chart.inner, 0.0, 0.0]),
                            np.array([chart.outer, 0.0, 0.0]), samples)
    return _plain_loop(k)


def _split_at_core_crossings(chart: TorusChart, params, points):
    """Split an image polyline at passages through θ = crossing level."""
    level = chart.crossing_level
    off = wrap_half(points[:, 2] - level)
    if np.any(np.abs(off) < VERTEX_MARGIN):
        raise TransversalityError("polyline vertex on the crossing disk; re-sample")
    out: list[Event] = []
    cur_params, cur_points = [params[0]], [points[0]]
    for k in range(len(params) - 1):
        d = float(wrap_half(points[k + 1, 2] - points[k, 2]))
        a = float(wrap_half(level - points[k, 2]))
        hit = (d > 0 and 0 < a <= d) or (d < 0 and d <= a < 0)
        if hit:
            f = a / d
            tc = params[k] + f * (params[k + 1] - params[k])
            if min(tc - params[k], params[k + 1] - tc) < VERTEX_MARGIN:
                raise TransversalityError("crossing too close to a vertex; re-sample")
            pc = points[k] + f * (points[k + 1] - points[k])
            pc[2] = level
            cur_params.append(tc)
            cur_points.append(pc)
            out.append(ChartPiece(chart.chart_id, np.array(cur_params), np.array(cur_points)))
            out.append(CrossingEvent(tc, chart.j, CORE_ORIENTATION * (1 if d > 0 else -1)))
            cur_params, cur_points = [tc], [pc]
        cur_params.append(params[k + 1])
        cur_points.append(points[k + 1])
    out.append(ChartPiece(chart.chart_id, np.array(cur_params), np.array(cur_points)))
    return out


def _side_of(chart, point, sphere: int):
    ball = chart.which_sphere(point)
    if ball is None or ball.sphere != sphere:
        return None
    return ball.side


def image_under(cmap: ChartMap, loop: TrackedLoop, max_step: float = MAX_STEP) -> TrackedLoop:
    """Push a loop forward by ``cmap``; relabel crossings and insert new ones."""
    chart = cmap.chart
    mapped: dict[int, list[Event]] = {}
    for idx, e in enumerate(loop.events):
        if not isinstance(e, ChartPiece) or e.chart_id != chart.chart_id:
            continue
        img = ch.apply(cmap, e.points)
        steps = np.linalg.norm(chart.difference(img[1:], img[:-1]), axis=-1)
        if np.any(steps >= max_step):
            raise UndersampledError(f"image step {steps.max():.3g} >= {max_step}; re-sample denser")
        if isinstance(chart, TorusChart):
            mapped[idx] = _split_at_core_crossings(chart, e.params, img)
        else:
            mapped[idx] = [ChartPiece(e.chart_id, e.params, img)]

    events: list[Event] = []
    for idx, e in enumerate(loop.events):
        if idx in mapped:
            events.extend(mapped[idx])
        elif isinstance(e, CrossingEvent):
            events.append(_relabel(cmap, loop, idx, mapped))
        else:
            events.append(e)
    return TrackedLoop(tuple(events), dict(loop.marks))


def _relabel(cmap: ChartMap, loop: TrackedLoop, idx: int, mapped) -> CrossingEvent:
    e = loop.events[idx]
    chart = cmap.chart
    # side labels before the map: the pre side is A^- for sign +1
    pre_side, post_side = -e.sign, e.sign
    for nb, take_last in ((idx - 1, True), (idx + 1, False)):
        other = loop.events[nb]
        if not isinstance(other, ChartPiece) or other.chart_id != chart.chart_id:
            continue
        point = other.points[-1] if take_last else other.points[0]
        before = _side_of(chart, point, e.sphere_index)
        expected = pre_side if take_last else post_side
        if before is None or before != expected:
            raise LoopError(f"crossing at t={e.param} does not sit on the {e.sphere_index} sphere")
        piece = mapped[nb][-1] if take_last else mapped[nb][0]
        img_point = piece.points[-1] if take_last else piece.points[0]
        after = _side_of(chart, img_point, e.sphere_index)
        if after is None:
            raise LoopError("map moved a crossing endpoint off the core sphere")
        if take_last:
            pre_side = after
        else:
            post_side = after
    if pre_side == post_side:
        raise LoopError("crossing enters and leaves through the same side")
    return CrossingEvent(e.param, e.sphere_index, -pre_side)


def read_word(loop: TrackedLoop) -> Word:
    return reduce((c.sphere_index, c.sign) for c in loop.crossings())


def traced_image(cmap: ChartMap, k: int, n: int, samples: int = DEFAULT_SAMPLES,
                 max_doublings: int = 6) -> TrackedLoop:
    """Image of a_k, re-sampling on undersampling or transversality failures."""
    for _ in range(max_doublings + 1):
        loop = generator_loop(k, cmap, n, samples)
        try:
            return image_under(cmap, loop)
        except UndersampledError:
            samples *= 2
        except TransversalityError:
            samples = 2 * samples + 1
    raise UndersampledError(f"could not resolve image of a{k} under {cmap}")


def rho_of(cmap: ChartMap, n: int, samples: int = DEFAULT_SAMPLES) -> NielsenAuto:
    """The automorphism of π1 induced by ``cmap``, read off crossing words."""
    images = tuple(read_word(traced_image(cmap, k, n, samples)) for k in range(1, n + 1))
    return NielsenAuto(n, images)


def loop_to_json(loop: TrackedLoop, with_points: bool = False) -> str:
    rows = []
    for e in loop.events:
        if isinstance(e, ExteriorStub):
            rows.append({"type": "exterior", "t0": e.t0, "t1": e.t1})
        elif isinstance(e, CrossingEvent):
            letter = f"a{e.sphere_index}" + ("" if e.sign > 0 else "^-1")
            rows.append({"type": "crossing", "t": e.param, "sphere": e.sphere_index,
                         "sign": e.sign, "letter": letter})
        else:
            row = {"type": "chart", "chart": e.chart_id, "t0": e.t0, "t1": e.t1,
                   "samples": len(e.params)}
            if with_points:
                row["points"] = e.points.tolist()
            rows.append(row)
    return json.dumps({"events": rows, "marks": loop.marks, "word": str(read_word(loop))}, indent=2)
