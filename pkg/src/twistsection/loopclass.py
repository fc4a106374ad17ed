"""Z/2 homotopy class of loops in GL+(3, R) based at the identity.

Each sample is retracted to SO(3) by its orthogonal polar factor, converted
to a unit quaternion, and the quaternions are chained with sign continuity.
A loop is contractible exactly when the lifted path closes up in S^3; it
represents the generator when it ends at the antipode of its start.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Matrix = np.ndarray


class LoopClassError(RuntimeError):
    pass


class RefinementExhausted(LoopClassError):
    pass


class NotALoop(LoopClassError):
    pass


class PolarConvergenceError(LoopClassError):
    pass


@dataclass(frozen=True)
class MatrixPath:
    evaluator: Callable[[float], Matrix]
    samples: int = 256
    refinement_budget: int = 16

    def __call__(self, t: float) -> Matrix:
        return np.asarray(self.evaluator(float(t)), dtype=float)

    def with_samples(self, samples: int) -> "MatrixPath":
        return MatrixPath(self.evaluator, samples, self.refinement_budget)


def constant_path(m: Matrix | None = None, **kw) -> MatrixPath:
    m = np.eye(3) if m is None else np.asarray(m, dtype=float)
    return MatrixPath(lambda t: m, **kw)


def full_turn(**kw) -> MatrixPath:
    """t -> rotation by 2πt about the z-axis, the generator of π1(SO(3))."""

    def ev(t):
        c, s = np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    return MatrixPath(ev, **kw)


def concatenate(first: MatrixPath, second: MatrixPath) -> MatrixPath:
    def ev(t):
        return first(2 * t) if t <= 0.5 else second(2 * t - 1)

    return MatrixPath(ev, max(first.samples, second.samples), first.refinement_budget)


def reverse(path: MatrixPath) -> MatrixPath:
    return MatrixPath(lambda t: path(1.0 - t), path.samples, path.refinement_budget)


def reparametrize(path: MatrixPath, phi: Callable[[float], float]) -> MatrixPath:
    return MatrixPath(lambda t: path(phi(t)), path.samples, path.refinement_budget)


def polar_rotation(m: Matrix, tol: float = 1e-12, max_iter: int = 100) -> Matrix:
    """Orthogonal factor Q of m = Q S by the averaging iteration X <- (X + X^-T) / 2."""
    x = np.asarray(m, dtype=float)
    if x.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    if not np.linalg.det(x) > 0:
        raise ValueError(f"polar retraction needs det > 0, got {np.linalg.det(x)}")
    eye = np.eye(3)
    for _ in range(max_iter):
        if np.max(np.abs(x.T @ x - eye)) < tol:
            return x
        x = 0.5 * (x + np.linalg.inv(x).T)
    raise PolarConvergenceError("polar iteration did not converge")


def _canonical_sign(q: np.ndarray) -> np.ndarray:
    # w >= 0, then first nonzero component >= 0
    for comp in q:
        if abs(comp) > 1e-15:
            return q if comp > 0 else -q
    return q


def to_quaternion(q_prev: np.ndarray | None, r: Matrix) -> np.ndarray:
    """Unit quaternion (w, x, y, z) of a rotation matrix by Shepperd's method.

    Of the two antipodal choices the one closer to ``q_prev`` is returned;
    without ``q_prev`` the canonical sign is used.
    """
    r = np.asarray(r, dtype=float)
    if np.max(np.abs(r.T @ r - np.eye(3))) > 1e-8 or np.linalg.det(r) <= 0:
        raise ValueError("input is not a rotation matrix")
    tr = np.trace(r)
    cands = np.array([tr, r[0, 0], r[1, 1], r[2, 2]])
    k = int(np.argmax(cands))
    denom_sq = 1.0 + 2.0 * cands[k] - tr
    if denom_sq < 1e-6:
        raise ValueError("degenerate quaternion extraction")
    s = 2.0 * np.sqrt(denom_sq)
    if k == 0:
        q = [s / 4, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s]
    elif k == 1:
        q = [(r[2, 1] - r[1, 2]) / s, s / 4, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s]
    elif k == 2:
        q = [(r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, s / 4, (r[1, 2] + r[2, 1]) / s]
    else:
        q = [(r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, s / 4]
    q = np.asarray(q)
    q /= np.linalg.norm(q)
    if q_prev is None:
        return _canonical_sign(q)
    return q if np.dot(q, q_prev) >= 0 else -q


def quaternion_to_matrix(q: np.ndarray) -> Matrix:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


@dataclass
class Lift:
    ts: np.ndarray
    matrices: np.ndarray
    quaternions: np.ndarray


def lift_path(path: MatrixPath, continuity: float = 0.5) -> Lift:
    """Sample, retract and lift ``path`` to S^3, bisecting unresolved steps."""
    ts: list[float] = []
    mats: list[Matrix] = []
    quats: list[np.ndarray] = []

    def sample(t):
        m = path(t)
        if not np.linalg.det(m) > 0:
            raise LoopClassError(f"determinant <= 0 at t={t}")
        return m

    def push(t, m, q):
        ts.append(t)
        mats.append(m)
        quats.append(q)

    def step(t0, q0, t1, depth):
        m1 = sample(t1)
        q1 = to_quaternion(q0, polar_rotation(m1))
        if np.dot(q0, q1) >= continuity:
            push(t1, m1, q1)
            return q1
        if depth >= path.refinement_budget:
            raise RefinementExhausted(f"path unresolved near t={t0:.6g} after {depth} bisections")
        mid = 0.5 * (t0 + t1)
        qm = step(t0, q0, mid, depth + 1)
        return step(mid, qm, t1, depth + 1)

    grid = np.linspace(0.0, 1.0, path.samples)
    m0 = sample(grid[0])
    q = to_quaternion(None, polar_rotation(m0))
    push(grid[0], m0, q)
    for t0, t1 in zip(grid[:-1], grid[1:]):
        q = step(t0, q, t1, 0)
    return Lift(np.array(ts), np.array(mats), np.array(quats))


def loop_class(path: MatrixPath, closure_tol: float = 1e-6, continuity: float = 0.5) -> int:
    """0 if the loop is contractible in GL+(3, R), 1 if it represents the generator."""
    lift = lift_path(path, continuity)
    for end in (lift.matrices[0], lift.matrices[-1]):
        if np.max(np.abs(end - np.eye(3))) > 1e-9:
            raise NotALoop("matrix path is not based at the identity")
    q0, q1 = lift.quaternions[0], lift.quaternions[-1]
    if np.linalg.norm(q1 - q0) <= closure_tol:
        return 0
    if np.linalg.norm(q1 + q0) <= closure_tol:
        return 1
    raise NotALoop("lift ends near neither the start nor its antipode")
