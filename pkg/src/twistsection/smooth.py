"""Smooth step profiles: the bump ψ used by the slide and flip maps, and the
twist profile η used in sphere-twist collars.

Both are built from the classical step S(u) = s(u) / (s(u) + s(1 - u)) with
s(u) = exp(-k/u) for u > 0.  In logistic form S(u) = expit(k/(1-u) - k/u),
which avoids overflow near the endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

# beyond this |z| the logistic factor underflows and S' is exactly 0 in double precision
_Z_CUTOFF = 700.0


def smooth_step(u, steepness: float = 1.0):
    """S(u): 0 for u <= 0, 1 for u >= 1, C-infinity in between."""
    u = np.asarray(u, dtype=float)
    out = np.where(u >= 1.0, 1.0, 0.0)
    inner = (u > 0.0) & (u < 1.0)
    if np.any(inner):
        ui = u[inner]
        z = steepness / (1.0 - ui) - steepness / ui
        out[inner] = expit(z)
    return out[()] if out.ndim == 0 else out


def smooth_step_prime(u, steepness: float = 1.0):
    """dS/du = S(1 - S) * k * (1/u^2 + 1/(1-u)^2)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inner = (u > 0.0) & (u < 1.0)
    if np.any(inner):
        ui = u[inner]
        z = steepness / (1.0 - ui) - steepness / ui
        dz = steepness / (1.0 - ui) ** 2 + steepness / ui**2
        val = np.zeros_like(ui)
        ok = np.abs(z) < _Z_CUTOFF
        val[ok] = expit(z[ok]) * expit(-z[ok]) * dz[ok]
        out[inner] = val
    return out[()] if out.ndim == 0 else out


def _check_radius(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(~np.isfinite(r)):
        raise ValueError("radius must be finite and non-negative")
    return r


@dataclass(frozen=True)
class BumpProfile:
    """ψ: exactly 1 on [0, plateau_end], exactly 0 on [support_end, ∞), non-increasing."""

    plateau_end: float = 1.0 / 3.0
    support_end: float = 0.6
    steepness: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.plateau_end < self.support_end:
            raise ValueError(
                f"need 0 < plateau_end < support_end, got {self.plateau_end}, {self.support_end}"
            )
        if not self.support_end < 2.0 / 3.0:
            raise ValueError("support_end must lie strictly below 2/3")
        if self.steepness <= 0:
            raise ValueError("steepness must be positive")

    @property
    def width(self) -> float:
        return self.support_end - self.plateau_end

    def _u(self, r):
        return (self.support_end - r) / self.width

    def __call__(self, r):
        return psi(self, r)


def psi(profile: BumpProfile, r):
    r = _check_radius(r)
    val = np.asarray(smooth_step(profile._u(r), profile.steepness), dtype=float)
    # exact plateau / support even if the step rounds
    val = np.where(r <= profile.plateau_end, 1.0, np.where(r >= profile.support_end, 0.0, val))
    return val[()] if val.ndim == 0 else val


def psi_prime(profile: BumpProfile, r):
    r = _check_radius(r)
    val = -np.asarray(smooth_step_prime(profile._u(r), profile.steepness)) / profile.width
    val = np.where((r <= profile.plateau_end) | (r >= profile.support_end), 0.0, val)
    return val[()] if val.ndim == 0 else val


@dataclass(frozen=True)
class TwistProfile:
    """η on [0, 1]: 0 on [0, flat], 1 on [1 - flat, 1], smooth and increasing between.

    Used for the sphere-twist collar, which needs endpoint values 0 and 1
    (rotation by 0 and by a full turn) rather than ψ's 1 and 0.
    """

    flat: float = 0.1
    steepness: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.flat < 0.5:
            raise ValueError("flat must lie in [0, 1/2)")
        if self.steepness <= 0:
            raise ValueError("steepness must be positive")

    def _u(self, s):
        return (np.asarray(s, dtype=float) - self.flat) / (1.0 - 2.0 * self.flat)

    def __call__(self, s):
        return smooth_step(self._u(s), self.steepness)

    def prime(self, s):
        return smooth_step_prime(self._u(s), self.steepness) / (1.0 - 2.0 * self.flat)


def psi_table(profile: BumpProfile, num: int = 10_000) -> np.ndarray:
    """Rows (r, ψ(r), ψ'(r)) on a uniform grid of [0, 1]."""
    r = np.linspace(0.0, 1.0, num)
    return np.column_stack([r, psi(profile, r), psi_prime(profile, r)])
