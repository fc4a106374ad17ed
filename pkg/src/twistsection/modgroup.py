"""Split-extension model Mod(M_n) = (Z/2)^n ⋊ Out(F_n) and the section s.

A mapping class is stored as a pair (t, φ) standing for T_t · s(φ), where T_t
is the product of sphere twists recorded by the bits of t.  Conjugation by a
lift of φ moves the twist vector by the contragredient of φ's mod-2
abelianization,

    act(φ) = (A(φ)^-1)^T   over Z/2,

which is the action forced by the chain-rule cocycle
T(f∘g) = T(f)∘g_* + T(g) once twist vectors are read as homomorphisms
π1 -> Z/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import freegroup as fg
from .charts import ChartMap, flip, slide
from .crosshom import TwistVector, twisting_of
from .curve import rho_of
from .freegroup import NielsenAuto, NielsenGen, RankError
from .smooth import BumpProfile


def gf2_inverse(mat: np.ndarray) -> np.ndarray:
    """Inverse over Z/2 by Gauss-Jordan elimination."""
    m = np.asarray(mat, dtype=np.uint8) % 2
    n = m.shape[0]
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if len(pivots) == 0:
            raise ValueError("matrix is singular over Z/2")
        piv = col + pivots[0]
        aug[[col, piv]] = aug[[piv, col]]
        for row in range(n):
            if row != col and aug[row, col]:
                aug[row] ^= aug[col]
    return aug[:, n:]


def twist_action(auto: NielsenAuto) -> np.ndarray:
    return gf2_inverse(fg.abelianize_mod2(auto)).T.copy()


def _act(auto: NielsenAuto, t: TwistVector) -> TwistVector:
    return TwistVector(tuple((twist_action(auto).astype(int) @ t.as_array().astype(int)) % 2))


@dataclass(frozen=True)
class MappingClass:
    twist: TwistVector
    auto: NielsenAuto

    def __post_init__(self):
        if len(self.twist) != self.auto.rank:
            raise RankError("twist length must equal the rank")

    @property
    def rank(self) -> int:
        return self.auto.rank

    def __mul__(self, other: "MappingClass") -> "MappingClass":
        return multiply(self, other)

    def __str__(self):
        return f"twist={self.twist} ; {self.auto}"


def identity_class(n: int) -> MappingClass:
    return MappingClass(TwistVector.zero(n), fg.identity(n))


def twist_class(i: int, n: int) -> MappingClass:
    return MappingClass(TwistVector.unit(i, n), fg.identity(n))


def multiply(a: MappingClass, b: MappingClass) -> MappingClass:
    if a.rank != b.rank:
        raise RankError(f"rank mismatch {a.rank} != {b.rank}")
    return MappingClass(a.twist + _act(a.auto, b.twist), fg.compose(a.auto, b.auto))


def inverse(mc: MappingClass) -> MappingClass:
    inv_auto = fg.inverse(mc.auto)
    return MappingClass(_act(inv_auto, mc.twist), inv_auto)


def section(auto: NielsenAuto) -> MappingClass:
    """s(φ) = (0, φ): every Nielsen generator has a lift with vanishing twisting."""
    return MappingClass(TwistVector.zero(auto.rank), auto)


def project(mc: MappingClass) -> NielsenAuto:
    return mc.auto


def lift_of(gen: NielsenGen, profile: BumpProfile | None = None) -> ChartMap:
    """The chart diffeomorphism realizing a Nielsen generator."""
    if gen.kind == "R":
        return slide(gen.i, gen.j, profile).with_power(gen.exponent)
    return flip(gen.i, profile)


def geometric_class(cmap: ChartMap, n: int, **kw) -> MappingClass:
    """(t, φ) of a chart map from its computed action on π1 and its twisting.

    T(T_t s(φ)) = t∘φ_*, so the twist bits are recovered as act(φ) applied to
    the twisting vector.
    """
    auto = rho_of(cmap, n)
    tau = twisting_of(cmap, n, **kw)
    return MappingClass(_act(auto, tau), auto)


def section_via_lift(cmap: ChartMap, n: int, **kw) -> MappingClass:
    """T([f^-1]) · [f], which is s(ρ(f)) for any lift f."""
    correction = MappingClass(twisting_of(cmap.inverse(), n, **kw), fg.identity(n))
    return multiply(correction, geometric_class(cmap, n, **kw))


def random_generator_word(rng: np.random.Generator, n: int, length: int) -> list[NielsenGen]:
    gens = fg.nielsen_generators(n)
    gens = gens + [g.inverse() for g in gens if g.kind == "R"]
    return [gens[k] for k in rng.integers(0, len(gens), size=length)]
