"""Words in the free group F_n and the Nielsen automorphisms acting on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

DEFAULT_RANK = 3
MAX_RANK = 8


class RankError(ValueError):
    pass


class Letter(NamedTuple):
    index: int
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.index, -self.sign)


def _check_letter(letter: Letter, n: int | None) -> None:
    if letter.sign not in (1, -1):
        raise ValueError(f"letter sign must be +1 or -1, got {letter.sign}")
    if letter.index < 1 or (n is not None and letter.index > n):
        raise ValueError(f"generator index {letter.index} out of range for rank {n}")


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple(Letter(*l) for l in self.letters)
        object.__setattr__(self, "letters", letters)
        for a, b in zip(letters, letters[1:]):
            if a.index == b.index and a.sign == -b.sign:
                raise ValueError(f"word is not freely reduced at {a}{b}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)))

    def max_index(self) -> int:
        return max((l.index for l in self.letters), default=0)

    def exponent_sum(self, k: int) -> int:
        return sum(l.sign for l in self.letters if l.index == k)

    # text form "a1 a2^-1", compact form "1 -2"; the empty word is "1" / ""
    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"a{l.index}" if l.sign > 0 else f"a{l.index}^-1" for l in self.letters)

    def to_compact(self) -> str:
        return " ".join(str(l.index * l.sign) for l in self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters = []
        for tok in text.split():
            if not tok.startswith("a"):
                raise ValueError(f"bad letter token {tok!r}")
            body, _, exp = tok[1:].partition("^")
            if exp not in ("", "-1"):
                raise ValueError(f"bad exponent in {tok!r}")
            letters.append(Letter(int(body), -1 if exp else 1))
        return cls(tuple(letters))

    @classmethod
    def from_compact(cls, text: str) -> "Word":
        ints = [int(tok) for tok in text.split()]
        if any(v == 0 for v in ints):
            raise ValueError("compact form cannot contain 0")
        return cls(tuple(Letter(abs(v), 1 if v > 0 else -1) for v in ints))


def word(*ints: int) -> Word:
    """Build a reduced word from signed generator indices, e.g. ``word(1, -2)``."""
    return reduce(Letter(abs(v), 1 if v > 0 else -1) for v in ints)


def reduce(raw: Iterable[Letter | tuple[int, int]], n: int | None = None) -> Word:
    """Freely reduce a letter sequence with a stack."""
    stack: list[Letter] = []
    for item in raw:
        letter = Letter(*item)
        _check_letter(letter, n)
        if stack and stack[-1].index == letter.index and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    return Word(tuple(stack))


@dataclass(frozen=True)
class NielsenGen:
    """A tagged Nielsen generator: ``R`` (a_i -> a_i a_j) or ``I`` (a_j -> a_j^-1)."""

    kind: str
    i: int
    j: int | None = None
    exponent: int = 1

    def __post_init__(self):
        if self.kind == "R":
            if self.j is None or self.i == self.j:
                raise ValueError("R needs two distinct indices")
        elif self.kind == "I":
            if self.j is not None:
                raise ValueError("I takes a single index")
        else:
            raise ValueError(f"unknown Nielsen generator kind {self.kind!r}")
        if self.exponent not in (1, -1):
            raise ValueError("exponent must be +1 or -1")

    def inverse(self) -> "NielsenGen":
        if self.kind == "I":
            return self
        return NielsenGen("R", self.i, self.j, -self.exponent)

    def images(self, n: int) -> tuple[Word, ...]:
        imgs = [word(k) for k in range(1, n + 1)]
        if self.kind == "R":
            imgs[self.i - 1] = word(self.i, self.exponent * self.j)
        else:
            imgs[self.i - 1] = word(-self.i)
        return tuple(imgs)

    def indices(self) -> tuple[int, ...]:
        return (self.i,) if self.j is None else (self.i, self.j)

    def __str__(self):
        if self.kind == "I":
            return f"I{self.i}"
        return f"R{self.i},{self.j}" + ("^-1" if self.exponent < 0 else "")


@dataclass(frozen=True, eq=False)
class NielsenAuto:
    """Automorphism of F_n stored by generator images plus a Nielsen factorization.

    Equality and hashing use the images only; the factorization is carried
    along so that group-level code can lift each factor separately.
    """

    rank: int
    images: tuple[Word, ...]
    factorization: tuple[NielsenGen, ...] = field(default=())

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise RankError(f"rank {self.rank} outside 1..{MAX_RANK}")
        if len(self.images) != self.rank:
            raise RankError("need one image per generator")
        for w in self.images:
            if w.max_index() > self.rank:
                raise RankError(f"image {w} uses a generator beyond rank {self.rank}")

    def __eq__(self, other):
        if not isinstance(other, NielsenAuto):
            return NotImplemented
        return self.rank == other.rank and self.images == other.images

    def __hash__(self):
        return hash((self.rank, self.images))

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __str__(self):
        return ", ".join(f"a{k}↦{''.join(str(w).split())}" for k, w in enumerate(self.images, 1))

    def is_identity(self) -> bool:
        return self.images == identity(self.rank).images


def identity(n: int = DEFAULT_RANK) -> NielsenAuto:
    return NielsenAuto(n, tuple(word(k) for k in range(1, n + 1)))


def from_generator(g: NielsenGen, n: int = DEFAULT_RANK) -> NielsenAuto:
    for k in g.indices():
        if not 1 <= k <= n:
            raise RankError(f"index {k} out of range for rank {n}")
    return NielsenAuto(n, g.images(n), (g,))


def R(i: int, j: int, n: int = DEFAULT_RANK) -> NielsenAuto:
    return from_generator(NielsenGen("R", i, j), n)


def I(j: int, n: int = DEFAULT_RANK) -> NielsenAuto:
    return from_generator(NielsenGen("I", j), n)


def apply(auto: NielsenAuto, w: Word) -> Word:
    if w.max_index() > auto.rank:
        raise RankError(f"word {w} has generators beyond rank {auto.rank}")
    out: list[Letter] = []
    for letter in w:
        img = auto.images[letter.index - 1]
        out.extend(img.letters if letter.sign > 0 else img.inverse().letters)
    return reduce(out)


def compose(outer: NielsenAuto, inner: NielsenAuto) -> NielsenAuto:
    """``outer ∘ inner``: first apply ``inner``, then ``outer``."""
    if outer.rank != inner.rank:
        raise RankError(f"rank mismatch {outer.rank} != {inner.rank}")
    images = tuple(apply(outer, w) for w in inner.images)
    return NielsenAuto(outer.rank, images, outer.factorization + inner.factorization)


def from_factorization(gens: Sequence[NielsenGen], n: int = DEFAULT_RANK) -> NielsenAuto:
    result = identity(n)
    for g in gens:
        result = compose(result, from_generator(g, n))
    return result


def inverse(auto: NielsenAuto) -> NielsenAuto:
    """Inverse through the factorization; the result is checked against the images."""
    inv = from_factorization([g.inverse() for g in reversed(auto.factorization)], auto.rank)
    if not compose(auto, inv).is_identity():
        raise ValueError("factorization does not reproduce the images; cannot invert")
    return inv


def abelianize_mod2(auto: NielsenAuto) -> np.ndarray:
    """Column c holds the exponent parities of the image of a_c."""
    n = auto.rank
    mat = np.zeros((n, n), dtype=np.uint8)
    for c, img in enumerate(auto.images):
        for r in range(n):
            mat[r, c] = img.exponent_sum(r + 1) % 2
    return mat


def nielsen_generators(n: int) -> list[NielsenGen]:
    gens = [NielsenGen("R", i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens += [NielsenGen("I", j) for j in range(1, n + 1)]
    return gens
