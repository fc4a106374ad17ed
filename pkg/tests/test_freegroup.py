import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistsection import freegroup as fg
from twistsection.freegroup import Letter, NielsenGen, Word, reduce, word


def letters(n=3, max_size=12):
    return st.lists(
        st.tuples(st.integers(1, n), st.sampled_from([1, -1])).map(lambda t: Letter(*t)),
        max_size=max_size,
    )


def gens(n):
    out = fg.nielsen_generators(n)
    return out + [g.inverse() for g in out if g.kind == "R"]


def all_reduced_words(n, max_len):
    alphabet = [Letter(k, s) for k in range(1, n + 1) for s in (1, -1)]
    out = [Word()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (a,) for w in frontier for a in alphabet if not w or w[-1] != a.inverse()]
        out.extend(Word(w) for w in frontier)
    return out


def test_reduce_examples():
    assert reduce([(1, 1), (1, -1)]) == Word()
    assert reduce([(1, 1), (2, 1)]) == word(1, 2)
    assert reduce([(1, 1), (2, 1), (2, -1), (1, 1)]) == word(1, 1)


def test_reduce_rejects_out_of_range():
    with pytest.raises(ValueError):
        reduce([(4, 1)], n=3)
    with pytest.raises(ValueError):
        reduce([(0, 1)])


def test_word_rejects_unreduced():
    with pytest.raises(ValueError):
        Word(((1, 1), (1, -1)))


@given(letters())
def test_reduce_idempotent(raw):
    once = reduce(raw)
    assert reduce(once.letters) == once


def test_apply_examples():
    assert fg.apply(fg.R(1, 2), word(1)) == word(1, 2)
    assert fg.apply(fg.R(1, 2), word(3)) == word(3)
    assert fg.apply(fg.I(1), word(1)) == word(-1)
    assert fg.apply(fg.I(1), fg.apply(fg.I(1), word(1))) == word(1)


def test_apply_rank_mismatch():
    with pytest.raises(fg.RankError):
        fg.apply(fg.R(1, 2, n=2), word(3))


def test_compose_examples():
    assert fg.compose(fg.I(1), fg.I(1)).is_identity()
    assert fg.compose(fg.R(1, 2), fg.R(1, 2)).images[0] == word(1, 2, 2)
    assert fg.compose(fg.identity(3), fg.R(1, 2)) == fg.R(1, 2)
    with pytest.raises(fg.RankError):
        fg.compose(fg.I(1, 2), fg.I(1, 3))


def test_factorization_reproduces_images():
    auto = fg.compose(fg.R(1, 2), fg.compose(fg.I(3), fg.R(2, 3)))
    assert fg.from_factorization(auto.factorization, 3) == auto
    assert [str(g) for g in auto.factorization] == ["R1,2", "I3", "R2,3"]


@pytest.mark.parametrize("n", [2, 3])
def test_apply_compose_exhaustive(n):
    words = all_reduced_words(n, 4)
    for g1, g2 in itertools.product(gens(n), repeat=2):
        f, g = fg.from_generator(g1, n), fg.from_generator(g2, n)
        fg_ = fg.compose(f, g)
        for w in words:
            assert fg.apply(fg_, w) == fg.apply(f, fg.apply(g, w))


@settings(max_examples=200)
@given(st.data())
def test_apply_compose_sampled(data):
    n = data.draw(st.integers(2, 4))
    g1, g2 = data.draw(st.sampled_from(gens(n))), data.draw(st.sampled_from(gens(n)))
    w = reduce(data.draw(letters(n, 8)))
    f, g = fg.from_generator(g1, n), fg.from_generator(g2, n)
    out = fg.apply(fg.compose(f, g), w)
    assert out == fg.apply(f, fg.apply(g, w))
    # structurally reduced
    assert all(not (a.index == b.index and a.sign == -b.sign) for a, b in zip(out.letters, out.letters[1:]))


def test_abelianize_examples():
    assert np.array_equal(fg.abelianize_mod2(fg.identity(3)), np.eye(3))
    assert np.array_equal(fg.abelianize_mod2(fg.I(1)), np.eye(3))
    want = np.eye(3, dtype=np.uint8)
    want[1, 0] = 1  # a2 appears once in the image of a1
    assert np.array_equal(fg.abelianize_mod2(fg.R(1, 2)), want)


@settings(max_examples=100)
@given(st.data())
def test_abelianize_multiplicative(data):
    n = data.draw(st.integers(2, 4))
    f = fg.from_factorization(data.draw(st.lists(st.sampled_from(gens(n)), max_size=5)), n)
    g = fg.from_factorization(data.draw(st.lists(st.sampled_from(gens(n)), max_size=5)), n)
    lhs = fg.abelianize_mod2(fg.compose(f, g))
    rhs = (fg.abelianize_mod2(f).astype(int) @ fg.abelianize_mod2(g).astype(int)) % 2
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("gen", gens(4), ids=str)
def test_generators_invertible(gen):
    f = fg.from_generator(gen, 4)
    assert fg.compose(f, fg.from_generator(gen.inverse(), 4)).is_identity()
    assert fg.compose(fg.inverse(f), f).is_identity()


@given(letters(5))
def test_serialization_round_trip(raw):
    w = reduce(raw)
    assert Word.parse(str(w)) == w
    assert Word.from_compact(w.to_compact()) == w
    assert str(Word.parse(str(w))) == str(w)
    assert Word.from_compact(w.to_compact()).to_compact() == w.to_compact()


def test_serialization_forms():
    w = word(1, -2)
    assert str(w) == "a1 a2^-1"
    assert w.to_compact() == "1 -2"
    assert str(Word()) == "1" and Word().to_compact() == ""


def test_bad_generator_specs():
    with pytest.raises(ValueError):
        NielsenGen("R", 1, 1)
    with pytest.raises(ValueError):
        NielsenGen("X", 1)
    with pytest.raises(fg.RankError):
        fg.R(1, 4, n=3)
    with pytest.raises(fg.RankError):
        fg.identity(fg.MAX_RANK + 1)
