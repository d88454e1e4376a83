import numpy as np
import pytest
from hypothesis import given, strategies as st

from mcgpairs.words import PackedWord, Word, commutator, conjugate

letters = st.lists(st.tuples(st.sampled_from(["a1", "b2", "h0", "rho"]),
                             st.integers(-3, 3).filter(bool)), max_size=12)


def test_parse_and_print():
    w = Word.parse("b1 b2 a3^-2 c5^3")
    assert w.letters == (("b1", 1), ("b2", 1), ("a3", -2), ("c5", 3))
    assert str(w) == "b1 b2 a3^-2 c5^3"
    assert w.length() == 7


def test_merging_and_cancellation():
    assert Word.parse("a1 a1^2 b1 b1^-1 a1^-3") == Word()
    assert Word.parse("a1 b1") * Word.parse("b1^-1 a1^-1") == Word()


@pytest.mark.parametrize("bad", ["a1^", "^2", "a1^x", "1a"])
def test_malformed(bad):
    with pytest.raises(ValueError):
        Word.parse(bad)


@given(letters, letters)
def test_group_laws(x, y):
    u, v = Word(tuple(x)), Word(tuple(y))
    assert u * u.inverse() == Word()
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert Word(tuple(x) + tuple(y)) == u * v


@given(letters, st.integers(-4, 4))
def test_power(x, k):
    u = Word(tuple(x))
    expected = Word()
    for _ in range(abs(k)):
        expected = expected * (u if k > 0 else u.inverse())
    assert u ** k == expected


def test_commutator_and_conjugate():
    x, y = Word.parse("h0"), Word.parse("rho")
    assert str(commutator(x, y)) == "h0 rho h0^-1 rho^-1"
    assert str(conjugate(y, x)) == "rho h0 rho^-1"


@given(letters, letters, st.integers(-3, 3))
def test_packed_matches_word(x, y, k):
    alpha = ("a1", "b2", "h0", "rho")
    u, v = Word(tuple(x)), Word(tuple(y))
    pu, pv = PackedWord.from_word(u, alpha), PackedWord.from_word(v, alpha)
    assert (pu * pv).to_word() == u * v
    assert (pu ** k).to_word() == u ** k
    assert pu.inverse().to_word() == u.inverse()
    assert (pu * pv).length() == (u * v).length()
    assert str(pu) == str(u)


def test_packed_chunks_join():
    w = PackedWord(("h0", "rho"), np.array([0, 1] * 50), np.array([1, -2] * 50))
    assert " ".join(w.chunks(7)) == str(w)


def test_packed_alphabet_mismatch():
    with pytest.raises(ValueError):
        PackedWord(("h0",)) * PackedWord(("rho",))
    with pytest.raises(ValueError):
        PackedWord.from_word(Word.parse("a1"), ("h0", "rho"))
