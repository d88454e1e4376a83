import numpy as np
import pytest
from hypothesis import given, strategies as st

from mcgpairs.nielsen import all_moves, apply_move, apply_moves
from mcgpairs.sl2 import (
    EXTENDED,
    AmalgamNormalForm,
    Generation,
    I,
    Mat2,
    NotUnimodular,
    T,
    X,
    Y,
    Z,
    decompose,
    enumerate_torsion_pairs,
    evaluate_pair_word,
    is_generating,
    nielsen_class_bounds,
    nielsen_reduce,
    random_generating_pair,
    recompose,
    syllable_length,
)

GENS = [X, Y, X.inverse(), Y.inverse()]
elements = st.lists(st.integers(0, 3), max_size=30).map(
    lambda ks: __import__("functools").reduce(lambda M, k: M * GENS[k], ks, I))


def test_realizations():
    assert X * X == Z and Y ** 3 == Z
    assert X ** 4 == I and Y ** 6 == I
    assert X.inverse() * Y == T == Mat2(1, 1, 0, 1)


def test_decompose_examples():
    assert decompose(X) == AmalgamNormalForm(0, ("x",))
    assert decompose(Z) == AmalgamNormalForm(1, ())
    nf = decompose(X.inverse() * Y)
    assert recompose(nf) == T
    assert nf.syllables == ("x", "y")
    assert decompose(I).syllable_length == 0


def test_non_unimodular():
    with pytest.raises(NotUnimodular):
        Mat2(2, 1, 1, 2)
    with pytest.raises(NotUnimodular):
        decompose((1, 2, 3, 4))


def test_normal_form_validation():
    with pytest.raises(ValueError):
        AmalgamNormalForm(0, ("y", "y2"))
    with pytest.raises(ValueError):
        AmalgamNormalForm(2, ())


@given(elements)
def test_round_trip(M):
    nf = decompose(M)
    assert recompose(nf) == M
    assert all((s == "x") != (t == "x") for s, t in zip(nf.syllables, nf.syllables[1:]))


@given(elements, elements)
def test_homomorphism(M, N):
    assert recompose(decompose(M)) * recompose(decompose(N)) == recompose(decompose(M * N))


@given(elements, elements, st.sampled_from(all_moves(2)))
def test_move_changes_length_boundedly(M, N, mv):
    before = (syllable_length(M), syllable_length(N))
    after = tuple(syllable_length(A) for A in apply_move((M, N), mv))
    if mv.kind.name == "SWAP":
        assert after == before[::-1]
    elif mv.kind.name == "INVERT":
        assert after == before
    else:
        i, j = mv.i - 1, mv.j - 1
        assert abs(after[i] - before[i]) <= before[j]
        assert after[j] == before[j]


def test_reduce_examples():
    res = nielsen_reduce((X, Y))
    assert res.pair == (X, Y) and res.log == [] and res.canonical
    res = nielsen_reduce((X * Y, Y))
    assert res.pair == (X, Y)
    assert [str(m) for m in res.log] == ["RightMultiplyInverse(1,2)"]


def test_reduce_log_replays(rng):
    for _ in range(30):
        pair, _, _ = random_generating_pair(rng)
        res = nielsen_reduce(pair)
        assert apply_moves(pair, res.elementary_moves()) == res.pair
        assert res.canonical and not res.exhausted


def test_reduce_flags_exhaustion():
    # each entry has an even number of x syllables, so the pair lies in the index-2
    # kernel of PSL(2, Z) -> Z_2 and cannot reach a canonical pair
    pair = (Mat2(1, 1, 1, 2), Y)
    res = nielsen_reduce(pair)
    assert res.exhausted and not res.canonical
    assert max(res.lengths()) > 1


def test_extended_moves_match_definition():
    A, B = Mat2(2, 1, 1, 1), Y
    for mv in EXTENDED:
        out = apply_moves((A, B), mv.elementary())
        src = (A, B)
        i, j = mv.i - 1, mv.j - 1
        factor = src[j] if mv.e == 1 else src[j].inverse()
        expected = list(src)
        expected[i] = src[i] * factor if mv.side == "right" else factor * src[i]
        assert out == tuple(expected), str(mv)


def test_is_generating_examples():
    res = is_generating((X, Y))
    assert res.status is Generation.YES
    for name, target in (("x", X), ("T", T)):
        assert evaluate_pair_word(res.certificates[name], (X, Y)) == target
    assert is_generating((Z, Y)).status is Generation.UNKNOWN
    assert is_generating((X, Y * Y)).status is Generation.YES


def test_torsion_table():
    rows = enumerate_torsion_pairs()
    assert len(rows) == 24
    gen = {(r.a, r.b) for r in rows if r.generating}
    assert gen == {(a, b) for a in (1, 3) for b in (1, 2, 4, 5)}
    assert all(not r.generating for r in rows if r.a == 2)
    assert all(r.reason for r in rows if not r.generating)


def test_class_bounds():
    bounds = nielsen_class_bounds()
    assert 1 <= bounds.lower <= bounds.upper
