import numpy as np
import pytest

from mcgpairs.curves import b, homology_class
from mcgpairs.derivation import (
    BASE,
    SLP,
    VerificationFailed,
    build_chain,
    generator_words,
    lantern_curves,
    lantern_phi_words,
    lemma7_words,
    target_matrix,
)
from mcgpairs.fasteval import evaluate_packed
from mcgpairs.homology import SpMatrix, evaluate, evaluate_by_row_ops, twist
from mcgpairs.words import PackedWord, Word

CHAIN = ["h1", "h2", "h2^-n", "h3", "h0h3", "h4", "h4'", "h5", "h2'", "h6"]
DIFFERENCES = ["q(a6,b6)", "q(b6,c5)", "q(b6,c6)", "q(c5,c6)", "q(b5,b6)", "q(a5,a6)"]


@pytest.fixture(scope="module")
def certs_8_2():
    return generator_words(8, 2)


@pytest.mark.parametrize("g,n", [(8, 1), (9, 3), (10, 5)])
def test_chain_nodes_verified(g, n):
    s = build_chain(g, n)
    for name in CHAIN + DIFFERENCES:
        assert s[name].verified is True, name


def test_chain_needs_genus_8():
    with pytest.raises(ValueError):
        build_chain(7, 1)


def test_define_checks_references_and_claims():
    s = SLP(8, 1)
    s.define("h0", "b1 b2 a3 c5")
    with pytest.raises(ValueError):
        s.define("x", "h0 nope")
    with pytest.raises(VerificationFailed) as err:
        s.define("y", "h0", claimed="b1 b2 a3 c4")
    assert err.value.name == "y"
    with pytest.raises(ValueError):
        s.define("h0", "a1")


def test_lemma7_chain():
    s = build_chain(8, 1)
    ta, tb, tc = lemma7_words(5, 8, s)
    assert all(isinstance(w, PackedWord) for w in (ta, tb, tc))
    for name in ("phi1[5]", "phi2[5]", "q(d1[5],a5)", "q(d2[5],a5)", "q(d2[5],c5)", "tw(a7)", "tw(a5)"):
        assert s[name].verified is True, name
    for word, target in ((ta, "a5"), (tb, "b5"), (tc, "c5")):
        assert evaluate_packed(word, 8, 1) == twist(target, 8)


def test_lemma7_preconditions():
    s = build_chain(8, 1)
    with pytest.raises(ValueError):
        lemma7_words(7, 8, s)
    with pytest.raises(ValueError):
        lemma7_words(4, 8, s)  # differences at handle 4 were never built


def test_lantern_curves_fix_ak():
    g, k = 8, 5
    phi1, phi2 = (evaluate(w, g) for w in lantern_phi_words(k))
    d = lantern_curves(k, g, phi1, phi2)
    assert list(d.d1) == list(phi1 @ homology_class(b(k + 1), g))
    with pytest.raises(VerificationFailed):
        lantern_curves(k, g, evaluate("b5", g), phi2)


def test_certificates(certs_8_2):
    assert len(certs_8_2) == 3 * 8 - 1 + 1
    assert {c.target for c in certs_8_2} >= {"a1", "b8", "c7", "r"}
    assert all(c.verified and c.checks == {"slp": True, "expanded": True} for c in certs_8_2)
    assert set(certs_8_2[0].word().alphabet) == set(BASE)


def test_certificate_word_reparses(certs_8_2):
    cert = next(c for c in certs_8_2 if c.target == "b5")
    w = Word.parse(str(cert.word()))
    assert evaluate_by_row_ops(w, 8, 2) == twist("b5", 8)


def test_overflow_fallback():
    # a limit of 1 trips the guard at once, forcing the big-integer evaluator
    w = PackedWord.from_word(Word.parse("rho^3 h0^-2 rho h0"), BASE)
    assert evaluate_packed(w, 8, 2, limit=1) == evaluate_packed(w, 8, 2) == evaluate(w.to_word(), 8, 2)


def test_target_matrix():
    assert target_matrix("r", 8) == evaluate("r", 8)
    assert target_matrix("c3", 8) == twist("c3", 8)


def test_word_growth_shape():
    """Twist certificates at handle 5 grow affinely in n; the rotation's quadratically."""
    lengths = {}
    for n in range(1, 5):
        lengths[n] = {c.target: c.expanded_length for c in generator_words(8, n, second_path=False)}
    for target in ("a5", "b5", "c5", "a1"):
        seq = [lengths[n][target] for n in range(1, 5)]
        assert np.diff(seq, 2).tolist() == [0, 0], target
    rot = [lengths[n]["r"] for n in range(1, 5)]
    second = np.diff(rot, 2).tolist()
    assert second[0] == second[1] > 0
