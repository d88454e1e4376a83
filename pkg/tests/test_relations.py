import numpy as np
import pytest

from mcgpairs.relations import commutation_and_braid, lantern, relation_suite, rotation


@pytest.mark.parametrize("g", [2, 3, 5, 8])
def test_suite_passes(g):
    results = relation_suite(g, np.random.default_rng(g), conjugation_samples=20)
    assert results and all(r.passed for r in results)


def test_genus_two_has_no_lantern():
    assert lantern(2) == []
    assert len(lantern(8)) == 6


def test_genus_one_rejected():
    with pytest.raises(ValueError):
        relation_suite(1)


def test_family_counts():
    g = 4
    rs = commutation_and_braid(g)
    braids = [r for r in rs if r.family == "braid"]
    # a_i b_i for each i, and b_i with c_{i-1}, c_i
    assert len(braids) == g + 2 * g
    assert len(rotation(g)) == 2 + 3 * g
