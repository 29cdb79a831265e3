import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cordial.catalog import SHAPES
from cordial.grace import rooted_grace_label
from cordial.labeling import (Labeling, LabelingError, ModulusMismatch, PartialLabeling, edge_weight,
                              forest_weights, negate, rotate, tree_weights, verify_cordial, verify_rooted_cordial)
from cordial.oracle import enumerate_free_trees, random_tree
from cordial.tables import apply_entry, load_tables
from cordial.tree import path_tree


def _whole_labeling(rt, f):
    whole, roots = rt.as_tree()
    return whole, Labeling(f.k, f.values + f.root_values)


@pytest.mark.parametrize("a,b,k,w", [(3, 5, 6, 2), (0, 0, 6, 0), (0, 0, 3, 0), (5, 5, 6, 4)])
def test_edge_weight(a, b, k, w):
    assert edge_weight(a, b, k) == w


def test_intro_caterpillar_verifies(intro):
    f = rooted_grace_label(intro, 6)
    whole, g = _whole_labeling(intro, f)
    rep = verify_cordial(whole, g)
    assert rep.cordial
    assert rep.weight_counts == (1,) * 6
    assert sorted(f.values) == list(range(6)) and f.root_values == (0,)


def test_p3_checks():
    assert not verify_cordial(path_tree(3), Labeling(2, (0, 0, 0))).cordial
    rep = verify_cordial(path_tree(3), Labeling(6, (0, 1, 2)))
    assert rep.cordial and rep.weight_counts == (0, 1, 0, 1, 0, 0)


def test_violations_listed():
    rep = verify_cordial(path_tree(4), Labeling(2, (0, 0, 0, 0)))
    kinds = {v.kind for v in rep.violations}
    assert kinds == {"label", "weight"}
    assert not rep


def test_minority_and_majority_sets(intro):
    rep = verify_cordial(path_tree(3), Labeling(6, (0, 1, 2)))
    assert rep.minority_weights == {0, 2, 4, 5}
    assert rep.majority_labels == {0, 1, 2}
    whole, g = _whole_labeling(intro, rooted_grace_label(intro, 6))
    tied = verify_cordial(whole, g)
    assert tied.minority_weights == frozenset(range(6))


def test_errors():
    with pytest.raises(PartialLabeling):
        verify_cordial(path_tree(3), Labeling(6, (0, 1)))
    with pytest.raises(ModulusMismatch):
        verify_cordial(path_tree(2), Labeling(6, (0, 1)), k=5)
    with pytest.raises(LabelingError):
        Labeling(6, (0, 7))
    with pytest.raises(LabelingError):
        Labeling(1, (0,))


def _entry(shape, labels):
    return next(e for e in load_tables() if e.shape == shape and ",".join(map(str, e.labels)) == labels)


def test_rooted_majority_entry():
    e = _entry("F", "0,2,2,4,5,0,3,1")
    f = apply_entry(e, SHAPES["F"].forest)
    assert verify_rooted_cordial(SHAPES["F"].forest, f, 4).cordial
    # a different ell fails because weight 4 runs two ahead of the missing weight
    assert not verify_rooted_cordial(SHAPES["F"].forest, f, 0).cordial


def test_rooted_nomajority_entry_any_ell():
    e = _entry("F", "0,0,4,0,1,3,5,2")
    f = apply_entry(e, SHAPES["F"].forest)
    assert sorted(forest_weights(SHAPES["F"].forest, f)) == list(range(6))
    for ell in range(6):
        assert verify_rooted_cordial(SHAPES["F"].forest, f, ell).cordial


def test_rooted_three_ahead_fails():
    forest = SHAPES["F"].forest
    f = Labeling(6, (0,) * forest.n, (0, 0))
    for ell in range(6):
        assert not verify_rooted_cordial(forest, f, ell).cordial


def test_rooted_needs_root_labels():
    with pytest.raises(PartialLabeling):
        verify_rooted_cordial(SHAPES["F"].forest, Labeling(6, (0,) * 6, (0,)), 0)


def test_rotate_fixed_points_and_shift(intro):
    f = rooted_grace_label(intro, 6)
    assert rotate(f, 0) == f
    whole, g = _whole_labeling(intro, f)
    assert verify_cordial(whole, rotate(g, 1)).cordial
    assert verify_cordial(whole, negate(g)).cordial
    assert np.array_equal(tree_weights(whole, rotate(g, 3)), tree_weights(whole, g))
    assert negate(negate(g)) == g
    h = negate(Labeling(6, (0, 3, 1)))
    assert h.values == (0, 3, 5)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 60), st.integers(2, 9), st.integers(0, 2**32 - 1), st.integers(0, 20))
def test_transforms_preserve_verdict(n, k, seed, a):
    t = random_tree(n, seed)
    rng = np.random.default_rng(seed)
    f = Labeling(k, tuple(int(x) for x in rng.integers(0, k, n)))
    rep = verify_cordial(t, f)
    assert sum(rep.label_counts) == n and sum(rep.weight_counts) == n - 1
    r = rotate(f, a)
    assert verify_cordial(t, r).cordial == rep.cordial
    assert verify_cordial(t, negate(f)).cordial == rep.cordial
    assert np.array_equal(tree_weights(t, r), (tree_weights(t, f) + 2 * a) % k)
    assert np.array_equal(tree_weights(t, negate(f)), (-tree_weights(t, f)) % k)


def _naive(t, vals, k):
    lc = [vals.count(a) for a in range(k)]
    ws = [(vals[u] + vals[v]) % k for u, v in t.edges]
    wc = [ws.count(a) for a in range(k)]
    return all(abs(x - y) <= 1 for x, y in itertools.combinations(lc, 2)) and \
        all(abs(x - y) <= 1 for x, y in itertools.combinations(wc, 2))


@pytest.mark.parametrize("n", range(1, 11))
def test_verdict_matches_naive_recount(n):
    rng = np.random.default_rng(n)
    for t in enumerate_free_trees(n):
        for k in range(2, 7):
            vals = [int(x) for x in rng.integers(0, k, n)]
            assert verify_cordial(t, Labeling(k, tuple(vals))).cordial == _naive(t, vals, k)
