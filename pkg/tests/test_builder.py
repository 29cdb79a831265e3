import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cordial.builder import (BuildTrace, RootLabelMismatch, Unsatisfiable, attach_leaf_balanced, fallback_search,
                             label_six_cordial, paste, strip_order)
from cordial.grace import grace_label
from cordial.labeling import Labeling, verify_cordial, verify_rooted_cordial
from cordial.oracle import enumerate_free_trees, random_tree
from cordial.tree import RootedTree, Tree, is_caterpillar, path_tree, spider, star_tree

from conftest import legged_path_tree


def _check(t: Tree) -> BuildTrace:
    f, trace = label_six_cordial(t)
    assert verify_cordial(t, f).cordial
    return trace


@pytest.mark.parametrize("n", range(1, 7))
def test_small_trees_use_grace(n):
    for t in enumerate_free_trees(n):
        trace = _check(t)
        assert [s.strategy for s in trace.steps] == ["Base"]


def test_p12_split_case_i():
    trace = _check(path_tree(12))
    assert trace.steps[-1].strategy == "Split6" and trace.steps[-1].case == "i"
    assert trace.fallback_count == 0


def test_p11_split5():
    trace = _check(path_tree(11))
    assert trace.steps[-1].strategy == "Split5"


@pytest.mark.parametrize("n", range(7, 11))
def test_all_trees_small(n):
    total = 0
    for t in enumerate_free_trees(n):
        _check(t)
        total += 1
    assert total == {7: 11, 8: 23, 9: 47, 10: 106}[n]


def test_residues_1_to_4_grow_leaves():
    trace = _check(path_tree(9))
    assert [s.strategy for s in trace.steps] == ["Base"] + ["LeafExtend"] * 3


@pytest.mark.parametrize("j", [0, 3])
def test_attach_leaf_balanced(j):
    t = path_tree(6)
    f = grace_label(t, 6, 0)
    a = attach_leaf_balanced(t, f, j)
    grown = Tree(7, t.edges + ((j, 6),))
    assert verify_cordial(grown, Labeling(6, f.values + (a,))).cordial


def test_strip_order_leaves_a_tree():
    t = legged_path_tree()
    removed = strip_order(t, 4)
    assert len({leaf for leaf, _ in removed}) == 4
    gone = set()
    for leaf, nb in removed:
        assert nb not in gone
        gone.add(leaf)


def test_paste_root_mismatch():
    t0 = path_tree(2)
    f0 = Labeling(6, (0, 1))
    piece = RootedTree(1, (-1,))
    with pytest.raises(RootLabelMismatch):
        paste((t0, f0), (piece, Labeling(6, (2,), (3,))), (0,))
    t, f = paste((t0, f0), (piece, Labeling(6, (2,), (0,))), (0,))
    assert t.n == 3 and f.values == (0, 1, 2)


def test_fallback_search_shape_a():
    a = RootedTree(1, (-1, -1, 0, 1, 3, 4))
    f = fallback_search(a, [2])
    assert f.root_values == (2,)
    rep = verify_rooted_cordial(a, f, 2)
    assert rep.cordial


def test_fallback_search_unsatisfiable():
    # five labels already at 0 cannot be balanced by one more vertex
    base_labels = [5, 0, 0, 0, 0, 0]
    with pytest.raises(Unsatisfiable):
        fallback_search(RootedTree(1, (-1,)), [0], base_labels, [0] * 6, 5, 4)


def test_noncaterpillar_piece_labeled():
    t = spider(2, 2, 2, 2, 3)  # 12 vertices, not a caterpillar
    assert not is_caterpillar(t)
    _check(t)


def test_star_and_spiders():
    for t in (star_tree(29), spider(5, 5, 5, 5), spider(1, 1, 1, 1, 1, 1, 6), spider(*([2] * 12))):
        _check(t)


def test_deterministic():
    t = random_tree(80, 5)
    f1, tr1 = label_six_cordial(t)
    f2, tr2 = label_six_cordial(t)
    assert f1 == f2 and tr1.steps == tr2.steps


def test_trace_summary():
    trace = _check(random_tree(40, 1))
    assert sum(trace.strategies().values()) == len(trace.steps)
    assert 0.0 <= trace.fallback_rate <= 1.0
    assert "=" in trace.summary()


def test_fallback_steps_record_instance():
    for t in enumerate_free_trees(12):
        _, trace = label_six_cordial(t)
        for s in trace.steps:
            if s.strategy == "Fallback":
                assert s.instance and s.note


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 120), st.integers(0, 2**32 - 1))
def test_random_trees(n, seed):
    _check(random_tree(n, seed))


def test_counts_helper_matches_verify():
    t = random_tree(50, 3)
    f, _ = label_six_cordial(t)
    rep = verify_cordial(t, f)
    assert int(np.sum(rep.label_counts)) == 50 and int(np.sum(rep.weight_counts)) == 49
