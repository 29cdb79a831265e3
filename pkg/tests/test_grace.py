import pytest

from cordial.grace import (NotACaterpillar, PreconditionViolated, grace_label, grace_with_root_neighbor, layout,
                           qualifies_for_fact2, rooted_grace_label)
from cordial.labeling import forest_weights, rotate, verify_cordial
from cordial.oracle import enumerate_caterpillars, enumerate_free_trees
from cordial.tree import RootedTree, path_tree, rooted_at, spider


def test_layout_p4():
    lay = layout(path_tree(4))
    assert (lay.part_a, lay.part_b) == ((0, 2), (1, 3))


def test_layout_rejects_spider():
    with pytest.raises(NotACaterpillar):
        layout(spider(2, 2, 2))
    with pytest.raises(NotACaterpillar):
        grace_label(spider(2, 2, 2), 6)


def test_p6_all_labels_once():
    f = grace_label(path_tree(6), 6, 0)
    assert sorted(f.values) == list(range(6))
    assert verify_cordial(path_tree(6), f).cordial


def test_single_vertex():
    assert grace_label(path_tree(1), 6, 4).values == (4,)


def test_consecutive_sequence():
    t = spider(1, 1, 1, 1)
    lay = layout(t)
    f = grace_label(t, 100, 7)
    assert [f.values[v] for v in lay.sequence()] == list(range(7, 7 + t.n))


def test_reverse_orientation_is_cordial():
    for t in enumerate_caterpillars(9):
        assert verify_cordial(t, grace_label(t, 4, 0, reverse=True)).cordial


@pytest.mark.parametrize("n", range(1, 13))
def test_layouts_non_crossing(n):
    for t in enumerate_caterpillars(n):
        lay = layout(t)
        assert sorted(lay.sequence()) == list(range(n))
        assert lay.is_noncrossing(t)


def test_intro_caterpillar_reproduced(intro):
    f = rooted_grace_label(intro, 6)
    assert f.root_values == (0,)
    assert sorted(f.values) == list(range(6))
    assert sorted(forest_weights(intro, f)) == list(range(6))


def _qualifying_six_vertex_pieces():
    seen = {}
    for t in enumerate_free_trees(7):
        for r in range(7):
            rt, _ = rooted_at(t, r)
            if qualifies_for_fact2(rt):
                seen.setdefault(rt.canonical_form(), rt)
    return list(seen.values())


def test_rooted_grace_all_qualifying_pieces():
    pieces = _qualifying_six_vertex_pieces()
    assert len(pieces) > 10
    for rt in pieces:
        f = rooted_grace_label(rt, 6)
        assert f.root_values == (0,)
        assert sorted(f.values) == list(range(6))
        assert sorted(forest_weights(rt, f)) == list(range(6))
        g = rotate(f, 5)
        assert len(set(forest_weights(rt, g))) == 6


def test_rooted_p6_near_end():
    # root hangs next to the end of a path: root - v1 with v0 a leaf on v1 ... use P7 rooted at its second vertex
    rt, _ = rooted_at(path_tree(7), 1)
    f = rooted_grace_label(rt, 6)
    assert sorted(forest_weights(rt, f)) == list(range(6))


def test_rooted_grace_preconditions():
    with pytest.raises(PreconditionViolated):
        rooted_grace_label(RootedTree(1, (-1, 0, 1, 2, 3)), 6)  # five vertices
    rt, _ = rooted_at(path_tree(7), 3)  # root in the middle
    with pytest.raises(PreconditionViolated):
        rooted_grace_label(rt, 6)


@pytest.mark.parametrize("w", range(6))
def test_root_neighbour_gets_w(w):
    for t in enumerate_caterpillars(6):
        for leaf in t.leaves():
            # hang the caterpillar from a new root through ``leaf``
            rt, ids = rooted_at(_with_pendant(t, leaf), t.n)
            f = grace_with_root_neighbor(rt, 6, w)
            (u,) = rt.root_children[0]
            assert f.values[u] == w and f.root_values == (0,)
            ws = forest_weights(rt, f)
            assert sorted(f.values) == list(range(6))
            assert ws.count(w) >= 1 and max(ws.count(a) for a in range(6)) <= 2


def _with_pendant(t, v):
    from cordial.tree import Tree

    return Tree(t.n + 1, t.edges + ((v, t.n),))


def test_root_neighbour_preconditions():
    with pytest.raises(PreconditionViolated):
        grace_with_root_neighbor(RootedTree(1, (-1, -1)), 6, 0)
    body = spider(2, 2, 2)
    rt, _ = rooted_at(_with_pendant(body, 1), body.n)
    with pytest.raises(PreconditionViolated):
        grace_with_root_neighbor(rt, 6, 0)
