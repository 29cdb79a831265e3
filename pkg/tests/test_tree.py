import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cordial.oracle import enumerate_free_trees, random_tree
from cordial.tree import (CycleDetected, Disconnected, DuplicateEdge, InvalidVertex, RootedForest, RootedTree,
                          SelfLoop, Tree, TreeError, canonical_relabel, centers, diameter, free_canonical_form,
                          from_edge_list, is_caterpillar, longest_path, path_tree, rooted_at,
                          rooted_canonical_form, rooted_from_parents, spider, star_tree)


def test_single_vertex():
    t = from_edge_list([], 1)
    assert t.n == 1 and t.edges == ()


def test_p4():
    t = from_edge_list([(0, 1), (1, 2), (2, 3)], 4)
    assert t.edges == ((0, 1), (1, 2), (2, 3))
    assert [t.degree(v) for v in range(4)] == [1, 2, 2, 1]


@pytest.mark.parametrize("n,edges,err", [
    (3, [(0, 1), (1, 2), (2, 0)], CycleDetected),
    (4, [(0, 1), (2, 3)], Disconnected),
    (3, [(0, 1), (0, 1)], DuplicateEdge),
    (2, [(0, 0)], SelfLoop),
    (2, [(0, 2)], InvalidVertex),
])
def test_invalid_trees(n, edges, err):
    with pytest.raises(err):
        from_edge_list(edges, n)


def test_errors_are_tree_errors():
    assert issubclass(CycleDetected, TreeError) and issubclass(TreeError, ValueError)


@pytest.mark.parametrize("t,length", [
    (path_tree(5), 4),
    (star_tree(4), 2),
    (path_tree(1), 0),
])
def test_longest_path_small(t, length):
    p = longest_path(t)
    assert p.length == length
    for a, b in zip(p.vertices, p.vertices[1:]):
        assert b in t.adj[a]


def test_longest_path_intro(intro_tree):
    assert longest_path(intro_tree).length == 4


def _brute_diameter(t):
    g = nx.Graph(t.edges)
    g.add_nodes_from(range(t.n))
    return max(max(d.values()) for _, d in nx.all_pairs_shortest_path_length(g))


def _brute_caterpillar(t):
    # some maximum path has every vertex within distance one
    g = nx.Graph(t.edges)
    g.add_nodes_from(range(t.n))
    d = dict(nx.all_pairs_shortest_path_length(g))
    diam = max(max(x.values()) for x in d.values())
    for a, b in itertools.combinations(range(t.n), 2):
        if d[a][b] != diam:
            continue
        path = nx.shortest_path(g, a, b)
        if all(min(d[v][p] for p in path) <= 1 for v in range(t.n)):
            return True
    return t.n <= 2


@pytest.mark.parametrize("n", range(1, 11))
def test_longest_path_and_caterpillar_against_brute_force(n):
    for t in enumerate_free_trees(n):
        assert longest_path(t).length == diameter(t) == _brute_diameter(t)
        assert is_caterpillar(t) == _brute_caterpillar(t)


def test_small_trees_are_caterpillars():
    for n in range(1, 7):
        assert all(is_caterpillar(t) for t in enumerate_free_trees(n))


def test_spider_is_not_caterpillar():
    assert not is_caterpillar(spider(2, 2, 2))
    assert is_caterpillar(path_tree(9))


def test_longest_path_deterministic():
    t = random_tree(30, 5)
    assert longest_path(t) == longest_path(t)
    p = longest_path(t).vertices
    assert p <= p[::-1]


def test_centers_of_paths():
    assert centers(path_tree(5)) == [2]
    assert centers(path_tree(4)) == [1, 2]


def test_rooted_codes_ignore_child_order():
    # T' drawn twice with children in different orders
    a = rooted_from_parents([None, 0, 0, 1, 1, 2])
    b = rooted_from_parents([None, 0, 0, 2, 2, 1])
    assert rooted_canonical_form(a) == rooted_canonical_form(b)


def test_rooted_codes_distinguish_root_position():
    p = path_tree(5)
    end, _ = rooted_at(p, 0)
    mid, _ = rooted_at(p, 2)
    assert rooted_canonical_form(end) != rooted_canonical_form(mid)


def test_rooted_forest_validation():
    with pytest.raises(TreeError):
        RootedForest(2, (-1, 0))  # second root has no child
    with pytest.raises(CycleDetected):
        RootedForest(1, (-1, 2, 1))
    with pytest.raises(TreeError):
        RootedTree(2, (-1, -2))


def test_as_tree_and_isomorphism():
    whole, roots = RootedTree(1, (-1, 0, 1)).as_tree()
    assert whole.n == 4 and roots == [3] and whole.degree(3) == 1
    with pytest.raises(TreeError):
        RootedForest(2, (-1, -2)).as_tree()
    f = RootedForest(2, (-1, 0, -2, 2))
    g = RootedForest(2, (-2, 0, -1, 2))
    m = f.isomorphism_to(g)
    assert m is not None
    assert f.isomorphism_to(RootedForest(2, (-1, -1, -2, 2))) is None


def _nx_iso(a, b):
    return nx.is_isomorphic(nx.Graph(a.edges), nx.Graph(b.edges))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 25), st.integers(0, 10**6))
def test_canonical_form_invariant_under_relabel(n, seed):
    t = random_tree(n, seed)
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    u = t.relabel(perm)
    assert free_canonical_form(t) == free_canonical_form(u)
    assert canonical_relabel(t).edges == canonical_relabel(u).edges
    r = random.Random(seed).randrange(n)
    rt, _ = rooted_at(t, r)
    ru, _ = rooted_at(u, perm[r])
    assert rooted_canonical_form(rt) == rooted_canonical_form(ru)


@pytest.mark.parametrize("n", [6, 8])
def test_free_canonical_form_separates_classes(n):
    trees = list(enumerate_free_trees(n))
    codes = {free_canonical_form(t) for t in trees}
    assert len(codes) == len(trees)
    for a, b in itertools.combinations(trees[:8], 2):
        assert not _nx_iso(a, b)


def test_induced_disconnected():
    with pytest.raises(Disconnected):
        path_tree(4).induced([0, 2])
    sub, ids = path_tree(4).induced([1, 2, 3])
    assert sub.n == 3 and ids == [1, 2, 3]
