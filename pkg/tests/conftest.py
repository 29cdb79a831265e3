import pytest

from cordial.tree import RootedTree, Tree

# the rooted caterpillar of the introductory example: root with two children,
# one of which carries three leaves, one of those carrying another leaf
INTRO = RootedTree(1, (-1, -1, 1, 1, 1, 4))


@pytest.fixture
def intro():
    return INTRO


@pytest.fixture
def intro_tree():
    whole, _ = INTRO.as_tree()
    return whole


def legged_path_tree() -> Tree:
    # path v1 v2 r v3 v4 with three legs of length two at r (r = 0)
    edges = [(1, 2), (2, 0), (0, 3), (3, 4)]
    for i in range(3):
        a, b = 5 + 2 * i, 6 + 2 * i
        edges += [(0, a), (a, b)]
    return Tree(11, tuple(edges))
