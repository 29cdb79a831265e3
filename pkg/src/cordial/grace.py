"""Grace's sequential labeling of caterpillars and its rooted variants."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .labeling import Labeling
from .tree import RootedTree, Tree, is_caterpillar, longest_path


class NotACaterpillar(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class BipartiteLayout:
    """The two colour classes in an order admitting a crossing-free drawing."""

    part_a: tuple[int, ...]
    part_b: tuple[int, ...]

    def sequence(self) -> tuple[int, ...]:
        return self.part_a + self.part_b

    def is_noncrossing(self, t: Tree) -> bool:
        pa = {v: i for i, v in enumerate(self.part_a)}
        pb = {v: i for i, v in enumerate(self.part_b)}
        pairs = []
        for u, v in t.edges:
            if u in pa and v in pb:
                pairs.append((pa[u], pb[v]))
            elif v in pa and u in pb:
                pairs.append((pa[v], pb[u]))
            else:
                return False
        pairs.sort()
        return all(pairs[i][1] <= pairs[i + 1][1] for i in range(len(pairs) - 1))


def layout(t: Tree, spine: Sequence[int] | None = None, reverse: bool = False) -> BipartiteLayout:
    """Walk a longest path, placing each path vertex then its pendant leaves.

    ``spine`` overrides the default longest path (it must be a longest path
    of ``t``).  ``reverse`` reads both parts bottom-up instead.
    """
    if not is_caterpillar(t):
        raise NotACaterpillar(f"tree on {t.n} vertices is not a caterpillar")
    path = list(spine) if spine is not None else list(longest_path(t).vertices)
    on_path = set(path)
    parts: tuple[list[int], list[int]] = ([], [])
    for i, s in enumerate(path):
        parts[i % 2].append(s)
        parts[(i + 1) % 2].extend(w for w in t.adj[s] if w not in on_path)
    a, b = parts
    if reverse:
        a, b = a[::-1], b[::-1]
    return BipartiteLayout(tuple(a), tuple(b))


def sequential_labels(lay: BipartiteLayout, n: int, k: int, start: int) -> tuple[int, ...]:
    vals = [0] * n
    for i, v in enumerate(lay.sequence()):
        vals[v] = (start + i) % k
    return tuple(vals)


def grace_label(t: Tree, k: int, start: int = 0, reverse: bool = False) -> Labeling:
    """Consecutive residues from ``start`` down part A, then down part B."""
    lay = layout(t, reverse=reverse)
    return Labeling(k, sequential_labels(lay, t.n, k, start))


def fact2_spine(t: Tree, root: int) -> list[int] | None:
    """A longest path of ``t`` with ``root`` at position 0 or 1, if one exists."""
    ecc_root = t.bfs_distances(root)
    a = ecc_root.index(max(ecc_root))
    diam = max(t.bfs_distances(a))
    if t.degree(root) <= 1 and max(ecc_root) == diam:
        far = ecc_root.index(diam)
        return t.path_between(root, far)
    for x in t.adj[root]:
        if t.degree(x) != 1:
            continue
        dx = t.bfs_distances(x)
        if max(dx) == diam:
            return t.path_between(x, dx.index(diam))
    return None


def rooted_grace_label(rt: RootedTree, k: int | None = None) -> Labeling:
    """Root labeled 0 and every edge weight distinct (``k`` = vertex count).

    Requires the root together with the vertices to form a caterpillar in
    which the root sits next to an end of some longest path.
    """
    n = rt.n
    k = n if k is None else k
    if n != k:
        raise PreconditionViolated(f"need exactly k={k} vertices, got {n}")
    whole, (root,) = rt.as_tree()
    if not is_caterpillar(whole):
        raise PreconditionViolated("root plus vertices do not form a caterpillar")
    spine = fact2_spine(whole, root)
    if spine is None:
        raise PreconditionViolated("root is not next to an end of any longest path")
    lay = layout(whole, spine=spine)
    if lay.part_b and lay.part_b[0] == root:
        lay = BipartiteLayout(lay.part_b, lay.part_a)
    vals = sequential_labels(lay, whole.n, k, 0)
    return Labeling(k, vals[:n], (vals[root],))


def qualifies_for_fact2(rt: RootedTree) -> bool:
    whole, (root,) = rt.as_tree()
    return is_caterpillar(whole) and fact2_spine(whole, root) is not None


def grace_with_root_neighbor(rt: RootedTree, k: int, w: int) -> Labeling:
    """Root 0, its single neighbour ``w``, the rest consecutive around it.

    The labels of the body are a rotated Grace sequence, so they are
    pairwise distinct when the body has at most ``k`` vertices and the body's
    own edge weights are consecutive residues.
    """
    if rt.root_degree != 1:
        raise PreconditionViolated(f"root degree is {rt.root_degree}, expected 1")
    (u,) = rt.root_children[0]
    body = Tree(rt.n, tuple((i, p) for i, p in enumerate(rt.parent) if p >= 0))
    try:
        lay = layout(body)
    except NotACaterpillar as exc:
        raise PreconditionViolated(str(exc)) from exc
    pos = lay.sequence().index(u)
    vals = sequential_labels(lay, rt.n, k, (w - pos) % k)
    return Labeling(k, vals, (0,))
