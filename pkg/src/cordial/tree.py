"""Immutable tree model: free trees, rooted trees and rooted forests.

Rooted structures follow Hovey's convention: roots are external attachment
points and are not vertices.  A rooted forest stores one parent entry per
vertex; an entry ``p >= 0`` is another vertex, an entry ``p < 0`` encodes the
root ``-p - 1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class TreeError(ValueError):
    """Input does not describe a tree."""


class SelfLoop(TreeError):
    pass


class DuplicateEdge(TreeError):
    pass


class CycleDetected(TreeError):
    pass


class Disconnected(TreeError):
    pass


class InvalidVertex(TreeError):
    pass


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _check_tree(n: int, edges: Sequence[tuple[int, int]]) -> None:
    if n < 1:
        raise TreeError(f"a tree needs at least one vertex, got n={n}")
    seen = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidVertex(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"edge {key} listed twice")
        seen.add(key)
    uf = list(range(n))
    for u, v in edges:
        ru, rv = _find(uf, u), _find(uf, v)
        if ru == rv:
            raise CycleDetected(f"edge ({u}, {v}) closes a cycle")
        uf[ru] = rv
    if len(edges) != n - 1:
        raise Disconnected(f"{n} vertices but only {len(edges)} edges; the graph is not connected")


@dataclass(frozen=True)
class Tree:
    """A finite simple tree on vertices ``0..n-1``."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        norm = tuple(sorted((u, v) if u < v else (v, u) for u, v in self.edges))
        _check_tree(self.n, norm)
        object.__setattr__(self, "edges", norm)

    @classmethod
    def trusted(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tree":
        """Construct without validation; callers guarantee a tree on 0..n-1."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "edges", tuple(sorted((u, v) if u < v else (v, u) for u, v in edges)))
        return obj

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def edge_array(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0].copy(), arr[:, 1].copy()

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def leaves(self) -> list[int]:
        if self.n == 1:
            return [0]
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def bfs_distances(self, source: int | Iterable[int]) -> list[int]:
        sources = [source] if isinstance(source, int) else list(source)
        dist = [-1] * self.n
        q = deque(sources)
        for s in sources:
            dist[s] = 0
        while q:
            u = q.popleft()
            for w in self.adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return dist

    def path_between(self, a: int, b: int) -> list[int]:
        prev = [-1] * self.n
        prev[a] = a
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                break
            for w in self.adj[u]:
                if prev[w] < 0:
                    prev[w] = u
                    q.append(w)
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def induced(self, vertices: Iterable[int]) -> tuple["Tree", list[int]]:
        """Subtree on ``vertices`` relabelled densely, with the new->old id map."""
        old = sorted(set(vertices))
        new_id = {v: i for i, v in enumerate(old)}
        edges = [(new_id[u], new_id[v]) for u, v in self.edges if u in new_id and v in new_id]
        if len(edges) != len(old) - 1:
            raise Disconnected("induced subgraph is not connected")
        return Tree.trusted(len(old), edges), old

    def relabel(self, perm: Sequence[int]) -> "Tree":
        """Tree with vertex ``v`` renamed ``perm[v]``."""
        return Tree(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))


def from_edge_list(pairs: Iterable[Sequence[int]], n: int) -> Tree:
    """Validate ``pairs`` as the edge set of a tree on ``n`` vertices."""
    return Tree(n, tuple((int(u), int(v)) for u, v in pairs))


def path_tree(n: int) -> Tree:
    return Tree(n, tuple((i, i + 1) for i in range(n - 1)))


def star_tree(leaves: int) -> Tree:
    return Tree(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def spider(*legs: int) -> Tree:
    """Centre 0 with one pendant path per entry of ``legs``."""
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree(nxt, tuple(edges))


@dataclass(frozen=True)
class PathInfo:
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def _farthest(dist: list[int]) -> int:
    best = max(dist)
    return dist.index(best)


def longest_path(t: Tree) -> PathInfo:
    """A maximum path, found by double BFS starting from vertex 0.

    Ties between equally far vertices go to the smaller id, and the path is
    oriented so that its vertex sequence is the lexicographically smaller one.
    """
    a = _farthest(t.bfs_distances(0))
    b = _farthest(t.bfs_distances(a))
    path = t.path_between(a, b)
    rev = path[::-1]
    return PathInfo(tuple(min(path, rev)))


def diameter(t: Tree) -> int:
    a = _farthest(t.bfs_distances(0))
    return max(t.bfs_distances(a))


def centers(t: Tree) -> list[int]:
    """The one or two central vertices of ``t``."""
    path = longest_path(t).vertices
    p = len(path) - 1
    if p % 2 == 0:
        return [path[p // 2]]
    return sorted((path[p // 2], path[p // 2 + 1]))


def is_caterpillar(t: Tree) -> bool:
    """True iff deleting every leaf leaves a path (or at most one vertex)."""
    if t.n <= 3:
        return True
    inner = [v for v in range(t.n) if len(t.adj[v]) > 1]
    inner_set = set(inner)
    for v in inner:
        if sum(1 for w in t.adj[v] if w in inner_set) > 2:
            return False
    return True


# --------------------------------------------------------------------------
# rooted structures


@dataclass(frozen=True)
class RootedForest:
    """Vertices ``0..n-1`` hanging from ``n_roots`` external roots."""

    n_roots: int
    parent: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.parent)
        if self.n_roots < 1:
            raise TreeError("a rooted forest needs at least one root")
        for i, p in enumerate(self.parent):
            if p >= n or p == i or p < -self.n_roots:
                raise TreeError(f"bad parent {p} for vertex {i}")
        # every vertex must reach a root
        state = [0] * n
        for i in range(n):
            chain = []
            v = i
            while v >= 0 and state[v] == 0:
                state[v] = 1
                chain.append(v)
                v = self.parent[v]
            if v >= 0 and state[v] == 1:
                raise CycleDetected(f"parent pointers cycle through vertex {v}")
            for c in chain:
                state[c] = 2
        hit = {-p - 1 for p in self.parent if p < 0}
        if len(hit) != self.n_roots:
            raise TreeError("every root needs at least one child")

    @property
    def n(self) -> int:
        return len(self.parent)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.n)]
        for i, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(i)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def root_children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.n_roots)]
        for i, p in enumerate(self.parent):
            if p < 0:
                ch[-p - 1].append(i)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        comp = [-1] * self.n
        for r, kids in enumerate(self.root_children):
            stack = list(kids)
            while stack:
                v = stack.pop()
                comp[v] = r
                stack.extend(self.children[v])
        return tuple(comp)

    def edges(self) -> list[tuple[int, int]]:
        """Each vertex with its parent entry (negative entries are roots)."""
        return [(i, p) for i, p in enumerate(self.parent)]

    @cached_property
    def vertex_codes(self) -> tuple[str, ...]:
        codes: list[str] = [""] * self.n
        for v in reversed(self._bfs_order()):
            codes[v] = "(" + "".join(sorted(codes[c] for c in self.children[v])) + ")"
        return tuple(codes)

    @cached_property
    def root_codes(self) -> tuple[str, ...]:
        vc = self.vertex_codes
        return tuple("(" + "".join(sorted(vc[c] for c in kids)) + ")" for kids in self.root_children)

    def _bfs_order(self) -> list[int]:
        order = [v for kids in self.root_children for v in kids]
        i = 0
        while i < len(order):
            order.extend(self.children[order[i]])
            i += 1
        return order

    def canonical_form(self) -> tuple[str, ...]:
        """Root-preserving isomorphism invariant; component order is ignored."""
        return tuple(sorted(self.root_codes))

    def level_order(self) -> list[int]:
        """Breadth-first from the roots, siblings sorted by (code, id)."""
        vc = self.vertex_codes
        order = []
        for r in sorted(range(self.n_roots), key=lambda r: (self.root_codes[r], r)):
            order.extend(sorted(self.root_children[r], key=lambda v: (vc[v], v)))
        i = 0
        while i < len(order):
            order.extend(sorted(self.children[order[i]], key=lambda v: (vc[v], v)))
            i += 1
        return order

    def components(self) -> list["RootedTree"]:
        out = []
        for r in range(self.n_roots):
            members = [v for v in range(self.n) if self.component_of[v] == r]
            idx = {v: i for i, v in enumerate(members)}
            out.append(RootedTree(1, tuple(-1 if self.parent[v] < 0 else idx[self.parent[v]] for v in members)))
        return out

    def as_tree(self) -> tuple[Tree, list[int]]:
        """Whole structure as a free tree; root ``j`` becomes vertex ``n + j``.

        Only meaningful for a single root (several roots give a forest).
        """
        if self.n_roots != 1:
            raise TreeError("as_tree needs exactly one root")
        edges = [(i, p if p >= 0 else self.n) for i, p in enumerate(self.parent)]
        return Tree(self.n + 1, tuple(edges)), [self.n]

    def isomorphism_to(self, other: "RootedForest") -> list[int] | None:
        """Map ``self`` vertex ids onto ``other`` preserving roots, or None.

        Roots are matched by code; equal-code roots pair up in index order
        (see ``root_matching``).
        """
        if self.n != other.n or self.n_roots != other.n_roots:
            return None
        if self.canonical_form() != other.canonical_form():
            return None
        perm = self.root_matching(other)
        mapping = [-1] * self.n
        a_codes, b_codes = self.vertex_codes, other.vertex_codes

        def match(xs: Sequence[int], ys: Sequence[int]) -> None:
            xs = sorted(xs, key=lambda v: (a_codes[v], v))
            ys = sorted(ys, key=lambda v: (b_codes[v], v))
            for x, y in zip(xs, ys):
                mapping[x] = y
                match(self.children[x], other.children[y])

        for r, s in enumerate(perm):
            match(self.root_children[r], other.root_children[s])
        return mapping

    def root_matching(self, other: "RootedForest") -> list[int]:
        """``perm[r]`` = root of ``other`` matched to root ``r`` of ``self``."""
        used: set[int] = set()
        perm = []
        for r in range(self.n_roots):
            for s in range(other.n_roots):
                if s not in used and other.root_codes[s] == self.root_codes[r]:
                    used.add(s)
                    perm.append(s)
                    break
        return perm


class RootedTree(RootedForest):
    """A rooted forest with a single root."""

    def __init__(self, n_roots: int = 1, parent: Sequence[int] = ()) -> None:
        if n_roots != 1:
            raise TreeError("a rooted tree has exactly one root")
        super().__init__(1, tuple(parent))

    @property
    def root_degree(self) -> int:
        return len(self.root_children[0])


def rooted_from_parents(parents: Sequence[int | None]) -> RootedForest:
    """Build from a parent list where roots come first and are marked None.

    Entries after the roots index into the same list, so ``[None, 0, 1]`` is a
    root with a path of two vertices hanging from it.
    """
    n_roots = 0
    while n_roots < len(parents) and parents[n_roots] is None:
        n_roots += 1
    par = []
    for p in parents[n_roots:]:
        if p is None:
            raise TreeError("roots must precede vertices")
        par.append(-p - 1 if p < n_roots else p - n_roots)
    if n_roots == 1:
        return RootedTree(1, tuple(par))
    return RootedForest(n_roots, tuple(par))


def rooted_canonical_form(rt: RootedForest) -> tuple[str, ...]:
    return rt.canonical_form()


def rooted_at(t: Tree, root: int, branches: Iterable[int] | None = None) -> tuple[RootedTree, list[int]]:
    """Hang the branches of ``t`` at ``root`` (all by default) from an external root.

    ``branches`` lists neighbours of ``root``; the result's vertex ``i`` is
    ``t``'s vertex ``ids[i]``.
    """
    starts = list(t.adj[root]) if branches is None else list(branches)
    ids: list[int] = []
    par: list[int] = []
    pos: dict[int, int] = {}
    for s in starts:
        pos[s] = len(ids)
        ids.append(s)
        par.append(-1)
    i = 0
    while i < len(ids):
        u = ids[i]
        for w in t.adj[u]:
            if w != root and w not in pos:
                pos[w] = len(ids)
                ids.append(w)
                par.append(i)
        i += 1
    return RootedTree(1, tuple(par)), ids


def _ahu_codes(t: Tree, root: int) -> tuple[list[str], list[int]]:
    """AHU code of every vertex when ``t`` hangs from ``root``, plus the BFS order."""
    parent = [-1] * t.n
    order = [root]
    seen = [False] * t.n
    seen[root] = True
    for u in order:
        for w in t.adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                order.append(w)
    kids: list[list[str]] = [[] for _ in range(t.n)]
    codes = [""] * t.n
    for u in reversed(order):
        kids[u].sort()
        codes[u] = "(" + "".join(kids[u]) + ")"
        if parent[u] >= 0:
            kids[parent[u]].append(codes[u])
    return codes, order


def free_canonical_form(t: Tree) -> str:
    """Isomorphism invariant of a free tree (least AHU code over the centres)."""
    return min(_ahu_codes(t, c)[0][c] for c in centers(t))


def canonical_relabel(t: Tree) -> Tree:
    """Isomorphic copy with ids assigned in canonical breadth-first order."""
    if t.n == 1:
        return t
    best_code = None
    best_order: list[int] = []
    for c in centers(t):
        rt, ids = rooted_at(t, c)
        code = rt.root_codes[0]
        if best_code is None or code < best_code:
            best_code = code
            best_order = [c] + [ids[v] for v in rt.level_order()]
    perm = [0] * t.n
    for new, old in enumerate(best_order):
        perm[old] = new
    return t.relabel(perm)
