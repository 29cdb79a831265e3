"""Splitting a tree into a base tree T0 plus small rooted pieces.

A split keeps every vertex of T0 and moves some whole branches at one vertex
(or at two vertices, for the forest shapes) into a rooted piece whose root is
identified with that vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .catalog import FAMILIES, FIVE_FOREST, FIVE_TREE_5, FIVE_TREE_6, FOUR_TREE, SHAPES, SIX_FOREST, SIX_TREE, shape_for
from .tree import RootedForest, RootedTree, Tree, longest_path


class SplitError(ValueError):
    pass


class InvalidBranchSelection(SplitError):
    pass


class SplitNotFound(SplitError):
    """No split of the promised kind exists; carries the tree as an edge list."""

    def __init__(self, t: Tree, target: int, detail: str = "") -> None:
        self.tree = t
        super().__init__(f"no split for target {target} on n={t.n} edges={list(t.edges)} {detail}".rstrip())


@dataclass(frozen=True)
class CriticalPair:
    """Path indices ``(i, i+1)``: everything left of ``v_i`` is too small, left of ``v_{i+1}`` too big."""

    i: int
    deficient: int
    excessive: int


@dataclass(frozen=True)
class SplitResult:
    t0: Tree
    t0_ids: tuple[int, ...]          # t0 vertex -> input vertex
    pieces: RootedForest
    piece_ids: tuple[int, ...]       # piece vertex -> input vertex
    attach: tuple[int, ...]          # root j -> t0 vertex
    case: str                        # "i", "ii" or "iii"
    case_tag: str
    shape: str | None = None
    critical: CriticalPair | None = None

    @property
    def attach_input(self) -> tuple[int, ...]:
        return tuple(self.t0_ids[a] for a in self.attach)

    def reassemble(self) -> Tree:
        """Glue the pieces back onto t0, using input vertex ids."""
        edges = [(self.t0_ids[u], self.t0_ids[v]) for u, v in self.t0.edges]
        for i, p in enumerate(self.pieces.parent):
            other = self.attach_input[-p - 1] if p < 0 else self.piece_ids[p]
            edges.append((self.piece_ids[i], other))
        return Tree(self.t0.n + self.pieces.n, tuple(edges))


# ------------------------------------------------------------------ branch bookkeeping


class Branches:
    """Sizes, members and codes of the branches at every vertex of a tree."""

    def __init__(self, t: Tree) -> None:
        self.t = t
        n = t.n
        root = 0
        parent = [-1] * n
        order = [root]
        seen = [False] * n
        seen[root] = True
        for u in order:
            for w in t.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    order.append(w)
        size = [1] * n
        for u in reversed(order[1:]):
            size[parent[u]] += size[u]
        self.parent = parent
        self.size_below = size
        self._codes: dict[tuple[int, int], str] = {}

    def size(self, v: int, w: int) -> int:
        """Vertices of the component of ``t - v`` containing neighbour ``w``."""
        if self.parent[w] == v:
            return self.size_below[w]
        return self.t.n - self.size_below[v]

    def code(self, v: int, w: int) -> str:
        key = (v, w)
        c = self._codes.get(key)
        if c is None:
            c = "(" + "".join(sorted(self.code(w, x) for x in self.t.adj[w] if x != v)) + ")"
            self._codes[key] = c
        return c

    def members(self, v: int, w: int) -> list[int]:
        out = [w]
        stack = [(w, v)]
        while stack:
            u, p = stack.pop()
            for x in self.t.adj[u]:
                if x != p:
                    out.append(x)
                    stack.append((x, u))
        return out


def piece_code(codes: Iterable[str]) -> str:
    return "(" + "".join(sorted(codes)) + ")"


def root_child_codes(shape_name: str) -> list[list[str]]:
    """For each root of a catalog shape, the codes of its children."""
    f = SHAPES[shape_name].forest
    return [sorted(f.vertex_codes[c] for c in kids) for kids in f.root_children]


# ------------------------------------------------------------------ building a split


def _assemble(t: Tree, groups: Sequence[tuple[int, Sequence[int]]], br: Branches,
              case: str, case_tag: str, shape: str | None = None,
              critical: CriticalPair | None = None) -> SplitResult:
    """``groups`` lists (root vertex, chosen neighbours) per piece root."""
    piece_ids: list[int] = []
    parent: list[int] = []
    for j, (v, nbrs) in enumerate(groups):
        for w in nbrs:
            pos = {w: len(piece_ids)}
            piece_ids.append(w)
            parent.append(-j - 1)
            stack = [(w, v)]
            while stack:
                u, p = stack.pop()
                for x in t.adj[u]:
                    if x != p:
                        pos[x] = len(piece_ids)
                        piece_ids.append(x)
                        parent.append(pos[u])
                        stack.append((x, u))
    moved = set(piece_ids)
    if len(moved) != len(piece_ids):
        raise InvalidBranchSelection("chosen branches overlap")
    keep = [u for u in range(t.n) if u not in moved]
    if not keep:
        raise InvalidBranchSelection("nothing left for t0")
    new_id = {u: i for i, u in enumerate(keep)}
    for v, _ in groups:
        if v in moved:
            raise InvalidBranchSelection(f"root vertex {v} lies inside a chosen branch")
    t0 = Tree.trusted(len(keep), [(new_id[u], new_id[w]) for u, w in t.edges if u in new_id and w in new_id])
    pieces: RootedForest
    if len(groups) == 1:
        pieces = RootedTree(1, tuple(parent))
    else:
        pieces = RootedForest(len(groups), tuple(parent))
    return SplitResult(t0, tuple(keep), pieces, tuple(piece_ids), tuple(new_id[v] for v, _ in groups),
                       case, case_tag, shape, critical)


def split_at(t: Tree, v: int, branches: Iterable[int]) -> SplitResult:
    """Move the branches at ``v`` that start at the neighbours ``branches`` into one piece."""
    chosen = sorted(set(branches))
    if not chosen:
        raise InvalidBranchSelection("select at least one branch")
    for w in chosen:
        if w not in t.adj[v]:
            raise InvalidBranchSelection(f"{w} is not a neighbour of {v}")
    res = _assemble(t, [(v, chosen)], Branches(t), "i", "")
    tag = classify_piece(res.pieces)
    return SplitResult(res.t0, res.t0_ids, res.pieces, res.piece_ids, res.attach, "i", tag,
                       tag.split(":", 1)[1] if ":" in tag else None)


# ------------------------------------------------------------------ classification


def classify_piece(p: RootedForest, family: str | None = None) -> str:
    """Catalog tag of a piece: ``CatalogTree:<id>``, ``CatalogForest:<id>`` or a generic tag.

    Without ``family`` the family is inferred from size and root count; the
    five-vertex trees default to the family placed on a tree of order 6m+1.
    """
    if family is None:
        if p.n_roots > 1:
            family = SIX_FOREST if p.n == 6 else FIVE_FOREST
        else:
            family = {6: SIX_TREE, 5: FIVE_TREE_6, 4: FOUR_TREE}.get(p.n)
    if family is not None and family in FAMILIES:
        name = shape_for(p, family)
        if name is not None:
            return ("CatalogForest:" if p.n_roots > 1 else "CatalogTree:") + name
    if p.n_roots == 1 and p.n == 6:
        return "SixVertexTree"
    if p.n_roots == 1 and p.n == 5:
        return "FiveVertexTree"
    return f"Generic{p.n_roots}x{p.n}"


# ------------------------------------------------------------------ searches


def _scan_order(t: Tree, path: Sequence[int], first: Sequence[int] = ()) -> list[int]:
    seen: set[int] = set()
    out = []
    for v in list(first) + list(path[1:-1]) + list(path) + list(range(t.n)):
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _exact_subset(br: Branches, v: int, nbrs: Sequence[int], target: int, path_side: set[int]) -> list[int] | None:
    """Greedy-with-backtracking choice of branches at ``v`` summing to ``target``.

    Off-path branches come first, smallest code first, then path-side ones.
    """
    cand = [(w, br.size(v, w)) for w in nbrs]
    cand = [(w, s) for w, s in cand if s <= target]
    cand.sort(key=lambda ws: (ws[0] in path_side, br.code(v, ws[0]), ws[0]))
    # group equal (size, code) branches so high-degree vertices stay cheap
    groups: list[tuple[int, list[int]]] = []
    index: dict[tuple[int, str, bool], int] = {}
    for w, s in cand:
        key = (s, br.code(v, w), w in path_side)
        if key not in index:
            index[key] = len(groups)
            groups.append((s, []))
        groups[index[key]][1].append(w)
    chosen: list[int] = []

    def dfs(g: int, remaining: int) -> bool:
        if remaining == 0:
            return True
        if g == len(groups):
            return False
        s, ws = groups[g]
        for c in range(min(len(ws), remaining // s), -1, -1):
            chosen.extend(ws[:c])
            if dfs(g + 1, remaining - c * s):
                return True
            del chosen[len(chosen) - c:]
        return False

    return list(chosen) if dfs(0, target) else None


def _match_children(br: Branches, v: int, nbrs: Iterable[int], want: Sequence[str]) -> list[int] | None:
    """Neighbours of ``v`` whose branch codes realise the multiset ``want``."""
    need: dict[str, int] = {}
    for c in want:
        need[c] = need.get(c, 0) + 1
    sizes = {c: c.count("(") for c in need}
    picked: list[int] = []
    for w in sorted(nbrs):
        s = br.size(v, w)
        code = None
        for c in need:
            if need[c] and sizes[c] == s:
                code = code or br.code(v, w)
                if code == c:
                    need[c] -= 1
                    picked.append(w)
                    break
        if not any(need.values()):
            return picked
    return None


def critical_pair(t: Tree, path: Sequence[int], br: Branches, target: int) -> CriticalPair | None:
    """Largest ``i`` whose left side is below ``target`` (when the next one is above)."""
    best = None
    for i in range(1, len(path) - 1):
        left = t.n - br.size(path[i], path[i + 1]) - 1
        nxt = t.n - br.size(path[i + 1], path[i + 2]) - 1 if i + 2 < len(path) else t.n - 1
        if left < target < nxt:
            best = CriticalPair(i, left, nxt)
    return best


def iter_splits(t: Tree, target: int) -> Iterator[SplitResult]:
    """All splits of the three kinds for ``target`` in preference order.

    ``target`` is 6 or 5.  Case (i) pieces come first, scanning the longest
    path left to right with left-hand branches only, then every vertex with
    all branches.  Catalog pieces and forests follow, starting at the
    critical pair of the path.
    """
    if target not in (5, 6):
        raise ValueError("target must be 5 or 6")
    br = Branches(t)
    path = list(longest_path(t).vertices)
    found_exact = False
    seen_keys: set[tuple[int, tuple[int, ...]]] = set()
    for i in range(1, len(path) - 1):
        v = path[i]
        left = [w for w in t.adj[v] if w != path[i + 1]]
        pick = _exact_subset(br, v, left, target, {path[i - 1]})
        if pick is not None:
            found_exact = True
            seen_keys.add((v, tuple(sorted(pick))))
            yield _tagged(_assemble(t, [(v, pick)], br, "i", ""), target)
    order = _scan_order(t, path)
    for v in order:
        on_path = set(path)
        pick = _exact_subset(br, v, t.adj[v], target, {w for w in t.adj[v] if w in on_path})
        if pick is not None:
            found_exact = True
            key = (v, tuple(sorted(pick)))
            if key in seen_keys:
                continue
            seen_keys.add(key)
            yield _tagged(_assemble(t, [(v, pick)], br, "i", ""), target)
    crit = None if found_exact else critical_pair(t, path, br, target)
    first = [path[crit.i], path[crit.i + 1]] if crit is not None else []
    order = _scan_order(t, path, first)
    tree_family = FIVE_TREE_6 if target == 6 else FOUR_TREE
    for v in order:
        for name in FAMILIES[tree_family]:
            (want,) = root_child_codes(name)
            pick = _match_children(br, v, t.adj[v], want)
            if pick is not None:
                yield _assemble(t, [(v, pick)], br, "ii", "CatalogTree:" + name, name, crit)
    forest_family = SIX_FOREST if target == 6 else FIVE_FOREST
    for name in FAMILIES[forest_family]:
        want0, want1 = root_child_codes(name)
        hosts0 = [u for u in order if _match_children(br, u, t.adj[u], want0) is not None]
        hosts1 = [u for u in order if _match_children(br, u, t.adj[u], want1) is not None]
        for u1 in hosts0:
            for u2 in hosts1:
                if u2 == u1:
                    continue
                away0 = [w for w in t.adj[u1] if w != _toward(br, u1, u2)]
                p0 = _match_children(br, u1, away0, want0)
                if p0 is None:
                    continue
                away1 = [w for w in t.adj[u2] if w != _toward(br, u2, u1)]
                p1 = _match_children(br, u2, away1, want1)
                if p1 is None:
                    continue
                yield _assemble(t, [(u1, p0), (u2, p1)], br, "iii", "CatalogForest:" + name, name, crit)


def _toward(br: Branches, u: int, target: int) -> int:
    """Neighbour of ``u`` on the path to ``target``."""
    par = br.parent
    x, prev = target, target
    while x != -1 and x != u:
        prev, x = x, par[x]
    # u is an ancestor of target exactly when the walk reached it
    return prev if x == u else par[u]


def _tagged(res: SplitResult, target: int) -> SplitResult:
    """Case (i) tag, plus the catalog shape the builder will need, if any."""
    family = SIX_TREE if target == 6 else FIVE_TREE_5
    tag = "SixVertexTree" if target == 6 else "FiveVertexTree"
    shape = shape_for(res.pieces, family)
    return SplitResult(res.t0, res.t0_ids, res.pieces, res.piece_ids, res.attach, "i", tag, shape, res.critical)


def _first(t: Tree, target: int) -> SplitResult:
    for res in iter_splits(t, target):
        return res
    br = Branches(t)
    path = list(longest_path(t).vertices)
    crit = critical_pair(t, path, br, target)
    raise SplitNotFound(t, target, f"critical={crit}")


def find_split6(t: Tree) -> SplitResult:
    """Six-vertex rooted piece, else a T'-family piece, else an F-family forest."""
    if t.n < 6:
        raise SplitError("need at least six vertices")
    return _first(t, 6)


def find_split5(t: Tree) -> SplitResult:
    """Five-vertex rooted piece, else a T''-family piece, else the forest F'."""
    if t.n < 5:
        raise SplitError("need at least five vertices")
    return _first(t, 5)
