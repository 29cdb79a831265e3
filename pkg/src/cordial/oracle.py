"""Ground truth independent of the constructive labeler.

Free trees are enumerated with the Wright-Richmond-Odlyzko-McKay successor
rule on level sequences; labelings are found by plain backtracking.
"""
from __future__ import annotations

import os
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels
from .labeling import Labeling, verify_cordial
from .tree import Tree, centers, free_canonical_form

DEFAULT_CAP = 18
# numbers of free trees on n = 0, 1, 2, ... vertices
FREE_TREE_COUNTS = (1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320, 48629, 123867)


class CapExceeded(ValueError):
    pass


class CheckpointCorrupt(ValueError):
    pass


# ------------------------------------------------------------------ enumeration


def _level_to_tree(levels: Sequence[int]) -> Tree:
    """Tree from a level sequence (root at level 1, preorder)."""
    last_at: dict[int, int] = {}
    edges = []
    for i, lv in enumerate(levels):
        if lv > 1:
            edges.append((last_at[lv - 1], i))
        last_at[lv] = i
    return Tree.trusted(len(levels), edges)


def _successor_rooted(seq: list[int], p: int | None = None) -> list[int] | None:
    """Next rooted level sequence in reverse lexicographic order (Beyer-Hedetniemi)."""
    if p is None:
        p = len(seq) - 1
        while p > 0 and seq[p] == 2:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while seq[q] != seq[p] - 1:
        q -= 1
    out = list(seq)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _split_first_subtree(seq: list[int]) -> tuple[list[int], list[int]]:
    """Level sequences of the root's first subtree and of the remainder."""
    m = len(seq)
    for i in range(2, len(seq)):
        if seq[i] == 2:
            m = i
            break
    first = [x - 1 for x in seq[1:m]]
    rest = [1] + seq[m:]
    return first, rest


def _is_centroid_canonical(seq: list[int]) -> bool:
    first, rest = _split_first_subtree(seq)
    h1, h2 = max(first), max(rest)
    if h2 < h1:
        return False
    if h2 == h1:
        if len(first) > len(rest):
            return False
        if len(first) == len(rest) and first > rest:
            return False
    return True


def _free_level_sequences(n: int) -> Iterator[list[int]]:
    if n <= 2:
        yield list(range(1, n + 1))
        return
    # the path rooted at its centre is the first candidate
    seq = list(range(1, n // 2 + 2)) + list(range(2, (n + 1) // 2 + 1))
    while seq is not None:
        if _is_centroid_canonical(seq):
            yield seq
            seq = _successor_rooted(seq)
            continue
        first, _ = _split_first_subtree(seq)
        p = len(first)
        nxt = _successor_rooted(seq, p)
        if nxt is None:
            return
        if seq[p] > 3:
            f2, _ = _split_first_subtree(nxt)
            tail = list(range(2, max(f2) + 2))
            nxt[len(nxt) - len(tail):] = tail
        seq = nxt


def enumerate_free_trees(n: int, cap: int = DEFAULT_CAP) -> Iterator[Tree]:
    """Each free tree on ``n`` vertices exactly once, in a fixed order."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    for seq in _free_level_sequences(n):
        yield _level_to_tree(seq)


def enumerate_caterpillars(n: int, cap: int = DEFAULT_CAP) -> Iterator[Tree]:
    from .tree import is_caterpillar

    return (t for t in enumerate_free_trees(n, cap) if is_caterpillar(t))


# independent count oracles ----------------------------------------------------


def prufer_decode(seq: Sequence[int], n: int) -> Tree:
    """Labeled tree for a Prüfer sequence of length ``n - 2``."""
    if n == 1:
        return Tree.trusted(1, [])
    if n == 2:
        return Tree.trusted(2, [(0, 1)])
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    import heapq

    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return Tree.trusted(n, edges)


def count_by_prufer(n: int) -> int:
    """Isomorphism classes among all ``n**(n-2)`` labeled trees."""
    if n <= 2:
        return 1
    seen = set()
    for flat in np.ndindex(*([n] * (n - 2))):
        seen.add(free_canonical_form(prufer_decode(flat, n)))
    return len(seen)


def count_by_leaf_growth(n: int) -> int:
    """Isomorphism classes reached by adding a leaf to every class on ``n - 1`` vertices."""
    layer = {free_canonical_form(Tree.trusted(1, [])): Tree.trusted(1, [])}
    for size in range(2, n + 1):
        nxt: dict[str, Tree] = {}
        for t in layer.values():
            for v in range(t.n):
                grown = Tree.trusted(size, list(t.edges) + [(v, size - 1)])
                nxt.setdefault(free_canonical_form(grown), grown)
        layer = nxt
    return len(layer)


# ------------------------------------------------------------------ backtracking


def centroid(t: Tree) -> int:
    n = t.n
    parent = [-1] * n
    order = [0]
    seen = [False] * n
    seen[0] = True
    for u in order:
        for w in t.adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                order.append(w)
    size = [1] * n
    for u in reversed(order[1:]):
        size[parent[u]] += size[u]
    best, best_v = n + 1, 0
    for v in range(n):
        worst = n - size[v]
        for w in t.adj[v]:
            if parent[w] == v:
                worst = max(worst, size[w])
        if worst < best:
            best, best_v = worst, v
    return best_v


def search_order(t: Tree, start: int | None = None) -> tuple[list[int], np.ndarray]:
    """BFS order from ``start`` (default: a centroid) and each vertex's earlier neighbour."""
    s = centroid(t) if start is None else start
    order = [s]
    pos = {s: 0}
    par = [-1]
    q = deque([s])
    while q:
        u = q.popleft()
        for w in t.adj[u]:
            if w not in pos:
                pos[w] = len(order)
                order.append(w)
                par.append(pos[u])
                q.append(w)
    return order, np.asarray(par, dtype=np.int64)


@dataclass(frozen=True)
class SearchResult:
    labeling: Labeling | None
    steps: int
    exhausted: bool = True

    @property
    def sat(self) -> bool:
        return self.labeling is not None


def backtrack_k_cordial(t: Tree, k: int, step_limit: int = 0, use_numba: bool | None = None,
                        prune: bool = True) -> SearchResult:
    """Depth-first search for a k-cordial labeling; the first vertex is pinned to 0.

    Pinning is harmless because adding a constant preserves cordiality.
    With ``prune=False`` the caps are only checked once a labeling is complete.
    """
    if not prune:
        return _brute_force(t, k)
    order, par = search_order(t)
    vals = np.zeros(t.n, dtype=np.int64)
    lc = np.zeros(k, dtype=np.int64)
    wc = np.zeros(k, dtype=np.int64)
    status, steps = _kernels.search(k, par, vals, 0, lc, wc, t.n, t.n - 1, first_zero=True,
                                    step_limit=step_limit, use_numba=use_numba)
    if status != 1:
        return SearchResult(None, steps, status == 0)
    out = [0] * t.n
    for i, v in enumerate(order):
        out[v] = int(vals[i])
    return SearchResult(Labeling(k, tuple(out)), steps)


def _brute_force(t: Tree, k: int) -> SearchResult:
    steps = 0
    for rest in np.ndindex(*([k] * (t.n - 1))):
        steps += 1
        f = Labeling(k, (0,) + tuple(int(x) for x in rest))
        if verify_cordial(t, f).cordial:
            return SearchResult(f, steps)
    if t.n == 1:
        return SearchResult(Labeling(k, (0,)), 1)
    return SearchResult(None, steps)


# ------------------------------------------------------------------ random trees


def random_tree(n: int, seed: int | np.random.Generator) -> Tree:
    """Uniform labeled tree on ``n`` vertices via a random Prüfer sequence."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if n <= 2:
        return prufer_decode((), n)
    seq = rng.integers(0, n, size=n - 2)
    return prufer_decode([int(x) for x in seq], n)


# ------------------------------------------------------------------ scanning


@dataclass
class ScanReport:
    k: int
    n_min: int
    n_max: int
    method: str = "search"
    examined: dict[int, int] = field(default_factory=dict)
    cordial: dict[int, int] = field(default_factory=dict)
    fallbacks: dict[int, int] = field(default_factory=dict)
    steps: dict[int, int] = field(default_factory=dict)
    seconds: dict[int, float] = field(default_factory=dict)
    unsat: list[tuple[int, int, list[tuple[int, int]]]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.examined.values())

    @property
    def total_unsat(self) -> int:
        return len(self.unsat)

    def counts_match(self) -> bool:
        return all(self.examined[n] == FREE_TREE_COUNTS[n] for n in self.examined if n < len(FREE_TREE_COUNTS))


CHECKPOINT_HEADER = "# cordial-scan v1"


def _checker(method: str, k: int) -> Callable[[Tree], tuple[bool, int, int]]:
    """(verdict, steps, fallback steps) for one tree."""
    if method == "search":
        def check(t: Tree) -> tuple[bool, int, int]:
            res = backtrack_k_cordial(t, k)
            ok = res.sat and verify_cordial(t, res.labeling).cordial  # type: ignore[arg-type]
            return ok, res.steps, 0
        return check
    if method == "constructive":
        if k != 6:
            raise ValueError("the constructive method only labels with k=6")
        from .builder import label_six_cordial

        def check(t: Tree) -> tuple[bool, int, int]:
            f, trace = label_six_cordial(t)
            return verify_cordial(t, f).cordial, len(trace.steps), trace.fallback_count
        return check
    raise ValueError(f"unknown method {method!r}")


def _read_checkpoint(path: Path, k: int, method: str) -> dict[int, list[tuple[int, bool, int, int]]]:
    done: dict[int, list[tuple[int, bool, int, int]]] = {}
    finished: set[int] = set()
    lines = path.read_text().splitlines()
    if not lines:
        return {}
    if lines[0] != f"{CHECKPOINT_HEADER} k={k} method={method}":
        raise CheckpointCorrupt(f"{path}: header {lines[0]!r} does not match k={k} method={method}")
    for no, line in enumerate(lines[1:], start=2):
        parts = line.split()
        try:
            if parts[0] == "R":
                n, idx, verdict, steps, fb = (int(parts[1]), int(parts[2]), parts[3], int(parts[4]), int(parts[5]))
                if verdict not in ("SAT", "UNSAT"):
                    raise ValueError(verdict)
                done.setdefault(n, []).append((idx, verdict == "SAT", steps, fb))
            elif parts[0] == "D":
                finished.add(int(parts[1]))
            else:
                raise ValueError(parts[0])
        except (IndexError, ValueError) as exc:
            if no == len(lines):
                break  # a torn final line from an interrupted write
            raise CheckpointCorrupt(f"{path}:{no}: {line!r}") from exc
    # keep only sizes that were completed; partial sizes are redone
    return {n: rows for n, rows in done.items() if n in finished}


def scan(k: int, n_max: int, n_min: int = 1, method: str = "search", checkpoint: str | os.PathLike | None = None,
         cap: int = DEFAULT_CAP, timing: bool = True, jobs: int = 1, progress: Callable[[int, int], None] | None = None) -> ScanReport:
    """Check every free tree with ``n_min <= n <= n_max``; resumable through ``checkpoint``."""
    rep = ScanReport(k, n_min, n_max, method)
    _checker(method, k)  # reject bad arguments before touching the checkpoint
    if n_max > cap:
        raise CapExceeded(f"n={n_max} exceeds the enumeration cap {cap}")
    prior: dict[int, list[tuple[int, bool, int, int]]] = {}
    fh = None
    pool = None
    if checkpoint is not None:
        path = Path(checkpoint)
        if path.exists() and path.stat().st_size:
            prior = _read_checkpoint(path, k, method)
            # rewrite without any torn tail so appends stay well-formed
            keep = [f"{CHECKPOINT_HEADER} k={k} method={method}"]
            for n in sorted(prior):
                keep += [f"R {n} {i} {'SAT' if ok else 'UNSAT'} {s} {fb}" for i, ok, s, fb in prior[n]]
                keep.append(f"D {n} {len(prior[n])}")
            path.write_text("\n".join(keep) + "\n")
        else:
            path.write_text(f"{CHECKPOINT_HEADER} k={k} method={method}\n")
        fh = open(path, "a")
    try:
        for n in range(n_min, n_max + 1):
            t0 = time.perf_counter()
            rows: list[tuple[int, bool, int, int]]
            trees = None
            if n in prior:
                rows = prior[n]
            else:
                trees = list(enumerate_free_trees(n, cap))
                if pool is None and jobs > 1:
                    from multiprocessing import get_context

                    pool = get_context("spawn").Pool(jobs)
                verdicts = _run_checks(method, k, trees, pool, jobs)
                rows = []
                for idx, (ok, steps, fb) in enumerate(verdicts):
                    rows.append((idx, ok, steps, fb))
                    if fh is not None:
                        fh.write(f"R {n} {idx} {'SAT' if ok else 'UNSAT'} {steps} {fb}\n")
                    if progress is not None:
                        progress(n, idx)
                if fh is not None:
                    fh.write(f"D {n} {len(rows)}\n")
                    fh.flush()
            rep.examined[n] = len(rows)
            rep.cordial[n] = sum(1 for r in rows if r[1])
            rep.steps[n] = sum(r[2] for r in rows)
            rep.fallbacks[n] = sum(r[3] for r in rows)
            if timing:
                rep.seconds[n] = time.perf_counter() - t0
            for idx, ok, _, _ in rows:
                if not ok:
                    t = trees[idx] if trees is not None else _nth_tree(n, idx, cap)
                    rep.unsat.append((n, idx, list(t.edges)))
    finally:
        if fh is not None:
            fh.close()
        if pool is not None:
            pool.close()
            pool.join()
    return rep


def _check_one(args: tuple[str, int, int, tuple[tuple[int, int], ...]]) -> tuple[bool, int, int]:
    method, k, n, edges = args
    return _checker(method, k)(Tree.trusted(n, edges))


def _run_checks(method: str, k: int, trees: list[Tree], pool, jobs: int) -> list[tuple[bool, int, int]]:
    """Verdicts in enumeration order; the worker count never changes the result."""
    if pool is None or len(trees) < 2:
        check = _checker(method, k)
        return [check(t) for t in trees]
    tasks = [(method, k, t.n, t.edges) for t in trees]
    return pool.map(_check_one, tasks, chunksize=max(1, len(tasks) // (8 * jobs)))


def _nth_tree(n: int, idx: int, cap: int) -> Tree:
    for i, t in enumerate(enumerate_free_trees(n, cap)):
        if i == idx:
            return t
    raise IndexError(idx)


__all__ = [
    "CapExceeded", "CheckpointCorrupt", "FREE_TREE_COUNTS", "ScanReport", "SearchResult",
    "backtrack_k_cordial", "centers", "count_by_leaf_growth", "count_by_prufer",
    "enumerate_caterpillars", "enumerate_free_trees", "prufer_decode", "random_tree", "scan",
]
