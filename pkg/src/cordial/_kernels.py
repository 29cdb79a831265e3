"""Hot loops of the search code, compiled with numba when it is available.

Set ``CORDIAL_DISABLE_NUMBA=1`` to force the interpreted versions.  Both
versions share one Python source, so they cannot drift apart.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("CORDIAL_DISABLE_NUMBA", "").strip() not in ("", "0", "false", "no")

try:  # pragma: no cover - depends on the environment
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def _njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def _caps(total: int, k: int) -> tuple[int, int]:
    """(cap, how many residues may sit at the cap) for ``total`` items over Z_k."""
    q, r = divmod(total, k)
    return (q + 1, r) if r else (q, k)


def _extend_py(k, parent, vals, n_fixed, lc, wc, lcap, lhi, wcap, whi, first_zero, step_limit):
    """Depth-first completion of ``vals[n_fixed:]``.

    ``parent[i]`` is the index in ``vals`` of the already-placed neighbour of
    free vertex ``i`` (or -1 for none).  ``lc``/``wc`` hold the label and
    weight counts contributed by the fixed part and are updated in place.
    Counts may reach the cap for at most ``lhi``/``whi`` residues.  Returns
    (status, steps) with status 1 = found, 0 = exhausted, -1 = step limit.
    """
    m = parent.shape[0]
    if m == 0:
        return 1, 0
    lat = 0
    for a in range(k):
        if lc[a] > lcap:
            return 0, 0
        if lc[a] == lcap:
            lat += 1
    wat = 0
    for a in range(k):
        if wc[a] > wcap:
            return 0, 0
        if wc[a] == wcap:
            wat += 1
    if lat > lhi or wat > whi:
        return 0, 0
    nxt = np.zeros(m, dtype=np.int64)   # next label to try at each depth
    wused = np.full(m, -1, dtype=np.int64)
    depth = 0
    steps = 0
    while depth >= 0:
        if step_limit > 0 and steps >= step_limit:
            return -1, steps
        pos = n_fixed + depth
        # undo the assignment made at this depth on a previous visit
        if nxt[depth] > 0:
            a = vals[pos]
            if lc[a] == lcap:
                lat -= 1
            lc[a] -= 1
            w = wused[depth]
            if w >= 0:
                if wc[w] == wcap:
                    wat -= 1
                wc[w] -= 1
                wused[depth] = -1
        limit = 1 if (first_zero and depth == 0 and n_fixed == 0) else k
        placed = False
        while nxt[depth] < limit:
            a = nxt[depth]
            nxt[depth] += 1
            steps += 1
            if lc[a] + 1 > lcap or (lc[a] + 1 == lcap and lat >= lhi):
                continue
            p = parent[depth]
            w = -1
            if p >= 0:
                w = (a + vals[p]) % k
                if wc[w] + 1 > wcap or (wc[w] + 1 == wcap and wat >= whi):
                    continue
            vals[pos] = a
            lc[a] += 1
            if lc[a] == lcap:
                lat += 1
            if w >= 0:
                wc[w] += 1
                if wc[w] == wcap:
                    wat += 1
                wused[depth] = w
            placed = True
            break
        if placed:
            if depth == m - 1:
                return 1, steps
            depth += 1
            nxt[depth] = 0
        else:
            nxt[depth] = 0
            depth -= 1
    return 0, steps


def _counts_py(vals, us, vs, k):
    lc = np.zeros(k, dtype=np.int64)
    wc = np.zeros(k, dtype=np.int64)
    for i in range(vals.shape[0]):
        lc[vals[i]] += 1
    for j in range(us.shape[0]):
        wc[(vals[us[j]] + vals[vs[j]]) % k] += 1
    return lc, wc


extend_labeling = _njit(cache=True)(_extend_py) if HAS_NUMBA else _extend_py
count_labels_weights = _njit(cache=True)(_counts_py) if HAS_NUMBA else _counts_py
extend_labeling_py = _extend_py
count_labels_weights_py = _counts_py


def search(k: int, parent: np.ndarray, vals: np.ndarray, n_fixed: int, lc: np.ndarray, wc: np.ndarray,
           n_labels: int, n_weights: int, first_zero: bool = False, step_limit: int = 0,
           use_numba: bool | None = None) -> tuple[int, int]:
    """Fill ``vals[n_fixed:]`` so the totals over ``n_labels``/``n_weights`` items are balanced."""
    lcap, lhi = _caps(n_labels, k)
    wcap, whi = _caps(n_weights, k) if n_weights > 0 else (0, k)
    fn = extend_labeling if (use_numba is None or use_numba) else extend_labeling_py
    status, steps = fn(k, parent.astype(np.int64), vals, n_fixed, lc, wc, lcap, lhi, wcap, whi,
                       bool(first_zero), int(step_limit))
    return int(status), int(steps)
