"""Labelings over Z_k, the cordiality verifiers and the two symmetry transforms."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .tree import RootedForest, Tree


class LabelingError(ValueError):
    pass


class ModulusMismatch(LabelingError):
    pass


class PartialLabeling(LabelingError):
    pass


@dataclass(frozen=True)
class Labeling:
    """Residues for vertices ``0..n-1`` (and for external roots, if any)."""

    k: int
    values: tuple[int, ...]
    root_values: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 2:
            raise LabelingError(f"modulus must be at least 2, got {self.k}")
        vals = tuple(int(x) for x in self.values)
        roots = tuple(int(x) for x in self.root_values)
        for x in vals + roots:
            if not 0 <= x < self.k:
                raise LabelingError(f"label {x} is not a residue mod {self.k}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "root_values", roots)

    @classmethod
    def of(cls, k: int, values: Iterable[int], root_values: Iterable[int] = ()) -> "Labeling":
        """Build from arbitrary integers, reducing each mod ``k``."""
        return cls(k, tuple(int(x) % k for x in values), tuple(int(x) % k for x in root_values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)


@dataclass(frozen=True)
class Violation:
    kind: str  # "label", "weight" or "majority"
    a: int
    b: int
    count_a: int
    count_b: int


@dataclass(frozen=True)
class BalanceReport:
    k: int
    label_counts: tuple[int, ...]
    weight_counts: tuple[int, ...]
    cordial: bool
    violations: tuple[Violation, ...] = field(default=())

    @property
    def minority_weights(self) -> frozenset[int]:
        """Weights strictly below the maximum count (every weight when all tie)."""
        return _below_max(self.weight_counts)

    @property
    def majority_labels(self) -> frozenset[int]:
        """Labels at the maximum count (every label when all tie)."""
        top = max(self.label_counts)
        return frozenset(a for a, c in enumerate(self.label_counts) if c == top)

    @property
    def minority_labels(self) -> frozenset[int]:
        return _below_max(self.label_counts)

    @property
    def majority_weights(self) -> frozenset[int]:
        top = max(self.weight_counts)
        return frozenset(a for a, c in enumerate(self.weight_counts) if c == top)

    def __bool__(self) -> bool:
        return self.cordial


def _below_max(counts: Sequence[int]) -> frozenset[int]:
    top = max(counts)
    below = frozenset(a for a, c in enumerate(counts) if c < top)
    return below if below else frozenset(range(len(counts)))


def edge_weight(a: int, b: int, k: int) -> int:
    return (a + b) % k


def _pair_violations(kind: str, counts: Sequence[int], skip: int | None = None) -> list[Violation]:
    out = []
    idx = [a for a in range(len(counts)) if a != skip]
    for i, a in enumerate(idx):
        for b in idx[i + 1:]:
            if abs(counts[a] - counts[b]) > 1:
                out.append(Violation(kind, a, b, counts[a], counts[b]))
    return out


def _check_total(n: int, f: Labeling, k: int | None) -> None:
    if k is not None and f.k != k:
        raise ModulusMismatch(f"labeling is mod {f.k}, expected mod {k}")
    if len(f.values) != n:
        raise PartialLabeling(f"labeling covers {len(f.values)} of {n} vertices")


def label_counts(f: Labeling) -> np.ndarray:
    return np.bincount(f.as_array(), minlength=f.k)


def tree_weights(t: Tree, f: Labeling) -> np.ndarray:
    """Edge weights of ``t`` under ``f`` in ``t.edges`` order."""
    us, vs = t.edge_array
    vals = f.as_array()
    return (vals[us] + vals[vs]) % f.k


def verify_cordial(t: Tree, f: Labeling, k: int | None = None) -> BalanceReport:
    """Check that label counts and weight counts are each pairwise within one."""
    _check_total(t.n, f, k)
    lc = label_counts(f)
    wc = np.bincount(tree_weights(t, f), minlength=f.k)
    lct, wct = tuple(int(x) for x in lc), tuple(int(x) for x in wc)
    ok = lc.max() - lc.min() <= 1 and wc.max() - wc.min() <= 1
    viols: tuple[Violation, ...] = ()
    if not ok:
        viols = tuple(_pair_violations("label", lct) + _pair_violations("weight", wct))
    return BalanceReport(f.k, lct, wct, bool(ok), viols)


def forest_weights(forest: RootedForest, f: Labeling) -> list[int]:
    """One weight per vertex: the edge to its parent vertex or root."""
    k = f.k
    out = []
    for i, p in enumerate(forest.parent):
        other = f.root_values[-p - 1] if p < 0 else f.values[p]
        out.append((f.values[i] + other) % k)
    return out


def verify_rooted_cordial(forest: RootedForest, f: Labeling, ell: int, k: int | None = None) -> BalanceReport:
    """Rooted-forest cordiality with ``ell`` as the weight allowed to run ahead.

    Roots carry labels but do not count; every root edge carries a weight.
    """
    _check_total(forest.n, f, k)
    if len(f.root_values) != forest.n_roots:
        raise PartialLabeling(f"labeling has {len(f.root_values)} root labels for {forest.n_roots} roots")
    kk = f.k
    ell %= kk
    lct = tuple(int(x) for x in np.bincount(f.as_array(), minlength=kk))
    wct = tuple(int(x) for x in np.bincount(np.asarray(forest_weights(forest, f), dtype=np.int64), minlength=kk))
    viols = _pair_violations("label", lct) + _pair_violations("weight", wct, skip=ell)
    for i in range(kk):
        d = wct[ell] - wct[i]
        if not 0 <= d <= 2:
            viols.append(Violation("majority", ell, i, wct[ell], wct[i]))
    return BalanceReport(kk, lct, wct, not viols, tuple(viols))


def rotate(f: Labeling, a: int) -> Labeling:
    """Add ``a`` to every label (roots included); weights move by ``2a``."""
    k = f.k
    return Labeling(k, tuple((x + a) % k for x in f.values), tuple((x + a) % k for x in f.root_values))


def negate(f: Labeling) -> Labeling:
    k = f.k
    return Labeling(k, tuple((-x) % k for x in f.values), tuple((-x) % k for x in f.root_values))
