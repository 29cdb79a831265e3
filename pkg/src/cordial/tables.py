"""Hand-made labelings of the catalog shapes, loaded from ``data/tables.txt``.

Every entry is recomputed on load.  Entries whose recomputed weights do not
match their declared kind are kept (so the file stays a faithful copy) but
flagged, and lookup never returns them.
"""
from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable

import numpy as np

from .catalog import FAMILIES, FIVE_TREE_5, SHAPES, SIX_FOREST, SIX_TREE, Shape
from .labeling import Labeling, forest_weights
from .tree import RootedForest, rooted_from_parents

K = 6
KINDS = ("majority", "nomajority", "minority-label", "minority-labels", "minority-weight", "subtree")


class TablesError(ValueError):
    pass


class TranscriptionError(TablesError):
    """An entry whose recomputed profile disagrees with its declared kind."""


class NoEntry(TablesError):
    pass


class ShapeMismatch(TablesError):
    pass


@dataclass(frozen=True)
class TableEntry:
    list_no: int
    shape: str
    labels: tuple[int, ...]     # roots first, then the shape's vertex order
    kind: str
    params: tuple[int, ...] = ()
    ref: str | None = None      # subtree entries name their parent shape
    line: int = 0
    transform: str = ""         # how a synthesized entry was derived

    @property
    def roots(self) -> tuple[int, ...]:
        return self.labels[: SHAPES[self.shape].n_roots]

    @property
    def vertex_labels(self) -> tuple[int, ...]:
        return self.labels[SHAPES[self.shape].n_roots:]

    def coords(self) -> str:
        return f"list {self.list_no}, shape {self.shape}, line {self.line}: {format_entry(self)}"


# ---------------------------------------------------------------- parsing


def parse_line(line: str, lineno: int = 0) -> TableEntry | None:
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    parts = text.split()
    if len(parts) != 5:
        raise TablesError(f"line {lineno}: expected 5 fields, got {len(parts)}")
    lst, shape, labels, kind, params = parts
    if shape not in SHAPES:
        raise TablesError(f"line {lineno}: unknown shape {shape!r}")
    if kind not in KINDS:
        raise TablesError(f"line {lineno}: unknown kind {kind!r}")
    if kind == "subtree":
        if params not in SHAPES:
            raise TablesError(f"line {lineno}: subtree reference {params!r} is not a shape")
        return TableEntry(int(lst), shape, (), kind, (), params, lineno)
    try:
        labs = tuple(int(x) for x in labels.split(","))
        pars = () if params == "-" else tuple(int(x) for x in params.split(","))
    except ValueError as exc:
        raise TablesError(f"line {lineno}: {exc}") from exc
    return TableEntry(int(lst), shape, labs, kind, pars, None, lineno)


def parse_tables(text: str) -> list[TableEntry]:
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        e = parse_line(line, i)
        if e is not None:
            out.append(e)
    return out


def format_entry(e: TableEntry) -> str:
    if e.kind == "subtree":
        return f"{e.list_no} {e.shape} - subtree {e.ref}"
    params = ",".join(str(p) for p in e.params) if e.params else "-"
    return f"{e.list_no} {e.shape} {','.join(str(x) for x in e.labels)} {e.kind} {params}"


def serialize(entries: Iterable[TableEntry], header: Iterable[str] = ()) -> str:
    return "".join(f"{h}\n" for h in header) + "".join(format_entry(e) + "\n" for e in entries)


def table_text() -> str:
    return importlib.resources.files("cordial").joinpath("data/tables.txt").read_text()


@lru_cache(maxsize=1)
def load_tables() -> tuple[TableEntry, ...]:
    return tuple(parse_tables(table_text()))


# ---------------------------------------------------------------- checking


def weights_of(shape: Shape, labels: tuple[int, ...]) -> list[int]:
    r = shape.n_roots
    return forest_weights(shape.forest, Labeling(K, labels[r:], labels[:r]))


def entry_problem(e: TableEntry) -> str | None:
    """None if ``e`` recomputes to its declared kind, else a short reason."""
    if e.kind == "subtree":
        parent, child = SHAPES[e.ref], SHAPES[e.shape]  # type: ignore[index]
        if not is_leaf_deletion(parent, child):
            return f"{e.shape} is not {e.ref} minus a leaf"
        return None
    shape = SHAPES[e.shape]
    if len(e.labels) != shape.n_roots + shape.n:
        return f"{len(e.labels)} labels for {shape.n_roots + shape.n} slots"
    if any(not 0 <= x < K for x in e.labels):
        return "label out of range"
    if shape.n_roots > 1 and not e.transform and e.labels[0] != 0:
        return "left root must carry 0"
    verts = e.vertex_labels
    if len(set(verts)) != len(verts):
        return f"vertex labels {verts} repeat"
    wc = np.bincount(weights_of(shape, e.labels), minlength=K)
    if e.kind == "nomajority":
        return None if wc.max() <= 1 else f"weight counts {wc.tolist()} repeat"
    if e.kind == "majority":
        (w,) = e.params
        others = np.delete(wc, w)
        ok = wc[w] == 2 and others.max() <= 1
        return None if ok else f"weight counts {wc.tolist()} do not single out {w}"
    if e.kind == "minority-label":
        (x,) = e.params
        if x in verts:
            return f"label {x} present"
        return None if wc.max() <= 1 else f"weight counts {wc.tolist()} repeat"
    if e.kind == "minority-labels":
        if any(x in verts for x in e.params) or len(set(e.params)) != 2:
            return f"labels {e.params} not both absent"
        return None if wc.max() <= 1 else f"weight counts {wc.tolist()} repeat"
    if e.kind == "minority-weight":
        (x,) = e.params
        ok = wc.max() <= 1 and wc[x] == 0
        return None if ok else f"weight counts {wc.tolist()} do not miss {x}"
    return f"unknown kind {e.kind}"


def is_leaf_deletion(parent: Shape, child: Shape) -> bool:
    return child.code in {c for c, _ in leaf_deletions(parent)}


def leaf_deletions(shape: Shape) -> list[tuple[tuple[str, ...], int]]:
    """(code of shape minus leaf, leaf index) for each leaf of ``shape``."""
    f = shape.forest
    out = []
    for v in range(f.n):
        if f.children[v]:
            continue
        if f.parent[v] < 0 and len(f.root_children[-f.parent[v] - 1]) == 1:
            continue
        out.append((_delete_vertex(f, v).canonical_form(), v))
    return out


def _delete_vertex(f: RootedForest, v: int) -> RootedForest:
    keep = [u for u in range(f.n) if u != v]
    idx = {u: i for i, u in enumerate(keep)}
    par = tuple(f.parent[u] if f.parent[u] < 0 else idx[f.parent[u]] for u in keep)
    return RootedForest(f.n_roots, par) if f.n_roots > 1 else rooted_from_parents([None] + [p + 1 if p >= 0 else 0 for p in par])


@dataclass
class ValidationReport:
    entries: int = 0
    failures: list[tuple[TableEntry, str]] = field(default_factory=list)
    gaps: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.gaps

    def lines(self) -> list[str]:
        out = [f"FAIL {e.coords()}: {why}" for e, why in self.failures]
        out += [f"GAP {g}" for g in self.gaps]
        out.append(f"{self.entries} entries, {len(self.failures)} failures, {len(self.gaps)} coverage gaps")
        return out


def validate_all(entries: Iterable[TableEntry] | None = None, strict: bool = False) -> ValidationReport:
    """Recompute every entry and check requirement coverage.

    With ``strict`` the first bad entry raises ``TranscriptionError``.
    """
    entries = load_tables() if entries is None else tuple(entries)
    rep = ValidationReport(entries=len(entries))
    for e in entries:
        why = entry_problem(e)
        if why is not None:
            if strict:
                raise TranscriptionError(f"{e.coords()}: {why}")
            rep.failures.append((e, why))
    good = tuple(e for e in entries if (e, entry_problem(e)) not in rep.failures)
    rep.gaps = coverage_gaps(good)
    return rep


def valid_entries() -> tuple[TableEntry, ...]:
    return _valid_cache()


@lru_cache(maxsize=1)
def _valid_cache() -> tuple[TableEntry, ...]:
    return tuple(e for e in load_tables() if entry_problem(e) is None)


# ---------------------------------------------------------------- requirements and lookup


def transform_entry(e: TableEntry, a: int, neg: bool) -> TableEntry:
    """Apply ``x -> (±x) + a`` to every label and update the declared parameters."""
    s = -1 if neg else 1
    labels = tuple((s * x + a) % K for x in e.labels)
    if e.kind in ("majority", "minority-weight"):
        params = tuple((s * p + 2 * a) % K for p in e.params)
    elif e.kind in ("minority-label", "minority-labels"):
        params = tuple((s * p + a) % K for p in e.params)
    else:
        params = e.params
    tag = ("neg" if neg else "") + (f"+{a}" if a else "")
    return replace(e, labels=labels, params=params, transform=tag or "stored")


@dataclass(frozen=True)
class Need:
    """What a piece labeling must achieve when pasted onto T0.

    ``roots`` are the labels forced on the roots.  ``weight`` is T0's chosen
    minority weight (the only weight allowed to repeat, or the weight the
    piece must not miss).  ``label`` is T0's majority label, which the piece
    must avoid.
    """

    roots: tuple[int, ...]
    weight: int | None = None
    label: int | None = None

    def accepts(self, e: TableEntry) -> bool:
        if e.roots != self.roots:
            return False
        if e.kind == "nomajority":
            return self.label is None or self.label not in e.vertex_labels
        if e.kind == "majority":
            return self.weight is not None and e.params[0] == self.weight
        if e.kind in ("minority-label", "minority-labels"):
            return self.label is not None and self.label in e.params
        if e.kind == "minority-weight":
            return self.weight is not None and e.params[0] != self.weight
        return False


def candidates(shape: str, need: Need, pool: Iterable[TableEntry] | None = None) -> list[TableEntry]:
    """Validated entries for ``shape`` turned (by rotation and negation) to meet ``need``.

    Exact stored matches come first, then rotations, then negations.
    """
    out = []
    pool = valid_entries() if pool is None else pool
    stored = [e for e in pool if e.shape == shape and e.kind != "subtree"]
    for neg in (False, True):
        for e in stored:
            s = -1 if neg else 1
            a = (need.roots[0] - s * e.labels[0]) % K
            t = transform_entry(e, a, neg)
            if need.accepts(t):
                out.append(t)
    out.sort(key=lambda t: (t.transform != "stored", t.transform.startswith("neg"), t.kind == "nomajority"))
    return out


def lookup(shape: str, need: Need) -> TableEntry:
    found = candidates(shape, need)
    if not found:
        raise NoEntry(f"no entry for shape {shape} meeting {need}")
    e = found[0]
    why = entry_problem(e)
    if why is not None:
        raise TranscriptionError(f"synthesized entry {format_entry(e)} fails: {why}")
    return e


def requirement_grid(shape: str) -> list[Need]:
    fam = SHAPES[shape].family
    if fam == SIX_TREE:
        return [Need((0,), weight=w) for w in range(K)]
    if fam in (SIX_FOREST,):
        return [Need((0, d), weight=w) for d in range(K) for w in range(K)]
    if fam == FIVE_TREE_5:
        return [Need((0,), weight=w) for w in range(K)]
    if fam in ("five-tree-6", "four-tree"):
        return [Need((0,), label=x) for x in range(K)]
    return []


def coverage_gaps(entries: Iterable[TableEntry]) -> list[str]:
    """Requirements (at root label 0) that no entry of ``entries`` reaches."""
    pool = tuple(entries)
    shapes = [s for fam in (SIX_TREE, "five-tree-6", SIX_FOREST, "four-tree") for s in FAMILIES[fam]]
    gaps = []
    for shape in shapes + ["l", "m", "p", "r"]:
        for need in requirement_grid(shape):
            if not candidates(shape, need, pool):
                gaps.append(f"shape {shape}: nothing meets {_need_text(need)}")
    return gaps


def _need_text(need: Need) -> str:
    parts = [f"roots {need.roots}"]
    if need.weight is not None:
        parts.append(f"weight {need.weight}")
    if need.label is not None:
        parts.append(f"label {need.label}")
    return ", ".join(parts)


def closure_report(shape: str = "F") -> list[tuple[int, int, bool]]:
    """(root difference, majority weight, satisfiable) over the full grid."""
    return [(n.roots[1], n.weight, bool(candidates(shape, n))) for n in requirement_grid(shape)]  # type: ignore[misc]


# ---------------------------------------------------------------- applying entries


def apply_entry(e: TableEntry, piece: RootedForest) -> Labeling:
    """Carry ``e``'s labels onto ``piece`` through a root-preserving isomorphism."""
    shape = SHAPES[e.shape]
    if e.kind == "subtree":
        raise ShapeMismatch("subtree references carry no labels; use a parent entry")
    mapping = piece.isomorphism_to(shape.forest)
    if mapping is None:
        raise ShapeMismatch(f"piece is not shape {e.shape}")
    perm = piece.root_matching(shape.forest)
    r = shape.n_roots
    vals = tuple(e.labels[r + mapping[v]] for v in range(piece.n))
    roots = tuple(e.labels[perm[j]] for j in range(piece.n_roots))
    return Labeling(K, vals, roots)


def apply_with_leaf_removed(e: TableEntry, piece: RootedForest) -> Labeling:
    """Label ``piece`` (``e``'s shape minus one leaf) by dropping that leaf's label."""
    shape = SHAPES[e.shape]
    code = piece.canonical_form()
    for c, leaf in leaf_deletions(shape):
        if c != code:
            continue
        keep = [u for u in range(shape.n) if u != leaf]
        r = shape.n_roots
        reduced_labels = e.labels[:r] + tuple(e.labels[r + u] for u in keep)
        reduced = _delete_vertex(shape.forest, leaf)
        mapping = piece.isomorphism_to(reduced)
        perm = piece.root_matching(reduced)
        assert mapping is not None
        vals = tuple(reduced_labels[r + mapping[v]] for v in range(piece.n))
        roots = tuple(reduced_labels[perm[j]] for j in range(piece.n_roots))
        return Labeling(K, vals, roots)
    raise ShapeMismatch(f"piece is not {e.shape} minus a leaf")


@lru_cache(maxsize=None)
def supershapes(code: tuple[str, ...], family: str) -> tuple[str, ...]:
    """Shapes of ``family`` that become ``code`` after deleting one leaf."""
    return tuple(s for s in FAMILIES[family] if code in {c for c, _ in leaf_deletions(SHAPES[s])})
