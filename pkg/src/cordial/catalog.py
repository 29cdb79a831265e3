"""The small rooted trees and forests that need hand-made labelings.

Each shape is given as a parent list in the order its labels are printed in
the tables: external roots first (``None``), then vertices level by level.
An integer entry is the index of the parent within the same list.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .tree import RootedForest, rooted_from_parents


@dataclass(frozen=True)
class Shape:
    name: str
    family: str
    parents: tuple[int | None, ...]

    @cached_property
    def forest(self) -> RootedForest:
        return rooted_from_parents(self.parents)

    @property
    def n_roots(self) -> int:
        return self.forest.n_roots

    @property
    def n(self) -> int:
        return self.forest.n

    @cached_property
    def code(self) -> tuple[str, ...]:
        return self.forest.canonical_form()


# family names
SIX_TREE = "six-tree"          # split off six vertices, root degree >= 2
FIVE_TREE_6 = "five-tree-6"    # five vertices on a tree of order 6m+1
SIX_FOREST = "six-forest"      # six vertices under two roots
FIVE_TREE_5 = "five-tree-5"    # five vertices, root degree >= 2
FOUR_TREE = "four-tree"        # four vertices on a tree of order 6m+1
FIVE_FOREST = "five-forest"    # five vertices under two roots

_RAW: list[tuple[str, str, tuple[int | None, ...]]] = [
    ("a", SIX_TREE, (None, 0, 0, 1, 2, 4, 5)),
    ("b", SIX_TREE, (None, 0, 0, 1, 2, 3, 4)),
    ("c", SIX_TREE, (None, 0, 0, 1, 1, 2, 2)),
    ("d", SIX_TREE, (None, 0, 0, 1, 1, 1, 2)),
    ("e", SIX_TREE, (None, 0, 0, 1, 1, 2, 5)),
    ("f", SIX_TREE, (None, 0, 0, 0, 2, 3, 5)),
    ("g", SIX_TREE, (None, 0, 0, 0, 1, 2, 3)),
    ("h", SIX_TREE, (None, 0, 0, 0, 0, 3, 4)),
    ("T'", FIVE_TREE_6, (None, 0, 0, 1, 2, 4)),
    ("T'2", FIVE_TREE_6, (None, 0, 1, 1, 2, 4)),
    # level three is read right to left relative to the drawing
    ("T'3", FIVE_TREE_6, (None, 0, 1, 2, 2, 4)),
    ("T'4", FIVE_TREE_6, (None, 0, 1, 2, 3, 3)),
    # two roots: F hangs P2 and P4, the others hang a 4-vertex tree and P2
    ("F", SIX_FOREST, (None, None, 0, 1, 2, 3, 5, 6)),
    ("F2", SIX_FOREST, (None, None, 0, 1, 2, 3, 4, 4)),
    ("F3", SIX_FOREST, (None, None, 0, 1, 2, 2, 3, 5)),
    ("F4", SIX_FOREST, (None, None, 0, 0, 1, 2, 3, 4)),
    ("i", FIVE_TREE_5, (None, 0, 0, 1, 2, 4)),
    ("j", FIVE_TREE_5, (None, 0, 0, 1, 2, 2)),
    ("k", FIVE_TREE_5, (None, 0, 0, 2, 3, 4)),
    ("l", FIVE_TREE_5, (None, 0, 0, 2, 3, 3)),
    ("m", FIVE_TREE_5, (None, 0, 0, 2, 2, 3)),
    ("n", FIVE_TREE_5, (None, 0, 0, 2, 2, 2)),
    ("o", FIVE_TREE_5, (None, 0, 0, 0, 2, 3)),
    ("p", FIVE_TREE_5, (None, 0, 0, 0, 3, 3)),
    ("q", FIVE_TREE_5, (None, 0, 0, 0, 0, 4)),
    ("r", FIVE_TREE_5, (None, 0, 0, 0, 0, 0)),
    ("T''", FOUR_TREE, (None, 0, 0, 1, 2)),
    ("T'''", FOUR_TREE, (None, 0, 1, 1, 1)),
    ("Tiv", FOUR_TREE, (None, 0, 1, 2, 2)),
    # labels are read from the deepest vertex upwards
    ("Tv", FOUR_TREE, (None, 2, 4, 4, 0)),
    ("F'", FIVE_FOREST, (None, None, 0, 1, 2, 3, 5)),
]

SHAPES: dict[str, Shape] = {name: Shape(name, fam, par) for name, fam, par in _RAW}

FAMILIES: dict[str, tuple[str, ...]] = {}
for _s in SHAPES.values():
    FAMILIES.setdefault(_s.family, ())
    FAMILIES[_s.family] += (_s.name,)


class CatalogError(RuntimeError):
    pass


def _index() -> dict[str, dict[tuple[str, ...], str]]:
    out: dict[str, dict[tuple[str, ...], str]] = {}
    for s in SHAPES.values():
        fam = out.setdefault(s.family, {})
        if s.code in fam:
            raise CatalogError(f"shapes {fam[s.code]} and {s.name} coincide")
        fam[s.code] = s.name
    return out


_BY_CODE = _index()


def shape_for_code(code: tuple[str, ...], family: str) -> str | None:
    return _BY_CODE[family].get(code)


def shape_for(piece: RootedForest, family: str) -> str | None:
    return shape_for_code(piece.canonical_form(), family)
