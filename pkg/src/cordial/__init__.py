"""Cordial labelings of trees.

The main entry points are :func:`label_six_cordial` (constructive 6-cordial
labeling), :func:`verify_cordial` and the exhaustive tools in
:mod:`cordial.oracle`.
"""
from .builder import BuildTrace, label_six_cordial
from .grace import grace_label
from .labeling import BalanceReport, Labeling, negate, rotate, verify_cordial, verify_rooted_cordial
from .oracle import backtrack_k_cordial, enumerate_free_trees, random_tree
from .tree import RootedForest, RootedTree, Tree

__version__ = "0.1.0"

__all__ = [
    "BalanceReport", "BuildTrace", "Labeling", "RootedForest", "RootedTree", "Tree", "backtrack_k_cordial",
    "enumerate_free_trees", "grace_label", "label_six_cordial", "negate", "random_tree", "rotate",
    "verify_cordial", "verify_rooted_cordial",
]
