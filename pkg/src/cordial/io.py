"""File formats: edge lists, graph6, labeling files, JSON run reports, scan CSV and DOT."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .labeling import BalanceReport, Labeling, PartialLabeling, verify_cordial
from .oracle import ScanReport
from .tree import Tree, TreeError

SCHEMA_VERSION = 1


class ParseError(ValueError):
    pass


class ReportMismatch(ValueError):
    """A stored report whose labeling does not reproduce its recorded verdict."""


# ------------------------------------------------------------------ trees


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line.split()))
    return out


def parse_edge_list(text: str) -> tuple[Tree, list[str]]:
    """Parse ``n`` followed by ``u v`` lines, or bare ``u v`` lines with arbitrary tokens.

    Returns the tree and the original name of each vertex.  With a header the
    vertices are ``0..n-1``; without one, tokens are numbered in order of
    first appearance.
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty tree file")
    no, first = lines[0]
    if len(first) == 1:
        try:
            n = int(first[0])
        except ValueError as exc:
            raise ParseError(f"line {no}: expected a vertex count, got {first[0]!r}") from exc
        edges = []
        for no, toks in lines[1:]:
            if len(toks) != 2:
                raise ParseError(f"line {no}: expected 'u v', got {' '.join(toks)!r}")
            try:
                edges.append((int(toks[0]), int(toks[1])))
            except ValueError as exc:
                raise ParseError(f"line {no}: vertex ids must be integers") from exc
        try:
            return Tree(n, tuple(edges)), [str(i) for i in range(n)]
        except TreeError as exc:
            raise ParseError(str(exc)) from exc
    names: dict[str, int] = {}
    edges = []
    for no, toks in lines:
        if len(toks) != 2:
            raise ParseError(f"line {no}: expected 'u v', got {' '.join(toks)!r}")
        ids = [names.setdefault(tok, len(names)) for tok in toks]
        edges.append((ids[0], ids[1]))
    try:
        return Tree(len(names), tuple(edges)), list(names)
    except TreeError as exc:
        raise ParseError(str(exc)) from exc


def format_edge_list(t: Tree) -> str:
    return "".join([f"{t.n}\n"] + [f"{u} {v}\n" for u, v in t.edges])


def parse_graph6(text: str) -> Tree:
    import networkx as nx

    line = text.strip().splitlines()[0] if text.strip() else ""
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    try:
        g = nx.from_graph6_bytes(line.encode("ascii"))
    except (ValueError, nx.NetworkXError) as exc:
        raise ParseError(f"bad graph6 string {line!r}: {exc}") from exc
    try:
        return Tree(g.number_of_nodes(), tuple((int(u), int(v)) for u, v in g.edges()))
    except TreeError as exc:
        raise ParseError(f"graph6 input is not a tree: {exc}") from exc


def format_graph6(t: Tree) -> str:
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(t.n))
    g.add_edges_from(t.edges)
    return nx.to_graph6_bytes(g, header=False).decode("ascii").strip() + "\n"


def read_tree(text: str, fmt: str = "edges") -> tuple[Tree, list[str]]:
    if fmt == "edges":
        return parse_edge_list(text)
    if fmt == "graph6":
        t = parse_graph6(text)
        return t, [str(i) for i in range(t.n)]
    raise ValueError(f"unknown tree format {fmt!r}")


# ------------------------------------------------------------------ labelings


def parse_labeling(text: str, n: int, k: int) -> Labeling:
    """``vertex label`` lines; every vertex ``0..n-1`` must appear exactly once."""
    vals: dict[int, int] = {}
    for no, toks in _content_lines(text):
        if len(toks) != 2:
            raise ParseError(f"line {no}: expected 'vertex label'")
        try:
            v, a = int(toks[0]), int(toks[1])
        except ValueError as exc:
            raise ParseError(f"line {no}: expected integers") from exc
        if not 0 <= v < n:
            raise ParseError(f"line {no}: vertex {v} outside 0..{n - 1}")
        if v in vals:
            raise ParseError(f"line {no}: vertex {v} labeled twice")
        vals[v] = a
    missing = [v for v in range(n) if v not in vals]
    if missing:
        raise PartialLabeling(f"no label for vertices {missing[:10]}")
    return Labeling.of(k, (vals[v] for v in range(n)))


def format_labeling(f: Labeling) -> str:
    return "".join(f"{v} {a}\n" for v, a in enumerate(f.values))


# ------------------------------------------------------------------ run reports


@dataclass
class RunReport:
    source: str
    k: int
    method: str
    edges: list[tuple[int, int]]
    labeling: list[int]
    label_counts: list[int]
    weight_counts: list[int]
    cordial: bool
    violations: list[dict[str, int | str]] = field(default_factory=list)
    trace: dict[str, int] = field(default_factory=dict)
    fallback_instances: list[str] = field(default_factory=list)
    seconds: float | None = None
    vertex_names: list[str] | None = None   # input token of each vertex, when the input used names

    @classmethod
    def build(cls, source: str, t: Tree, f: Labeling, method: str, trace: dict[str, int] | None = None,
              fallback_instances: Sequence[str] = (), seconds: float | None = None,
              names: Sequence[str] | None = None) -> "RunReport":
        rep = verify_cordial(t, f)
        if names is not None and list(names) == [str(i) for i in range(t.n)]:
            names = None
        return cls(source, f.k, method, [tuple(e) for e in t.edges], list(f.values),
                   list(rep.label_counts), list(rep.weight_counts), rep.cordial, _violations(rep),
                   dict(trace or {}), list(fallback_instances), seconds,
                   list(names) if names is not None else None)

    def to_json(self) -> str:
        body: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "source": self.source,
            "k": self.k,
            "method": self.method,
            "n": len(self.labeling),
            "edges": [list(e) for e in self.edges],
            "labeling": self.labeling,
            "label_counts": self.label_counts,
            "weight_counts": self.weight_counts,
            "cordial": self.cordial,
            "violations": self.violations,
            "trace": self.trace,
            "fallback_instances": self.fallback_instances,
        }
        if self.seconds is not None:
            body["seconds"] = round(self.seconds, 6)
        if self.vertex_names is not None:
            body["vertex_names"] = self.vertex_names
        return json.dumps(body, sort_keys=True) + "\n"


def _violations(rep: BalanceReport) -> list[dict[str, int | str]]:
    return [{"kind": v.kind, "a": v.a, "b": v.b, "count_a": v.count_a, "count_b": v.count_b}
            for v in rep.violations]


def load_report(text: str) -> RunReport:
    """Parse a JSON report and re-verify its labeling against the stored counts and verdict."""
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not JSON: {exc}") from exc
    if body.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {body.get('schema_version')!r}")
    n = body["n"]
    t = Tree(n, tuple((int(u), int(v)) for u, v in body["edges"]))
    f = Labeling(body["k"], tuple(body["labeling"]))
    rep = verify_cordial(t, f)
    if (rep.cordial != body["cordial"] or list(rep.label_counts) != body["label_counts"]
            or list(rep.weight_counts) != body["weight_counts"]):
        raise ReportMismatch("stored verdict or counts disagree with the embedded labeling")
    return RunReport(body["source"], body["k"], body["method"], [tuple(e) for e in body["edges"]],
                     list(body["labeling"]), body["label_counts"], body["weight_counts"], body["cordial"],
                     body["violations"], body["trace"], body["fallback_instances"], body.get("seconds"),
                     body.get("vertex_names"))


# ------------------------------------------------------------------ scan output

SCAN_COLUMNS = ("n", "examined", "expected", "cordial", "unsat", "steps", "fallback_steps")


def scan_csv(rep: ScanReport) -> str:
    from .oracle import FREE_TREE_COUNTS

    buf = io.StringIO()
    cols = SCAN_COLUMNS + (("seconds",) if rep.seconds else ())
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for n in sorted(rep.examined):
        unsat = sum(1 for u in rep.unsat if u[0] == n)
        row = [n, rep.examined[n], FREE_TREE_COUNTS[n] if n < len(FREE_TREE_COUNTS) else "",
               rep.cordial[n], unsat, rep.steps[n], rep.fallbacks[n]]
        if rep.seconds:
            row.append(f"{rep.seconds[n]:.3f}")
        w.writerow(row)
    return buf.getvalue()


def scan_json(rep: ScanReport) -> str:
    body: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "k": rep.k,
        "method": rep.method,
        "n_min": rep.n_min,
        "n_max": rep.n_max,
        "examined": rep.total,
        "cordial": sum(rep.cordial.values()),
        "unsat": [{"n": n, "index": i, "edges": [list(e) for e in edges]} for n, i, edges in rep.unsat],
        "counts_match": rep.counts_match(),
        "fallback_steps": sum(rep.fallbacks.values()),
        "steps": sum(rep.steps.values()),
    }
    if rep.seconds:
        body["seconds"] = round(sum(rep.seconds.values()), 3)
    return json.dumps(body, sort_keys=True) + "\n"


# ------------------------------------------------------------------ dot


def export_dot(t: Tree, f: Labeling | None = None, name: str = "T") -> str:
    """Graphviz text with labels on nodes and weights on edges (when ``f`` is given)."""
    out = [f"graph {name} {{"]
    for v in range(t.n):
        attr = f' [label="{v}:{f.values[v]}"]' if f is not None else ""
        out.append(f"  {v}{attr};")
    for u, v in t.edges:
        attr = f' [label="{(f.values[u] + f.values[v]) % f.k}"]' if f is not None else ""
        out.append(f"  {u} -- {v}{attr};")
    out.append("}")
    return "\n".join(out) + "\n"


__all__ = [
    "ParseError", "ReportMismatch", "RunReport", "SCHEMA_VERSION", "export_dot", "format_edge_list",
    "format_graph6", "format_labeling", "load_report", "parse_edge_list", "parse_graph6", "parse_labeling",
    "read_tree", "scan_csv", "scan_json",
]
