import json
import subprocess
import sys

import pytest

from cordial.cli import main
from cordial.grace import rooted_grace_label
from cordial.io import (ParseError, ReportMismatch, RunReport, export_dot, format_edge_list, format_graph6,
                        format_labeling, load_report, parse_edge_list, parse_graph6, parse_labeling, read_tree)
from cordial.labeling import Labeling, PartialLabeling
from cordial.oracle import enumerate_free_trees, random_tree
from cordial.tree import Tree, path_tree

P6_GOLDEN = ('{"cordial": true, "edges": [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5]], "fallback_instances": [], '
             '"k": 6, "label_counts": [1, 1, 1, 1, 1, 1], "labeling": [0, 3, 1, 4, 2, 5], "method": "constructive", '
             '"n": 6, "schema_version": 1, "source": "p6.txt", "trace": {"Base": 1}, "violations": [], '
             '"weight_counts": [1, 1, 0, 1, 1, 1]}\n')


@pytest.mark.parametrize("n", range(1, 11))
def test_edge_list_round_trip(n):
    for t in enumerate_free_trees(n):
        back, names = parse_edge_list(format_edge_list(t))
        assert back == t and names == [str(i) for i in range(n)]


@pytest.mark.parametrize("n", [1, 2, 7, 12, 40])
def test_graph6_round_trip(n):
    t = random_tree(n, n)
    back = parse_graph6(format_graph6(t))
    assert sorted(map(sorted, back.edges)) == sorted(map(sorted, t.edges))


def test_named_tokens():
    t, names = parse_edge_list("root a  # comment\na b\nroot c\n")
    assert t.n == 4 and names == ["root", "a", "b", "c"]
    assert set(t.edges) == {(0, 1), (1, 2), (0, 3)}


@pytest.mark.parametrize("text", ["", "3\n0 1\n", "3\n0 1\n1 x\n", "3\n0 1 2\n", "x\n", "a b\nb a\n", "2\n0 5\n"])
def test_edge_list_errors(text):
    with pytest.raises(ParseError):
        parse_edge_list(text)


def test_graph6_errors():
    with pytest.raises(ParseError):
        parse_graph6("!!!")
    with pytest.raises(ParseError):
        parse_graph6("Bw")  # the triangle
    with pytest.raises(ValueError):
        read_tree("1\n", "json")


def test_labeling_parse():
    f = parse_labeling("1 4\n0 2\n", 2, 6)
    assert f.values == (2, 4)
    assert parse_labeling(format_labeling(f), 2, 6) == f
    with pytest.raises(PartialLabeling):
        parse_labeling("0 1\n", 2, 6)
    for bad in ("0 1\n0 2\n", "0\n", "0 a\n", "5 1\n"):
        with pytest.raises(ParseError):
            parse_labeling(bad, 2, 6)


def test_report_round_trip_and_tamper():
    t = random_tree(20, 4)
    from cordial.builder import label_six_cordial

    f, trace = label_six_cordial(t)
    rep = RunReport.build("x", t, f, "constructive", trace.strategies())
    back = load_report(rep.to_json())
    assert back == rep
    body = json.loads(rep.to_json())
    body["labeling"][0] = (body["labeling"][0] + 1) % 6
    with pytest.raises(ReportMismatch):
        load_report(json.dumps(body))
    with pytest.raises(ParseError):
        load_report("{not json")


def test_report_names_echoed():
    t, names = parse_edge_list("x y\ny z\n")
    rep = RunReport.build("s", t, Labeling(6, (0, 1, 2)), "verify", names=names)
    assert json.loads(rep.to_json())["vertex_names"] == ["x", "y", "z"]
    assert "vertex_names" not in RunReport.build("s", t, Labeling(6, (0, 1, 2)), "verify", names=["0", "1", "2"]).to_json()


def test_dot_intro_caterpillar(intro):
    whole, _ = intro.as_tree()
    f = rooted_grace_label(intro, 6)
    text = export_dot(whole, Labeling(6, f.values + f.root_values))
    assert text.count(" -- ") == 6
    assert sum(1 for line in text.splitlines() if line.strip()[:1].isdigit() and "--" not in line) == 7
    assert export_dot(Tree(1, ())) == "graph T {\n  0;\n}\n"


def test_cli_label_p6_golden(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "p6.txt").write_text(format_edge_list(path_tree(6)))
    assert main(["label", "p6.txt"]) == 0
    assert capsys.readouterr().out == P6_GOLDEN


def test_cli_verify(tmp_path, capsys):
    tree = tmp_path / "t.txt"
    tree.write_text(format_edge_list(path_tree(6)))
    lab = tmp_path / "f.txt"
    lab.write_text(format_labeling(Labeling(6, (0, 3, 1, 4, 2, 5))))
    assert main(["verify", str(tree), str(lab)]) == 0
    lab.write_text(format_labeling(Labeling(6, (0, 0, 0, 0, 0, 0))))
    assert main(["verify", str(tree), str(lab)]) == 1
    assert "label" in capsys.readouterr().err
    lab.write_text("0 1\n")
    assert main(["verify", str(tree), str(lab)]) == 2


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n0 1\n")
    assert main(["label", str(bad)]) == 2
    assert main(["label", "--random", "10", "--k", "5"]) == 2
    assert main(["label", "--random", "10", "--k", "5", "--method", "search"]) == 0
    assert main(["label", str(tmp_path / "missing.txt")]) == 2
    assert main(["label"]) == 2
    assert main(["scan", "--max-n", "20"]) == 2


def test_cli_scan_and_dot(tmp_path, capsys):
    assert main(["scan", "--k", "4", "--max-n", "7"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("n,examined,expected") and out[-1].startswith("7,11,11,11,0")
    assert main(["scan", "--k", "6", "--max-n", "8", "--method", "constructive", "--out", str(tmp_path / "s")]) == 0
    assert json.loads((tmp_path / "s.json").read_text())["examined"] == 1 + 1 + 1 + 2 + 3 + 6 + 11 + 23
    assert main(["dot", "--random", "5"]) == 0
    assert capsys.readouterr().out.startswith("graph T {")


def test_cli_checkpoint_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CORDIAL_CHECKPOINT_DIR", str(tmp_path / "ck"))
    assert main(["scan", "--k", "3", "--max-n", "6"]) == 0
    assert (tmp_path / "ck" / "scan-k3-search.ckpt").exists()


def test_cli_tables_check(capsys):
    rc = main(["tables-check"])
    out = capsys.readouterr().out
    assert rc == 1 and "gap" in out.lower()


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "cordial.cli", "label", "--random", "13"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["cordial"]
