import json
import subprocess
import sys

import pytest

from normlap import __version__
from normlap import digraph as dg
from normlap.cli import EXIT_FAIL, EXIT_NOT_APPLICABLE, EXIT_OK, EXIT_USAGE, AnalysisDocument, analyze, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(text, name="g.txt"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return _write


def test_analyze_c3_brute_force(capsys, write):
    code, out, _ = run(capsys, "analyze", write("3 3\n0 1\n1 2\n2 0\n"), "--brute-force")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert abs(doc["rhs"] - 0.25) <= 1e-12
    assert doc["lhs"] == {"num": 1, "den": 4, "value": 0.25}
    assert doc["verdict"] == "holds"
    assert doc["witness"] == {"Y": [2], "Z": [0]}
    assert doc["selection"]["branch"] == "uniform-real-part"
    assert doc["selection"]["theta"] == {"re": 1.5, "im": pytest.approx(3 ** 0.5 / 2)}
    assert doc["version"] == __version__
    assert doc["tolerances"] == {"eigen": 1e-10, "cluster": 1e-07, "compare": 1e-08}


def test_analyze_path_not_applicable(capsys, write):
    code, out, _ = run(capsys, "analyze", write("3 2\n0 1\n1 2\n"))
    doc = json.loads(out)
    assert code == EXIT_NOT_APPLICABLE
    assert doc["reason"] == "Laplacian not normal (not eulerian)"
    assert doc["spectrum"] is doc["selection"] is doc["rhs"] is None
    assert doc["normality"]["criterion_agrees"]


def test_analyze_complete(capsys, write):
    code, out, _ = run(capsys, "analyze", write("3 6\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1\n"), "--brute-force")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert abs(doc["rhs"]) <= 1e-12
    assert doc["separations"] == 0 and doc["witness"] is None


def test_analyze_text(capsys, write):
    code, out, _ = run(capsys, "analyze", write("3 3\n0 1\n1 2\n2 0\n"), "--text", "--brute-force")
    assert code == EXIT_OK
    assert "verdict: holds" in out and "lhs: 1/4" in out and "+-0.866" in out


def test_analyze_disconnected(capsys, write):
    code, out, _ = run(capsys, "analyze", write("4 4\n0 1\n1 0\n2 3\n3 2\n"))
    assert code == EXIT_NOT_APPLICABLE
    assert json.loads(out)["reason"] == "digraph not connected"


@pytest.mark.parametrize("text", ["3 2\n0 1\n1 x\n", "3 1\n0 0\n", "2 2\n0 1\n"])
def test_analyze_parse_errors(capsys, write, text):
    code, _, err = run(capsys, "analyze", write(text))
    assert code == EXIT_USAGE
    assert "line" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", str(tmp_path / "nope.txt"))
    assert code == EXIT_USAGE and "cannot read" in err


def test_document_round_trip(c3, t5, path3):
    for g in (c3, t5, path3):
        doc = analyze(g, brute_force=True)
        text = doc.to_json()
        back = AnalysisDocument.from_json(text)
        assert back == doc
        assert back.to_json() == text


def test_document_rejects_unknown_fields(c3):
    data = json.loads(analyze(c3).to_json())
    data["extra"] = 1
    with pytest.raises(ValueError):
        AnalysisDocument.from_json(json.dumps(data))


def test_generate_tournament(capsys):
    code, out, _ = run(capsys, "generate", "tournament", "--n", "5", "--set", "1,2")
    assert code == EXIT_OK
    g = dg.parse_text(out)
    assert (g.n, g.num_arcs) == (5, 10)


def test_generate_cayley_is_c3(capsys, c3):
    code, out, _ = run(capsys, "generate", "cayley", "--orders", "3", "--conn", "1")
    assert code == EXIT_OK and dg.parse_text(out) == c3


def test_generate_cayley_product(capsys):
    code, out, _ = run(capsys, "generate", "cayley", "--orders", "2,2", "--conn", "0,1", "--conn", "1,0")
    assert code == EXIT_OK and dg.is_undirected(dg.parse_text(out))


def test_generate_random_deterministic(capsys):
    first = run(capsys, "generate", "random", "--n", "4", "--cycles", "2", "--seed", "7")[1]
    second = run(capsys, "generate", "random", "--n", "4", "--cycles", "2", "--seed", "7")[1]
    assert first == second
    assert dg.is_balanced(dg.parse_text(first))


@pytest.mark.parametrize("kind, n, arcs", [("cycle", 4, 4), ("complete", 4, 12)])
def test_generate_simple(capsys, kind, n, arcs):
    code, out, _ = run(capsys, "generate", kind, "--n", str(n))
    assert code == EXIT_OK and dg.parse_text(out).num_arcs == arcs


@pytest.mark.parametrize("argv", [
    ["generate", "tournament", "--n", "4", "--set", "1"],
    ["generate", "cayley", "--orders", "3", "--conn", "0"],
    ["generate", "cycle", "--n", "1"],
    ["generate", "tournament", "--n", "5", "--set", "a"],
    ["generate"],
    ["frobnicate"],
    [],
])
def test_usage_errors(capsys, argv):
    # argparse rejections exit directly; invalid parameters come back as a return code
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_census_order4(capsys):
    code, out, _ = run(capsys, "census", "--order", "4")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert all(e["match"] for e in doc["comparison"]["rows"].values())
    assert doc["skipped"] == []


def test_census_order5(capsys):
    doc = json.loads(run(capsys, "census", "--order", "5")[1])
    row = doc["row"]
    assert tuple(row[k] for k in ("digraphs", "eulerian", "regular", "normal_laplacian", "normal_adjacency",
                                  "normal", "connected_eulerian", "undirected")) == (9608, 107, 10, 43, 45, 43, 90, 31)


def test_census_order6_balanced_mode(capsys):
    code, out, _ = run(capsys, "census", "--order", "6")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["mode"] == "balanced" and doc["skipped"] == ["digraphs"]
    assert doc["row"]["digraphs"] is None
    assert doc["comparison"]["rows"]["digraphs"]["match"] is None


def test_census_rejects_order(capsys):
    assert run(capsys, "census", "--order", "7")[0] == EXIT_USAGE


def test_verify_order4(capsys):
    code, out, _ = run(capsys, "verify", "--order", "4")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["checked"] == 218 and doc["failures"] == []
    assert doc["rng"] == "numpy.random.PCG64"


def test_verify_tournaments(capsys):
    code, out, _ = run(capsys, "verify", "--family", "tournaments", "--max-n", "11")
    assert code == EXIT_OK and json.loads(out)["checked"] == 62


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--order", "3", "--inject-fault")
    doc = json.loads(out)
    assert code == EXIT_FAIL
    assert doc["failures"] and all(f["check"] == "bound" for f in doc["failures"])
    assert "witness" in doc["failures"][0]["details"]


def test_verify_rejects_large_order(capsys):
    assert run(capsys, "verify", "--order", "6")[0] == EXIT_USAGE


def test_module_entry_point(tmp_path):
    p = tmp_path / "c3.txt"
    p.write_text("3 3\n0 1\n1 2\n2 0\n", encoding="utf-8")
    proc = subprocess.run([sys.executable, "-m", "normlap", "analyze", str(p)], capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["verdict"] == "holds"
