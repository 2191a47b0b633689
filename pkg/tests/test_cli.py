import json
import subprocess
import sys

import pytest

from cardex import __version__
from cardex.cli import run

from helpers import DATA


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def graph_file(tmp_path, capsys):
    path = tmp_path / "kg.json"
    assert call(capsys, "graph", "build", "--triples", DATA / "reference_triples.jsonl", "--out", path)[0] == 0
    return path


def test_extract_fixtures(capsys):
    code, out, _ = call(capsys, "extract", "--conllu", DATA / "fixtures6.conllu")
    assert code == 0
    triples = [json.loads(line) for line in out.splitlines()]
    assert len(triples) == 6
    assert triples[4]["relation"] == "was released under"
    assert triples[4]["sentence_index"] == 4


def test_extract_is_byte_identical(capsys):
    first = call(capsys, "extract", "--conllu", DATA / "corpus20.conllu")[1]
    assert first == call(capsys, "extract", "--conllu", DATA / "corpus20.conllu")[1]


def test_extract_then_eval(tmp_path, capsys):
    pred = tmp_path / "pred.jsonl"
    assert call(capsys, "extract", "--conllu", DATA / "corpus20.conllu", "--out", pred)[0] == 0
    code, out, _ = call(capsys, "eval", "--gold", DATA / "gold20.jsonl", "--pred", pred)
    assert code == 0
    metrics = json.loads(out)
    assert metrics["precision"] == metrics["recall"] == metrics["f1"] == metrics["accuracy"] == 1.0


def test_eval_table(tmp_path, capsys):
    pred = tmp_path / "pred.jsonl"
    call(capsys, "extract", "--conllu", DATA / "corpus20.conllu", "--out", pred)
    code, out, _ = call(capsys, "eval", "--gold", DATA / "gold20.jsonl", "--pred", pred,
                        "--format", "table")
    assert code == 0 and "F1 value (F1-Score)" in out and "1.00" in out


def test_graph_query(graph_file, capsys):
    code, out, _ = call(capsys, "graph", "query", "--graph", graph_file, "--node", "GPT-3", "--depth", 1)
    assert code == 0
    assert out.splitlines() == ["0\tGPT-3\tmodel", "1\tConversational Agents\tapplication",
                                "1\tText Generation\tapplication"]


def test_graph_query_json(graph_file, capsys):
    out = call(capsys, "graph", "query", "--graph", graph_file, "--node", "GPT-3", "--json")[1]
    ids = [v["id"] for v in json.loads(out)["visited"]]
    assert ids == ["GPT-3", "Conversational Agents", "Text Generation"]


def test_graph_paths(graph_file, capsys):
    code, out, _ = call(capsys, "graph", "paths", "--graph", graph_file, "--from", "GPT-3",
                        "--to", "GPT-4", "--depth", 2, "--direction", "undirected")
    assert code == 0 and out == "GPT-3 -> Text Generation -> GPT-4\n"


def test_unknown_node_is_usage_error(graph_file, capsys):
    code, _, err = call(capsys, "graph", "query", "--graph", graph_file, "--node", "FooNet")
    assert code == 1 and "FooNet" in err


def test_candidates(tmp_path, capsys):
    doc = tmp_path / "doc.txt"
    doc.write_text("BERT was released under the Apache licence 2.0. The weather is nice. "
                   "GPT-4 enhances Text Generation.", encoding="utf-8")
    code, out, _ = call(capsys, "candidates", "--text", doc, "--context", 1)
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["sentence_index"] for r in records] == [0, 2]
    assert records[1]["context"]["before"] == ["The weather is nice."]
    assert {m["category"] for m in records[0]["mentions"]} == {"model", "licence"}


@pytest.mark.parametrize("fmt, marker", [("dot", "digraph {"), ("graphml", "<graphml"),
                                         ("json", '"nodes"')])
def test_export_formats(graph_file, tmp_path, capsys, fmt, marker):
    out_path = tmp_path / f"kg.{fmt}"
    assert call(capsys, "export", "--graph", graph_file, "--format", fmt, "--out", out_path)[0] == 0
    text = out_path.read_text(encoding="utf-8")
    assert marker in text
    assert call(capsys, "export", "--graph", graph_file, "--format", fmt)[1] == text


def test_usage_errors(capsys):
    assert call(capsys)[0] == 1
    assert call(capsys, "export", "--graph", "x.json", "--format", "png")[0] == 1
    assert call(capsys, "bogus")[0] == 1


def test_format_errors(tmp_path, capsys):
    bad = tmp_path / "bad.conllu"
    bad.write_text("1\tBERT\t_\tPROPN\n\n", encoding="utf-8")
    code, _, err = call(capsys, "extract", "--conllu", bad)
    assert code == 2 and "line 1" in err
    assert call(capsys, "extract", "--conllu", tmp_path / "missing.conllu")[0] == 2


def test_invariant_violation(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text('{"nodes": [{"id": "A", "kind": "model"}], '
                 '"edges": [{"from": "A", "to": "B", "label": "r"}]}', encoding="utf-8")
    assert call(capsys, "export", "--graph", g, "--format", "dot")[0] == 3


def test_help_and_version(capsys):
    code, out, _ = call(capsys, "--version")
    assert code == 0 and __version__ in out
    assert call(capsys, "--help")[0] == 0
    assert call(capsys, "graph", "query", "--help")[0] == 0


def test_config_fills_unset_options(tmp_path, capsys):
    models = tmp_path / "models.txt"
    models.write_text("FooNet\n", encoding="utf-8")
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"models": str(models)}), encoding="utf-8")
    code, out, _ = call(capsys, "--config", config, "extract", "--conllu", DATA / "fixtures6.conllu")
    assert code == 0 and out == ""


def test_bad_config(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text("{", encoding="utf-8")
    assert call(capsys, "--config", config, "extract", "--conllu", DATA / "fixtures6.conllu")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cardex", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
