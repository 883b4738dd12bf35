from __future__ import annotations

import hashlib
import json
from pathlib import Path

import pytest

from stylokit.cli import main


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_corpus")
    assert main([
        "synth", "--seed", "1234", "--authors", "5", "--docs-per-author", "6",
        "--separation", "1.5", "--out", str(out),
    ]) == 0
    return out


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_extract_reports_counts_and_is_deterministic(corpus_dir, tmp_path, capsys):
    out = tmp_path / "run"
    argv = [
        "extract", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--fw-list", str(corpus_dir / "function_words.txt"),
        "--out", str(out),
    ]
    assert main(argv) == 0
    assert capsys.readouterr().out.strip() == "30 docs, 110 features"
    first = _digest(out / "matrix.csv")
    assert main(argv) == 0
    assert _digest(out / "matrix.csv") == first
    assert (out / "run.json").exists()


def test_missing_manifest_exits_2(tmp_path, capsys):
    code = main([
        "extract", "--manifest", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "o"),
    ])
    assert code == 2
    assert "absent.csv" in capsys.readouterr().err


def test_unfilterable_corpus_exits_1(corpus_dir, tmp_path, capsys):
    code = main([
        "cluster", "--manifest", str(corpus_dir / "manifest.csv"),
        "--min-tokens", "10000000", "--out", str(tmp_path / "o"),
    ])
    assert code == 1
    assert "survive" in capsys.readouterr().err


def test_cluster_outputs(corpus_dir, tmp_path, capsys):
    out = tmp_path / "run"
    assert main([
        "cluster", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--fw-list", str(corpus_dir / "function_words.txt"),
        "--distance", "delta", "--linkage", "ward2", "--k", "5",
        "--out", str(out),
    ]) == 0
    for name in (
        "matrix.csv", "selection.csv", "distance.csv", "dendrogram.newick",
        "dendrogram.dot", "dendrogram.svg", "assignment.csv", "summary.json", "run.json",
    ):
        assert (out / name).exists(), name
    newick = (out / "dendrogram.newick").read_text()
    assert newick.count("(") == 29  # n-1 merges for 30 docs
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary) == {"n_features", "ac", "purity"}
    assert summary["purity"] == 1.0
    assignment_lines = (out / "assignment.csv").read_text().splitlines()
    assert assignment_lines[0] == "doc_id,cluster,author"
    assert len(assignment_lines) == 31
    svg = (out / "dendrogram.svg").read_text()
    assert svg.startswith("<svg") and "auth00_doc00" in svg


def test_cluster_rerun_byte_identical(corpus_dir, tmp_path):
    out = tmp_path / "run"
    argv = [
        "cluster", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--fw-list", str(corpus_dir / "function_words.txt"),
        "--out", str(out),
    ]
    assert main(argv) == 0
    digests = {p.name: _digest(p) for p in out.iterdir()}
    assert main(argv) == 0
    assert {p.name: _digest(p) for p in out.iterdir()} == digests


def test_select_writes_diagnostics(corpus_dir, tmp_path, capsys):
    out = tmp_path / "run"
    assert main([
        "select", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--fw-list", str(corpus_dir / "function_words.txt"),
        "--out", str(out),
    ]) == 0
    lines = (out / "selection.csv").read_text().splitlines()
    assert lines[0] == "feature,p_bar,sigma,required_n,retained,degenerate"
    assert len(lines) == 111
    assert "retained" in capsys.readouterr().out


def test_eta_sorted_output(corpus_dir, tmp_path, capsys):
    out = tmp_path / "run"
    assert main([
        "eta", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--fw-list", str(corpus_dir / "function_words.txt"),
        "--k", "5", "--out", str(out),
    ]) == 0
    lines = (out / "eta.csv").read_text().splitlines()
    assert lines[0] == "feature,eta_squared,p_value"
    etas = [float(line.split(",")[1]) for line in lines[1:]]
    assert etas == sorted(etas, reverse=True)


def test_sweep_emits_six_rows_plus_reference(corpus_dir, tmp_path):
    out = tmp_path / "run"
    assert main([
        "sweep", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--fw-list", str(corpus_dir / "function_words.txt"),
        "--k", "5", "--out", str(out),
    ]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "cutoff,n_features,purity_authors,purity_reference"
    assert len(lines) == 8  # 6 cutoffs + RS row
    assert lines[-1].startswith("RS,")
    assert lines[1].split(",")[1] == "2"  # 1% of 110 features


def test_default_function_word_list_is_used_without_flag(corpus_dir, tmp_path, capsys):
    # The built-in French list shares no forms with the synthetic corpus, so
    # extraction yields an empty matrix rather than an error.
    out = tmp_path / "run"
    assert main([
        "extract", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "fw", "--out", str(out),
    ]) == 0
    assert "0 features" in capsys.readouterr().out


def test_stylo_threads_env_is_honored(corpus_dir, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("STYLO_THREADS", "2")
    out = tmp_path / "run"
    assert main([
        "extract", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "lemma", "--out", str(out),
    ]) == 0
    assert "30 docs" in capsys.readouterr().out
    monkeypatch.setenv("STYLO_THREADS", "zebra")
    assert main([
        "extract", "--manifest", str(corpus_dir / "manifest.csv"),
        "--features", "lemma", "--out", str(out),
    ]) == 2


def test_synth_determinism_via_cli(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["synth", "--seed", "7", "--authors", "2", "--docs-per-author", "2"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    files_a = sorted(p.relative_to(a) for p in a.rglob("*.tsv"))
    files_b = sorted(p.relative_to(b) for p in b.rglob("*.tsv"))
    assert files_a == files_b
    for rel in files_a:
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_bad_select_spec_exits_2(corpus_dir, tmp_path, capsys):
    with pytest.raises(SystemExit) as excinfo:
        main([
            "cluster", "--manifest", str(corpus_dir / "manifest.csv"),
            "--select", "happy", "--out", str(tmp_path / "o"),
        ])
    assert excinfo.value.code == 2
