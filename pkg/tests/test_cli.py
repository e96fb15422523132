"""End-to-end pipeline runs through the command-line entry point."""

import pytest

from padkit.cli import main
from padkit.store import MINI3_NODES_CSV, MINI3_TRIADS_CSV, mini3_corpus, save_corpus_json


@pytest.fixture
def mini3_files(tmp_path):
    nodes = tmp_path / "nodes.csv"
    triads = tmp_path / "triads.csv"
    nodes.write_bytes(MINI3_NODES_CSV)
    triads.write_bytes(MINI3_TRIADS_CSV)
    return nodes, triads


@pytest.fixture
def mini3_json(tmp_path):
    path = tmp_path / "corpus.json"
    path.write_bytes(save_corpus_json(mini3_corpus()))
    return path


def run(*argv):
    return main([str(a) for a in argv])


class TestValidate:
    def test_clean_corpus(self, mini3_files, capsys):
        nodes, triads = mini3_files
        assert run("validate", "--nodes", nodes, "--triads", triads) == 0
        assert "no issues" in capsys.readouterr().out

    def test_corrupt_triads_exit_one(self, tmp_path, mini3_files, capsys):
        nodes, _ = mini3_files
        bad = tmp_path / "bad.csv"
        bad.write_bytes(b"ru_id,p,a,d\nRU1,P1.1,A1.1,D1.1\nRU1,A1.1,P1.1,D1.1\n")
        assert run("validate", "--nodes", nodes, "--triads", bad) == 1
        assert "row 3" in capsys.readouterr().err

    def test_json_input(self, mini3_json):
        assert run("validate", "--corpus", mini3_json) == 0


class TestUsageErrors:
    def test_no_input(self):
        assert run("validate") == 2

    def test_both_inputs(self, mini3_files, mini3_json):
        nodes, triads = mini3_files
        assert run("validate", "--nodes", nodes, "--triads", triads, "--corpus", mini3_json) == 2

    def test_missing_file(self, tmp_path):
        assert run("validate", "--corpus", tmp_path / "nope.json") == 2

    def test_unknown_command(self):
        assert run("frobnicate") == 2

    def test_half_csv_pair(self, mini3_files):
        nodes, _ = mini3_files
        assert run("validate", "--nodes", nodes) == 2


class TestStats:
    def test_writes_seven_files(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run("stats", "--nodes", nodes, "--triads", triads, "--out", out) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == [
            "avg_challenges.txt", "f_p.csv", "r_a.csv", "r_d.csv",
            "r_p.csv", "u_a.csv", "w_p.csv",
        ]

    def test_golden_f_p(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        run("stats", "--nodes", nodes, "--triads", triads, "--out", out)
        assert (out / "f_p.csv").read_bytes() == (
            b"label,category_code,value_numerator,value_denominator,percent\n"
            b"P1,power model formulation,2,3,66.7\n"
            b"P2,cross-genre comparison,2,3,66.7\n"
        )

    def test_golden_avg(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        run("stats", "--nodes", nodes, "--triads", triads, "--out", out)
        assert (out / "avg_challenges.txt").read_bytes() == b"4/3\n1.3333333333\n"

    def test_r_tables_sum_to_one(self, mini3_files, tmp_path):
        from fractions import Fraction

        nodes, triads = mini3_files
        out = tmp_path / "out"
        run("stats", "--nodes", nodes, "--triads", triads, "--out", out)
        for name in ("r_p", "w_p", "r_a", "u_a", "r_d"):
            rows = (out / f"{name}.csv").read_text().splitlines()[1:]
            total = sum(
                Fraction(int(r.split(",")[2]), int(r.split(",")[3])) for r in rows
            )
            assert total == 1

    def test_empty_corpus_exit_one(self, tmp_path, capsys):
        nodes = tmp_path / "nodes.csv"
        triads = tmp_path / "triads.csv"
        nodes.write_bytes(b"label,code,category_code\n")
        triads.write_bytes(b"ru_id,p,a,d\n")
        out = tmp_path / "out"
        assert run("stats", "--nodes", nodes, "--triads", triads, "--out", out) == 1
        assert "no research units" in capsys.readouterr().err


class TestGraphCommands:
    def test_dag(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run("dag", "--nodes", nodes, "--triads", triads, "--out", out) == 0
        dot = (out / "dag.dot").read_text()
        assert dot.count("->") == 7

    def test_dag_svg(self, mini3_files, tmp_path, monkeypatch):
        monkeypatch.setenv("PADKIT_LAYOUT_CMD", "missing-layout-tool")
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run("dag", "--nodes", nodes, "--triads", triads, "--out", out, "--svg") == 0
        assert (out / "dag.svg").read_text().startswith("<?xml")

    def test_dag_node_level(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run(
            "dag", "--nodes", nodes, "--triads", triads, "--out", out, "--node-level"
        ) == 0
        assert "P1.1: attribute power to VMs" in (out / "dag.dot").read_text()

    def test_triads(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run("triads", "--nodes", nodes, "--triads", triads, "--out", out) == 0
        assert (out / "triads.dot").read_text().count("->") == 10

    def test_dyads_p2(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run(
            "dyads", "--problem", "P2", "--nodes", nodes, "--triads", triads, "--out", out
        ) == 0
        dot = (out / "dyads_P2.dot").read_text()
        assert dot.count("->") == 1
        assert '"100.0%"' in dot

    def test_dyads_unknown_problem(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        assert run(
            "dyads", "--problem", "P9", "--nodes", nodes, "--triads", triads,
            "--out", tmp_path / "out",
        ) == 2

    def test_dyads_ru_binary(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run(
            "dyads", "--problem", "P1", "--dyad-count", "ru-binary",
            "--nodes", nodes, "--triads", triads, "--out", out,
        ) == 0
        assert '"66.7%"' in (out / "dyads_P1.dot").read_text()

    def test_taxonomy(self, mini3_files, tmp_path):
        nodes, triads = mini3_files
        out = tmp_path / "out"
        assert run(
            "taxonomy", "--kind", "D", "--nodes", nodes, "--triads", triads, "--out", out
        ) == 0
        text = (out / "taxonomy_D.dot").read_text()
        for chunk in ("(50.0%)", "(33.3%)", "(16.7%)"):
            assert chunk in text


def test_serve_busy_port_exits_one(mini3_json, capsys):
    import socket

    blocker = socket.socket()
    blocker.bind(("127.0.0.1", 0))
    port = blocker.getsockname()[1]
    try:
        assert run("serve", "--corpus", mini3_json, "--port", port) == 1
        assert "cannot bind port" in capsys.readouterr().err
    finally:
        blocker.close()


def test_pipeline_is_deterministic(mini3_files, tmp_path):
    nodes, triads = mini3_files
    first = tmp_path / "first"
    second = tmp_path / "second"
    for out in (first, second):
        run("stats", "--nodes", nodes, "--triads", triads, "--out", out)
        run("dag", "--nodes", nodes, "--triads", triads, "--out", out)
        run("dyads", "--problem", "P2", "--nodes", nodes, "--triads", triads, "--out", out)
    for path in sorted(first.iterdir()):
        assert path.read_bytes() == (second / path.name).read_bytes()
