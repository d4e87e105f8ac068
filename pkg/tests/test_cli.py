import csv
import io
import json

import pytest

from splitmatch.cli import (
    EXIT_INPUT,
    EXIT_OK,
    EXIT_VERIFY,
    fit_slope,
    main,
    parse_sizes,
    run_bench,
)

P4 = "p bmatch 4 3\ne 0 1\ne 1 2\ne 2 3\n"


@pytest.fixture
def p4(tmp_path):
    path = tmp_path / "p4.txt"
    path.write_text(P4)
    return path


def solve_to(tmp_path, graph, *flags):
    out = tmp_path / "result.json"
    assert main(["solve", str(graph), "--out", str(out), *flags]) == EXIT_OK
    return out


class TestSolve:
    def test_p4_maxmatching(self, tmp_path, p4):
        doc = json.loads(solve_to(tmp_path, p4, "--maxmatching").read_text())
        assert doc["cardinality"] == 2

    def test_modes_agree(self, tmp_path):
        g = tmp_path / "g.txt"
        assert main(["gen", "--family", "swk", "--n", "30", "--k", "5", "--seed", "2", "--bmax", "3", "--out", str(g)]) == 0
        cards = {json.loads(solve_to(tmp_path, g, "--mode", m).read_text())["cardinality"] for m in ("kernel", "splitdp")}
        assert len(cards) == 1

    def test_deterministic(self, tmp_path, p4):
        first = solve_to(tmp_path, p4, "--mode", "splitdp").read_text()
        assert solve_to(tmp_path, p4, "--mode", "splitdp").read_text() == first
        assert "time_phase1_ms" not in first

    def test_timings_flag(self, tmp_path, p4):
        doc = json.loads(solve_to(tmp_path, p4, "--mode", "splitdp", "--timings").read_text())
        assert "time_phase1_ms" in doc["stats"]

    def test_bad_header(self, tmp_path, capsys):
        g = tmp_path / "bad.txt"
        g.write_text("p graph 4 3\n")
        assert main(["solve", str(g)]) == EXIT_INPUT
        assert "line 1" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["solve", str(tmp_path / "nope.txt")]) == EXIT_INPUT


class TestVerify:
    def test_round_trip(self, tmp_path, p4, capsys):
        out = solve_to(tmp_path, p4)
        assert main(["verify", str(p4), str(out)]) == EXIT_OK
        assert capsys.readouterr().out.startswith("ok")

    def test_bumped_weight(self, tmp_path, p4, capsys):
        out = solve_to(tmp_path, p4)
        doc = json.loads(out.read_text())
        doc["edges"][0][2] += 1
        out.write_text(json.dumps(doc))
        assert main(["verify", str(p4), str(out)]) == EXIT_VERIFY
        msg = capsys.readouterr().out
        assert "capacity violation" in msg or "cardinality mismatch" in msg

    def test_unknown_edge(self, tmp_path, p4, capsys):
        out = solve_to(tmp_path, p4)
        doc = json.loads(out.read_text())
        doc["edges"].append([0, 3, 0])
        out.write_text(json.dumps(doc))
        assert main(["verify", str(p4), str(out)]) == EXIT_VERIFY
        assert "unknown edge" in capsys.readouterr().out

    def test_generated_round_trip(self, tmp_path):
        for fam in ("dh", "swk"):
            g = tmp_path / f"{fam}.txt"
            main(["gen", "--family", fam, "--n", "120", "--seed", "4", "--bmax", "4", "--out", str(g)])
            out = solve_to(tmp_path, g)
            assert main(["verify", str(g), str(out)]) == EXIT_OK


class TestDecompose:
    def test_p4(self, tmp_path, p4, capsys):
        dot = tmp_path / "t.dot"
        assert main(["decompose", str(p4), "--dot", str(dot)]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert sum(line.startswith("c ") for line in lines) == 2
        assert sum(line.startswith("t ") for line in lines) == 1
        assert dot.read_text().startswith("graph splittree {")

    def test_disconnected(self, tmp_path):
        g = tmp_path / "g.txt"
        g.write_text("p bmatch 4 2\ne 0 1\ne 2 3\n")
        assert main(["decompose", str(g)]) == EXIT_INPUT


class TestGen:
    def test_deterministic(self, tmp_path, capsys):
        main(["gen", "--n", "64", "--seed", "5"])
        first = capsys.readouterr().out
        main(["gen", "--n", "64", "--seed", "5"])
        assert capsys.readouterr().out == first
        assert first.startswith("# family=dh")


class TestBench:
    def test_parse_sizes(self):
        assert parse_sizes("2^3..2^5") == [8, 16, 32]
        assert parse_sizes("10,2^4") == [10, 16]

    def test_reps_agree(self):
        rows = run_bench("dh", [64, 128], 5, 3, 0)
        for n in (64, 128):
            assert len({r["cardinality"] for r in rows if r["n"] == n}) == 1

    def test_swk_width(self):
        rows = run_bench("swk", [40, 80], 8, 1, 0)
        assert all(r["k"] <= 8 for r in rows)

    def test_slope_of_linear_data(self):
        rows = [{"n": n, "m": n, "total_ms": 0.5 * n} for n in (10, 100, 1000)]
        assert fit_slope(rows) == pytest.approx(1.0)

    def test_csv(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert main(["bench", "--sizes", "32,64", "--reps", "2", "--out", str(out)]) == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 4
        assert "slope" in capsys.readouterr().out
