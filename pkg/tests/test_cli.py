"""Command-line interface: formats, ordering, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

import fracspline.cli as cli
from fracspline.cli import CSV_COLUMNS, main

# the tiny sweep cells used here sit in the warning regime on purpose;
# the warnings themselves are covered in test_solver
pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")

FAST = ["--example", "1", "--gamma", "0.5", "-j", "3", "-s", "3"]


def _strip_runtime(csv_text):
    out = []
    for i, line in enumerate(csv_text.splitlines()):
        if i == 0:
            out.append(line)
        else:
            out.append(line.rsplit(",", 1)[0])
    return "\n".join(out)


class TestSolveCommand:
    def test_human_summary(self, capsys):
        assert main(["solve", *FAST]) == 0
        out = capsys.readouterr().out
        assert "example1" in out
        assert "dof" in out
        assert "l2 error" in out
        assert "space only" in out
        assert "condition estimate" in out
        assert "lsq residual" in out

    def test_csv_format(self, capsys):
        assert main(["solve", *FAST, "--format", "csv"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2
        vals = lines[1].split(",")
        assert vals[0] == "3" and vals[1] == "3"
        assert int(vals[5]) > 0  # dof
        assert 0.0 < float(vals[4]) < 1.0  # l2_error

    def test_json_format_matches_csv_values(self, capsys, tmp_path):
        csv_path = tmp_path / "row.csv"
        json_path = tmp_path / "row.json"
        assert main(["solve", *FAST, "--format", "csv", "--out", str(csv_path)]) == 0
        assert main(["solve", *FAST, "--format", "json", "--out", str(json_path)]) == 0
        row = json.loads(json_path.read_text())
        assert set(row) == set(CSV_COLUMNS)
        vals = csv_path.read_text().strip().splitlines()[1].split(",")
        # %.17g survives the float round-trip exactly
        assert float(vals[4]) == row["l2_error"]
        assert int(vals[5]) == row["dof"]
        assert float(vals[6]) == row["condition_estimate"]

    def test_stdout_equals_file_output(self, capsys, tmp_path):
        assert main(["solve", *FAST, "--format", "csv"]) == 0
        stdout_text = capsys.readouterr().out
        path = tmp_path / "out.csv"
        assert main(["solve", *FAST, "--format", "csv", "--out", str(path)]) == 0
        assert _strip_runtime(path.read_text()) == _strip_runtime(stdout_text)

    def test_rejects_sweep_lists(self, capsys):
        assert main(["solve", "--example", "1", "--gamma", "0.5", "-j", "3,4", "-s", "3"]) == 2
        assert "table subcommand" in capsys.readouterr().err

    def test_requires_levels(self, capsys):
        assert main(["solve", "--example", "1", "--gamma", "0.5"]) == 2
        assert "needs -j and -s" in capsys.readouterr().err

    def test_solver_failure_exit_code(self, monkeypatch, capsys):
        def boom(problem, config):
            raise RuntimeError("synthetic breakdown")

        monkeypatch.setattr(cli, "solve", boom)
        assert main(["solve", *FAST]) == 3
        assert "synthetic breakdown" in capsys.readouterr().err


class TestTableCommand:
    def test_csv_order_is_sorted_regardless_of_input(self, capsys):
        assert (
            main(
                [
                    "table",
                    "--example",
                    "1",
                    "--gamma",
                    "0.5",
                    "-j",
                    "4,3",
                    "-s",
                    "4,3",
                ]
            )
            == 0
        )
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        cells = [tuple(int(v) for v in ln.split(",")[:2]) for ln in lines[1:]]
        assert cells == [(3, 3), (3, 4), (4, 3), (4, 4)]

    def test_repeat_runs_identical_modulo_runtime(self, tmp_path):
        args = [
            "table",
            "--example",
            "1",
            "--gamma",
            "0.5",
            "-j",
            "3,4",
            "-s",
            "3",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main([*args, "--out", str(a)]) == 0
        assert main([*args, "--out", str(b)]) == 0
        assert _strip_runtime(a.read_text()) == _strip_runtime(b.read_text())

    def test_json_matches_csv(self, tmp_path):
        args = ["table", "--example", "1", "--gamma", "0.5", "-j", "3", "-s", "3,4"]
        c, jj = tmp_path / "t.csv", tmp_path / "t.json"
        assert main([*args, "--out", str(c)]) == 0
        assert main([*args, "--format", "json", "--out", str(jj)]) == 0
        rows = json.loads(jj.read_text())
        assert [r["s"] for r in rows] == [3, 4]
        csv_rows = c.read_text().strip().splitlines()[1:]
        for row, line in zip(rows, csv_rows):
            vals = line.split(",")
            assert row["l2_error"] == float(vals[4])
            assert row["dof"] == int(vals[5])

    def test_failed_cell_becomes_nan_row_and_sweep_continues(
        self, monkeypatch, capsys
    ):
        real_solve = cli.solve

        def flaky(problem, config):
            if config.j == 4:
                raise RuntimeError("synthetic breakdown")
            return real_solve(problem, config)

        monkeypatch.setattr(cli, "solve", flaky)
        assert main(["table", "--example", "1", "--gamma", "0.5", "-j", "3,4", "-s", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        good = lines[1].split(",")
        bad = lines[2].split(",")
        assert float(good[4]) > 0.0
        assert bad[1] == "4" and bad[4] == "nan" and bad[6] == "nan"
        # the sentinel row still reports the dof the cell would have had
        sol, _ = real_solve(
            cli.example1(0.5), cli.SolveConfig(gamma=0.5, j=4, s=3)
        )
        assert int(bad[5]) == sol.coeffs.size

    def test_failed_cell_json_uses_null(self, monkeypatch, capsys):
        def boom(problem, config):
            raise RuntimeError("synthetic breakdown")

        monkeypatch.setattr(cli, "solve", boom)
        assert (
            main(
                [
                    "table",
                    "--example",
                    "1",
                    "--gamma",
                    "0.5",
                    "-j",
                    "3",
                    "-s",
                    "3",
                    "--format",
                    "json",
                ]
            )
            == 0
        )
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["l2_error"] is None
        assert rows[0]["condition_estimate"] is None
        assert rows[0]["dof"] > 0

    def test_config_error_leaves_no_file(self, tmp_path, capsys):
        target = tmp_path / "never.csv"
        code = main(
            [
                "table",
                "--example",
                "1",
                "--gamma",
                "0.5",
                "-j",
                "3,9",
                "-s",
                "3",
                "--out",
                str(target),
            ]
        )
        assert code == 2
        assert "outside 2..8" in capsys.readouterr().err
        assert not target.exists()

    @pytest.mark.parametrize(
        "argv",
        [
            ["table", "--example", "1", "--gamma", "1.5", "-j", "3", "-s", "3"],
            ["table", "--example", "1", "--gamma", "0.5", "-j", "", "-s", "3"],
            ["table", "--example", "1", "--gamma", "0.5", "-j", "3", "-s", "1"],
            ["table", "--example", "2", "--gamma", "1.0", "-j", "3", "-s", "3"],
            ["table", "--example", "1", "--gamma", "0.5", "-s", "3"],
        ],
    )
    def test_bad_configs_exit_2(self, argv, capsys):
        assert main(argv) == 2
        assert capsys.readouterr().err.startswith("configuration error")

    def test_argparse_rejects_unknown_example(self):
        with pytest.raises(SystemExit):
            main(["table", "--example", "3", "--gamma", "0.5", "-j", "3", "-s", "3"])

    def test_threads_equivalence(self, tmp_path, monkeypatch):
        args = ["table", "--example", "1", "--gamma", "0.5", "-j", "3,4", "-s", "3"]
        one, two, env = (tmp_path / n for n in ("one.csv", "two.csv", "env.csv"))
        assert main([*args, "--threads", "1", "--out", str(one)]) == 0
        assert main([*args, "--threads", "2", "--out", str(two)]) == 0
        monkeypatch.setenv("FRACSPLINE_THREADS", "2")
        assert main([*args, "--out", str(env)]) == 0
        assert _strip_runtime(one.read_text()) == _strip_runtime(two.read_text())
        assert _strip_runtime(one.read_text()) == _strip_runtime(env.read_text())

    def test_bad_threads_env(self, monkeypatch, capsys):
        monkeypatch.setenv("FRACSPLINE_THREADS", "many")
        assert main(["table", "--example", "1", "--gamma", "0.5", "-j", "3", "-s", "3"]) == 2
        assert "FRACSPLINE_THREADS" in capsys.readouterr().err


class TestCurvesCommand:
    def test_one_file_per_gamma(self, tmp_path, capsys):
        prefix = str(tmp_path / "cv")
        code = main(
            [
                "curves",
                "--example",
                "1",
                "--gamma",
                "0.5,1.0",
                "--beta",
                "3.0,3.5",
                "-j",
                "3",
                "-s",
                "3,4",
                "--out",
                prefix,
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        f1 = tmp_path / "cv_gamma0.5.dat"
        f2 = tmp_path / "cv_gamma1.dat"
        assert f1.exists() and f2.exists()
        assert f"wrote {f1} (2 rows)" in out
        assert f"wrote {f2} (2 rows)" in out

        lines = f1.read_text().splitlines()
        assert lines[0].startswith("# example 1  gamma=0.5  j=3")
        assert lines[1] == "# s  err[beta=3]  err[beta=3.5]"
        data = [ln.split() for ln in lines[2:]]
        assert [row[0] for row in data] == ["3", "4"]
        assert all(len(row) == 3 for row in data)
        # errors decrease from s=3 to s=4 for each beta column
        for col in (1, 2):
            assert float(data[1][col]) < float(data[0][col])

    def test_float_round_trip(self, tmp_path):
        prefix = str(tmp_path / "rt")
        assert (
            main(
                [
                    "curves",
                    "--example",
                    "1",
                    "--gamma",
                    "0.5",
                    "--beta",
                    "3.5",
                    "-j",
                    "3",
                    "-s",
                    "3",
                    "--out",
                    prefix,
                ]
            )
            == 0
        )
        path = tmp_path / "rt_gamma0.5.dat"
        lines = path.read_text().splitlines()
        val = lines[2].split()[1]
        assert "%.17g" % float(val) == val

    def test_requires_s_list(self, capsys):
        assert main(["curves", "--example", "1", "--gamma", "0.5", "-j", "3"]) == 2
        assert "-s list" in capsys.readouterr().err

    def test_single_j_only(self, capsys):
        assert (
            main(["curves", "--example", "1", "--gamma", "0.5", "-j", "3,4", "-s", "3"])
            == 2
        )
        assert "single -j" in capsys.readouterr().err
