import csv
import io
import subprocess
import sys

import pytest

from aspcdcl.cli import main
from aspcdcl.instances import pigeonhole_program
from aspcdcl.textio import format_program, parse_program


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_one_model(capsys, write):
    f = write("ex.lp", "p :- not q. q :- not p.\n")
    code, out, _ = _run(capsys, "solve", f)
    assert code == 10
    assert out in ("ANSWER\np\n", "ANSWER\nq\n")


def test_solve_all_models_in_stable_order(capsys, write):
    f = write("ex.lp", "p :- not q. q :- not p.\n")
    code, out, _ = _run(capsys, "solve", "-n", "0", f)
    assert code == 10
    assert sorted(out.strip().split("\n")) == sorted(["ANSWER", "p", "ANSWER", "q"])
    assert _run(capsys, "solve", "-n", "0", f)[1] == out


def test_solve_inconsistent(capsys, write):
    f = write("unsat.lp", "a. :- a.\n")
    code, out, _ = _run(capsys, "solve", f)
    assert (code, out) == (20, "INCONSISTENT\n")


def test_solve_parse_error(capsys, write):
    f = write("bad.lp", "a.\nb :- c(1).\n")
    code, out, err = _run(capsys, "solve", f)
    assert code == 1 and out == ""
    assert "line 2" in err


def test_solve_missing_file(capsys, tmp_path):
    code, _, err = _run(capsys, "solve", str(tmp_path / "nope.lp"))
    assert code == 1 and "error" in err


def test_solve_budget_exhausted(capsys, write):
    f = write("php.lp", format_program(pigeonhole_program(9)))
    code, out, _ = _run(capsys, "solve", "--timeout", "0.3", f)
    assert (code, out) == (0, "UNKNOWN\n")


def test_solve_stats(capsys, write):
    f = write("ex.lp", "a :- not b. b :- not a.\n")
    code, out, _ = _run(capsys, "solve", "--stats", f)
    lines = out.strip().split("\n")
    assert lines[0] == "ANSWER"
    keys = [l.split(":")[0] for l in lines[2:]]
    assert {"conflicts", "decisions", "restarts", "solve_time"} <= set(keys)


@pytest.mark.parametrize("flags", [
    ["--no-simplify"], ["--elim-occ", "0"], ["--elim-growth", "3"], ["--luby-base", "1"],
    ["--no-restarts"], ["--no-phase-saving"], ["--var-decay", "0.8"], ["--seed", "9"],
])
def test_solver_flags_keep_answers(capsys, write, flags):
    f = write("ex.lp", "a :- b. b :- a. a :- not c. c :- not a.\n")
    code, out, _ = _run(capsys, "solve", "-n", "0", *flags, f)
    assert code == 10
    models = set(out.strip().split("ANSWER\n")[1:])
    assert {m.strip() for m in models} == {"a b", "c"}


def test_invalid_flag_value(capsys, write):
    f = write("ex.lp", "a.\n")
    code, _, err = _run(capsys, "solve", "--var-decay", "0", f)
    assert code == 1


def _parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_bench_three_sat_files(capsys, tmp_path):
    for i in range(3):
        (tmp_path / f"i{i}.lp").write_text(f"a{i} :- not b{i}. b{i} :- not a{i}.\n")
    code, out, _ = _run(capsys, "bench", str(tmp_path), "--timeout", "10")
    assert code == 0
    rows = _parse_csv(out)
    assert rows[0] == ["instance", "verdict", "time_s", "conflicts", "decisions", "restarts"]
    assert [r[0] for r in rows[1:4]] == ["i0.lp", "i1.lp", "i2.lp"]
    assert all(r[1] == "SAT" for r in rows[1:4])
    assert rows[4][:2] == ["TOTAL", "solved=3"]
    mean = sum(float(r[2]) for r in rows[1:4]) / 3
    assert abs(float(rows[4][2]) - mean) <= 1e-3


def test_bench_timeout_row(capsys, tmp_path):
    (tmp_path / "a_easy.lp").write_text("a.\n")
    (tmp_path / "b_unsat.lp").write_text("a. :- a.\n")
    (tmp_path / "c_hard.lp").write_text(format_program(pigeonhole_program(9)))
    code, out, _ = _run(capsys, "bench", str(tmp_path), "--timeout", "0.5")
    rows = _parse_csv(out)
    by_name = {r[0]: r for r in rows[1:-1]}
    assert by_name["a_easy.lp"][1] == "SAT"
    assert by_name["b_unsat.lp"][1] == "UNSAT"
    assert by_name["c_hard.lp"][1] == "TIMEOUT"
    assert float(by_name["c_hard.lp"][2]) == 0.5
    footer = rows[-1]
    assert footer[1] == "solved=2"
    solved = [float(by_name[n][2]) for n in ("a_easy.lp", "b_unsat.lp")]
    assert abs(float(footer[2]) - sum(solved) / 2) <= 1e-3


def test_bench_empty_directory(capsys, tmp_path):
    code, out, _ = _run(capsys, "bench", str(tmp_path), "--timeout", "1")
    assert code == 0
    assert _parse_csv(out) == [
        ["instance", "verdict", "time_s", "conflicts", "decisions", "restarts"],
        ["TOTAL", "solved=0", "", "", "", ""],
    ]


def test_bench_error_row_does_not_abort(capsys, tmp_path):
    (tmp_path / "a.lp").write_text("p(X) :- q(X).\n")
    (tmp_path / "b.lp").write_text("a.\n")
    code, out, _ = _run(capsys, "bench", str(tmp_path), "--timeout", "5")
    rows = _parse_csv(out)
    assert [r[1] for r in rows[1:-1]] == ["ERROR", "SAT"]
    assert rows[-1][1] == "solved=1"


def test_bench_parallel_same_rows(capsys, tmp_path):
    for i in range(4):
        (tmp_path / f"i{i}.lp").write_text(format_program(pigeonhole_program(3 + i % 2)))
    _, seq, _ = _run(capsys, "bench", str(tmp_path), "--timeout", "10")
    _, par, _ = _run(capsys, "bench", str(tmp_path), "--timeout", "10", "-j", "2")
    strip = lambda t: [r[:2] + r[3:] for r in _parse_csv(t)[:-1]]
    assert strip(seq) == strip(par)


def test_bench_requires_timeout(capsys, tmp_path):
    code, _, _ = _run(capsys, "bench", str(tmp_path))
    assert code == 1


def test_oracle_subcommand(capsys, write):
    f = write("ex.lp", "a :- b. b :- a. a :- not c. c :- not a.\n")
    code, out, _ = _run(capsys, "oracle", f)
    assert code == 10
    assert out == "ANSWER\nc\nANSWER\na b\n"
    f = write("unsat.lp", "a. :- a.\n")
    assert _run(capsys, "oracle", f)[:2] == (20, "INCONSISTENT\n")


@pytest.mark.parametrize("argv", [
    ["gen", "hamiltonian", "--nodes", "5", "--edges", "10", "--seed", "2"],
    ["gen", "pigeonhole", "--holes", "3"],
    ["gen", "random", "--atoms", "5", "--rules", "7", "--seed", "4"],
])
def test_gen_output_parses(capsys, argv):
    code, out, _ = _run(capsys, *argv)
    assert code == 0
    assert parse_program(out).rules
    assert _run(capsys, *argv)[1] == out


def test_module_entry_point(tmp_path):
    f = tmp_path / "ex.lp"
    f.write_text("a. :- a.\n")
    proc = subprocess.run([sys.executable, "-m", "aspcdcl", "solve", str(f)], capture_output=True, text=True)
    assert proc.returncode == 20
    assert proc.stdout == "INCONSISTENT\n"
