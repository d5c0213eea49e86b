import io
import os
import subprocess
import sys

import pytest

from pspath.cli import main
from pspath.graph import parse_graph

TWO_CYCLE = "p psp 2 2\ns 1\na 1 2 3 1 1\na 2 1 5 1 1\n"
PARALLEL = "p psp 2 2\ns 1\na 1 2 0 0 1\na 1 2 4 1 1\n"
UNBALANCED = "p psp 2 2\na 1 2 4 1 1\na 2 1 0 1 1\n"


def run(args, capsys=None):
    out = io.StringIO()
    rc = main(args, out=out)
    return rc, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="g.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def test_parametric_parallel(write):
    rc, out = run(["parametric", write(PARALLEL), "--dump-log", "--certify"])
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "1 4"
    assert "v 2 -inf 1" in lines and "v 2 4 2" in lines
    assert lines[-1] == "lambda_star inf"


def test_parametric_cycle(write):
    rc, out = run(["parametric", write(TWO_CYCLE)])
    assert rc == 0
    assert out.splitlines()[-2:] == ["cycle 1 2", "lambda_star 4"]


def test_parametric_without_source_uses_artificial_source(write):
    rc, out = run(["parametric", write(UNBALANCED), "--certify"])
    assert rc == 0
    assert out.splitlines()[0].startswith("c ")
    assert out.splitlines()[-1] == "lambda_star 2"


@pytest.mark.parametrize("algo", ["parametric", "karp", "brute"])
def test_mmc(write, algo):
    rc, out = run(["mmc", write(TWO_CYCLE), "--algo", algo, "--certify"])
    assert rc == 0
    assert out.splitlines()[0] == "lambda_star 4"
    assert ("cycle" in out) == (algo != "karp")


def test_mmc_ratio_and_scc(write):
    g = write("p psp 3 3\na 1 2 3 1 1\na 2 1 5 1 3\na 2 3 -100 1 1\n")
    rc, out = run(["mmc", g, "--ratio", "--scc"])
    lines = out.splitlines()
    assert rc == 0 and lines[0] == "lambda_star 2"
    assert sorted(lines[1].split()[1:]) == ["1", "2"]
    rc, _ = run(["mmc", g, "--ratio", "--algo", "karp"])
    assert rc == 1


def test_mmc_acyclic(write):
    rc, out = run(["mmc", write("p psp 2 1\na 1 2 3 1 1\n")])
    assert rc == 0 and out == "lambda_star inf\n"


def test_balance(write):
    rc, out = run(["balance", write(UNBALANCED), "--check"])
    assert rc == 0
    assert out.splitlines() == ["pi 1 0", "pi 2 2", "contractions 1", "cycle 2 1 2"]


def test_balance_errors(write):
    rc, _ = run(["balance", write("p psp 2 1\na 1 2 3 1 1\n")])
    assert rc == 1
    big = "p psp 21 21\n" + "".join(f"a {i} {i % 21 + 1} 1 1 1\n" for i in range(1, 22))
    rc, _ = run(["balance", write(big), "--check"])
    assert rc == 1


def test_certification_failure_exit_code(write, monkeypatch):
    import pspath.cli as cli
    from pspath.oracle import CertReport

    def broken(g, sol):
        rep = CertReport()
        rep.add("forced", False)
        return rep

    monkeypatch.setattr(cli, "certify_solution", broken)
    rc, _ = run(["parametric", write(TWO_CYCLE), "--certify"])
    assert rc == 2


def test_balance_check_failure_exit_code(write, monkeypatch):
    import pspath.cli as cli
    from pspath.cycles import Potential

    real = cli.min_balance

    def bad_balance(g):
        res = real(g)
        res.potential = Potential.zero(g.n)
        return res

    monkeypatch.setattr(cli, "min_balance", bad_balance)
    rc, _ = run(["balance", write(UNBALANCED), "--check"])
    assert rc == 2


def test_parse_error_exit_code(write, capsys):
    rc, _ = run(["mmc", write("p psp 2 1\na 1 3 5 1 1\n")])
    assert rc == 1
    assert "line 2: vertex id 3 out of range" in capsys.readouterr().err
    rc, _ = run(["mmc", "/nonexistent/graph"])
    assert rc == 1


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["mmc"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_gen(tmp_path):
    out_file = tmp_path / "r.txt"
    rc, out = run(["gen", "--n", "6", "--m", "12", "--seed", "4", "--cost-lo", "-3", "--cost-hi", "3", "-o",
                   str(out_file)])
    assert rc == 0 and out == ""
    g = parse_graph(out_file.read_text())
    assert g.n == 6 and g.m == 12 and all(-3 <= e.cost <= 3 for e in g.edges)
    rc, again = run(["gen", "--n", "6", "--m", "12", "--seed", "4", "--cost-lo", "-3", "--cost-hi", "3"])
    assert again == out_file.read_text()
    rc, _ = run(["gen", "--n", "3", "--m", "7"])
    assert rc == 1


def test_bench(tmp_path, capsys):
    csv_file = tmp_path / "b.csv"
    rc, _ = run(["bench", "--points", "10:30", "--trials", "2", "--seed", "1", "-o", str(csv_file), "--certify"])
    assert rc == 0
    assert len(csv_file.read_text().splitlines()) == 3
    assert "uniform" in capsys.readouterr().err
    rc, out = run(["bench", "--mode", "balance", "--points", "6:12", "--trials", "2"])
    assert rc == 0 and len(out.splitlines()) == 3
    rc, _ = run(["bench", "--points", "bad"])
    assert rc == 1


def test_console_script_entry_point(write):
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "pspath.cli", "mmc", write(TWO_CYCLE)], capture_output=True,
                          text=True, env=env)
    assert proc.returncode == 0 and proc.stdout.startswith("lambda_star 4")
