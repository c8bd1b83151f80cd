from __future__ import annotations

import subprocess
import sys

import pytest

from tamejet.cli import main
from tamejet.endo import Endo, nagata
from tamejet.fileio import format_endo, parse_endo, parse_word
from tamejet.poly import Ring
from tamejet.field import QQ

R3 = Ring(QQ, 3)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def nagata_file(tmp_path):
    p = tmp_path / "nagata.endo"
    p.write_text(format_endo(nagata()))
    return str(p)


def test_nagata_check(capsys):
    code, out, _ = run(capsys, "nagata", "--check")
    assert code == 0
    assert "x -> x - 2*y^3 - 2*x*y*z - y^4*z - 2*x*y^2*z^2 - x^2*z^3" in out
    assert "ord=3" in out and "det=1" in out
    assert "fail" not in out


def test_build_then_eval(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "phi_m", "--m", "3", "--b", "1")
    assert code == 0
    wf = tmp_path / "w.word"
    wf.write_text(out)
    code, out, _ = run(capsys, "eval-word", str(wf))
    assert parse_endo(out) == Endo.from_strings(R3, ["x", "y", "z + x^3"])


def test_pipe_through_entry_point():
    build = subprocess.run([sys.executable, "-m", "tamejet", "build", "phi_m", "--m", "3", "--b", "1"],
                           capture_output=True, text=True, check=True)
    ev = subprocess.run([sys.executable, "-m", "tamejet", "eval-word"], input=build.stdout,
                        capture_output=True, text=True, check=True)
    assert ev.stdout == "endo comm n=3 field=Q\nx -> x\ny -> y\nz -> z + x^3\n"


def test_endo_subcommands(capsys, nagata_file, tmp_path):
    assert run(capsys, "ord", nagata_file)[1].startswith("ord=3\nx: -2*y^3 - 2*x*y*z")
    assert "det = 1" in run(capsys, "jacobian", nagata_file)[1]
    out = run(capsys, "jet", nagata_file, "--jet", "4")[1]
    assert parse_endo(out) == nagata().truncate(4)
    inv = tmp_path / "inv.endo"
    inv.write_text(run(capsys, "inverse", nagata_file, "--jet", "6")[1])
    out = run(capsys, "compose", nagata_file, str(inv), "--jet", "6")[1]
    assert parse_endo(out).is_identity()


def test_free_subcommands(capsys, tmp_path):
    f = tmp_path / "free.endo"
    f.write_text("endo free n=3 field=Q\nx -> x\ny -> y\nz -> z + x*y^2\n")
    assert "z -> z + y^2*x" in run(capsys, "mirror", str(f))[1]
    out = run(capsys, "abelianize", str(f))[1]
    assert out.startswith("endo comm n=3 field=Q") and "z -> z + x*y^2" in out


def test_singular_curve(capsys, tmp_path):
    f = tmp_path / "sq.endo"
    f.write_text("endo comm n=3 field=Q\nx -> x + y^2\ny -> y\nz -> z\n")
    code, out, _ = run(capsys, "singular-curve", str(f), "--N", "3")
    assert code == 0 and "count=13" in out and "\n3,1,1\n" in out


def test_torus_subcommands(capsys):
    code, out, _ = run(capsys, "centralizer", "--weights", "weights=[[2],[1],[1]]", "--degree", "2")
    assert sorted(out.splitlines()[1:]) == ["x", "y*z", "y^2", "z^2"]
    code, out, _ = run(capsys, "normalize-torus", "--exponents", "1,1,1")
    assert code == 0 and "alpha = 2^1, 2^1, 2^1" in out and "check pass" in out
    code, out, _ = run(capsys, "normalize-torus", "--exponents", "1,0,0")
    assert code == 0 and out.startswith("unsolvable")


def test_hike_and_inclexcl(capsys, tmp_path):
    code, out, _ = run(capsys, "hike", "--exponents", "2")
    assert code == 0 and "ks=2,-1" in out and "lambdas=1,-4" in out
    f = tmp_path / "t.endo"
    f.write_text("endo comm n=3 field=Q\nx -> x\ny -> y + x*z + z^2\nz -> z\n")
    code, out, _ = run(capsys, "hike", "--exponents", "1", "--target", str(f), "--jet", "4")
    assert code == 0 and "scale[1]=0" in out
    code, out, _ = run(capsys, "inclexcl", "--n", "3", "--m", "3")
    assert code == 0 and "difference = 6*x*y*z" in out


def test_approximate(capsys, nagata_file, tmp_path):
    wf = tmp_path / "approx.word"
    code, out, _ = run(capsys, "approximate", "--target", nagata_file, "--order", "5", "--output", str(wf))
    assert code == 0 and "status=complete" in out and "residual_order>=5" in out
    assert len(parse_word(wf.read_text())) > 0


def test_approximate_partial_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.endo"
    f.write_text("endo comm n=3 field=Q\nx -> x + x^2\ny -> y\nz -> z\n")
    code, _, err = run(capsys, "approximate", "--target", str(f), "--order", "4")
    assert code == 1 and "status=partial" in err


def test_star(capsys):
    code, out, _ = run(capsys, "star", "--a", "1", "--b", "3", "x", "y")
    assert out.strip() == "x*y + 3*y*x"
    code, out, _ = run(capsys, "star", "--a", "2", "--b", "5", "x*y", "z", "x")
    assert code == 0 and "check pass" in out


def test_verify_paper_section(capsys):
    code, out, _ = run(capsys, "verify-paper", "--section", "5", "--field", "Q")
    assert code == 0
    assert out.splitlines()[0].startswith("# tamejet verification report v1")


def test_error_exit_codes(capsys, tmp_path):
    assert run(capsys, "ord", str(tmp_path / "missing"))[0] == 2
    bad = tmp_path / "bad.endo"
    bad.write_text("endo comm n=2 field=Q\nx -> x +* y\ny -> y\n")
    code, _, err = run(capsys, "ord", str(bad))
    assert code == 2 and "line 2, col" in err
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nagata", "--unknown-flag"])
    assert exc.value.code == 2
    assert run(capsys, "build", "monomial", "--k", "2", "--l", "2", "--field", "F3")[0] == 2


def test_deterministic_output(capsys):
    a = run(capsys, "build", "alpha_m", "--m", "3", "--b=-3/2")[1]
    b = run(capsys, "build", "alpha_m", "--m", "3", "--b=-3/2")[1]
    assert a == b
