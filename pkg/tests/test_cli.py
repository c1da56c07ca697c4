from pathlib import Path

import pytest

from unitri.cli import run_command

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = run_command([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def terms(text):
    return [line for line in text.splitlines()
            if " * " in line or line.strip().lstrip("-").replace("/", "").isdigit()]


def test_pairing_example_bracket(capsys):
    code, out, _ = run(capsys, "bracket", DATA / "pairing_example_left.series", DATA / "pairing_example_right.series",
                       "--diagrams", DATA / "pairing_example.dg", "--no-inline")
    assert code == 0
    assert terms(out) == ["2 * R2 * R3", "2 * R5"]
    code, out, _ = run(capsys, "bracket", DATA / "pairing_example_left.series", DATA / "pairing_example_right.series",
                       "--diagrams", DATA / "pairing_example.dg", "--no-inline", "--connected")
    assert terms(out) == ["2 * R5"]


def test_diffop_example_dop(capsys):
    code, out, _ = run(capsys, "dop", DATA / "diffop_example_left.series", DATA / "diffop_example_right.series",
                       "--diagrams", DATA / "diffop_example.dg", "--no-inline")
    assert code == 0 and terms(out) == ["2 * T1", "2 * T2"]


@pytest.mark.parametrize("argv", [
    ["bracket", "pairing_example_left.series", "pairing_example_right.series", "--diagrams", "pairing_example.dg"],
    ["bracket-x", "pairing_example_left.series", "pairing_example_right.series", "--diagrams", "pairing_example.dg",
     "--glue", "y1"],
    ["dop", "diffop_example_left.series", "diffop_example_right.series", "--diagrams", "diffop_example.dg"],
    ["close", "diffop_example_right.series", "--diagrams", "diffop_example.dg"],
    ["close", "wheel2_ab.series"],
])
def test_oracle_mode_on_shipped_fixtures(capsys, argv):
    argv = [str(DATA / a) if a.endswith((".series", ".dg")) else a for a in argv]
    code, _, err = run(capsys, *argv, "--oracle")
    assert code == 0, err


def test_lens_p1_is_zero(capsys):
    code, out, _ = run(capsys, "lens", "--p", 1, "--q", 1, "--max-degree", 3)
    assert code == 0 and terms(out) == [] and out.startswith("trunc 3")


def test_lens_route_check_exit_codes(capsys):
    assert run(capsys, "lens", "--p", 3, "--q", 1, "--max-degree", 3, "--check-routes")[0] == 0
    code, _, err = run(capsys, "lens", "--p", 3, "--q", 1, "--max-degree", 4, "--check-routes")
    assert code == 1 and "disagree" in err


def test_export_dot_theta(capsys):
    code, out, _ = run(capsys, "export-dot", DATA / "theta.dg")
    assert code == 0
    assert out.count("[shape=point]") == 2 and out.count(" -- ") == 3


def test_unary_commands(capsys, tmp_path):
    f = tmp_path / "p.series"
    f.write_text("trunc 3\ncolors a b\n" + (DATA / "wheel2_ab.series").read_text().split("leg-ratio 1\n")[1])
    code, out, _ = run(capsys, "exp", f)
    assert code == 0 and "1 * 1" in out
    g = tmp_path / "e.series"
    g.write_text(out)
    code, out2, _ = run(capsys, "log", g)
    assert code == 0 and terms(out2) == ["1/2 * D1"]
    code, out3, _ = run(capsys, "primitive", g)
    assert terms(out3) == ["1/2 * D1"]


def test_seifert_and_gaussian(capsys):
    code, out, _ = run(capsys, "seifert", "--b", 1, "--pair", "2,1", "--pair", "3,1",
                       "--lambda", "1/2", "--max-degree", 2)
    assert code == 0 and terms(out)
    code, out, _ = run(capsys, "gaussian", DATA / "wheel2_ab.series", "--matrix",
                       DATA / "hopf_pair.matrix", "--max-degree", 2, "--no-inline")
    assert code == 0 and "-1/2 * D1" in out


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "--which", "main", "--trials", 3, "--max-degree", 2,
                       "--colors", "x,y")
    assert code == 0 and "3/3" in out


def test_exit_codes_for_errors(capsys, tmp_path):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "exp", tmp_path / "missing.series")[0] == 2
    bad = tmp_path / "bad.series"
    bad.write_text("trunc 2\ncolors x\n1 * undefined\n")
    code, _, err = run(capsys, "exp", bad)
    assert code == 2 and "bad.series:3:" in err
    struts = tmp_path / "s.series"
    struts.write_text("trunc 2\ncolors a b\ndiagram s\nu 0 a\nu 1 b\ne 0.0 1.0\nend\n1 * s\n")
    code, _, err = run(capsys, "bracket", struts, struts)
    assert code == 3 and "precondition" in err
    assert run(capsys, "lens", "--p", 4, "--q", 2)[0] == 3


def test_output_is_byte_identical_across_runs(capsys, tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"o{i}.series"
        code = run(capsys, "bracket", DATA / "pairing_example_left.series", DATA / "pairing_example_right.series",
                   "--diagrams", DATA / "pairing_example.dg", "-o", target)[0]
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1] and outs[0]
