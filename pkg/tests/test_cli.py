import json
import subprocess
import sys

import pytest

from gdconformal.cli import (
    AlgebraSyntaxError,
    fixture_names,
    load_algebra,
    main,
    print_algebra,
    read_algebra,
    run,
)
from gdconformal.gdcore import check_gd

HEADER = "[algebra]\nname = t\n\n[generators]\n"


def test_fixtures_are_listed():
    assert fixture_names() == ["heisenberg3", "novikov2", "virasoro-source", "zero1"]


@pytest.mark.parametrize("name", ["heisenberg3", "novikov2", "virasoro-source", "zero1"])
def test_fixture_round_trip(name):
    f = load_algebra(name)
    again = read_algebra(print_algebra(f.algebra, f.metadata))
    assert again.algebra.circ == f.algebra.circ
    assert again.algebra.bracket == f.algebra.bracket
    assert again.algebra.basis == f.algebra.basis
    assert again.metadata == f.metadata
    assert "description" in f.metadata


def test_mirror_completion_and_fractions():
    text = HEADER + "a 0\nb 0\nt 1\ns 1\n\n[circ]\na b -> 1/2*a - b\n\n[bracket]\na b -> 3*a\nt s -> a\n"
    A = read_algebra(text).algebra
    a, b, t, s = range(4)
    assert A.circ[a][b][:2] == (0.5, -1)
    assert A.bracket[b][a][a] == -3
    # two odd generators: the mirror has the same sign
    assert A.bracket[s][t][a] == 1


def test_odd_generators_are_reordered_after_even():
    A = read_algebra(HEADER + "t 1\na 0\n").algebra
    assert A.basis.names == ("a", "t")


@pytest.mark.parametrize(
    "body, lineno, fragment",
    [
        ("a 0\n\n[circ]\na c -> a\n", 8, "undeclared label 'c'"),
        ("a 0\n\n[circ]\na a -> 2*q\n", 8, "undeclared label 'q'"),
        ("a 0\nb 1\nf 1\n\n[circ]\nb b -> f\n", 10, "parity violation"),
        ("a 2\n", 5, "parity 0 or 1"),
        ("a 0\na 0\n", 6, "duplicate label"),
        ("a 0\n\n[circ]\na a a\n", 8, "expected 'a b -> combination'"),
        ("a 0\n\n[circ]\na a -> a a\n", 8, "missing + or -"),
        ("a 0\n\n[nonsense]\n", 7, "unknown section"),
    ],
)
def test_parse_errors_carry_line_numbers(body, lineno, fragment):
    with pytest.raises(AlgebraSyntaxError) as err:
        read_algebra(HEADER + body)
    assert err.value.lineno == lineno
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"line {lineno}:")


def test_zero_on_the_right_hand_side():
    A = read_algebra(HEADER + "a 0\n\n[circ]\na a -> 0\n").algebra
    assert not any(A.circ[0][0])


def test_parsed_heisenberg_is_gd():
    assert check_gd(load_algebra("heisenberg3").algebra).passed


# -- commands ----------------------------------------------------------------------


def test_check_gd_exit_codes(tmp_path):
    assert run(["check-gd", "--algebra", "heisenberg3"])[0] == 0
    bad = tmp_path / "bad.alg"
    bad.write_text(HEADER + "a 0\nb 0\n\n[circ]\na b -> a\n")
    code, report = run(["check-gd", "--algebra", str(bad)])
    assert code == 1
    assert report["verdicts"][0]["violations"]


def test_speciality_certificate(capsys):
    assert main(["speciality", "--algebra", "heisenberg3"]) == 1
    out = capsys.readouterr().out
    assert "certificate: z in I_V" in out
    assert "FAIL speciality_kernel_zero" in out


def test_build_ffr_virasoro(capsys):
    assert main(["build-ffr", "--algebra", "virasoro-source", "--matrices"]) == 0
    out = capsys.readouterr().out
    assert "[v _lam 1] = lam*v + (D + lam)*1" in out
    assert "faithfulness witness: column 1" in out


def test_build_ffr_on_exceptional_algebra_reports_prerequisites():
    code, report = run(["build-ffr", "--algebra", "heisenberg3"])
    assert code == 1
    assert report["verdicts"][-1]["check"] == "prerequisites"


def test_check_repr_reports_annihilated_combination(capsys):
    assert main(["check-repr", "--algebra", "heisenberg3"]) == 1
    assert "acts as zero:" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["check-conformal", "--algebra", "zero1"],
        ["check-conformal", "--algebra", "novikov2", "--commutator"],
        ["check-novikov", "--algebra", "novikov2"],
        ["loop-oracle", "--algebra", "virasoro-source", "--cap", "2"],
        ["build-conformal", "--algebra", "virasoro-source"],
        ["build-envelope", "--algebra", "novikov2", "--mode", "novikov", "--degree", "3"],
        ["build-envelope", "--algebra", "virasoro-source", "--degree", "3", "--stabilize"],
        ["check-lemmas", "--order-cap", "1", "--parities", "0,1,1"],
        ["check-gc", "--n", "1", "--m", "1", "--cap", "1"],
        ["check-repr", "--algebra", "virasoro-source"],
    ],
)
def test_passing_commands(argv):
    code, report = run(argv)
    assert code == 0, report
    assert report["exit_code"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["speciality", "--algebra", "heisenberg3", "--degree", "0"],
        ["speciality"],
        ["check-lemmas", "--parities", "0,2,0"],
        ["check-gc", "--n", "0", "--m", "0"],
        ["speciality", "--algebra", "no-such-algebra"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_syntax_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.alg"
    bad.write_text(HEADER + "a 0\n\n[circ]\na c -> a\n")
    assert main(["check-gd", "--algebra", str(bad)]) == 2
    assert "line 8" in capsys.readouterr().err


def test_reports_are_byte_identical(tmp_path):
    paths = [tmp_path / "r1.json", tmp_path / "r2.json"]
    for p in paths:
        main(["speciality", "--algebra", "heisenberg3", "--report", str(p)])
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    data = json.loads(a)
    assert data["kernel"] == ["z"]
    assert "wall_clock_seconds" not in data


def test_timing_is_opt_in():
    _, report = run(["check-gd", "--algebra", "zero1", "--timing"])
    assert "wall_clock_seconds" in report


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "gdconformal.cli", "check-gd", "--algebra", "zero1"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert "PASS check_gd" in out.stdout
