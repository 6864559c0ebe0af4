import json
import logging

import pytest

from app import main
from conftest import TREFOIL_ROWS
from utils.constants import ExitCode

TREFOIL_TEXT = "dimension: 2\nparity: odd-q\n" + "\n".join(" ".join(map(str, row)) for row in TREFOIL_ROWS) + "\n"
ZERO_TEXT = "dimension: 2\n0 0\n0 0\n"
LENS_TEXT = "surgery:\n4\ncurve a: lk=1 framing=2\ncurve b: lk=1\ns3 a b: 0\n"
HOPF_TEXT = "surgery:\n1\ncurve a: lk=0\ncurve b: lk=0\ns3 a b: 1\n"


@pytest.fixture(autouse=True)
def _restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def trefoil_file(write_file):
    return write_file("trefoil.txt", TREFOIL_TEXT)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_profile(capsys, trefoil_file):
    code, out, err = run(capsys, "profile", trefoil_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# signature profile: dimension 2, parity odd-q, 2 breakpoint(s)"
    assert lines[1].split() == ["breakpoint", "left", "right", "jump", "value"]
    assert lines[2].split() == ["π/3", "0", "2", "2", "1"]
    assert lines[3].split() == ["5π/3", "2", "0", "-2", "1"]
    assert err == ""


def test_profile_of_constant_matrix(capsys, write_file):
    code, out, _ = run(capsys, "profile", write_file("zero.txt", ZERO_TEXT))
    assert code == 0
    assert out.splitlines() == [
        "# signature profile: dimension 2, parity odd-q, 0 breakpoint(s)",
        "# constant profile: sigma = 0 on (0, 2pi), no breakpoints",
    ]


def test_profile_csv_and_plot(capsys, tmp_path, trefoil_file):
    csv_path, plot_path = tmp_path / "profile.csv", tmp_path / "profile.json"
    code, out, _ = run(capsys, "profile", trefoil_file, "--out", str(csv_path), "--plot", str(plot_path))
    assert code == 0
    assert out == ""
    assert csv_path.read_text(encoding="utf-8").splitlines() == [
        "breakpoint,left,right,jump,value",
        "π/3,0,2,2,1",
        "5π/3,2,0,-2,1",
    ]
    assert len(json.loads(plot_path.read_text(encoding="utf-8"))["layer"]) == 2


def test_profile_text_out(capsys, tmp_path, trefoil_file):
    target = tmp_path / "profile.txt"
    assert run(capsys, "profile", trefoil_file, "--out", str(target))[0] == 0
    assert target.read_text(encoding="utf-8").startswith("# signature profile: dimension 2")


def test_parse_error_exits_with_input_code(capsys, write_file):
    path = write_file("bad.txt", "dimension: 2\nparity: odd-q\n1 1/0\n0 1\n")
    code, out, err = run(capsys, "profile", path)
    assert code == 2
    assert out == ""
    assert err.startswith(f"error: {path}:3:3: ")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "alexander", str(tmp_path / "nothing.txt"))
    assert code == 2
    assert err.startswith("error: cannot read")


@pytest.mark.parametrize("argv, expected", [
    (["--theta", "1/3 pi"], "2"),
    (["--theta", "5/3 pi"], "-2"),
    (["--theta", "2 pi"], "0"),
    (["--theta", "pi/6"], "0"),
    (["--theta", "5/3 pi", "--complexity", "5"], "2"),
    (["--theta", "pi", "--complexity", "3"], "2"),
])
def test_delta(capsys, trefoil_file, argv, expected):
    code, out, _ = run(capsys, "delta", trefoil_file, *argv)
    assert (code, out) == (0, expected + "\n")


def test_delta_rejects_bad_input(capsys, trefoil_file):
    assert run(capsys, "delta", trefoil_file, "--theta", "abc")[0] == 2
    assert run(capsys, "delta", trefoil_file, "--theta", "pi", "--complexity", "0")[0] == 2
    assert run(capsys, "delta", trefoil_file, "--theta", "pi", "--tau", "2,4")[0] == 2


def test_alexander_and_branched(capsys, trefoil_file):
    assert run(capsys, "alexander", trefoil_file)[:2] == (0, "t^2 - t + 1\n")
    assert run(capsys, "branched", trefoil_file, "--k", "1", "--d", "6")[:2] == (0, "1\n")
    assert run(capsys, "branched", trefoil_file, "--k", "1", "--d", "2")[:2] == (0, "2\n")
    assert run(capsys, "branched", trefoil_file, "--k", "1", "--d", "0")[0] == 2


def test_surgery_lk_and_matrix(capsys, write_file):
    path = write_file("lens.txt", LENS_TEXT)
    assert run(capsys, "surgery", path, "lk")[:2] == (0, "-1/4\n")
    assert run(capsys, "surgery", path, "lk", "--curves", "a")[:2] == (0, "7/4\n")
    assert run(capsys, "surgery", path, "matrix")[:2] == (0, "7/4 -1/4\n-1/4 -1/4\n")
    assert run(capsys, "surgery", path, "admits", "--tau", "1,1")[:2] == (0, "no\n")
    code, out, _ = run(capsys, "surgery", path, "framing", "--tau", "1,1")
    assert (code, out) == (0, "type (1,1) is not admitted\n")


def test_surgery_types_and_framing(capsys, write_file):
    path = write_file("hopf.txt", HOPF_TEXT)
    assert run(capsys, "surgery", path, "matrix")[:2] == (0, "0 1\n1 0\n")
    assert run(capsys, "surgery", path, "admits")[:2] == (0, "yes\n")
    assert run(capsys, "surgery", path, "framing", "--tau", "1,1")[:2] == (0, "D = diag(-1,-1)\n")


def test_surgery_realize(capsys, write_file):
    path = write_file("lens.txt", "surgery:\n9\ncurve a: lk=1\n")
    code, out, _ = run(capsys, "surgery", path, "realize")
    assert code == 0
    assert out.splitlines() == ["B =", "1", "V =", "-9"]


def test_surgery_on_singular_diagram(capsys, write_file):
    path = write_file("s1xs2.txt", "surgery:\n0\ncurve a: lk=1\n")
    code, _, err = run(capsys, "surgery", path, "lk")
    assert code == 3
    assert "rational homology sphere" in err


def test_family(capsys):
    code, out, _ = run(capsys, "family", "--parity", "odd", "--primes", "11")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# family odd-q, primes 11, coefficients 1"
    assert lines[1] == "PASS p=11 nonzero theta=7π/33 delta=2"
    assert lines[2] == "PASS p=11 vanish theta=73π/33 delta=0"
    assert lines[-1] == "2/2 checks passed"


def test_failed_family_check_exit_code(capsys, monkeypatch):
    monkeypatch.setattr("utils.linkclass.combination_delta", lambda *args, **kwargs: 0)
    code, out, _ = run(capsys, "family", "--parity", "odd", "--primes", "11")
    assert code == ExitCode.CHECK_FAILED == 1
    lines = out.splitlines()
    assert lines[1] == "FAIL p=11 nonzero theta=7π/33 delta=0"
    assert lines[2] == "PASS p=11 vanish theta=73π/33 delta=0"
    assert lines[-1] == "1/2 checks passed"


def test_family_with_coefficients(capsys, tmp_path):
    target = tmp_path / "family.txt"
    code, out, _ = run(capsys, "family", "--parity", "even", "--primes", "11,13", "--coefficients", "2,-1",
                       "--out", str(target))
    assert (code, out) == (0, "")
    lines = target.read_text(encoding="utf-8").splitlines()
    assert sum(line.startswith("PASS") for line in lines) == 4
    assert lines[-1] == "4/4 checks passed"


@pytest.mark.parametrize("primes", ["5", "11,11", "eleven"])
def test_family_rejects_primes(capsys, primes):
    code, _, err = run(capsys, "family", "--parity", "odd", "--primes", primes)
    assert code == 2
    assert err.startswith("error: ")


def test_verbose_prints_run_stats(capsys, trefoil_file):
    code, _, err = run(capsys, "--verbose", "profile", trefoil_file)
    assert code == 0
    line = next(line for line in err.splitlines() if line.startswith("# run stats: "))
    stats = json.loads(line[len("# run stats: "):])
    assert stats["profiles_computed"] == 1
    assert stats["commands"] == {"profile": 1}


def test_precision_ceiling_flag_is_validated(capsys, trefoil_file):
    code, _, err = run(capsys, "--precision-ceiling", "8", "profile", trefoil_file)
    assert code == 2
    assert "invalid configuration" in err
