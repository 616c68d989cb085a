import json
from importlib import resources

import pytest

from ringoid.cli import main

SAMPLE = str(resources.files("ringoid").joinpath("samples/sample.acat"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_sample(capsys):
    code, out, _ = run(capsys, "check", SAMPLE)
    assert code == 0
    assert "category A: ok" in out


def test_nilpotent_check_reports_exponent_two(capsys):
    code, out, _ = run(capsys, "nilpotent-check", SAMPLE, "--functor", "red", "--max-exponent", "16")
    assert code == 0
    assert "exponent: 2" in out
    assert "max exponent 16" in out


def test_k0_compare_gives_rank_two(capsys):
    code, out, _ = run(capsys, "k0-compare", SAMPLE, "--bound", "3")
    assert code == 0
    assert "K0 by enumeration: Z + Z" in out
    assert "K0 by radical: Z + Z" in out
    assert "at most 3 objects" in out


def test_quotient_kills_z2(capsys):
    code, out, _ = run(capsys, "quotient", SAMPLE, "--kill", "Z2")
    assert code == 0
    assert "hom(Z4,Z4): Z/2" in out
    assert "hom(Z2,Z2): 0" in out


def test_quotient_emits_a_parseable_file(capsys, tmp_path):
    target = tmp_path / "q.acat"
    code, _, _ = run(capsys, "quotient", SAMPLE, "--kill", "Z2", "--emit", str(target))
    assert code == 0
    code, out, _ = run(capsys, "k0", str(target))
    assert code == 0 and "K0: Z" in out


def test_structured_output(capsys):
    code, out, _ = run(capsys, "--format", "structured", "nilpotent-check", SAMPLE)
    data = json.loads(out)
    assert code == 0
    assert data["verdict"] == "pass" and data["exponent"] == 2


@pytest.mark.parametrize("argv", [
    ["karoubi", SAMPLE],
    ["sqzero", SAMPLE],
    ["exact-check", SAMPLE, "--subcategory", "B"],
    ["k0", SAMPLE],
    ["weights-check", SAMPLE, "--samples", "8"],
    ["kb-hom", SAMPLE, "--source", "C", "--target", "C"],
])
def test_other_commands_pass_on_sample(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert "PASS" in out


def test_bounded_reports_state_their_bound(capsys):
    for argv in (["karoubi", SAMPLE], ["k0", SAMPLE], ["exact-check", SAMPLE, "--kill", "Z2"],
                 ["weights-check", SAMPLE, "--samples", "2"], ["sqzero", SAMPLE]):
        _, out, _ = run(capsys, *argv)
        assert "bound:" in out


def test_bound_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RINGOID_BOUND", "2")
    _, out, _ = run(capsys, "k0", SAMPLE)
    assert "at most 2 objects" in out
    monkeypatch.setenv("RINGOID_MAX_EXPONENT", "5")
    _, out, _ = run(capsys, "nilpotent-check", SAMPLE)
    assert "max exponent 5" in out


def test_bad_environment_is_a_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("RINGOID_BOUND", "lots")
    code, _, err = run(capsys, "k0", SAMPLE)
    assert code == 2 and "RINGOID_BOUND" in err


def test_exact_check_fails_for_wrong_target(capsys, tmp_path):
    # reduction mod 2 from A to R2 does not kill Z2
    text = open(SAMPLE).read() + ("\n[functor g: A -> R2]\nobject Z4 -> *\nobject Z2 -> *\n"
                                  "map Z4 Z4 0: 1\nmap Z4 Z2 0: 1\nmap Z2 Z2 0: 1\n")
    path = tmp_path / "g.acat"
    path.write_text(text)
    code, out, _ = run(capsys, "exact-check", str(path), "--kill", "Z2", "--functor", "g")
    assert code == 1
    assert "not sent to zero" in out


def test_exact_check_rejects_invalid_functor(capsys, tmp_path):
    text = open(SAMPLE).read() + "\n[functor g: A -> R2]\nobject Z4 -> *\nobject Z2 -> *\nmap Z2 Z2 0: 1\n"
    path = tmp_path / "g.acat"
    path.write_text(text)
    code, out, _ = run(capsys, "exact-check", str(path), "--kill", "Z2", "--functor", "g")
    assert code == 1
    assert "invalid functor" in out


def test_nilpotent_check_failure_exit_code(capsys, tmp_path):
    text = ("[category Z]\nobjects: *\nhom * *: 0\nidentity *: 1\ncomp * * * 0 0: 1\n\n"
            "[category F]\nobjects: *\nhom * *: 2\nidentity *: 1\ncomp * * * 0 0: 1\n\n"
            "[functor r: Z -> F]\nobject * -> *\nmap * * 0: 1\n")
    path = tmp_path / "z.acat"
    path.write_text(text)
    code, out, _ = run(capsys, "nilpotent-check", str(path))
    assert code == 1
    assert "not-nilpotent" in out


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.acat"
    path.write_text("[category A]\nobjects: x\nhom x x: 4 2\n")
    code, _, err = run(capsys, "k0", str(path))
    assert code == 2
    assert "bad.acat:3" in err and "hom x x" in err


def test_check_reports_invalid_category(capsys, tmp_path):
    path = tmp_path / "bad.acat"
    path.write_text("[category A]\nobjects: x\nhom x x: 2\nidentity x: 1\ncomp x x x 0 0: 0\n")
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1 and "unit" in out


def test_unknown_command_exits_with_usage(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate", SAMPLE])
    assert err.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_names_are_usage_errors(capsys):
    assert run(capsys, "nilpotent-check", SAMPLE, "--functor", "nope")[0] == 2
    assert run(capsys, "k0", SAMPLE, "--category", "nope")[0] == 2
    assert run(capsys, "quotient", SAMPLE, "--kill", "Z8")[0] == 2
    assert run(capsys, "k0", "/no/such/file.acat")[0] == 2
