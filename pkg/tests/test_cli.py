import json
import subprocess
import sys

import pytest

from ppforge import families as fam
from ppforge.cli import main
from ppforge.field import TowerCtx


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_field(capsys):
    code, rep = run(capsys, "field", "--field", "3^2")
    assert code == 0 and rep["modulus"] == [1, 0, 1] and rep["order"] == 9
    assert run(capsys, "field", "--field", "4^1")[0] == 2
    code, rep = run(capsys, "field", "--field", "2^3:1,1,0,1")
    assert code == 0 and rep["modulus"] == [1, 1, 0, 1]


def test_verify(capsys):
    code, rep = run(capsys, "verify", "--field", "3^2", "--poly", "0,1")
    assert code == 0 and rep["is_pp"]
    code, rep = run(capsys, "verify", "--field", "3^2", "--poly", "0,0,1")
    assert code == 1 and rep["is_pp"] is False and len(rep["witness"]) == 2
    code, rep = run(capsys, "verify", "--field", "3^2", "--poly", "0,0,0,2")
    assert code == 0 and rep["is_pp"] and rep["is_involution"]


def test_invert(capsys):
    code, rep = run(capsys, "invert", "--field", "3^1", "--poly", "1,1")
    assert code == 0 and rep["inverse"] == [2, 1] and rep["method"] == "brute"
    code, rep = run(capsys, "invert", "--field", "3^2", "--poly", "0,0,0,2")
    assert code == 0 and rep["inverse"] == [0, 0, 0, 2]
    code, rep = run(capsys, "invert", "--field", "3^2", "--poly", "0,0,1")
    assert code == 1 and len(rep["witness"]) == 2


def test_invert_through_diagram_file(capsys, tmp_path):
    md = fam.ai_sum_multidiagram(fam.AiSumParams(TowerCtx(3, 2), (1, 1), (1, 1)))
    path = tmp_path / "md.json"
    path.write_text(json.dumps(md.to_json()))
    code, rep = run(capsys, "invert", "--field", "3^2", "--poly", "0,0,0,2", "--diagrams", str(path))
    assert code == 0 and rep["method"] == "diagrams" and rep["inverse"] == [0, 0, 0, 2]
    assert rep["oracle_match"]
    code, _ = run(capsys, "invert", "--field", "3^2", "--poly", "0,1", "--diagrams", str(path))
    assert code == 2


def test_family(capsys):
    code, rep = run(capsys, "family", "thm63", "--q", "3", "--d", "2", "--u", "1,1", "--m", "1,1")
    assert code == 0 and rep["oracle_match"] and rep["f"] == [0, 0, 0, 2] and rep["inverse"] == [0, 0, 0, 2]
    code, rep = run(capsys, "family", "cor64", "--q", "3", "--d", "2", "--u", "2,1")
    assert code == 0 and rep["involution"] is True
    code, rep = run(capsys, "family", "thm65", "--q", "3", "--d", "2", "--u1", "1", "--u2", "1", "--m", "2")
    assert code == 0 and rep["is_pp"] is False and rep["exhaustive_is_pp"] is False
    assert run(capsys, "family", "cor64", "--q", "3", "--d", "2", "--u", "1,1")[0] == 2
    assert run(capsys, "family", "thm63", "--q", "3", "--d", "2", "--u", "1")[0] == 2


def test_group(capsys):
    code, rep = run(capsys, "group", "--n", "4", "--d", "2")
    assert code == 0 and rep["order"] == 8 and rep["match"] is True
    code, rep = run(capsys, "group", "--n", "6", "--d", "3")
    assert code == 0 and rep["order"] == 48
    assert run(capsys, "group", "--n", "5", "--d", "2")[0] == 2
    code, rep = run(capsys, "group", "--n", "4", "--d", "2", "--phi", "0,0,1,1")
    assert code == 0 and rep["is_homomorphism"] is False
    assert run(capsys, "group", "--n", "4", "--d", "2", "--phi", "0,0,1,1", "--strict")[0] == 2


def test_sweep_skips_over_ceiling(capsys):
    code, rep = run(capsys, "sweep", "--grid", "3:2,7:6", "--ceiling", "1000", "--draws", "5")
    assert code == 0
    skipped = [e for e in rep["grid"] if "skipped" in e]
    assert [(e["q"], e["d"]) for e in skipped] == [(7, 6)]


def test_bad_arguments_exit_2(capsys):
    assert main(["nonsense"]) == 2
    assert main(["verify", "--field", "3^2"]) == 2
    assert main(["verify", "--field", "3^2", "--poly", "a,b"]) == 2
    assert main(["sweep", "--grid", "3-2"]) == 2
    capsys.readouterr()


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "ppforge", *argv], capture_output=True)


def test_sweep_is_byte_identical_across_processes():
    argv = ("sweep", "--grid", "3:2,5:2,4:3", "--draws", "20", "--seed", "11")
    first, second = _cli(*argv), _cli(*argv)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    rep = json.loads(first.stdout)
    assert list(rep) == sorted(rep)
    other = _cli("sweep", "--grid", "3:2,5:2,4:3", "--draws", "20", "--seed", "12")
    assert json.loads(other.stdout)["seed"] == 12


def test_workers_do_not_change_output():
    base = ("sweep", "--grid", "3:2,5:2,7:3", "--draws", "10", "--seed", "3")
    assert _cli(*base).stdout == _cli(*base, "--workers", "2").stdout


def test_text_format(capsys):
    assert main(["field", "--field", "3^2", "--format", "text"]) == 0
    assert "order: 9" in capsys.readouterr().out


@pytest.mark.parametrize("argv, code", [
    (("field", "--field", "3^2"), 0),
    (("verify", "--field", "3^2", "--poly", "0,0,1"), 1),
    (("field", "--field", "6^1"), 2),
])
def test_console_exit_codes(argv, code):
    assert _cli(*argv).returncode == code


def test_family_descriptive_names_match_short_names(capsys):
    pairs = [
        (("ai-sum", "--u", "1,1", "--m", "1,1"), ("thm63", "--u", "1,1", "--m", "1,1")),
        (("ai-involution", "--u", "2,1"), ("cor64", "--u", "2,1")),
        (("trace", "--u1", "1", "--u2", "1", "--m", "1"), ("thm65", "--u1", "1", "--u2", "1", "--m", "1")),
    ]
    for long, short in pairs:
        a = run(capsys, "family", long[0], "--q", "3", "--d", "2", *long[1:])
        b = run(capsys, "family", short[0], "--q", "3", "--d", "2", *short[1:])
        assert a == b and a[0] == 0
