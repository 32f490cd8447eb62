import json
import shutil
import subprocess

import pytest

from sadic import families
from sadic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dendric_positive(capsys):
    code, out, _ = run(capsys, "dendric", "--ds", "fibonacci", "--max-len", "20")
    assert code == 0
    data = json.loads(out)
    assert data["dendric"] is True


def test_dendric_negative(capsys):
    code, out, _ = run(capsys, "dendric", "--ds", "thue_morse", "--max-len", "10")
    assert code == 1
    assert json.loads(out)["dendric"] is False


def test_certify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "--ds", "brun:12,23,31")
    assert code == 0
    assert json.loads(out)["primitive"] is True

    from sadic.directive import DirectiveSequence
    from sadic.words import Alphabet, Morphism

    ab = Alphabet("ab")
    reducible = DirectiveSequence(
        ab, (), (Morphism({"a": "aa", "b": "ab"}, ab),)
    )
    path = tmp_path / "reducible.json"
    path.write_text(json.dumps(reducible.to_json()))
    code, out, _ = run(capsys, "certify", "--ds", str(path))
    assert code == 1
    assert json.loads(out)["primitive"] is False


def test_input_errors_exit_two(capsys, tmp_path):
    code, _, err = run(capsys, "family", "brun:12,12,23")
    assert code == 2
    assert "inadmissible" in err
    code, _, err = run(capsys, "certify", "--ds", "missing.json")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "certify", "--ds", str(bad))
    assert code == 2


def test_unknown_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["dendric", "--ds", "fibonacci", "--no-such-flag"])
    assert exc.value.code == 2


def test_language_output_is_deterministic(capsys):
    code, first, _ = run(capsys, "language", "--ds", "tribonacci", "--max-len", "8")
    assert code == 0
    code, second, _ = run(capsys, "language", "--ds", "tribonacci", "--max-len", "8")
    assert first == second
    assert json.loads(first)["complexity"] == [2 * n + 1 for n in range(9)][:9]


def test_exact_and_decimal_renderings(capsys):
    code, out, _ = run(
        capsys, "measures", "--ds", "fibonacci", "--depth", "30", "--eps", "1e-6"
    )
    assert code == 0
    data = json.loads(out)
    lo = data["enclosure"]["a"][0]
    assert set(lo) == {"exact", "decimal"}
    num, den = lo["exact"].split("/")
    assert int(num) > 0 and int(den) > 0
    assert lo["decimal"].startswith("0.618")


def test_measures_inconclusive_exit(capsys):
    code, out, _ = run(
        capsys, "measures", "--ds", "fibonacci", "--depth", "3", "--eps", "1e-30"
    )
    assert code == 3
    assert json.loads(out)["verdict"] == "inconclusive"


def test_returns_command(capsys):
    code, out, _ = run(capsys, "returns", "--ds", "fibonacci", "--word", "ab")
    assert code == 0
    data = json.loads(out)
    assert sorted(data["return_words"]) == ["ab", "aba"]
    assert data["free_basis"] is True


def test_dimgroup_with_cone(capsys):
    code, out, _ = run(capsys, "dimgroup", "--ds", "iet3_ex63", "--cone", "0,1,-1")
    assert code == 0
    data = json.loads(out)
    assert data["cone"]["membership"] == "zero"
    assert data["infinitesimal_lattice"]["basis"] == [[0, 1, -1]]
    code, _, err = run(capsys, "dimgroup", "--ds", "iet3_ex63", "--cone", "x,y")
    assert code == 2


def test_soe_command(capsys, tmp_path):
    code, out, _ = run(capsys, "soe", "--left", "fibonacci", "--right", "tribonacci")
    assert code == 1
    assert json.loads(out)["status"] == "not_soe"

    left = tmp_path / "left.json"
    left.write_text(
        json.dumps({"alphabet": ["a", "b"], "measures": [{"exact": ["1/3", "2/3"]}]})
    )
    code, out, _ = run(capsys, "soe", "--left", str(left), "--right", str(left))
    assert code == 0
    data = json.loads(out)
    assert data["matrix"] == [[1, 0], [0, 1]]
    assert data["inverse"] == [[1, 0], [0, 1]]


def test_soe_box_descriptor_file(capsys, tmp_path):
    box = tmp_path / "box.json"
    box.write_text(
        json.dumps(
            {
                "alphabet": ["a", "b"],
                "measures": [{"box": [["1/3", "2/5"], ["3/5", "2/3"]]}],
            }
        )
    )
    code, out, _ = run(capsys, "soe", "--left", str(box), "--right", str(box))
    assert code == 0


def test_balance_exit_codes(capsys):
    code, out, _ = run(capsys, "balance", "--ds", "fibonacci", "--max-n", "60")
    assert code == 0
    data = json.loads(out)
    assert data["letters_verdict"].startswith("empirically balanced")
    code, out, _ = run(capsys, "balance", "--ds", "iet3_ex63", "--max-n", "60")
    assert code == 1


def test_family_round_trip_through_file(capsys, tmp_path):
    code, out, _ = run(capsys, "family", "iet3_ex63")
    assert code == 0
    path = tmp_path / "iet.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "dimgroup", "--ds", str(path))
    assert code == 0
    assert json.loads(out2)["measures"][0]["type"] == "exact"


def test_threads_env_validation(capsys, monkeypatch):
    monkeypatch.setenv("SADIC_THREADS", "4")
    code, out, _ = run(capsys, "language", "--ds", "fibonacci", "--max-len", "5")
    assert code == 0
    baseline = out
    monkeypatch.setenv("SADIC_THREADS", "1")
    code, out, _ = run(capsys, "language", "--ds", "fibonacci", "--max-len", "5")
    assert out == baseline
    monkeypatch.setenv("SADIC_THREADS", "0")
    code, _, err = run(capsys, "language", "--ds", "fibonacci", "--max-len", "5")
    assert code == 2


def test_pretty_flag(capsys):
    code, out, _ = run(capsys, "language", "--ds", "fibonacci", "--max-len", "4", "--pretty")
    assert code == 0
    assert out.startswith("{\n")
    assert json.loads(out)["max_len"] == 4


def test_installed_script_smoke():
    exe = shutil.which("sadic")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run(
        [exe, "certify", "--ds", "fibonacci"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["primitive"] is True


def test_reproduce_fig1(capsys):
    code, out, _ = run(capsys, "reproduce", "fig1")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] is True
    assert data["graphs"]["b"] == [["a", "a"]]


def test_reproduce_ex63(capsys):
    code, out, _ = run(capsys, "reproduce", "ex6.3")
    assert code == 0
    assert json.loads(out)["checks"]["lattice_is_0_1_minus1"] is True


def test_reproduce_ex65(capsys):
    code, out, _ = run(capsys, "reproduce", "ex6.5")
    assert code == 0
    data = json.loads(out)
    assert data["clusters"] == [[0, 2], [1]]
    assert data["checks"]["l1_gap_at_least_bound"] is True
