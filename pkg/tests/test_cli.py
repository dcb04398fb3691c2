import json
import subprocess
import sys
from pathlib import Path

import pytest

from kolakoski.cli import UsageError, main, parse_complex

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_examples(capsys):
    assert run(capsys, "generate", "--p", "2", "--q", "1", "--n", "10") == (0, "2211212212\n", "")
    code, out, _ = run(capsys, "generate", "--p", "4", "--q", "2", "--n", "16", "--method", "alternating")
    assert out == "4444222244442222\n"
    code, out, _ = run(capsys, "generate", "--n", "5", "--two-sided")
    assert code == 0 and "|" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--p", "2", "--q", "2"],
        ["generate", "--n", "-1"],
        ["analyze", "--m", "1", "--n", "2"],
        ["bogus"],
        ["diffract", "--c-p", "x,y"],
        ["visualize", "--m", "5", "--n", "3"],
        ["cosets", "--letter", "zz"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_parse_complex():
    assert parse_complex("1,-2") == 1 - 2j
    assert parse_complex("0.5") == 0.5
    with pytest.raises(UsageError):
        parse_complex("1,2,3")


def test_analyze_fields(capsys):
    code, out, _ = run(capsys, "analyze", "--m", "2", "--n", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"] == {"m": 2, "n": 1}
    assert doc["height"] == 1 and doc["gcd"] == 1
    assert doc["numbered"] == {"height": 2, "gcd": 2}
    assert doc["coincidence"] == {"k": 2, "digits": [1, 2], "letter": "b1"}
    assert doc["pure_point"] is True
    assert doc["spectrum"]["group"] == "Z_3 × Z/4Z"
    assert (doc["spectrum"]["primes"], doc["spectrum"]["cyclic"]) == ([3], 4)
    assert doc["coincidence_charpoly"] == "x^6 - 7*x^5 + 17*x^4 - 17*x^3 + 6*x^2"


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--m", "3", "--n", "2"],
        ["derive", "--m", "4", "--n", "1", "--kind", "numbered"],
        ["cosets", "--m", "2", "--n", "1", "--depth", "5", "--verify", "2000"],
        ["diffract", "--m", "2", "--n", "1", "--c-p", "1,0", "--c-q=-1,0", "--depth", "6", "--max-denom", "1"],
        ["visualize", "--m", "2", "--n", "1", "--depth", "3", "--dimension", "1"],
        ["report", "--m", "3", "--n", "1", "--depth", "3"],
    ],
)
def test_config_round_trip_is_byte_identical(capsys, tmp_path, argv):
    first = tmp_path / "first"
    second = tmp_path / "second"
    assert run(capsys, *argv, "-o", str(first))[0] == 0
    text = first.read_text()
    if argv[0] == "visualize":
        cfg_text = text.split("<!-- config: ", 1)[1].split(" -->", 1)[0]
        config = tmp_path / "cfg.json"
        config.write_text(cfg_text)
    else:
        config = first
    assert run(capsys, argv[0], "--config", str(config), "-o", str(second))[0] == 0
    assert second.read_bytes() == first.read_bytes()


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 3, "q": 1, "n": 4}))
    assert run(capsys, "generate", "--config", str(cfg))[1] == "3331\n"
    assert run(capsys, "generate", "--config", str(cfg), "--n", "2")[1] == "33\n"
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(capsys, "generate", "--config", str(cfg))[0] == 2


def test_cosets_output_and_csv(capsys, tmp_path):
    csv_path = tmp_path / "c.csv"
    code, out, _ = run(capsys, "cosets", "--letter", "b1", "--depth", "4", "--verify", "6561", "--csv", str(csv_path))
    doc = json.loads(out)
    assert code == 0
    assert [(c["modulus"], c["residue"]) for c in doc["cosets"]] == [
        (9, 5), (27, 17), (27, 22), (81, 53), (81, 58), (81, 64), (81, 65)
    ]
    assert doc["verification"]["violations"] == []
    assert csv_path.read_text().splitlines()[:3] == ["modulus,residue", "9,5", "27,17"]


def test_cosets_from_substitution_file(capsys, tmp_path):
    path = tmp_path / "tm.txt"
    path.write_text("a -> a b\nb -> b a\n")
    code, out, _ = run(capsys, "cosets", "--substitution", str(path), "--letter", "a", "--depth", "3")
    assert code == 0 and json.loads(out)["cosets"] == []


def test_diffract_csv_and_support(capsys, tmp_path):
    csv_path = tmp_path / "p.csv"
    code, out, _ = run(capsys, "diffract", "--depth", "6", "--max-denom", "1", "--oracle-n", "20000", "--csv", str(csv_path))
    doc = json.loads(out)
    assert code == 0
    assert doc["support"]["set"] == "{k / (2^eps 3^s1) : k in Z, eps <= 2}"
    assert doc["peaks"][0]["frequency"] == {"num": 0, "den": 1}
    assert all(p["oracle"]["delta"] < p["error_bound"] + 0.01 for p in doc["peaks"])
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "num,den,re,im,intensity,error_bound" and len(rows) == len(doc["peaks"]) + 1


def test_visualize_colors(capsys):
    code, out, _ = run(capsys, "visualize", "--depth", "2", "--colors", "b1=#ff0000,mixed=#eeeeee")
    assert code == 0 and 'fill="#ff0000"' in out and 'fill="#eeeeee"' in out
    assert run(capsys, "visualize", "--colors", "b1")[0] == 2


def test_report_matches_golden(capsys):
    code, out, _ = run(capsys, "report", "--m", "2", "--n", "1")
    assert code == 0
    assert out == (DATA / "report_2_1.json").read_text()
    doc = json.loads(out)
    assert doc["coincidence_matrix"]["C"] == [
        [2, 1, 0, 0, 0, 0],
        [0, 1, 2, 0, 0, 0],
        [1, 1, 1, 0, 0, 0],
        [0, 0, 0, 1, 1, 1],
        [1, 1, 0, 0, 1, 0],
        [0, 0, 1, 1, 0, 1],
    ]
    assert doc["coincidence_matrix"]["C2"] == [
        [4, 3, 2, 0, 0, 0],
        [2, 3, 4, 0, 0, 0],
        [3, 3, 3, 0, 0, 0],
        [1, 1, 1, 2, 2, 2],
        [3, 3, 2, 0, 1, 0],
        [1, 1, 2, 2, 1, 2],
    ]
    assert [(c["modulus"], c["residue"]) for c in doc["cosets"]["b1"]["cosets"]] == [
        (9, 5), (27, 17), (27, 22), (81, 53), (81, 58), (81, 64), (81, 65)
    ]
    assert doc["substitutions"]["theta_tilde"] == "a1 -> a1 a2 a1\na2 -> a2 b1 b1\nb1 -> a1 a2 b1\n"


def test_console_script_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "kolakoski.cli", "generate", "--n", "6"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and res.stdout == "221121\n"
    res = subprocess.run([sys.executable, "-m", "kolakoski.cli", "generate", "--p", "1", "--q", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 2
