"""Command-line behavior: determinism, exit codes, selection, CSV."""

import json

import reesfiber.cli as cli


def run(argv):
    return cli.main(argv)


def test_gen_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(["gen", "--d", "3", "--n", "5", "--seed", "42", "-o", str(a)]) == 0
    assert run(["gen", "--d", "3", "--n", "5", "--seed", "42", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["format"] == 1
    assert doc["char"] == 32003
    assert len(doc["phi"]) == 4


def test_gen_rejects_even_n(capsys):
    assert run(["gen", "--d", "3", "--n", "4"]) == 2
    assert "odd" in capsys.readouterr().err


def test_verify_fixture_passes(tmp_path, capsys):
    inst = tmp_path / "i.json"
    rep = tmp_path / "r.json"
    run(["gen", "--d", "3", "--n", "5", "--seed", "42", "-o", str(inst)])
    code = run(["verify", str(inst), "-o", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["all_pass"] is True
    assert len(doc["checks"]) == 10
    out = capsys.readouterr().out
    assert "multiplicity" in out and "pass" in out


def test_verify_check_selection(tmp_path):
    inst = tmp_path / "i.json"
    rep = tmp_path / "r.json"
    run(["gen", "--d", "3", "--n", "5", "--seed", "1", "-o", str(inst)])
    code = run(["verify", str(inst), "--checks", "multiplicity", "-o", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert [c["name"] for c in doc["checks"]] == ["multiplicity"]


def test_verify_corrupted_instance(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": 1, "char": 32003, "d": 3, "n": 5, "phi": [[]]}')
    assert run(["verify", str(bad)]) == 2
    assert "invalid instance" in capsys.readouterr().err
    missing = tmp_path / "nope.json"
    assert run(["verify", str(missing)]) == 2


def test_verify_unknown_check(tmp_path, capsys):
    inst = tmp_path / "i.json"
    run(["gen", "--d", "3", "--n", "5", "--seed", "1", "-o", str(inst)])
    assert run(["verify", str(inst), "--checks", "bogus"]) == 2


def test_sweep_empty_grid(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["sweep", "--count", "0", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines == [
        "d,n,seed,check,status,seconds,multiplicity,expected_multiplicity,note"
    ]


def test_sweep_single_pair(tmp_path):
    out = tmp_path / "s.csv"
    code = run(
        [
            "sweep",
            "--d",
            "3",
            "--n",
            "5",
            "--seed",
            "0",
            "--count",
            "2",
            "--checks",
            "gd,multiplicity",
            "-o",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 2
    rows = [line.split(",") for line in lines[1:]]
    mult_rows = [r for r in rows if r[3] == "multiplicity"]
    assert all(r[6] == "4" and r[7] == "4" for r in mult_rows)
    assert all(r[4] == "pass" for r in rows)
