import json

import pytest

from imverma import cli
from imverma.jsonio import dumps


def write_spec(tmp_path, data, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run(args):
    return cli.main(args)


def test_algebra_command_deterministic(tmp_path, capsys):
    spec = write_spec(tmp_path, {
        "schema": 1,
        "algebra": {"type": "A1", "box": 2},
    })
    assert run(["algebra", "--spec", spec]) == 0
    first = capsys.readouterr().out
    assert run(["algebra", "--spec", spec]) == 0
    second = capsys.readouterr().out
    assert first == second
    data = json.loads(first)
    assert data["root_count"] == 14  # 10 real + 4 imaginary


def test_algebra_rejects_bad_type(tmp_path):
    spec = write_spec(tmp_path, {"schema": 1, "algebra": {"type": "B2", "box": 1}})
    with pytest.raises(ValueError):
        run(["algebra", "--spec", spec])


def test_algebra_partition_violator_not_built_in(tmp_path, capsys):
    spec = write_spec(tmp_path, {
        "schema": 1,
        "algebra": {"type": "A1", "box": 3},
        "partition": {"kind": "phi", "phi": ["-", "+", "-"]},
    })
    assert run(["algebra", "--spec", spec]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["partition_report"]["verdict"] is True


def certify_spec(charge):
    return {
        "schema": 1,
        "algebra": {"type": "A1"},
        "parabolic": {"omega": []},
        "module": {"kind": "fock", "charge": charge,
                   "lambda": {"h": ["1/3"]}, "depth": 4},
        "box": {"depth": 4, "height": 2, "gen_window": 4, "abs_depth": 4},
        "check": {"depth": 1, "height": 1, "mode_bound": 2},
        "expect": "irreducible",
        "pbw_samples": 25,
    }


def test_certify_exit_codes(tmp_path, capsys):
    ok_spec = write_spec(tmp_path, certify_spec("1"), "ok.json")
    assert run(["certify", "--spec", ok_spec, "--seed", "7"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["singular"]["conclusive"]
    assert out["cyclicity"]["all_cyclic"]
    assert out["pbw_oracle"]["failed"] == 0

    bad_spec = write_spec(tmp_path, certify_spec("0"), "bad.json")
    assert run(["certify", "--spec", bad_spec]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["singular"]["total_nullity"] > 1


def test_certify_output_file_and_reproducibility(tmp_path):
    spec = write_spec(tmp_path, certify_spec("1"))
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    run(["certify", "--spec", spec, "--out", str(out1), "--seed", "3"])
    run(["certify", "--spec", spec, "--out", str(out2), "--seed", "3"])
    assert out1.read_text() == out2.read_text()


def test_wakimoto_command(tmp_path, capsys):
    spec = write_spec(tmp_path, {
        "schema": 1,
        "algebra": {"type": "A1"},
        "parabolic": {"omega": []},
        "module": {"kind": "fock", "charge": "1",
                   "lambda": {"h": ["1/3"]}, "depth": 2},
        "box": {"depth": 2, "height": 2, "gen_window": 2},
        "wakimoto": {"mode_bound": 1, "seed_degree": 2, "seed_window": 1,
                     "v_depth": 1, "dump_window": 1},
        "expect": "isomorphism",
    })
    assert run(["wakimoto", "--spec", spec]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["character_match"] is True
    assert data["match"]["isomorphism"] is True
    assert data["realization"]["pi(c)"] == "1"
    assert not data["homomorphism"]["violations"]


def test_twist_command(tmp_path, capsys):
    spec = write_spec(tmp_path, {
        "schema": 1,
        "algebra": {"type": "A2"},
        "parabolic": {"omega": [1]},
        "module": {"kind": "tensor", "charge": "1", "depth": 2,
                   "m_factor": {"kind": "levi0_verma", "charge": "1",
                                "lambda": {"h": ["1/3", "2/5"]},
                                "box": {"depth": 2, "height": 2,
                                        "gen_window": 2}},
                   "s_factor": {"kind": "fock", "charge": "1",
                                "pairs": "perp", "depth": 1}},
        "box": {"depth": 1, "height": 1, "gen_window": 1},
        "twist": {"root": [[1, 0], 0], "n_max": 2, "sample_height": 1,
                  "mode_bound": 1},
    })
    assert run(["twist", "--spec", spec]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["report"]["ok"] is True
    assert data["report"]["character_equal"] is True
    assert data["report"]["roundtrip_failures"] == []


def test_twist_trivial_sample_set(tmp_path, capsys):
    spec = write_spec(tmp_path, {
        "schema": 1,
        "algebra": {"type": "A2"},
        "parabolic": {"omega": [1]},
        "module": {"kind": "trivial", "charge": "1",
                   "lambda": {"h": ["1/3", "2/5"]}},
        "box": {"depth": 1, "height": 1, "gen_window": 1},
        "twist": {"root": [[1, 0], 0], "n_max": 0, "sample_height": 0,
                  "mode_bound": 0},
    })
    assert run(["twist", "--spec", spec]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["report"]["samples"] == 0


def test_schema_enforced(tmp_path):
    spec = write_spec(tmp_path, {"schema": 2, "algebra": {"type": "A1"}})
    with pytest.raises(ValueError):
        run(["algebra", "--spec", spec])
