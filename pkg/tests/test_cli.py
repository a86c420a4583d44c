import json

import pytest

from src.cli import EXIT_ERROR, EXIT_NO, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestDecide:
    def test_example2_exists(self, capsys, fixtures_dir):
        code, out = run(capsys, "decide", str(fixtures_dir / "example2.json"))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["exists"] is True
        assert data["algorithm"] == "subset_dp"
        assert sorted(data["permutation"]) == [0, 1, 2]
        assert data["queries"]["total"] > 0

    def test_example1_has_none(self, capsys, fixtures_dir):
        code, out = run(capsys, "decide", str(fixtures_dir / "example1.json"))
        assert code == EXIT_NO
        assert json.loads(out)["exists"] is False

    def test_plus_z_on_two_part(self, capsys, fixtures_dir):
        code, out = run(capsys, "decide", str(fixtures_dir / "two_part_n3.json"),
                        "--plus-z", "1/12")
        data = json.loads(out)
        assert code == EXIT_NO
        assert data["z"] == "1/12"
        assert data["mode"] == "plus_z"

    def test_cross_check_agrees(self, capsys, fixtures_dir):
        code, out = run(capsys, "decide", str(fixtures_dir / "example2.json"), "--cross-check")
        assert code == EXIT_OK
        assert json.loads(out)["cross_check"] == {"agrees": True}

    def test_hungry_equal_needs_hungry_agents(self, capsys, fixtures_dir):
        code, _ = run(capsys, "decide", str(fixtures_dir / "example1.json"), "--hungry-equal")
        assert code == EXIT_ERROR

    def test_hungry_equal_on_uniform(self, capsys, fixtures_dir):
        code, out = run(capsys, "decide", str(fixtures_dir / "uniform_n4.json"),
                        "--hungry-equal")
        data = json.loads(out)
        assert code == EXIT_NO
        assert data["algorithm"] == "hungry_equal"
        assert data["queries"]["marks"] == 12

    def test_output_is_deterministic(self, capsys, fixtures_dir):
        _, first = run(capsys, "decide", str(fixtures_dir / "example2.json"))
        _, second = run(capsys, "decide", str(fixtures_dir / "example2.json"))
        assert first == second


class TestSolve:
    def test_example2(self, capsys, fixtures_dir):
        code, out = run(capsys, "solve", str(fixtures_dir / "example2.json"))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["report"]["satisfied"] is True
        assert len(data["allocation"]["cuts"]) == 4
        assert len(data["allocation"]["values"]) == 3

    def test_uniform_has_none(self, capsys, fixtures_dir):
        code, out = run(capsys, "solve", str(fixtures_dir / "uniform_n4.json"))
        data = json.loads(out)
        assert code == EXIT_NO
        assert "allocation" not in data

    def test_proportional_quarters(self, capsys, fixtures_dir):
        code, out = run(capsys, "solve", str(fixtures_dir / "uniform_n4.json"), "--proportional")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["allocation"]["cuts"] == ["0/1", "1/4", "1/2", "3/4", "1/1"]

    def test_writes_to_out(self, capsys, fixtures_dir, tmp_path):
        target = tmp_path / "solution.json"
        code, out = run(capsys, "solve", str(fixtures_dir / "example2.json"),
                        "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text())["decision"]["exists"] is True


class TestGen:
    def test_example(self, capsys):
        code, out = run(capsys, "gen", "--family", "example", "--k", "2")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["family"] == "example"
        assert len(data["agents"]) == 3

    def test_interleaved(self, capsys):
        code, out = run(capsys, "gen", "--family", "interleaved", "--n", "3")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["params"]["M"] == "72/1"
        assert all(len(a["segments"]) == 5 for a in data["agents"])

    def test_two_part(self, capsys):
        code, out = run(capsys, "gen", "--family", "two_part", "--n", "3")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["params"]["M"] == "8/1"
        assert data["params"]["z"] == "1/12"

    def test_older_family_names(self, capsys):
        code, out = run(capsys, "gen", "--family", "thm5", "--n", "3")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["family"] == "interleaved"
        assert data["params"]["M"] == "72/1"
        code, out = run(capsys, "gen", "--family", "thm11", "--n", "3", "--z", "1/12")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["family"] == "two_part"
        assert data["params"]["M"] == "8/1"
        code, out = run(capsys, "gen", "--family", "thm3", "--n", "3")
        assert code == EXIT_OK
        assert json.loads(out)["family"] == "generic"

    def test_generic_keeps_the_given_M(self, capsys):
        code, out = run(capsys, "gen", "--family", "generic", "--n", "3", "--M", "100")
        assert code == EXIT_OK
        assert json.loads(out)["params"]["M"] == "100/1"

    @pytest.mark.parametrize("argv", [
        ["--family", "interleaved", "--n", "2"],
        ["--family", "two_part", "--n", "3", "--z", "1/6"],
        ["--family", "generic", "--n", "3", "--agent", "0", "--subset", "9"],
        ["--family", "interleaved", "--n", "3", "--agent", "1"],
        ["--family", "two_part", "--n", "3", "--subset", "0"],
        ["--family", "generic", "--n", "3", "--M", "8"],
    ])
    def test_bad_params(self, capsys, argv):
        code, _ = run(capsys, "gen", *argv)
        assert code == EXIT_ERROR


class TestVerify:
    def test_example2_allocation(self, capsys, fixtures_dir):
        code, out = run(capsys, "verify", str(fixtures_dir / "example2.json"),
                        str(fixtures_dir / "example2_allocation.json"))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["values"] == ["2/3", "10/27", "11/27"]

    def test_quarters_are_not_strong(self, capsys, fixtures_dir):
        args = [str(fixtures_dir / "uniform_n4.json"),
                str(fixtures_dir / "uniform_n4_quarters.json")]
        assert run(capsys, "verify", *args, "--strong")[0] == EXIT_NO
        assert run(capsys, "verify", *args, "--proportional")[0] == EXIT_OK

    def test_bad_cuts(self, capsys, fixtures_dir, tmp_path):
        allocation = tmp_path / "bad.json"
        allocation.write_text(json.dumps({"cuts": [0, "3/4", "1/2", 1], "order": [0, 1, 2]}))
        code, out = run(capsys, "verify", str(fixtures_dir / "example2.json"), str(allocation))
        assert code == EXIT_ERROR
        assert json.loads(out)["connected"] is False


class TestBounds:
    def test_uniform(self, capsys, fixtures_dir):
        code, out = run(capsys, "bounds", str(fixtures_dir / "uniform_n4.json"))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["lower_bound"] == "6/1"
        assert data["budgets"] == {"hungry_equal": 12, "subset_dp": 32}

    def test_measure(self, capsys, fixtures_dir):
        _, out = run(capsys, "bounds", str(fixtures_dir / "uniform_n4.json"), "--measure")
        assert json.loads(out)["measured"] == {"subset_dp": 32, "hungry_equal": 12}

    def test_csv(self, capsys, fixtures_dir):
        _, out = run(capsys, "bounds", str(fixtures_dir / "uniform_n4.json"), "--csv")
        header, row = out.splitlines()
        assert header.startswith("n,lower_bound,")
        assert row == "4,6/1,12,32,,"

    def test_not_hungry(self, capsys, fixtures_dir):
        _, out = run(capsys, "bounds", str(fixtures_dir / "example1.json"))
        assert json.loads(out)["budgets"]["hungry_equal"] is None

    def test_generic_family(self, capsys, tmp_path):
        instance = tmp_path / "generic.json"
        assert run(capsys, "gen", "--family", "generic", "--n", "4",
                   "--out", str(instance))[0] == EXIT_OK
        _, out = run(capsys, "bounds", str(instance))
        assert json.loads(out)["lower_bound"] == "14/1"


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "decide", str(tmp_path / "absent.json"))[0] == EXIT_ERROR

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert run(capsys, "decide", str(path))[0] == EXIT_ERROR

    def test_invalid_utf8(self, capsys, tmp_path):
        path = tmp_path / "binary.json"
        path.write_bytes(b'{"agents": "\xff\xfe"}')
        assert run(capsys, "decide", str(path))[0] == EXIT_ERROR

    def test_float_values_are_rejected(self, capsys, tmp_path):
        path = tmp_path / "floats.json"
        path.write_text(json.dumps({"agents": [{"segments": [{"width": 1, "value": 0.5}]}]}))
        assert run(capsys, "decide", str(path))[0] == EXIT_ERROR

    def test_unknown_argument(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["decide", "--frobnicate"])
        assert excinfo.value.code == EXIT_ERROR


def test_gen_solve_verify_pipeline(capsys, tmp_path):
    instance = tmp_path / "instance.json"
    solution = tmp_path / "solution.json"
    allocation = tmp_path / "allocation.json"
    assert run(capsys, "gen", "--family", "generic", "--n", "3", "--variant", "perturbed",
               "--out", str(instance))[0] == EXIT_OK
    assert run(capsys, "solve", str(instance), "--out", str(solution))[0] == EXIT_OK
    allocation.write_text(json.dumps(json.loads(solution.read_text())["allocation"]))
    code, out = run(capsys, "verify", str(instance), str(allocation))
    assert code == EXIT_OK
    assert json.loads(out)["satisfied"] is True
