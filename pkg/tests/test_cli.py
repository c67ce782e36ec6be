import json

import pytest

from cocenter import cli
from cocenter.cli import JobConfig, main, run
from cocenter.conjugacy import UnstableBall


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_classes_a2(capsys):
    code, out = _run(capsys, "classes", "--preset", "A2")
    assert code == 0
    data = json.loads(out)
    assert len(data["classes"]) == 3
    assert data["config"]["seed"] == 0


def test_classes_sl2_separates_translations(capsys):
    code, out = _run(capsys, "classes", "--preset", "SL2", "--ball", "6")
    assert code == 0
    newtons = [tuple(c["invariant"]["newton"]) for c in json.loads(out)["classes"] if c["closed"]]
    assert len(set(newtons)) >= 3


def test_output_is_deterministic(capsys):
    first = _run(capsys, "classes", "--preset", "SL2", "--ball", "6", "--csv")
    second = _run(capsys, "classes", "--preset", "SL2", "--ball", "6", "--csv")
    assert first == second


def test_minlen_examples(capsys):
    code, out = _run(capsys, "minlen", "s1 s2 s1", "--preset", "A2")
    steps = json.loads(out)["steps"]
    assert code == 0 and len(steps) == 1 and steps[0]["element"] == "s2"
    code, out = _run(capsys, "minlen", "e", "--preset", "A2")
    assert code == 0 and json.loads(out)["steps"] == []
    code, out = _run(capsys, "minlen", "--all", "--preset", "B3")
    assert code == 0 and json.loads(out)["failures"] == []


def test_cocenter_examples(capsys):
    _, out = _run(capsys, "cocenter", "T[s1]+T[s2]", "--preset", "A2")
    terms = json.loads(out)["cocenter"]
    assert [(t["class"], t["coefficient"]["text"]) for t in terms] == [("O1[s1]", "2")]
    _, out = _run(capsys, "cocenter", "T[s1 s2 s1]", "--preset", "A2")
    assert len(json.loads(out)["cocenter"]) == 2


def test_chartable_reports_degenerate_case(capsys):
    code, out = _run(capsys, "chartable", "--preset", "A2", "--param", "q=1")
    data = json.loads(out)
    assert code == 0 and data["invertible"] and data["determinant"] == -6
    _, out = _run(capsys, "chartable", "--preset", "A1", "--field", "F2", "--param", "q=1")
    data = json.loads(out)
    assert not data["square"] and not data["invertible"]


def test_ranktable_sl2(capsys):
    code, out = _run(capsys, "ranktable", "--preset", "SL2")
    assert code == 0
    assert json.loads(out)["values"] == [[2, 2], [0, 0]]


@pytest.mark.parametrize("suite,preset", [("gp-finite", "B2"), ("confluence", "A2"), ("param-bijection", "SL2")])
def test_verify_suites_pass(capsys, suite, preset):
    code, out = _run(capsys, "verify", suite, "--preset", preset)
    assert code == 0 and json.loads(out)["pass"]


def test_config_errors_exit_2(capsys, tmp_path):
    assert main(["classes", "--preset", "E8"]) == 2
    assert main(["verify", "nope", "--preset", "A2"]) == 2
    assert main(["classes"]) == 2
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"ball": "x", "preset": "SL2"}))
    assert main(["classes", "--config", str(bad)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unstable_ball_exit_3(monkeypatch):
    def boom(cfg):
        raise UnstableBall("count changed")

    monkeypatch.setattr(cli, "cmd_classes", boom)
    assert main(["classes", "--preset", "SL2"]) == 3


def test_config_file_and_out(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"preset": "A2", "seed": 3}))
    out = tmp_path / "out.json"
    assert main(["classes", "--config", str(cfg), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["seed"] == 3


def test_job_config_validation():
    with pytest.raises(cli.ConfigError):
        JobConfig("classes", ball=-1)
    text, code = run(JobConfig("classes", preset="A1"))
    assert code == 0 and json.loads(text)["classes"]
