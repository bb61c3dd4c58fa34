import json
import math
import subprocess
import sys

import pytest

from cli_corpus import CORPUS, transcript
from dynzeta.cli import FLAG_REGISTRY, build_parser, run


def sub_help(path):
    parser = build_parser()
    node = parser
    for name in path:
        action = next(a for a in node._actions if a.__class__.__name__ == "_SubParsersAction")
        node = action.choices[name]
    return node.format_help()


@pytest.mark.parametrize("key", ["plancherel", "zeta", "det", "eta", "synth length", "synth operator", "verify"])
def test_help_lists_every_flag(key):
    build_parser()
    text = sub_help(key.split())
    flags = FLAG_REGISTRY[key]
    assert flags
    for flag in flags:
        assert flag in text, f"{flag} missing from help of {key}"


def test_every_subcommand_requires_d(capsys):
    for argv in (["plancherel"], ["det", "--model", "riemann", "--s", "1"], ["verify", "euler-char"]):
        assert run(argv) == 2
        err = json.loads(capsys.readouterr().err)
        assert "--d" in err["message"]


def test_plancherel_output(capsys):
    assert run(["plancherel", "--d", "3"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["coefficients"] == ["0", "0", "1"]
    assert obj["is_even"] is True


def test_plancherel_pads_to_degree(capsys):
    assert run(["plancherel", "--d", "5", "--sigma", "1,0"]) == 0
    assert len(json.loads(capsys.readouterr().out)["coefficients"]) == 5


def test_error_json_shape(capsys):
    assert run(["plancherel", "--d", "5", "--sigma", "0,1"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert set(err) == {"error", "message", "exit_code", "details"}
    assert err["exit_code"] == 2


def test_bad_complex_is_usage_error(capsys):
    assert run(["det", "--d", "3", "--model", "riemann", "--s", "1,2,3"]) == 2


def test_det_model_value(capsys):
    assert run(["det", "--d", "3", "--model", "riemann", "--s", "0"]) == 0
    det = json.loads(capsys.readouterr().out)["results"][0]["det"]
    assert det[0] == pytest.approx(math.sqrt(2 * math.pi), abs=1e-12)


def test_empty_spectrum_abscissa_null(tmp_path, capsys):
    path = tmp_path / "e.jsonl"
    assert run(["synth", "length", "--d", "3", "--seed", "0", "--count", "0", "--out", str(path)]) == 0
    assert run(["zeta", "ruelle", "--d", "3", "--in", str(path), "--s", "1"]) == 0
    res = json.loads(capsys.readouterr().out)["results"][0]
    assert res["log_value"] == [0.0, 0.0] and res["convergence_abscissa"] is None


def test_verify_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"d": 5, "sigma": ["1/2", "1/2"], "seed": 4}))
    assert run(["verify", "super-funceq", "--d", "5", "--config", str(cfg)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["provenance"]["seed"] == 4
    assert run(["verify", "super-funceq", "--d", "5", "--config", str(cfg), "--fault", "half_phase"]) == 1
    capsys.readouterr()
    assert run(["verify", "super-funceq", "--d", "3", "--config", str(cfg)]) == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert run(["plancherel", "--d", "3", "--format", "csv", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().splitlines() == ["power,coefficient", "0,0", "1,0", "2,1"]


@pytest.fixture(scope="session")
def corpus_runs(tmp_path_factory):
    # Different hash seeds, so set or dict ordering cannot leak into the output.
    return tuple(transcript(tmp_path_factory.mktemp(f"run{k}"), seed) for k, seed in ((1, "1"), (2, "2")))


def test_corpus_exit_codes(corpus_runs):
    outputs, _ = json.loads(corpus_runs[0])
    for (argv, expected), (code, _, err) in zip(CORPUS, outputs):
        assert code == expected, f"{argv}: exit {code}, stderr {err}"


def test_corpus_is_byte_identical(corpus_runs):
    assert corpus_runs[0] == corpus_runs[1]


def test_module_entry_point(tmp_path):
    argv = [sys.executable, "-m", "dynzeta", "plancherel", "--d", "5", "--sigma", "1/2,1/2"]
    first = subprocess.run(argv, capture_output=True, cwd=tmp_path)
    second = subprocess.run(argv, capture_output=True, cwd=tmp_path)
    assert first.returncode == 0 and first.stdout == second.stdout
    assert json.loads(first.stdout)["dim"] == 2
    bad = subprocess.run([sys.executable, "-m", "dynzeta", "plancherel"], capture_output=True, cwd=tmp_path)
    assert bad.returncode == 2 and json.loads(bad.stderr)["exit_code"] == 2
