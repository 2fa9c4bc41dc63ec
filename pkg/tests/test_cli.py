"""The lawcheck command: selection, formats, determinism, replay."""

import json
import os
import subprocess
import sys

from lawcheck.cli import main


def run_cli(*argv, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "lawcheck.cli", *argv],
        capture_output=True, text=True, env=full_env,
    )


def load(path):
    with open(path) as fh:
        return json.load(fh)


def stripped(doc):
    doc = json.loads(json.dumps(doc))
    doc["config"].pop("generated_at")
    for e in doc["suites"]:
        e.pop("ms")
    return json.dumps(doc, sort_keys=True)


def test_list_suites(capsys):
    assert main(["--list-suites"]) == 0
    out = capsys.readouterr().out
    for sid in ("runstatet", "fastproduct", "thm27", "monad-laws/state"):
        assert sid in out


def test_unknown_suite_is_a_usage_error(capsys):
    assert main(["--suite", "nope"]) == 2
    assert "no suite matches" in capsys.readouterr().err


def test_json_run_single_suite(tmp_path):
    out = tmp_path / "r.json"
    code = main(["--suite", "statet-identity", "--quick",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    doc = load(out)
    assert set(doc) == {"config", "suites"}
    assert doc["config"]["selection"] == ["statet-identity"]
    assert all(e["outcome"] == "pass" for e in doc["suites"])
    assert all(e["anchor"] for e in doc["suites"])


def test_text_run_lists_every_law(capsys):
    assert main(["--suite", "fastproduct", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "fastproduct.correct" in out and "fastproduct.rec" in out
    assert out.strip().splitlines()[-1].startswith("total:")


def test_seed_resolution_order(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli("--suite", "statet-identity", "--quick", "--format", "json",
                "--out", str(out), env={"LAWCHECK_SEED": "9"})
    assert r.returncode == 0
    assert load(out)["config"]["seed"] == 9
    r = run_cli("--suite", "statet-identity", "--quick", "--format", "json",
                "--seed", "4", "--out", str(out), env={"LAWCHECK_SEED": "9"})
    assert r.returncode == 0
    assert load(out)["config"]["seed"] == 4


def test_identical_config_gives_identical_report(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["--suite", "algebraicity", "--seed", "7", "--quick",
            "--format", "json"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert stripped(load(a)) == stripped(load(b))


def test_thm19_example_covers_exceptt_get(tmp_path):
    out = tmp_path / "r.json"
    code = main(["--suite", "thm19", "--seed", "42", "--quick",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    ids = {e["id"] for e in load(out)["suites"]}
    assert "thm19.exceptT.get.natural" in ids
    assert "thm19.exceptT.get.algebraic" in ids


def test_replay_of_passing_report_is_trivial(tmp_path, capsys):
    out = tmp_path / "r.json"
    main(["--suite", "statet-identity", "--quick",
          "--format", "json", "--out", str(out)])
    assert main(["--replay", str(out)]) == 0
    assert "nothing to replay" in capsys.readouterr().out


def test_replay_of_malformed_file_is_a_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert main(["--replay", str(bad)]) == 2
    assert "cannot replay" in capsys.readouterr().err


def test_mutant_failure_replays_byte_identically(tmp_path):
    first = tmp_path / "first.json"
    code = main(["--mutant", "put-stateless", "--suite", "runstatet",
                 "--quick", "--format", "json", "--out", str(first)])
    assert code == 1
    doc1 = load(first)
    failed1 = {e["id"]: e for e in doc1["suites"] if e["outcome"] == "fail"}
    assert failed1

    second = tmp_path / "second.json"
    code = main(["--replay", str(first), "--format", "json",
                 "--out", str(second)])
    assert code == 1  # the failure must reproduce under the recorded config
    doc2 = load(second)
    assert set(doc2["replay"]["failed_laws"]) == set(failed1)
    for lid, entry in failed1.items():
        twin = next(e for e in doc2["suites"] if e["id"] == lid)
        assert twin["witness_match"] is True
        assert twin["witness"] == entry["witness"]


def test_replay_passes_once_the_definition_is_fixed(tmp_path):
    first = tmp_path / "first.json"
    main(["--mutant", "put-stateless", "--suite", "runstatet",
          "--quick", "--format", "json", "--out", str(first)])
    doc = load(first)
    doc["config"]["mutants"] = []
    fixed = tmp_path / "fixed.json"
    fixed.write_text(json.dumps(doc))
    assert main(["--replay", str(fixed)]) == 0
