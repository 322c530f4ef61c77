import json
import subprocess
import sys

from diagtrace.cli import main
from diagtrace.forge import build_chain


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    return code, capsys.readouterr().out


def test_chain_k2_human(capsys):
    code, out = run(capsys, "chain", "--k", "2")
    assert code == 0
    assert "alpha_empty = d1*d2*(d1^2 + 2*d1*d2 + d2^2)" in out
    assert "FAIL" not in out


def test_chain_json_is_stable(capsys):
    code, first = run(capsys, "chain", "--k", "2", "--format", "json")
    assert code == 0
    data = json.loads(first)
    assert data["status"] == "PASS" and data["mixed_weight"] == 4
    data.pop("build_seconds")
    _, second = run(capsys, "chain", "--k", "2", "--format", "json")
    again = json.loads(second)
    again.pop("build_seconds")
    assert again == data


def test_sampled_mode_is_reported(capsys):
    code, out = run(capsys, "chain", "--k", "2", "--sampled")
    assert code == 0 and "verification mode: sampled" in out


def test_cache_round_trip(tmp_path, capsys):
    code, out = run(capsys, "chain", "--k", "2", "--cache-dir", str(tmp_path))
    assert code == 0 and "loaded" not in out
    assert (tmp_path / "chain-k2-v1.json").exists()
    code, out = run(capsys, "chain", "--k", "2", "--cache-dir", str(tmp_path))
    assert code == 0 and "loaded chain" in out and "verification mode: symbolic" in out
    code, out = run(capsys, "chain", "--k", "2", "--cache-dir", str(tmp_path), "--trust-cache")
    assert code == 0 and "skipped" in out


def test_verify_good_and_broken(tmp_path, capsys):
    f = build_chain(2).pure
    good = tmp_path / "good.json"
    good.write_text(f.to_json())
    assert run(capsys, "verify", str(good))[0] == 0
    assert run(capsys, "verify", str(good), "--d", "2,3")[0] == 0
    data = json.loads(f.to_json())
    data["terms"][0]["coeff"] = data["terms"][0]["coeff"] + " + 1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out = run(capsys, "verify", str(bad))
    assert code == 1 and "FAIL" in out and "first non-zero term" in out
    mixed = tmp_path / "mixed.json"
    m = json.loads(build_chain(2).mixed.to_json())
    m["terms"][-1]["coeff"] = "2"
    mixed.write_text(json.dumps(m))
    code, out = run(capsys, "verify", str(mixed), "--d", "2,3")
    assert code == 1 and "slot" in out


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "chain")[0] == 3
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 3
    assert run(capsys, "hankel", "--k", "1", "--a", "0,1")[0] == 3
    assert run(capsys, "obstruction", "--d", "1,0")[0] == 3


def test_resource_guard_exit(capsys):
    assert run(capsys, "chain", "--k", "5")[0] == 2
    assert run(capsys, "chain", "--k", "3", "--term-budget", "100")[0] == 2


def test_hankel_and_obstruction(capsys):
    code, out = run(capsys, "hankel", "--k", "1", "--a", "0,1", "--b", "1,2")
    assert code == 0 and "PASS" in out
    code, out = run(capsys, "obstruction", "--d", "1,2,-3", "--chain")
    assert code == 0 and "zero subset {1, 2, 3}" in out and "alpha_empty(d) = 0" in out
    code, out = run(capsys, "obstruction", "--d", "2,3")
    assert code == 0 and "zero subset none" in out


def test_search_reduce_multilinear(capsys):
    code, out = run(capsys, "search", "--d", "2,3", "--max-degree", "4", "--report")
    assert code == 0 and "MATCH" in out
    assert run(capsys, "reduce", "--d", "2,3", "--n", "7")[0] == 0
    assert run(capsys, "reduce", "--d", "1,-1", "--n", "7")[0] == 1
    code, out = run(capsys, "multilinear", "--k", "1")
    assert code == 0 and "PASS" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "diagtrace", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
