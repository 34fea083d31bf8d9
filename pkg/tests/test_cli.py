import io
import json
import logging
import subprocess
import sys

import pytest

from quadzeta.arith import sieve_primes
from quadzeta.cache import cache_roundtrip, load_cached
from quadzeta.cli import main
from quadzeta.lfunc import L_direct


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def manifest(err):
    line = [l for l in err.splitlines() if l.startswith("manifest: ")][-1]
    return json.loads(line[len("manifest: "):])


@pytest.fixture(autouse=True)
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QUADZETA_CACHE_DIR", str(tmp_path / "cache"))


def test_constants():
    code, out, err = run("constants", "--P", "100000")
    assert code == 0
    data = json.loads(out)
    assert float(data["c21"]) == pytest.approx(0.440969247215, abs=1e-11)
    assert float(data["c5"]) == pytest.approx(0.000072388633, abs=1e-9)
    assert {"c5", "c6", "c20", "c21"} <= set(data)
    m = manifest(err)
    assert m["exit_code"] == 0 and m["tolerances"]["c6_prime_cutoff"] == 100000
    assert m["tool_version"] and "wall_time_s" in m and m["config"]["command"] == "constants"


def test_scan_min_csv():
    code, out, _ = run("scan-min", "--sigma", "0.5", "--x", "160")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "d,abs_L,sign_certain"
    assert len(lines) == 6
    assert sorted(int(l.split(",")[0]) for l in lines[1:]) == [11, 13, 15, 17, 19]
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(abs(L_direct(0.5, 8 * int(first[0])).value), rel=1e-11)


def test_scan_min_threads_byte_identical():
    a = run("scan-min", "--sigma", "0.75", "--x", "2000", "--out", "json", "--threads", "1")[1]
    b = run("scan-min", "--sigma", "0.75", "--x", "2000", "--out", "json", "--threads", "8")[1]
    assert a == b


def test_rand_euler_threads_byte_identical():
    args = ["rand-euler", "--sigma", "0.75", "--samples", "20000", "--seed", "5", "--b", "0.5,1,2"]
    a = run(*args, "--threads", "1")[1]
    b = run(*args, "--threads", "8")[1]
    assert a == b
    assert a.splitlines()[0] == "B,empirical,half_width,prediction"


def test_lvalue():
    code, out, _ = run("lvalue", "--sigma", "2", "--d", "-4")
    data = json.loads(out)
    assert code == 0
    assert data["value"] == pytest.approx(0.915965594177, abs=1e-11)
    assert {"d", "sigma", "value", "error", "method", "terms"} <= set(data)


def test_usage_errors():
    assert run()[0] == 1
    assert run("no-such-command")[0] == 1
    assert run("lvalue", "--sigma", "2")[0] == 1
    code, _, err = run("lvalue", "--sigma", "0.5", "--d", "9")
    assert code == 1 and "fundamental" in err
    assert manifest(err)["exit_code"] == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"sigma": 2, "d": 5}))
    code, out, _ = run("--config", str(cfg), "lvalue")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(L_direct(2, 5).value, rel=1e-11)
    code, out, _ = run("--config", str(cfg), "lvalue", "--d", "8")
    assert json.loads(out)["d"] == 8
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run("--config", str(cfg), "lvalue", "--sigma", "2", "--d", "5")[0] == 1


@pytest.mark.parametrize("argv", [
    ["identities", "--triples", "2", "--P", "10000"],
    ["moments", "--sigma", "0.75", "--x", "400", "--n", "20", "--l-override", "1.5"],
    ["sono-m", "--alpha1", "0.25", "--alpha2", "0.25", "--x", "2"],
    ["build-inert", "--degree", "2", "--inert", "3", "--sigma", "2", "--P", "5000"],
    ["build-split", "--k", "1", "--n", "1", "--sigma", "2", "--P", "5000"],
    ["neg-line", "--sigma-re", "-0.5", "--d", "5"],
    ["northcott", "--s", "-0.5", "--bound", "0.5"],
    ["density", "--sigma", "0.8", "--x", "200", "--b", "0.5,1"],
])
def test_all_commands_run(argv):
    code, out, err = run(*argv)
    assert code == 0, err
    assert out.strip()
    assert manifest(err)["exit_code"] == 0


def test_cache_roundtrip(tmp_path, caplog):
    d = str(tmp_path / "c")
    path = cache_roundtrip("primes", 100, d)
    assert load_cached("primes", 100, d) == sieve_primes(100).primes.tolist()
    assert set(load_cached("fd8", 160, d)) == {11, 13, 15, 17, 19}
    path.write_text(path.read_text().replace("97", "91"))
    with caplog.at_level(logging.WARNING):
        again = load_cached("primes", 100, d)
    assert "failed validation" in caplog.text
    assert again == sieve_primes(100).primes.tolist()


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "quadzeta", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "quadzeta" in r.stdout
