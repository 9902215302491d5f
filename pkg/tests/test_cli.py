"""
Tests for the command line, configuration layering and result files
"""
import io
import json
import os
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from config import THREADS_ENV, ConfigManager
from main import run

MISSING_CONFIG = os.path.join(tempfile.gettempdir(), "digitdrift-missing-config.json")


def _run(*argv):
    """Exit code, stdout and stderr of one CLI invocation"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(["-c", MISSING_CONFIG, *argv])
    return code, out.getvalue(), err.getvalue()


def _with_env(key, value, fn):
    saved = os.environ.get(key)
    os.environ[key] = value
    try:
        return fn()
    finally:
        if saved is None:
            os.environ.pop(key, None)
        else:
            os.environ[key] = saved


def test_measure_command():
    code, out, _ = _run("measure", "--a", "3", "--window", "-4", "4")
    assert code == 0
    data = json.loads(out)
    assert data["values"]["2"] == "1/4"
    assert data["values"]["0"] == "5/16"
    assert data["values"]["4"] == "0"
    assert data["total_mass"] == "1"
    assert data["cusick_c"] == "11/16"


def test_measure_float_flag():
    code, out, _ = _run("measure", "--a", "3", "--window", "0", "2", "--float")
    assert code == 0
    data = json.loads(out)
    assert data["values"]["2"] == 0.25
    assert abs(data["variance"] - 3.0) < 1e-12


def test_variance_breakdown():
    code, out, _ = _run("variance", "--a", "3", "--breakdown")
    assert code == 0
    data = json.loads(out)
    assert data["total"] == "3"
    assert data["leading"] == "2"
    assert data["tail"] == "-1/4"
    assert data["boundary_sum"] == "3/2"


def test_moments_csv():
    code, out, _ = _run("moments", "--a", "1", "--max-order", "4")
    assert code == 0
    assert out == "k,m_k\n0,1\n1,0\n2,2\n3,-6\n4,38\n"


def test_cylinders_command():
    code, out, _ = _run("cylinders", "--a", "3", "--d", "0")
    assert code == 0
    data = json.loads(out)
    assert data["density"] == "5/16"
    assert data["consistent"] is True
    assert "001" in data["words"]


def test_charfn_command():
    code, out, _ = _run("charfn", "--a", "0")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "theta,re,im"
    assert len(lines) == 65
    assert lines[1] == "0,1,0"


def test_cusick_exhaustive():
    code, out, _ = _run("cusick", "--max-a", "2")
    assert code == 0
    data = json.loads(out)
    assert data["min_c"] == "3/4"
    assert data["argmin"] == 1


def test_usage_errors():
    code, _, err = _run("measure", "--bogus")
    assert code == 2
    assert "usage" in err
    assert _run("variance", "--a", "0")[0] == 2
    assert _run()[0] == 2
    assert _run("clt", "--n", "64", "--max-order", "13")[0] == 2
    assert _run("corr", "--n", "64", "--samples", "0")[0] == 2
    # an empty bit length is a domain error, not a failed seed
    assert _run("cdf", "--n", "0")[0] == 2
    assert _run("clt", "--n", "0")[0] == 2
    assert _run("corr", "--n", "0")[0] == 2


def test_clt_rows():
    code, out, _ = _run("clt", "--n", "64", "--seed", "7", "--max-order", "6")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "n,statistic,value,target,deviation,seed,sample"
    targets = [float(line.split(",")[3]) for line in lines[1:]]
    assert targets == [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0]


def test_out_writes_manifest():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "corr.csv")
        code, out, _ = _run("corr", "--n", "64", "--seed", "5", "--seeds", "2", "--out", path)
        assert code == 0
        assert out == ""
        with open(path, encoding="utf-8") as f:
            rows = f.read().strip().split("\n")
        assert len(rows) == 3
        with open(f"{path}.manifest.json", encoding="utf-8") as f:
            manifest = json.load(f)
        assert manifest["subcommand"] == "corr"
        assert manifest["seed"] == 5
        assert manifest["output_paths"] == [path, f"{path}.manifest.json"]
        assert manifest["metadata"]["seeds"] == [5, 6]
        assert manifest["tool_version"]


def test_manifest_records_effective_settings():
    with tempfile.TemporaryDirectory() as tmp:
        config_path = os.path.join(tmp, "digitdrift.json")
        with open(config_path, "w") as f:
            json.dump({"jet_order": 3, "p": "1/4", "samples": 2}, f)
        path = os.path.join(tmp, "m.csv")
        code, _, _ = _run("-c", config_path, "moments", "--a", "5", "--out", path)
        assert code == 0
        with open(path, encoding="utf-8") as f:
            assert len(f.read().strip().split("\n")) == 5
        with open(f"{path}.manifest.json", encoding="utf-8") as f:
            manifest = json.load(f)
        assert manifest["metadata"]["jet_order"] == 3
        assert manifest["settings"]["jet_order"] == 3
        assert manifest["settings"]["p"] == "1/4"
        assert manifest["settings"]["samples"] == 2
        assert manifest["parameters"]["max_order"] is None


def test_p_flag_on_cdf_and_cusick():
    with tempfile.TemporaryDirectory() as tmp:
        for argv in (("cdf", "--n", "64", "--grid", "-1", "1", "3"), ("cusick", "--n", "32")):
            path = os.path.join(tmp, f"{argv[0]}.csv")
            code, _, _ = _run(*argv, "--p", "1/4", "--seed", "3", "--out", path)
            assert code == 0, argv
            with open(f"{path}.manifest.json", encoding="utf-8") as f:
                manifest = json.load(f)
            assert manifest["metadata"]["config"]["p"] == "1/4"
            assert manifest["settings"]["p"] == "1/4"


def test_runs_are_reproducible():
    first = _run("cdf", "--n", "200", "--seed", "3", "--grid", "-2", "2", "5")
    second = _run("cdf", "--n", "200", "--seed", "3", "--grid", "-2", "2", "5")
    assert first[0] == 0
    assert first[1] == second[1]
    assert len(first[1].strip().split("\n")) == 7


def test_config_precedence():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "digitdrift.json")
        with open(path, "w") as f:
            json.dump({"threads": 3, "seed": 5, "p": "1/4"}, f)

        def load():
            return ConfigManager(path)

        config = load()
        assert config.seed == 5
        assert config.p == Fraction(1, 4)
        saved = os.environ.pop(THREADS_ENV, None)
        try:
            assert load().threads == 3
            config = load()
            config.apply_overrides(threads=9, seed=None)
            assert config.threads == 9
            assert config.seed == 5
            assert config.validate_config() == []
        finally:
            if saved is not None:
                os.environ[THREADS_ENV] = saved
        # a cap above the configured count changes nothing
        assert _with_env(THREADS_ENV, "7", load).threads == 3


def test_threads_env_caps_workers():
    config = _with_env(THREADS_ENV, "2", lambda: ConfigManager(MISSING_CONFIG))
    config.apply_overrides(threads=64)
    assert config.threads == 2
    config.apply_overrides(threads=1)
    assert config.threads == 1
    assert _with_env(THREADS_ENV, "0", lambda: ConfigManager(MISSING_CONFIG).validate_config())

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "m.csv")
        code, _, _ = _with_env(THREADS_ENV, "2",
                               lambda: _run("--threads", "64", "moments", "--a", "5", "--out", path))
        assert code == 0
        with open(f"{path}.manifest.json", encoding="utf-8") as f:
            assert json.load(f)["settings"]["threads"] == 2


def test_config_issues():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "bad.json")
        with open(path, "w") as f:
            json.dump({"p": "3/2", "samples": 0, "grid": [1, 0, 1], "colour": "blue"}, f)
        issues = ConfigManager(path).validate_config()
        assert any("Unknown key 'colour'" in issue for issue in issues)
        assert any(issue.startswith("p must lie") for issue in issues)
        assert any(issue.startswith("samples") for issue in issues)
        assert any("lo < hi" in issue for issue in issues)
        assert _with_env(THREADS_ENV, "many", lambda: ConfigManager(MISSING_CONFIG).validate_config())

        code, out, _ = _run("-c", path, "config", "--validate")
        assert code == 2
        assert json.loads(out)["valid"] is False
        assert _run("-c", path, "variance", "--a", "3")[0] == 2

        broken = os.path.join(tmp, "broken.json")
        with open(broken, "w") as f:
            f.write("{not json")
        assert _run("-c", broken, "variance", "--a", "3")[0] == 2


def main():
    """Run all tests"""
    print("cli tests")
    print("=" * 40)
    tests = [
        test_measure_command, test_measure_float_flag, test_variance_breakdown, test_moments_csv,
        test_cylinders_command, test_charfn_command, test_cusick_exhaustive, test_usage_errors,
        test_clt_rows, test_out_writes_manifest, test_manifest_records_effective_settings,
        test_p_flag_on_cdf_and_cusick, test_runs_are_reproducible,
        test_config_precedence, test_threads_env_caps_workers, test_config_issues,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"  ✓ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"  ✗ {test.__name__}: {e!r}")
    print(f"\n{len(tests) - failed}/{len(tests)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
