"""Shipped-fixture smoke tests: the weekly sample drives the forecast and
grid-search pipelines end to end, and the degenerate fixture pins the
decomposition against a classical SSA reference plus a golden JSON schema."""

from __future__ import annotations

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from ivssa import read_csv, select_params_oos

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
WEEKLY = os.path.join(FIXTURES, "sample_weekly.csv")
DEGENERATE = os.path.join(FIXTURES, "degenerate.csv")
REFERENCE = os.path.join(FIXTURES, "degenerate_reference.json")
GOLDEN = os.path.join(FIXTURES, "golden_decompose.json")


def run_cli(*args: str, cwd: str | None = None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "ivssa", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def json_paths(obj, prefix: str = "") -> set[str]:
    """Key paths with list indices collapsed and leaf types recorded."""
    if isinstance(obj, dict):
        if not obj:
            return {prefix + "{}"}
        out: set[str] = set()
        for k, v in obj.items():
            out |= json_paths(v, f"{prefix}.{k}")
        return out
    if isinstance(obj, list):
        if not obj:
            return {prefix + "[]"}
        out = set()
        for v in obj:
            out |= json_paths(v, prefix + "[]")
        return out
    return {f"{prefix}:{type(obj).__name__}"}


def assert_json_close(a, b, rel: float = 1e-8) -> None:
    if isinstance(a, dict):
        assert isinstance(b, dict) and a.keys() == b.keys()
        for k in a:
            assert_json_close(a[k], b[k], rel)
    elif isinstance(a, list):
        assert isinstance(b, list) and len(a) == len(b)
        for x, y in zip(a, b):
            assert_json_close(x, y, rel)
    elif a is None or b is None:
        assert a is None and b is None
    elif isinstance(a, float) or isinstance(b, float):
        assert math.isclose(float(a), float(b), rel_tol=rel, abs_tol=1e-10)
    else:
        assert a == b


class TestWeeklySample:
    def test_loads_and_is_valid(self):
        series = read_csv(WEEKLY)
        assert len(series) == 1
        y = series[0]
        assert len(y) == 249
        assert y.labels[0] == "w001" and y.labels[-1] == "w249"
        assert np.all(y.lo < y.hi)
        assert np.all(y.lo > 0)

    def test_forecast_horizon_12(self, tmp_path):
        out = tmp_path / "fc.json"
        res = run_cli(
            "forecast", "--input", WEEKLY, "--horizon", "12", "--out", str(out)
        )
        assert res.returncode == 0, res.stderr
        doc = json.loads(out.read_text())
        assert doc["params"]["horizon"] == 12
        lo = np.array(doc["forecast"]["lo"])
        hi = np.array(doc["forecast"]["hi"])
        assert lo.shape == (12,) and hi.shape == (12,)
        assert np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))
        assert np.all(lo <= hi)
        with open(tmp_path / "fc.forecast.csv") as fh:
            rows = fh.read().splitlines()
        assert rows[0] == "t,lo,hi"
        assert len(rows) == 13
        assert [int(r.split(",")[0]) for r in rows[1:]] == list(range(250, 262))

    def test_expanding_window_grid_search_shape(self):
        y = read_csv(WEEKLY)[0]
        res = select_params_oos(
            y, l_grid=(26, 52), m_grid=(1, 2, 3), w0=104, p=12, stride=26
        )
        assert res.window in (26, 52)
        assert res.m in (1, 2, 3)
        assert res.n_windows == 6
        assert len(res.objective) == 6
        assert math.isfinite(res.objective[(res.window, res.m)])


@pytest.fixture(scope="module")
def cli_doc(tmp_path_factory):
    out = tmp_path_factory.mktemp("deg") / "dec.json"
    res = run_cli(
        "decompose",
        "--input",
        DEGENERATE,
        "--window",
        "24",
        "--grouping",
        "fixed:4",
        "--out",
        str(out),
    )
    assert res.returncode == 0, res.stderr
    return json.loads(out.read_text())


@pytest.fixture(scope="module")
def reference():
    with open(REFERENCE) as fh:
        return json.load(fh)


class TestDegenerateReference:
    def test_eigenvalues_match_classical(self, cli_doc, reference):
        assert cli_doc["d"] == reference["m"]
        got = np.array(cli_doc["eigenvalues"][: cli_doc["d"]])
        want = np.array(reference["eigenvalues"])
        assert np.allclose(got, want, rtol=1e-8)

    def test_trendline_matches_classical(self, cli_doc, reference):
        rec = cli_doc["series"][0]
        lo = np.array(rec["trendline"]["lo"])
        hi = np.array(rec["trendline"]["hi"])
        want = np.array(reference["trendline"])
        assert np.array_equal(lo, hi)
        assert np.allclose(lo, want, rtol=1e-8, atol=1e-8)

    def test_leading_component_matches_classical(self, cli_doc, reference):
        comp = cli_doc["series"][0]["components"][0]
        assert comp["index"] == 1
        want = np.array(reference["component_1"])
        assert np.allclose(np.array(comp["lo"]), want, rtol=1e-8, atol=1e-8)
        assert np.allclose(np.array(comp["hi"]), want, rtol=1e-8, atol=1e-8)


class TestGoldenDecomposeJson:
    def fresh_run(self, out_path: str) -> None:
        res = run_cli(
            "decompose",
            "--input",
            "degenerate.csv",
            "--window",
            "24",
            "--grouping",
            "fixed:4",
            "--out",
            out_path,
            cwd=FIXTURES,
        )
        assert res.returncode == 0, res.stderr

    def test_schema_is_stable(self, tmp_path):
        out = tmp_path / "fresh.json"
        self.fresh_run(str(out))
        with open(GOLDEN) as fh:
            golden = json.load(fh)
        fresh = json.loads(out.read_text())
        assert json_paths(fresh) == json_paths(golden)
        assert_json_close(fresh, golden)

    def test_reruns_are_byte_identical(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        self.fresh_run(str(a))
        self.fresh_run(str(b))
        assert a.read_bytes() == b.read_bytes()


class TestFixtureRegeneration:
    def test_script_reproduces_shipped_files(self, tmp_path):
        script = os.path.join(
            os.path.dirname(__file__), "..", "scripts", "make_fixtures.py"
        )
        res = subprocess.run(
            [sys.executable, script, "--out", str(tmp_path)],
            capture_output=True,
            text=True,
        )
        assert res.returncode == 0, res.stderr
        for name in ("sample_weekly.csv", "degenerate.csv"):
            with open(os.path.join(FIXTURES, name), "rb") as fh:
                shipped = fh.read()
            assert (tmp_path / name).read_bytes() == shipped
        for name in ("degenerate_reference.json", "golden_decompose.json"):
            with open(os.path.join(FIXTURES, name)) as fh:
                shipped_doc = json.load(fh)
            fresh_doc = json.loads((tmp_path / name).read_text())
            assert json_paths(fresh_doc) == json_paths(shipped_doc)
            assert_json_close(fresh_doc, shipped_doc, rel=1e-12)
