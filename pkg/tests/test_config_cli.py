import json
import math
import os

import pytest

from meandim.cli import main
from meandim.config import ConfigError, build_sample, build_system, load_config


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload, indent=1))
    return str(path)


BASE = {
    "system": {"kind": "one_point"},
    "potential": {"kind": "constant", "params": {"value": 0.7}},
    "sample": {"exhaustive": True},
    "eps_list": [0.5, 0.25, 0.125],
    "n_range": [1, 2, 3],
}


def test_load_rejects_bad_json_with_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"system": {,}\n}')
    with pytest.raises(ConfigError, match="line"):
        load_config(str(path))


def test_load_rejects_missing_keys(tmp_path):
    with pytest.raises(ConfigError, match="eps_list"):
        load_config(_write(tmp_path, "c.json", {"system": {"kind": "one_point"}}))


def test_load_rejects_bad_eps(tmp_path):
    cfg = dict(BASE, eps_list=[0.5, 0.5, 0.25])
    with pytest.raises(ConfigError, match="decreasing"):
        load_config(_write(tmp_path, "c.json", cfg))


def test_unknown_system_kind(tmp_path):
    cfg = dict(BASE, system={"kind": "torus"})
    path = _write(tmp_path, "c.json", cfg)
    assert main(["estimate", path, "--out", str(tmp_path / "o")]) == 2


def test_build_sample_paths():
    system = build_system({"kind": "full_shift", "m": 2, "L": 4})
    pts = build_sample({"sample": {"exhaustive": True}}, system)
    assert len(pts) == 16
    pts2 = build_sample({"sample": {"count": 7, "seed": 3}}, system)
    assert len(pts2) == 7
    assert pts2 == build_sample({"sample": {"count": 7, "seed": 3}}, system)


def test_exhaustive_cap(tmp_path):
    system = build_system({"kind": "full_shift", "m": 2, "L": 20})
    with pytest.raises(ConfigError, match="too large"):
        build_sample({"sample": {"exhaustive": True}}, system)


def test_estimate_one_point_summary(tmp_path):
    path = _write(tmp_path, "c.json", BASE)
    out = str(tmp_path / "run")
    assert main(["estimate", path, "--out", out]) == 0
    summary = json.loads((tmp_path / "run" / "summary.json").read_text())
    assert summary["slope"] == pytest.approx(0.7, abs=1e-12)
    assert summary["upper_proxy"] == pytest.approx(0.7, abs=1e-12)
    csv_text = (tmp_path / "run" / "runs.csv").read_text()
    assert csv_text.startswith("# meandim runs.csv schema v1")
    assert "witness_hash" in csv_text.splitlines()[1]


def test_estimate_full_shift_first_letter(tmp_path):
    cfg = {
        "system": {"kind": "full_shift", "m": 2, "L": 8},
        "potential": {"kind": "first_coord", "params": {}},
        "sample": {"exhaustive": True},
        "eps_list": [2.0**-3, 2.0**-4, 2.0**-5],
        "n_range": [1, 2, 3],
    }
    path = _write(tmp_path, "c.json", cfg)
    out = str(tmp_path / "shift")
    assert main(["estimate", path, "--out", out]) == 0
    summary = json.loads((tmp_path / "shift" / "summary.json").read_text())
    # transfer oracle: ratio at 2^-k is log(1 + 2^k) / (k log 2)
    expected = [math.log(1 + 2.0**k) / (k * math.log(2)) for k in (3, 4, 5)]
    for got, want in zip(summary["ratios"], expected):
        assert got == pytest.approx(want, abs=1e-9)


def test_verify_finite_system_passes(tmp_path):
    cfg = {
        "system": {"kind": "finite_random", "size": 5, "seed": 19},
        "potential": {"kind": "table_random", "params": {"seed": 4}},
        "sample": {"exhaustive": True},
        "eps_list": [0.5, 0.35, 0.2],
        "n_range": [1, 2, 3],
        "verify": {"seed": 3, "draws": 8, "n": 2, "eps": 0.35},
    }
    path = _write(tmp_path, "c.json", cfg)
    out = str(tmp_path / "verify")
    assert main(["verify", path, "--out", out]) == 0
    report = json.loads((tmp_path / "verify" / "report.json").read_text())
    assert report["ok"] and report["failures"] == []


def test_verify_exit_code_3_on_failed_assertion(tmp_path, monkeypatch):
    import meandim.cli as cli_mod

    monkeypatch.setattr(
        cli_mod,
        "check_properties",
        lambda *a, **k: {"ok": False, "items": {}, "witness": []},
    )
    cfg = {
        "system": {"kind": "finite_random", "size": 4, "seed": 2},
        "potential": {"kind": "table_random", "params": {"seed": 1}},
        "sample": {"exhaustive": True},
        "eps_list": [0.5, 0.35, 0.2],
        "n_range": [1, 2, 3],
        "verify": {"seed": 0, "draws": 2},
    }
    path = _write(tmp_path, "c.json", cfg)
    assert main(["verify", path, "--out", str(tmp_path / "v3")]) == 3
    report = json.loads((tmp_path / "v3" / "report.json").read_text())
    assert not report["ok"] and report["failures"]


def test_variational_report_sandwich(tmp_path):
    cfg = {
        "system": {"kind": "finite_random", "size": 6, "seed": 23},
        "potential": {"kind": "table_random", "params": {"seed": 5}},
        "sample": {"exhaustive": True},
        "eps_list": [0.5, 0.35, 0.2],
        "n_range": [1, 2, 3],
        "dictionary": {
            "sources": [
                {"kind": "table_random", "params": {"seed": 6}},
                {"kind": "constant", "params": {"value": 0.4}},
            ],
            "tau_a": 0.05,
        },
    }
    path = _write(tmp_path, "c.json", cfg)
    out = str(tmp_path / "vari")
    assert main(["variational", path, "--out", out]) == 0
    report = json.loads((tmp_path / "vari" / "report.json").read_text())
    assert report["sandwich"]["singleton_matches_m_hat"]
    assert report["sandwich"]["value_le_m_hat"]
    assert report["duality_gap"] == 0.0
    assert len(report["dictionary_certificates"]) == 3
    assert report["tangent_margins"]
    growth = [row["value"] for row in report["dictionary_growth"]]
    assert all(a >= b - 1e-12 for a, b in zip(growth, growth[1:]))
    supp = [row["value"] for row in report["support_growth"]]
    assert all(a <= b + 1e-12 for a, b in zip(supp, supp[1:]))


def test_bowen_report_trace(tmp_path):
    cfg = {
        "system": {"kind": "one_point"},
        "potential": {"kind": "constant", "params": {"value": 2.0}},
        "sample": {"exhaustive": True},
        "eps_list": [0.5, 0.25, 0.125],
        "n_range": [1, 2, 3],
        "bowen": {"tol": 1e-11},
    }
    path = _write(tmp_path, "c.json", cfg)
    out = str(tmp_path / "root")
    assert main(["bowen", path, "--out", out]) == 0
    report = json.loads((tmp_path / "root" / "report.json").read_text())
    assert report["s0"] == 0.0
    assert report["consistency"]["ok"]


def test_determinism_byte_identical(tmp_path):
    cfg = {
        "system": {"kind": "full_shift", "m": 2, "L": 7},
        "potential": {"kind": "first_coord", "params": {}},
        "sample": {"count": 40, "seed": 11},
        "eps_list": [0.5, 0.25, 0.125],
        "n_range": [1, 2, 3],
    }
    path = _write(tmp_path, "c.json", cfg)
    outs = []
    for run in ("a", "b"):
        out = str(tmp_path / run)
        assert main(["estimate", path, "--out", out]) == 0
        outs.append(
            (
                (tmp_path / run / "runs.csv").read_bytes(),
                (tmp_path / run / "summary.json").read_bytes(),
            )
        )
    assert outs[0] == outs[1]
