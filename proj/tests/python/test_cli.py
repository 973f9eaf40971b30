import csv
import io
import json
import pathlib
import subprocess

import pytest

jsonschema = pytest.importorskip("jsonschema")

ROOT = pathlib.Path(__file__).resolve().parents[2]
CONFIGS = sorted((ROOT / "docs" / "configs").glob("*.json"))
SCHEMAS = {
    name: json.loads((ROOT / "docs" / "schema" / f"{name}.schema.json").read_text())
    for name in ("config", "table_report", "decompose_report", "verify_report")
}
REPORT_SCHEMA = {
    "evolve": "table_report",
    "entropy": "table_report",
    "decompose": "decompose_report",
    "verify": "verify_report",
}


def run(cli, *args):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)


def test_gallery_and_nmr_configs_are_published():
    models = {json.loads(p.read_text()).get("channel", {}).get("model") for p in CONFIGS}
    assert {"bit_flip", "phase_flip", "depolarizing", "amplitude_damping"} <= models
    assert any(json.loads(p.read_text()).get("generator", {}).get("model") == "nmr" for p in CONFIGS)


@pytest.mark.parametrize("config", CONFIGS, ids=lambda p: p.stem)
def test_configs_match_schema(config):
    jsonschema.validate(json.loads(config.read_text()), SCHEMAS["config"])


@pytest.mark.parametrize("command", sorted(REPORT_SCHEMA))
@pytest.mark.parametrize("config", CONFIGS, ids=lambda p: p.stem)
def test_json_reports_validate(cli, tmp_path, config, command):
    out = tmp_path / "report.json"
    proc = run(cli, command, "--config", config, "--out", out, "--format", "json")
    assert proc.returncode == 0, proc.stderr
    jsonschema.validate(json.loads(out.read_text()), SCHEMAS[REPORT_SCHEMA[command]])


@pytest.mark.parametrize("command", ["evolve", "entropy"])
@pytest.mark.parametrize("config", CONFIGS, ids=lambda p: p.stem)
def test_csv_tables(cli, tmp_path, config, command):
    out = tmp_path / "table.csv"
    proc = run(cli, command, "--config", config, "--out", out, "--format", "csv")
    assert proc.returncode == 0, proc.stderr
    rows = list(csv.reader(io.StringIO(out.read_text())))
    cfg = json.loads(config.read_text())
    first = "t" if "generator" in cfg else "step"
    d = cfg.get("system", {}).get("dimension", 2)
    if command == "evolve":
        expected = [first] + [f"x_{i}" for i in range(1, d * d)] + ["purity", "S_L"]
    else:
        expected = [first, "S_L_direct", "S_L_predicted", "S_vN", "abs_err"]
    assert rows[0] == expected
    assert len(rows) == 1 + cfg.get("time_grid", {}).get("count", 11)
    for row in rows[1:]:
        assert len(row) == len(expected)
        for cell in row:
            value = float(cell)
            # shortest round trip: reprinting the parsed value gives the same text
            if cell not in ("nan", "inf", "-inf"):
                assert float(repr(value)) == value


@pytest.mark.parametrize("command", sorted(REPORT_SCHEMA))
def test_output_is_independent_of_thread_count(cli, tmp_path, command):
    config = ROOT / "docs" / "configs" / "nmr.json"
    outputs = []
    for threads in (1, 3, 8):
        out = tmp_path / f"{threads}.out"
        proc = run(cli, command, "--config", config, "--out", out, "--threads", threads)
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_failed_verification_still_exits_zero(cli, tmp_path):
    out = tmp_path / "verify.json"
    proc = run(cli, "verify", "--config", ROOT / "docs" / "configs" / "amplitude_damping.json", "--out", out)
    assert proc.returncode == 0
    assert json.loads(out.read_text())["checks"]["C3"]["pass"] is False


def test_non_normal_generator_reports_error_objects(cli, tmp_path):
    out = tmp_path / "decompose.json"
    proc = run(cli, "decompose", "--config", ROOT / "docs" / "configs" / "custom_generator.json", "--out", out)
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["normal"] is False
    assert doc["canonical_form"]["error"]["type"] == "normality_violation"


def test_tol_flag_overrides_normality_tolerance(cli, tmp_path):
    config = ROOT / "docs" / "configs" / "custom_generator.json"
    out = tmp_path / "verify.json"
    assert run(cli, "verify", "--config", config, "--out", out, "--tol", "1e3").returncode == 0
    assert json.loads(out.read_text())["checks"]["normality"]["pass"] is True


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        {"system": {"dimension": 2}},
        {"generator": {"model": "isotropic", "gamma": 1}, "extra": 1},
        {"channel": {"model": "bit_flip", "p": 3}},
        {"generator": {"model": "isotropic", "gamma": 1}, "initial_state": {"bloch": [5, 0, 0]}},
    ],
)
def test_config_errors_exit_one(cli, tmp_path, doc):
    config = tmp_path / "bad.json"
    config.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    proc = run(cli, "evolve", "--config", config, "--out", tmp_path / "o.csv")
    assert proc.returncode == 1
    assert "config error" in proc.stderr


def test_usage_errors_exit_one(cli, tmp_path):
    config = ROOT / "docs" / "configs" / "nmr.json"
    assert run(cli, "evolve", "--config", tmp_path / "missing.json", "--out", "-").returncode == 1
    assert run(cli, "evolve", "--config", config).returncode == 1
    assert run(cli, "evolve", "--config", config, "--out", "-", "--format", "xml").returncode == 1
    assert run(cli, "decompose", "--config", config, "--out", "-", "--format", "csv").returncode == 1
    assert run(cli, "evolve", "--config", config, "--out", "-", "--tol", "-1").returncode == 1


def test_overflow_exits_two(cli, tmp_path):
    config = pathlib.Path(__file__).with_name("overflow_config.json")
    for command in ("evolve", "decompose"):
        proc = run(cli, command, "--config", config, "--out", tmp_path / "o")
        assert proc.returncode == 2
        assert "numerical failure" in proc.stderr
