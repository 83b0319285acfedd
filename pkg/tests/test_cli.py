import json
import math
import shutil
import subprocess
import sys

import jsonschema
import pytest

from oscibath import cli, load_schema
from oscibath._schemas import SCHEMA_NAMES


@pytest.fixture(autouse=True)
def no_config(monkeypatch):
    monkeypatch.delenv(cli.CONFIG_ENV, raising=False)


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_are_valid():
    for name in SCHEMA_NAMES:
        jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_modes_json(capsys):
    code, out, _ = run(capsys, "modes", "--n", "4", "--coupling", "1")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, load_schema("spectrum"))
    assert data["nondegenerate"] == pytest.approx([3.3027756, -0.3027756], abs=1e-7)
    assert data["degenerate"] == {"value": -1.0, "multiplicity": 2}


def test_modes_zero_coupling_flagged(capsys):
    code, out, _ = run(capsys, "modes", "--n", "2", "--coupling", "0")
    data = json.loads(out)
    assert code == 0 and data["all_degenerate"] and data["nondegenerate"] == [0.0, 0.0]


def test_modes_scaling(capsys):
    _, out, _ = run(capsys, "modes", "--n", "10", "--coupling", "2")
    assert json.loads(out)["nondegenerate"] == pytest.approx([9 + math.sqrt(85), 9 - math.sqrt(85)], abs=1e-12)


@pytest.mark.parametrize("fmt", ["csv", "human"])
def test_modes_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "modes", "--n", "5", "--format", fmt)
    assert code == 0 and out


def test_modes_bad_n(capsys):
    code, _, err = run(capsys, "modes", "--n", "1")
    assert code == 2 and "N=2" in err


def test_bad_arguments_exit_2(capsys):
    assert run(capsys, "modes")[0] == 2
    assert run(capsys, "kernel", "sho", "--t", "abc")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_table1_default(capsys):
    code, out, _ = run(capsys, "table1")
    rows = json.loads(out)
    jsonschema.validate(rows, load_schema("table1"))
    assert code == 0 and len(rows) == 9 and all(r["pass"] for r in rows)


def test_table1_scaled(capsys):
    code, out, _ = run(capsys, "table1", "--coupling", "3.7", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 10


def test_table1_perturbation_hook(capsys):
    code, _, err = run(capsys, "table1", "--perturb", "1e-6")
    assert code == 1 and "N=4" in err


def test_kernel_sho(capsys):
    code, out, _ = run(capsys, "kernel", "sho", "--m", "1", "--omega", "1", "--t", "0.5", "--x", "1", "--x0", "0")
    data = json.loads(out)
    jsonschema.validate(data, load_schema("amplitude"))
    assert code == 0 and math.isfinite(data["magnitude"])


def test_kernel_caustic_exit_3(capsys):
    code, _, err = run(capsys, "kernel", "sho", "--omega", "1", "--t", "3.14159265358979")
    assert code == 3 and "caustic" in err and "3.14159" in err


def test_kernel_inverted_exit_4(capsys):
    code, _, err = run(capsys, "kernel", "pair", "--n", "4", "--coupling", "2", "--t", "1")
    assert code == 4 and "0.57735" in err


def test_kernel_full_decoupled(capsys):
    _, full, _ = run(capsys, "kernel", "full", "--n", "4", "--coupling", "0", "--coords", "0,0,0,0", "--t", "1")
    _, sho, _ = run(capsys, "kernel", "sho", "--t", "1")
    z_full = complex(json.loads(full)["re"], json.loads(full)["im"])
    z_sho = complex(json.loads(sho)["re"], json.loads(sho)["im"])
    assert z_full == pytest.approx(z_sho ** 4, rel=1e-14)


def test_kernel_full_wrong_coords(capsys):
    assert run(capsys, "kernel", "full", "--n", "5", "--coords", "0,0")[0] == 2


def test_kernel_sweep_csv(capsys):
    code, out, _ = run(capsys, "kernel", "sho", "--x", "0.5", "--sweep", "0.1:1.0:4")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,re,im,magnitude,phase" and len(lines) == 5
    # full double precision
    assert len(lines[1].split(",")[1].lstrip("-").replace(".", "").lstrip("0")) >= 15


def test_kernel_sweep_through_caustic(capsys):
    assert run(capsys, "kernel", "sho", "--sweep", "3.0:3.2831853071795862:2", "--omega", "1")[0] in (0, 3)
    assert run(capsys, "kernel", "sho", "--sweep", "bad")[0] == 2


def test_sweep_det_csv(capsys):
    code, out, _ = run(capsys, "sweep", "det", "--steps", "100,200,400")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "steps,value,target,abs_error"
    errs = [float(line.split(",")[3]) for line in lines[1:]]
    assert errs[0] > errs[1] > errs[2]


def test_sweep_complex_quantity(capsys):
    code, out, _ = run(capsys, "sweep", "sliced", "--steps", "50,100")
    assert code == 0 and out.startswith("steps,value_re,value_im,target_re,target_im,abs_error")


def test_verify_spectrum_report(capsys):
    code, out, _ = run(capsys, "verify", "spectrum")
    reports = json.loads(out)
    jsonschema.validate(reports, load_schema("reports"))
    assert code == 0
    assert [r["check_name"] for r in reports[:9]] == [f"table1_N{n}" for n in range(2, 11)]
    assert all("runtime_ms" not in r for r in reports)


def test_verify_deterministic_bytes(capsys):
    first = run(capsys, "verify", "kernels", "--seed", "3")
    second = run(capsys, "verify", "kernels", "--seed", "3")
    assert first == second and first[0] == 0


def test_verify_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "spectrum", "--timing", "--format", "csv")
    assert out.splitlines()[0].endswith("runtime_ms")


def test_verify_failure_exit_1_with_partial_reports(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"table1": 1e-30}}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    code, out, _ = run(capsys, "verify", "spectrum")
    reports = json.loads(out)
    assert code == 1 and len(reports) == 13
    assert any(not r["pass"] for r in reports) and any(r["pass"] for r in reports)


def test_config_strict_keys(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"hbar": 1.0, "colour": "blue"}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    code, _, err = run(capsys, "modes", "--n", "3")
    assert code == 2 and "colour" in err


def test_config_unknown_tolerance(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"nope": 1.0}}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    assert run(capsys, "modes", "--n", "3")[0] == 2


def test_config_sets_format_and_validates(capsys, tmp_path, monkeypatch):
    data = {"hbar": 1.0, "format": "human", "seed": 4, "tolerances": {"table1": 1e-9}}
    jsonschema.validate(data, load_schema("config"))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(data))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    code, out, _ = run(capsys, "modes", "--n", "3")
    assert code == 0 and out.startswith("N = 3")


def test_config_unreadable(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CONFIG_ENV, str(tmp_path / "missing.json"))
    assert run(capsys, "modes", "--n", "3")[0] == 2


def test_console_script_installed():
    exe = shutil.which("oscibath")
    cmd = [exe] if exe else [sys.executable, "-m", "oscibath.cli"]
    proc = subprocess.run(cmd + ["modes", "--n", "3", "--format", "human"], capture_output=True, text=True)
    assert proc.returncode == 0 and "lambda+" in proc.stdout
