import json
import subprocess
import sys

import pytest

from spinconc.lab.cli import main, read_config, UsageError
from spinconc.lab.output import read_rows


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_csv_header_and_rows(capsys):
    code, out, err = run(["sweep", "--gamma", "0.5", "--hz", "0.5,1.5", "--N", "8"], capsys)
    assert code == 0
    lines = out.splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    keys = {ln[2:].split(":")[0] for ln in meta}
    assert {"version", "config_hash", "seed", "tolerances"} <= keys
    body = [ln for ln in lines if not ln.startswith("#")]
    assert body[0].startswith("model,gamma,hx")
    assert len(body) == 3
    assert "2 points" in err


def test_replay_is_byte_identical(tmp_path):
    paths = [tmp_path / f"r{i}.csv" for i in range(2)]
    for p in paths:
        assert main(["sweep", "--model", "uniaxial_field", "--hx=-0.2:0.2:0.2", "--hz", "0.5",
                     "--N", "6", "--seed", "9", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_config_file_and_cli_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nmodel = uniaxial_field\nhx=0.2\nhz=0.5\nN=6\nformat=jsonl\nseed=4\n")
    code, out, _ = run(["sweep", "--config", str(cfg), "--N", "8"], capsys)
    assert code == 0
    lines = out.splitlines()
    meta = json.loads(lines[0])["meta"]
    assert meta["seed"] == 4 and meta["config"]["model"] == "uniaxial_field"
    rows = [json.loads(ln) for ln in lines[1:]]
    assert [r["N"] for r in rows] == [8]


def test_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus=1\n")
    assert run(["sweep", "--config", str(cfg)], capsys)[0] == 2
    cfg.write_text("mode=fast\n")
    assert run(["sweep", "--config", str(cfg)], capsys)[0] == 2
    cfg.write_text("just a line\n")
    with pytest.raises(UsageError):
        read_config(cfg)
    assert run(["sweep", "--config", str(tmp_path / "missing.cfg")], capsys)[0] == 2


def test_usage_errors_exit_two(capsys):
    assert run([], capsys)[0] == 2
    assert run(["sweep", "--model", "nope"], capsys)[0] == 2
    assert run(["sweep", "--hz", "1:0:0.1"], capsys)[0] == 2
    assert run(["sweep", "--N", "1"], capsys)[0] == 2
    assert run(["scaling", "--hz", "0.1,0.2", "--gamma", "0"], capsys)[0] == 2
    assert run(["--version"], capsys)[0] == 0


def test_fuzz_exit_codes_and_records(tmp_path, capsys):
    out = tmp_path / "f.jsonl"
    code, _, err = run(["fuzz", "--N", "2:6", "--trials", "25", "--seed", "2", "--format", "jsonl",
                        "--out", str(out)], capsys)
    assert code == 0
    summary = json.loads(err.strip().splitlines()[-1])
    assert summary["failures"] == 0 and summary["trials"] == 25
    meta, rows = read_rows(out)
    assert meta["rng"] == "PCG64" and len(rows) == 25
    # an impossible tolerance turns every nonzero gap into a failure
    code, _, _ = run(["fuzz", "--N", "3", "--trials", "5", "--tol", "-1"], capsys)
    assert code == 1


def test_boson_verify(capsys):
    code, out, err = run(["boson-verify", "--x", "xc", "--y", "0.5,1", "--N", "20"], capsys)
    assert code == 0 and "0 failed" in err
    rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(rows) == 3
    hx = float(rows[1].split(",")[3])
    assert abs(hx) <= 1e-12


def test_extrapolate_and_scaling(capsys):
    code, _, err = run(["extrapolate", "--gamma", "0", "--hz", "1.5", "--N", "32,64,128,256"], capsys)
    assert code == 0 and "C_R: limit" in err
    code, _, _ = run(["extrapolate", "--gamma", "0", "--hz", "1.5", "--N", "8,12,16", "--tol", "1e-12"], capsys)
    assert code == 1
    code, out, err = run(["scaling", "--model", "uniaxial_field", "--hx", "0.2", "--hz", "0.5",
                          "--N", "32,64,128,256", "--expect-range", "0.9:1.1"], capsys)
    assert code == 0 and "exponent" in err
    code, _, _ = run(["scaling", "--model", "uniaxial_field", "--hx", "0.2", "--hz", "0.5",
                      "--N", "32,64,128,256", "--expect-range", "0.2:0.3"], capsys)
    assert code == 1


def test_surface_defaults(capsys):
    code, out, _ = run(["surface", "--hx=-0.1:0.1:0.1", "--hz", "0:2:1"], capsys)
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(body) == 1 + 9


def test_console_entry_point_and_worker_env(tmp_path):
    env_out = tmp_path / "w.csv"
    import os

    env = dict(os.environ, SPINCONC_WORKERS="2")
    res = subprocess.run(
        [sys.executable, "-m", "spinconc.lab.cli", "sweep", "--model", "uniaxial_field", "--hx", "0.1,0.2",
         "--hz", "0.5", "--N", "6", "--out", str(env_out)],
        env=env, capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    ref = tmp_path / "s.csv"
    assert main(["sweep", "--model", "uniaxial_field", "--hx", "0.1,0.2", "--hz", "0.5", "--N", "6",
                 "--out", str(ref)]) == 0
    assert env_out.read_bytes() == ref.read_bytes()
