import csv
import io
import json
import subprocess
import sys

import pytest

from hilbmod.cli import SUBCOMMANDS, main

SMALL = {
    "delta-bound": ["trials=3", "degree=4", "dim=4"],
    "dlog-bound": ["n_max=8", "size=8"],
    "z-profile": ["N=16"],
    "toeplitz-hankel": ["symbols=4", "N=16"],
    "xi-counterexample": ["M_grid=4096", "N_modes=256", "lo=16"],
    "model-space": ["zeros=0.3", "N=48", "trials=3"],
    "decompose": ["zeros=0", "N=48", "trials=2"],
    "car-check": ["n_max=3"],
    "pisier-growth": ["ladder=4:2:4", "samples=2"],
    "omega-witness": ["n_max=2", "blocks=4"],
    "sylvester": ["trials=3", "dim=3", "N=16"],
}


def invoke(capsys, *argv):
    code = main(["run", *argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def strip_wall_time(text):
    return [{k: v for k, v in r.items() if k != "wall_time"} for r in rows(text)]


def test_every_subcommand_has_a_small_run():
    assert set(SMALL) == set(SUBCOMMANDS)


@pytest.mark.parametrize("sub", sorted(SMALL))
def test_subcommand_passes_with_fixed_header(capsys, sub):
    code, out, _ = invoke(capsys, sub, *SMALL[sub])
    assert code == 0, out
    header = out.split("\n", 1)[0].split(",")
    assert header == SUBCOMMANDS[sub].columns + ["wall_time"]
    assert all(r["pass"] in ("true", "") for r in rows(out))


def test_car_check_example(capsys):
    code, out, _ = invoke(capsys, "car-check", "n_max=4")
    assert code == 0
    table = {r["check"]: r for r in rows(out)}
    for key in ("max_anticomm_gap", "max_mixed_gap", "norm_gap"):
        assert float(table[key]["value"]) <= 1e-12


def test_delta_bound_example(capsys):
    code, out, _ = invoke(capsys, "delta-bound", "degree=12", "trials=100", "seed=7")
    assert code == 0
    r = rows(out)
    assert len(r) == 100 and all(x["pass"] == "true" for x in r)


def test_model_space_jordan_block(capsys):
    code, out, _ = invoke(capsys, "model-space", "zeros=0,0", "r=1", "N=64")
    assert code == 0
    table = {r["check"]: r for r in rows(out)}
    assert table["dim_H"]["value"] == "2"
    assert table["S_theta_nilpotency_order"]["value"] == "2"


def test_determinism_apart_from_wall_time(capsys):
    args = ("delta-bound", "trials=5", "degree=6", "--seed", "11")
    _, a, _ = invoke(capsys, *args)
    _, b, _ = invoke(capsys, *args)
    assert strip_wall_time(a) == strip_wall_time(b)
    _, c, _ = invoke(capsys, "delta-bound", "trials=5", "degree=6", "--seed", "12")
    assert strip_wall_time(a) != strip_wall_time(c)


def test_failing_tolerance_gives_exit_1(capsys):
    code, out, _ = invoke(capsys, "delta-bound", "trials=5", "--tol", "0")
    assert code == 1
    assert any(r["pass"] == "false" for r in rows(out))


@pytest.mark.parametrize("argv", [
    ["delta-bound", "bogus=1"],
    ["delta-bound", "trials=-1"],
    ["delta-bound", "trials"],
    ["no-such-experiment"],
    ["car-check", "alpha=weird:1"],
    ["delta-bound", "--tol", "-1"],
    ["delta-bound", "--seed", "-3"],
    ["delta-bound", "--format", "xml"],
])
def test_config_errors_give_exit_2(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_missing_config_file_gives_exit_2(capsys, tmp_path):
    assert invoke(capsys, "delta-bound", "--config", str(tmp_path / "absent"))[0] == 2


def test_resource_bound_gives_exit_3(capsys):
    code, _, err = invoke(capsys, "pisier-growth", "ladder=64:10:4")
    assert code == 3 and "resource bound" in err


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small sweep\ntrials = 4\ndegree=5  # inline comment\nseed=3\n")
    code, out, _ = invoke(capsys, "delta-bound", "--config", str(cfg))
    assert code == 0 and len(rows(out)) == 4
    _, out2, _ = invoke(capsys, "delta-bound", "--config", str(cfg), "trials=2")
    assert len(rows(out2)) == 2
    # the seed flag wins over the seed pair
    _, a, _ = invoke(capsys, "delta-bound", "--config", str(cfg), "--seed", "3")
    _, b, _ = invoke(capsys, "delta-bound", "--config", str(cfg), "--seed", "4")
    assert strip_wall_time(a) == strip_wall_time(out)
    assert strip_wall_time(a) != strip_wall_time(b)


def test_out_file_is_lf_utf8_csv(capsys, tmp_path):
    path = tmp_path / "report.csv"
    code, stdout, _ = invoke(capsys, "car-check", "n_max=3", "--out", str(path))
    assert code == 0 and stdout == ""
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    assert raw.decode("utf-8").startswith("check,value,threshold,pass,wall_time\n")


def test_json_mirrors_columns(capsys):
    code, out, _ = invoke(capsys, "car-check", "n_max=3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    _, csv_out, _ = invoke(capsys, "car-check", "n_max=3")
    assert [list(d) for d in data] == [list(r) for r in rows(csv_out)]
    assert all(d["pass"] is True for d in data)


def test_help_lists_every_subcommand(capsys):
    assert main(["--help"]) == 0
    text = capsys.readouterr().out
    for sub in SUBCOMMANDS:
        assert sub in text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hilbmod", "run", "car-check", "n_max=2"],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0
    assert res.stdout.startswith("check,")
