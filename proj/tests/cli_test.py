#!/usr/bin/env python3
"""End-to-end checks of the repcal command-line tool."""

import json
import pathlib
import subprocess
import sys
import tempfile

CLI = sys.argv[1]
CONFIGS = pathlib.Path(sys.argv[2])

failures = 0


def run(*args, expect=0):
    global failures
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        print(f"FAIL: {' '.join(args)} -> exit {proc.returncode}, "
              f"expected {expect}\n{proc.stderr}")
        failures += 1
    return proc


def result_lines(proc):
    return {
        line.split()[1]: line.split()[2:]
        for line in proc.stdout.splitlines()
        if line.startswith("RESULT ")
    }


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)

    # simulate: deterministic, byte-identical reruns, |gamma| = 1.
    cfg = tmp / "scenario_cfg.json"
    cfg.write_text(json.dumps({"m_a": 4, "m_b": 3, "gain_db": 10.0,
                               "noise_std": 0.0, "seed": 1}))
    p1 = run("simulate", "--config", str(cfg), "--out", str(tmp / "a_"))
    p2 = run("simulate", "--config", str(cfg), "--out", str(tmp / "b_"))
    if (tmp / "a_scenario.json").read_bytes() != \
            (tmp / "b_scenario.json").read_bytes():
        print("FAIL: simulate rerun not byte-identical")
        failures += 1
    gamma = [float(x) for x in result_lines(p1)["gamma_true"]]
    if abs((gamma[0] ** 2 + gamma[1] ** 2) ** 0.5 - 1.0) > 1e-12:
        print("FAIL: |gamma_true| != 1 for equal 10 dB gains")
        failures += 1

    # invalid config -> exit 2 naming the field
    bad = tmp / "bad.json"
    bad.write_text(json.dumps({"m_a": 0}))
    proc = run("simulate", "--config", str(bad), "--out", str(tmp / "x_"),
               expect=2)
    if "m_a" not in proc.stderr:
        print("FAIL: config error does not name the offending field")
        failures += 1

    # calibrate on noise-free data: tiny error, residual ~ 0
    for est in ("basic", "alt", "ingenuous", "precal"):
        proc = run("calibrate", "--config", str(tmp / "a_measurements.json"),
                   "--estimator", est, "--scenario",
                   str(tmp / "a_scenario.json"),
                   "--out", str(tmp / f"est_{est}.json"))
        res = result_lines(proc)
        if float(res["gamma_error"][0]) > 1e-6:
            print(f"FAIL: {est} gamma_error too large on noise-free data")
            failures += 1

    # alt estimate JSON carries a non-increasing objective trace
    proc = subprocess.run(
        [CLI, "--verbose", "calibrate", "--config",
         str(tmp / "a_measurements.json"), "--estimator", "alt",
         "--scenario", str(tmp / "a_scenario.json"),
         "--out", str(tmp / "est_alt_v.json")],
        capture_output=True, text=True)
    trace = json.loads((tmp / "est_alt_v.json").read_text())["objective_trace"]
    if any(b > a + 1e-12 for a, b in zip(trace, trace[1:])):
        print("FAIL: objective trace increases")
        failures += 1

    # degenerate input for the ingenuous estimator -> exit 3
    meas = json.loads((tmp / "a_measurements.json").read_text())
    meas["x_ab1"] = [[[-c[0], -c[1]] for c in row] for row in meas["x_ab0"]]
    degen = tmp / "degen.json"
    degen.write_text(json.dumps(meas))
    run("calibrate", "--config", str(degen), "--estimator", "ingenuous",
        expect=3)

    # sweep: regenerates a CSV from the shipped config
    sweep_cfg = tmp / "sweep.json"
    sweep_cfg.write_text(json.dumps({
        "snr_db_grid": [10.0, 20.0], "trials": 25, "master_seed": 3,
        "estimators": ["uncalibrated", "basic"],
    }))
    run("sweep", "--config", str(sweep_cfg), "--out", str(tmp / "sweep.csv"))
    csv = (tmp / "sweep.csv").read_text().splitlines()
    if csv[0] != "snr_db,estimator,rmse,trials,failures,seed" or len(csv) != 5:
        print("FAIL: sweep CSV malformed")
        failures += 1

    # shipped paper-style sweep config parses and runs (reduced externally)
    if not (CONFIGS / "paper_sweep.json").exists():
        print("FAIL: configs/paper_sweep.json missing")
        failures += 1

    # multi: N=4 noise-free, all errors tiny; N=3 rejected naming orders
    multi_cfg = tmp / "multi.json"
    multi_cfg.write_text(json.dumps({"n_repeaters": 4, "noise_std": 0.0,
                                     "seed": 2}))
    proc = run("multi", "--config", str(multi_cfg),
               "--out", str(tmp / "multi.json.out"))
    res = result_lines(proc)
    for n in range(1, 5):
        if float(res[f"gamma_error_{n}"][0]) > 1e-6:
            print(f"FAIL: multi gamma_error_{n} too large")
            failures += 1
    transcript = json.loads((tmp / "multi.json.out").read_text())
    if len(transcript["result"]["gamma_hats"]) != 4:
        print("FAIL: multi transcript incomplete")
        failures += 1

    bad_n = tmp / "multi3.json"
    bad_n.write_text(json.dumps({"n_repeaters": 3}))
    proc = run("multi", "--config", str(bad_n), expect=2)
    if "power of two" not in proc.stderr:
        print("FAIL: unsupported order message does not name supported orders")
        failures += 1

if failures:
    print(f"{failures} CLI checks failed")
    sys.exit(1)
print("all CLI checks passed")
