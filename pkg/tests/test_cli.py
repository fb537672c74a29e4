import csv
import json

import numpy as np
import pytest

from mceb.cli import main
from mceb.scenarios import bimodal_prior

SMALL_CLASS = {"type": "gauss_mix", "tau": 0.2, "support": 3.0,
               "grid_points": 30}


def write_zscores(path, values):
    with open(path, "w") as fh:
        fh.write("z\n")
        fh.writelines(f"{v}\n" for v in values)


def read_output(path):
    meta = {}
    with open(path) as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]


@pytest.fixture(scope="module")
def zfile(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "z.csv"
    s = bimodal_prior().sample(6000, np.random.default_rng(0))
    write_zscores(path, s)
    return path


def analyze_config(tmp_path, **overrides):
    config = {"class": SMALL_CLASS,
              "target": {"target": "posterior_mean", "x": [0.0, 1.0]},
              "alpha": 0.1, "eta": 0.01, "seed": 3, "boundary": 6.0,
              "n_interior": 40, "bootstrap_reps": 100}
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


def test_analyze_smoke(tmp_path, zfile):
    cfg = analyze_config(tmp_path)
    out = tmp_path / "out.csv"
    assert main(["analyze", "--config", str(cfg), "--input", str(zfile),
                 "--output", str(out)]) == 0
    meta, header, rows = read_output(str(out))
    assert meta["generator"].startswith("mceb ")
    assert json.loads(meta["config"])["seed"] == 3
    assert header[0] == "x" and "estimate" in header
    assert len(rows) == 2
    est = float(rows[1][header.index("estimate")])
    lo = float(rows[1][header.index("lower")])
    hi = float(rows[1][header.index("upper")])
    assert lo <= est <= hi


def test_analyze_deterministic(tmp_path, zfile):
    cfg = analyze_config(tmp_path)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["analyze", "--config", str(cfg), "--input", str(zfile),
          "--output", str(out1)])
    main(["analyze", "--config", str(cfg), "--input", str(zfile),
          "--output", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_analyze_linear_target(tmp_path, zfile):
    cfg = analyze_config(tmp_path,
                         target={"target": "marginal_density", "x": [0.5]})
    out = tmp_path / "lin.csv"
    assert main(["analyze", "--config", str(cfg), "--input", str(zfile),
                 "--output", str(out)]) == 0
    _, header, rows = read_output(str(out))
    assert rows[0][header.index("target")] == "marginal_density"


def test_analyze_input_errors(tmp_path, zfile):
    cfg = analyze_config(tmp_path)
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong\n1.0\n")
    with pytest.raises(SystemExit, match="expected header 'z'"):
        main(["analyze", "--config", str(cfg), "--input", str(bad),
              "--output", str(tmp_path / "x.csv")])
    bad.write_text("z\n1.0\noops\n")
    with pytest.raises(SystemExit, match="bad.csv:3"):
        main(["analyze", "--config", str(cfg), "--input", str(bad),
              "--output", str(tmp_path / "x.csv")])
    few = tmp_path / "few.csv"
    write_zscores(few, np.zeros(5))
    with pytest.raises(SystemExit, match="too few samples"):
        main(["analyze", "--config", str(cfg), "--input", str(few),
              "--output", str(tmp_path / "x.csv")])


def test_simulate_smoke(tmp_path):
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--scenario", "bimodal", "--target",
                 "posterior_mean", "--m", "2000", "--reps", "2",
                 "--seed", "5", "--x", "0.0",
                 "--class-config", json.dumps(SMALL_CLASS),
                 "--bootstrap-reps", "100", "--n-interior", "40",
                 "--output", str(out)]) == 0
    meta, header, rows = read_output(str(out))
    assert header == ["x", "target", "truth", "coverage", "mean_width",
                      "rmse"]
    assert len(rows) == 1
    cov = float(rows[0][header.index("coverage")])
    assert 0.0 <= cov <= 1.0
    assert float(rows[0][header.index("mean_width")]) > 0.0


def test_modulus_diag_trace_and_hardest(tmp_path):
    cfg = tmp_path / "diag.json"
    cfg.write_text(json.dumps({"class": SMALL_CLASS, "n_interior": 40,
                               "oracle_scenario": "bimodal",
                               "c_m": 0.02, "m": 10000}))
    out = tmp_path / "trace.csv"
    assert main(["modulus-diag", "--config", str(cfg), "--target",
                 "posterior_mean", "--x", "1.0",
                 "--deltas", "0.01:0.2:6", "--output", str(out)]) == 0
    _, header, rows = read_output(str(out))
    assert header[:3] == ["delta", "omega", "omega_prime"]
    omegas = [float(r[1]) for r in rows]
    assert all(b >= a - 1e-7 for a, b in zip(omegas, omegas[1:]))
    # companion file: hardest prior densities integrate to ~1
    _, hheader, hrows = read_output(str(tmp_path / "trace_hardest.csv"))
    assert hheader == ["x", "g1", "gm1", "f_g1", "f_gm1"]
    arr = np.asarray(hrows, dtype=float)
    dx = arr[1, 0] - arr[0, 0]
    for col in (1, 2):
        assert abs(np.trapezoid(arr[:, col], dx=dx) - 1.0) < 1e-2
