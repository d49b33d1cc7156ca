import json
from pathlib import Path

import numpy as np
import pytest

from orliczdist.cli import (EXIT_BADCONFIG, EXIT_FAIL, EXIT_INCONCLUSIVE,
                            EXIT_OK, config_hash, main)

DISTORT_CFG = {"A": {"family": "power", "p": 4.0},
               "phi": {"family": "power", "alpha": 1.0, "n": 2}, "n": 2}


def write_cfg(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    assert lines[0].startswith("# config_hash=")
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return lines[0], header, rows


def test_distort_power_case(tmp_path):
    cfg = write_cfg(tmp_path, DISTORT_CFG)
    rc = main(["distort", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_OK
    hash_line, header, rows = read_csv(tmp_path / "distorted_gauge.csv")
    assert header == ["r", "psi"]
    r = np.array([float(a) for a, _ in rows])
    psi = np.array([float(b) for _, b in rows])
    small = r < 1e-3
    slope = np.polyfit(np.log(r[small]), np.log(psi[small]), 1)[0]
    assert abs(slope - 4.0 / 3.0) < 0.02
    summary = json.loads((tmp_path / "distort_summary.json").read_text())
    assert summary["regime"] == "vanishing"
    meta = json.loads((tmp_path / "distorted_gauge.csv.meta.json").read_text())
    assert hash_line.endswith(meta["config_hash"])


def test_distort_missing_key_is_bad_config(tmp_path):
    cfg = write_cfg(tmp_path, {"A": {"family": "power", "p": 4.0}})
    rc = main(["distort", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_BADCONFIG


def test_examples_table(tmp_path):
    rc = main(["examples", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    _, header, rows = read_csv(tmp_path / "examples.csv")
    assert [r[0] for r in rows] == ["superdim", "critical", "expgrowth",
                                    "stable"]
    spreads = [float(r[2]) for r in rows]
    assert max(spreads) < 0.5


def test_netmeasure_cube_json(tmp_path):
    cfg = write_cfg(tmp_path, {
        "cubes": [{"level": 2, "coords": [0, 0]},
                  {"level": 2, "coords": [3, 3]}],
        "phi": {"family": "power", "alpha": 1.0, "n": 2},
        "sigma": 1.0})
    rc = main(["netmeasure", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_OK
    summary = json.loads((tmp_path / "net_summary.json").read_text())
    assert summary["value"] > 0
    _, header, rows = read_csv(tmp_path / "net_cover.csv")
    assert header == ["level", "coords", "diameter"]
    assert summary["cover_size"] == len(rows)


def test_netmeasure_points_csv(tmp_path):
    pts = np.array([[0.1, 0.2], [0.8, 0.9], [0.11, 0.21]])
    pcsv = tmp_path / "pts.csv"
    np.savetxt(pcsv, pts, delimiter=",")
    cfg = write_cfg(tmp_path, {
        "points_csv": str(pcsv), "snap_level": 4,
        "phi": {"family": "power", "alpha": 1.0, "n": 2}})
    rc = main(["netmeasure", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_OK


def test_netmeasure_without_input_is_bad_config(tmp_path):
    cfg = write_cfg(tmp_path, {"phi": {"family": "power", "alpha": 1.0,
                                       "n": 2}})
    rc = main(["netmeasure", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_BADCONFIG


def test_fractal_byte_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg = write_cfg(tmp_path, {"pairs": 2000, "resamples": 2})
    assert main(["fractal", "--config", cfg, "--out", str(out1),
                 "--seed", "5"]) == EXIT_OK
    assert main(["fractal", "--config", cfg, "--out", str(out2),
                 "--seed", "5"]) == EXIT_OK
    for name in ("bump_norms.csv", "energy_levels.csv",
                 "image_cover_sums.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_fractal_bad_delta(tmp_path):
    cfg = write_cfg(tmp_path, {"delta": 0.2})
    rc = main(["fractal", "--config", cfg, "--out", str(tmp_path)])
    assert rc == EXIT_BADCONFIG


def test_verify_passes():
    assert main(["verify", "--seed", "3"]) == EXIT_OK


def test_config_hash_stable():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_csv_float_format(tmp_path):
    cfg = write_cfg(tmp_path, DISTORT_CFG)
    main(["distort", "--config", cfg, "--out", str(tmp_path)])
    text = (tmp_path / "distorted_gauge.csv").read_text()
    assert "\r" not in text
    # 17 significant digits round-trip doubles exactly
    first = text.splitlines()[2].split(",")[0]
    assert float(first) == float(repr(float(first)))
