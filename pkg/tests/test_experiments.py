import csv
import json
from dataclasses import replace

import numpy as np
import pytest

from pulsealgebra.codec import IfcParams
from pulsealgebra.experiments import (
    CSV_COLUMNS,
    ExperimentConfig,
    Operand,
    preset,
    run_experiment,
    write_csv,
)
from pulsealgebra.metrics import SNR_CAP_DB


def test_operands():
    t = np.array([0.0, 1 / 48])
    assert Operand("sine", 2.0, 12.0)(t) == pytest.approx([0.0, 2.0])
    assert Operand("constant", 0.8)(t) == pytest.approx([0.8, 0.8])
    assert Operand("sine", 2.0, 12.0).period == pytest.approx(1 / 12)
    with pytest.raises(ValueError):
        Operand("square")


def test_config_validation():
    a = Operand("constant", 1.0)
    with pytest.raises(ValueError):
        ExperimentConfig("custom", a, a, duration=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig("custom", a, a, sweep="clock")


def test_sweep_points():
    cfg = preset("fig6")
    pts = cfg.points()
    assert len(pts) == 7
    assert [p.threshold for _, p in pts] == pytest.approx(np.logspace(-4, -1, 7))
    assert all(p.leak_factor == 40.0 for _, p in pts)


def test_config_json_round_trip(tmp_path):
    cfg = preset("fig5")
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.from_json(path) == cfg


def test_config_json_partial_override(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"experiment": "fig4", "duration": 0.05}))
    cfg = ExperimentConfig.from_json(path)
    assert cfg.duration == 0.05 and cfg.multiplier == Operand("constant", 0.8)


def test_identity_multiply_hits_cap():
    cfg = ExperimentConfig(
        "custom", Operand("constant", 0.6), Operand("identity"),
        params=IfcParams(0.001, 0.0, 0.0, None), duration=0.05,
    )
    res = run_experiment(cfg)
    assert res.records[0].snr_db == SNR_CAP_DB


def test_fig4_short(tmp_path):
    res = run_experiment(replace(preset("fig4"), duration=0.05))
    (rec,) = res.records
    assert rec.snr_db > 40
    assert res.reconstructed.samples.mean() == pytest.approx(0.76, rel=0.01)
    assert res.reported_snr_db == 74.82
    out = tmp_path / "r.csv"
    write_csv(res, out)
    rows = list(csv.reader(out.open()))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 2


def test_unreachable_threshold_is_noted():
    cfg = replace(preset("fig4"), params=IfcParams(0.05, 40.0, 0.0, 1e-6), duration=0.05)
    (rec,) = run_experiment(cfg).records
    assert rec.pulses_out == 0 and rec.note


def test_deterministic():
    cfg = replace(preset("fig7"), duration=0.1)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.records == b.records
