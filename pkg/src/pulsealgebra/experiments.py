"""
Multiplication experiments: encode two operands, multiply in the pulse
domain, reconstruct, and score against the analytic product.

Four presets are provided (``fig4`` .. ``fig7``): a constant product, a
time-stamping clock sweep, a threshold sweep, and a product of two 12 Hz
sinusoids.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .algebra import Emission, integrate, product_profile, rate_profile
from .codec import (
    IfcParams,
    SampledSignal,
    UnreachableThresholdError,
    encode,
    quantize_times,
    reconstruct,
    reference_period,
)
from .metrics import snr_db
from .pulses import PulseTrain, ReferenceTrain, expand

__all__ = [
    "Operand",
    "ExperimentConfig",
    "PointRecord",
    "ExperimentResult",
    "ExperimentError",
    "PRESETS",
    "REPORTED_SNR_DB",
    "preset",
    "run_experiment",
    "write_csv",
    "write_svg",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("swept_value", "snr_db", "pulses_out", "max_abs_error", "zc_error", "other_error")

#: Reported SNR values for the single-point experiments.
REPORTED_SNR_DB = {"fig4": 74.82, "fig7": 41.12}

# half-width of the zero-crossing window, as a fraction of the operand period
ZC_FRACTION = 0.05


class ExperimentError(RuntimeError):
    def __init__(self, stage: str, point, detail: str):
        self.stage = stage
        self.point = point
        super().__init__(f"{stage} failed at point {point!r}: {detail}")


@dataclass(frozen=True)
class Operand:
    """
    Analog operand description.

    ``kind`` is ``"constant"`` (value = amplitude), ``"sine"``
    (amplitude * sin(2 pi frequency t + phase)) or ``"identity"`` (the
    reference train itself; only meaningful as a multiplier).
    """

    kind: str = "constant"
    amplitude: float = 1.0
    frequency: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "sine", "identity"):
            raise ValueError(f"unknown operand kind {self.kind!r}")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "sine":
            return self.amplitude * np.sin(2 * np.pi * self.frequency * t + self.phase)
        if self.kind == "identity":
            return np.ones_like(t)
        return np.full_like(t, self.amplitude)

    @property
    def period(self) -> Optional[float]:
        return 1.0 / self.frequency if self.kind == "sine" and self.frequency > 0 else None


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    multiplicand: Operand
    multiplier: Operand
    params: IfcParams = IfcParams(0.001, 40.0, 0.0, 1e-6)
    duration: float = 0.2
    sample_rate: float = 1e5
    sweep: Optional[str] = None
    sweep_values: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if self.sweep not in (None, "clock", "threshold"):
            raise ValueError(f"unknown sweep axis {self.sweep!r}")
        if self.sweep is not None and not self.sweep_values:
            raise ValueError("sweep needs at least one value")
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))

    def points(self) -> list[tuple[Optional[float], IfcParams]]:
        if self.sweep is None:
            return [(None, self.params)]
        key = "clock_period" if self.sweep == "clock" else "threshold"
        return [(v, replace(self.params, **{key: v})) for v in self.sweep_values]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sweep_values"] = list(self.sweep_values)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        base = preset(d["experiment"]) if d.get("experiment") in PRESETS else None
        kw = base.to_dict() if base else {}
        kw.update(d)
        kw["multiplicand"] = Operand(**kw["multiplicand"])
        kw["multiplier"] = Operand(**kw["multiplier"])
        kw["params"] = IfcParams(**kw["params"])
        kw["sweep_values"] = tuple(kw.get("sweep_values") or ())
        return cls(**kw)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class PointRecord:
    swept_value: Optional[float]
    snr_db: float
    pulses_out: int
    max_abs_error: float
    zc_error: float
    other_error: float
    note: str = ""

    def row(self) -> list:
        return [self.swept_value, self.snr_db, self.pulses_out, self.max_abs_error, self.zc_error, self.other_error]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[PointRecord]
    emissions: list[Optional[Emission]] = field(default_factory=list)
    desired: Optional[SampledSignal] = None
    reconstructed: Optional[SampledSignal] = None

    @property
    def reported_snr_db(self) -> Optional[float]:
        return REPORTED_SNR_DB.get(self.config.experiment)

    @property
    def snr(self) -> np.ndarray:
        return np.array([r.snr_db for r in self.records])


def _fig4() -> ExperimentConfig:
    return ExperimentConfig("fig4", Operand("constant", 0.95), Operand("constant", 0.8))


PRESETS = {
    "fig4": _fig4,
    "fig5": lambda: replace(_fig4(), experiment="fig5", sweep="clock",
                            sweep_values=tuple(np.logspace(-7, -3, 9))),
    "fig6": lambda: replace(_fig4(), experiment="fig6", sweep="threshold",
                            sweep_values=tuple(np.logspace(-4, -1, 7))),
    "fig7": lambda: ExperimentConfig(
        "fig7", Operand("sine", 2.0, 12.0), Operand("sine", 3.0, 12.0), duration=0.5
    ),
}


def preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(PRESETS)}") from None


def _zero_crossing_mask(t: np.ndarray, operands: Sequence[Operand]) -> np.ndarray:
    mask = np.zeros(t.size, dtype=bool)
    for op in operands:
        if op.period is None:
            continue
        x = op(t)
        idx = np.nonzero(np.signbit(x[1:]) != np.signbit(x[:-1]))[0]
        crossings = t[idx] - x[idx] * (t[idx + 1] - t[idx]) / (x[idx + 1] - x[idx])
        # exact zeros (e.g. sin at t=0) also count
        crossings = np.concatenate((crossings, t[x == 0]))
        half = ZC_FRACTION * op.period
        for c in crossings:
            mask |= np.abs(t - c) <= half
    return mask


def _train_for(op: Operand, params: IfcParams, cfg: ExperimentConfig) -> PulseTrain:
    if op.kind == "identity":
        R = reference_period(params)
        return expand(ReferenceTrain(R, int(cfg.duration / R) + 1))
    sig = SampledSignal.from_function(op, cfg.sample_rate, cfg.duration)
    return encode(sig, params)


def _run_point(cfg: ExperimentConfig, value, params: IfcParams):
    stage = "encode"
    note = ""
    try:
        a = _train_for(cfg.multiplicand, params, cfg)
        b = _train_for(cfg.multiplier, params, cfg)
        stage = "reference"
        try:
            R = reference_period(params)
        except UnreachableThresholdError as exc:
            R = None
            note = f"no reference train: {exc}"
        stage = "multiply"
        emission = None
        if R is None or not len(a) or not len(b):
            note = note or "an operand produced no pulses"
            out = PulseTrain.empty()
        else:
            prof = product_profile(rate_profile(a, cfg.duration), rate_profile(b, cfg.duration), R)
            emission = integrate(prof)
            out = emission.train
            if params.clock_period is not None and len(out):
                out = quantize_times(out, params.clock_period)
        stage = "reconstruct"
        rec = reconstruct(out, params, cfg.sample_rate, cfg.duration, start_time=0.0)
        if cfg.multiplier.kind == "identity":
            desired = reconstruct(a, params, cfg.sample_rate, cfg.duration, start_time=0.0)
        else:
            t = rec.times
            desired = SampledSignal(cfg.multiplicand(t) * cfg.multiplier(t), cfg.sample_rate)
        stage = "score"
        err = np.abs(rec.samples - desired.samples)
        zc = _zero_crossing_mask(rec.times, (cfg.multiplicand, cfg.multiplier))
        zc_err = float(err[zc].mean()) if zc.any() else math.nan
        other = float(err[~zc].mean()) if (~zc).any() else math.nan
        record = PointRecord(
            value, snr_db(desired, rec), len(out), float(err.max()), zc_err, other, note
        )
        return record, emission, desired, rec
    except ExperimentError:
        raise
    except Exception as exc:
        raise ExperimentError(stage, value if value is not None else cfg.experiment, str(exc)) from exc


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """
    Run every point of `config` and collect SNR and error statistics.

    Points where the IFC cannot fire (an operand yields no pulses, or a 1 V
    input can never reach threshold under the leak) are kept with an empty
    product and a note, so they score 0 dB rather than aborting the sweep.
    """
    records, emissions = [], []
    desired = rec = None
    for value, params in config.points():
        record, emission, desired, rec = _run_point(config, value, params)
        records.append(record)
        emissions.append(emission)
    return ExperimentResult(config, records, emissions, desired, rec)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if math.isnan(v):
        return "nan"
    return f"{v:.9f}"


def write_csv(result: ExperimentResult, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in result.records:
            w.writerow([_fmt(v) for v in r.row()])


def write_svg(result: ExperimentResult, path) -> None:
    """Line plot of SNR over the sweep, or desired vs reconstructed for single runs."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    cfg = result.config
    if cfg.sweep is not None:
        x = [r.swept_value for r in result.records]
        ax.semilogx(x, result.snr, "o-")
        ax.set_xlabel("clock period (s)" if cfg.sweep == "clock" else "threshold")
        ax.set_ylabel("SNR (dB)")
    else:
        t = result.desired.times
        ax.plot(t, result.desired.samples, label="desired")
        ax.plot(t, result.reconstructed.samples, label="reconstructed")
        ax.plot(t, result.reconstructed.samples - result.desired.samples, label="error")
        ax.set_xlabel("time (s)")
        ax.set_ylabel("amplitude (V)")
        ax.legend()
    ax.set_title(f"{cfg.experiment}: SNR {result.records[-1].snr_db:.2f} dB")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
