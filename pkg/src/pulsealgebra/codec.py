"""
Integrate-and-fire converter (IFC): analog samples to pulses and back.

The encoder is a leaky integrator dv/dt = x(t) - leak_factor * v that
fires a +1 (-1) pulse whenever v reaches +threshold (-threshold) and then
resets to zero. The decoder relies on the constant-area property: each
inter-pulse interval holds exactly one threshold of (leak-weighted) area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pulses import PulseTrain, ReferenceTrain

__all__ = [
    "IfcParams",
    "SampledSignal",
    "encode",
    "reconstruct",
    "make_reference",
    "reference_period",
    "quantize_times",
    "UnreachableThresholdError",
]

# Relative slack when deciding that the integrator has reached threshold.
_FIRE_SLACK = 1e-9


class UnreachableThresholdError(ValueError):
    """A unit input can never charge the leaky integrator up to threshold."""


@dataclass(frozen=True)
class IfcParams:
    """
    IFC settings.

    Attributes
    ----------
    threshold : float
        Firing threshold in volt-seconds.
    leak_factor : float
        Leak rate in 1/s; 0 gives an ideal integrator.
    refractory : float
        Dead time after each pulse in seconds.
    clock_period : float or None
        Time-stamping clock period in seconds; None leaves times unquantized.
    """

    threshold: float = 0.001
    leak_factor: float = 0.0
    refractory: float = 0.0
    clock_period: Optional[float] = None

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold!r}")
        if not self.leak_factor >= 0:
            raise ValueError(f"leak_factor must be >= 0, got {self.leak_factor!r}")
        if not self.refractory >= 0:
            raise ValueError(f"refractory must be >= 0, got {self.refractory!r}")
        if self.clock_period is not None and not self.clock_period > 0:
            raise ValueError(f"clock_period must be positive, got {self.clock_period!r}")


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """
    Uniformly sampled amplitudes. Sample n sits at start_time + n / sample_rate.

    `warning` is set by producers that had to fall back to a degenerate
    output (e.g. reconstructing from an empty train).
    """

    samples: np.ndarray
    sample_rate: float
    start_time: float = 0.0
    warning: Optional[str] = None

    def __post_init__(self):
        x = np.array(self.samples, dtype=float).reshape(-1)
        x.flags.writeable = False
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if not np.all(np.isfinite(x)):
            raise ValueError("signal samples must be finite")
        object.__setattr__(self, "samples", x)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(self.samples.size) / self.sample_rate

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    @classmethod
    def from_function(cls, fn, sample_rate: float, duration: float, start_time: float = 0.0):
        n = int(round(duration * sample_rate))
        t = start_time + np.arange(n) / sample_rate
        return cls(np.asarray(fn(t), dtype=float) * np.ones(n), sample_rate, start_time)

    def __sub__(self, other: "SampledSignal") -> "SampledSignal":
        if len(self) != len(other):
            raise ValueError(f"length mismatch: {len(self)} vs {len(other)}")
        return SampledSignal(self.samples - other.samples, self.sample_rate, self.start_time)


def _leaky_step(v: float, xa: float, xb: float, dt: float, leak: float) -> float:
    # implicit trapezoid for dv/dt = x - leak*v
    if leak == 0.0:
        return v + 0.5 * dt * (xa + xb)
    half = 0.5 * leak * dt
    return (v * (1.0 - half) + 0.5 * dt * (xa + xb)) / (1.0 + half)


def encode(signal: SampledSignal, params: IfcParams) -> PulseTrain:
    """
    Integrate-and-fire encoding of a sampled signal.

    The input is taken as piecewise linear between samples, with the last
    sample held for one extra step so the train covers
    ``[start_time, start_time + len/sample_rate]``. Threshold crossings are
    located by linear interpolation of the integrator state inside the
    step. After a pulse the integrator resets to zero and stays idle for
    ``params.refractory`` seconds.

    Parameters
    ----------
    signal : SampledSignal
        Input amplitudes in volts.
    params : IfcParams
        Encoder settings. When ``clock_period`` is set the pulse times are
        passed through :func:`quantize_times`.

    Returns
    -------
    PulseTrain
        Pulses with origin at ``signal.start_time``.
    """
    x = signal.samples
    n = x.size
    h = 1.0 / signal.sample_rate
    theta = params.threshold
    fire_at = theta * (1.0 - _FIRE_SLACK)
    leak = float(params.leak_factor)
    refr = float(params.refractory)
    t_start = float(signal.start_time)

    times: list[float] = []
    pols: list[int] = []
    v = 0.0
    idle_until = -math.inf
    for i in range(n):
        t0 = t_start + i * h
        t_end = t0 + h
        x0 = float(x[i])
        x1 = float(x[i + 1]) if i + 1 < n else x0
        t, xa = t0, x0
        if idle_until > t:
            if idle_until >= t_end:
                continue
            xa = x0 + (idle_until - t0) / h * (x1 - x0)
            t = idle_until
        while True:
            dt = t_end - t
            vb = _leaky_step(v, xa, x1, dt, leak)
            if abs(vb) < fire_at:
                v = vb
                break
            sign = 1 if vb > 0 else -1
            frac = min((sign * theta - v) / (vb - v), 1.0)
            tc = t + frac * dt
            times.append(tc)
            pols.append(sign)
            xa += frac * (x1 - xa)
            t = tc
            v = 0.0
            if refr > 0.0:
                idle_until = tc + refr
                if idle_until >= t_end:
                    break
                xa += (idle_until - t) / (t_end - t) * (x1 - xa)
                t = idle_until
            if t >= t_end:
                break

    train = PulseTrain(times, np.array(pols, dtype=np.int8), t_start)
    if params.clock_period is not None and len(train):
        train = quantize_times(train, params.clock_period)
    return train


def _amplitudes(durations: np.ndarray, polarities: np.ndarray, params: IfcParams) -> np.ndarray:
    theta = params.threshold
    lam = params.leak_factor
    d = durations
    if lam > 0:
        # exact inverse of the leaky integral of a constant over d
        amp = lam * theta / -np.expm1(-lam * d)
    else:
        amp = theta / d
    return polarities * amp


def reconstruct(
    train: PulseTrain,
    params: IfcParams,
    sample_rate: float,
    duration: float,
    start_time: Optional[float] = None,
) -> SampledSignal:
    """
    Recover a sampled signal from an IFC pulse train.

    Each interval's mean amplitude follows from the constant-area property
    (threshold / interval, leak-corrected when ``leak_factor > 0``). That
    value is placed at the interval midpoint and the samples are linearly
    interpolated between midpoints, holding the end values flat.

    An empty train reconstructs to zeros with ``warning`` set.
    """
    if not sample_rate > 0 or not duration > 0:
        raise ValueError("sample_rate and duration must be positive")
    train.check()
    start = train.origin if start_time is None else float(start_time)
    n = int(round(duration * sample_rate))
    grid = start + np.arange(n) / sample_rate
    if not len(train):
        return SampledSignal(np.zeros(n), sample_rate, start, warning="empty pulse train")

    d = train.durations.copy()
    if params.refractory > 0 and d.size > 1:
        # integration was idle for the first `refractory` seconds of each later interval
        d[1:] = np.maximum(d[1:] - params.refractory, np.finfo(float).tiny)
    amps = _amplitudes(d, train.polarities.astype(float), params)
    left = np.concatenate(([train.origin], train.times[:-1]))
    mids = 0.5 * (left + train.times)
    return SampledSignal(np.interp(grid, mids, amps), sample_rate, start)


def reference_period(params: IfcParams) -> float:
    """
    Inter-pulse interval the encoder produces for a constant 1 V input.

    For a leaky integrator this solves (1 - exp(-leak * R)) / leak = threshold.
    """
    theta = params.threshold
    lam = params.leak_factor
    if lam == 0:
        return theta
    if lam * theta >= 1.0:
        raise UnreachableThresholdError(
            f"1 V input saturates at {1 / lam:g} V*s below threshold {theta:g}"
        )
    return -math.log1p(-lam * theta) / lam


def make_reference(params: IfcParams, duration: float) -> ReferenceTrain:
    """Reference (unit) train covering `duration` seconds."""
    if not duration > 0:
        raise ValueError(f"duration must be positive, got {duration!r}")
    r = reference_period(params)
    # guard floor() against ratios like 0.01/0.001 = 9.999999999999998
    count = int(math.floor(duration / r + 1e-9))
    return ReferenceTrain(r, count)


def quantize_times(train: PulseTrain, clock_period: float) -> PulseTrain:
    """
    Round pulse times to the nearest tick of a time-stamping clock.

    Pulses that would land on an already used tick are pushed to the next
    free tick, so the result stays strictly increasing.
    """
    if not clock_period > 0:
        raise ValueError(f"clock_period must be positive, got {clock_period!r}")
    if not len(train):
        return train
    ticks = np.rint(train.times / clock_period).astype(np.int64)
    k = np.arange(ticks.size)
    ticks = np.maximum.accumulate(ticks - k) + k
    # keep the first pulse strictly after the origin so no interval is empty
    origin_tick = math.floor(train.origin / clock_period + 1e-9) + 1
    ticks = np.maximum(ticks, origin_tick)
    ticks = np.maximum.accumulate(ticks - k) + k
    return PulseTrain(ticks * clock_period, train.polarities, train.origin)
