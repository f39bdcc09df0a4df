"""
Pulse-train value types and interval utilities.

A pulse train is an ordered sequence of +1/-1 events in time. The time
between consecutive events (the inter-pulse interval) carries the
amplitude information, so most of the algebra operates on intervals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InvalidTrainError",
    "PulseTrain",
    "InterPulseInterval",
    "ReferenceTrain",
    "Verdict",
    "validate",
    "intervals",
    "expand",
    "from_intervals",
]

#: Default absolute tolerance for comparing pulse times (seconds).
TIME_TOL = 1e-9


class InvalidTrainError(ValueError):
    """Raised when an operation receives a pulse train that breaks ordering rules."""


def _frozen(a, dtype) -> np.ndarray:
    arr = np.array(a, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PulseTrain:
    """
    Ordered +1/-1 events observed from `origin` onwards.

    Construction does not enforce ordering; use :func:`validate` to get a
    verdict or :meth:`check` to raise on violations.

    Parameters
    ----------
    times : array_like of float
        Event times in seconds.
    polarities : array_like of int, optional
        +1 or -1 per event. Defaults to all +1.
    origin : float
        Start of the observation window in seconds.
    """

    times: np.ndarray
    polarities: np.ndarray = None
    origin: float = 0.0

    def __post_init__(self):
        times = _frozen(self.times, float)
        if self.polarities is None:
            pols = _frozen(np.ones(times.size), np.int8)
        else:
            pols = _frozen(self.polarities, np.int8)
        if pols.size != times.size:
            raise ValueError(
                f"{times.size} times but {pols.size} polarities"
            )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "polarities", pols)
        object.__setattr__(self, "origin", float(self.origin))

    @classmethod
    def from_events(cls, events: Iterable[tuple[float, int]], origin: float = 0.0) -> "PulseTrain":
        events = list(events)
        if not events:
            return cls(np.empty(0), np.empty(0, dtype=np.int8), origin)
        t, p = zip(*events)
        return cls(t, p, origin)

    @classmethod
    def empty(cls, origin: float = 0.0) -> "PulseTrain":
        return cls(np.empty(0), np.empty(0, dtype=np.int8), origin)

    def __len__(self) -> int:
        return int(self.times.size)

    def __iter__(self):
        return iter(zip(self.times.tolist(), self.polarities.tolist()))

    def __repr__(self) -> str:
        return f"PulseTrain(n={len(self)}, origin={self.origin!r})"

    @property
    def events(self) -> list[tuple[float, int]]:
        return list(self)

    @property
    def durations(self) -> np.ndarray:
        """Inter-pulse intervals, the first measured from `origin`."""
        return np.diff(self.times, prepend=self.origin)

    @property
    def last_time(self) -> float:
        return float(self.times[-1]) if len(self) else self.origin

    def check(self) -> "PulseTrain":
        """Return self, raising :class:`InvalidTrainError` if invalid."""
        verdict = validate(self)
        if not verdict:
            raise InvalidTrainError(
                f"invalid pulse train at index {verdict.index}: {verdict.reason}"
            )
        return self

    def with_times(self, times) -> "PulseTrain":
        return PulseTrain(times, self.polarities, self.origin)

    def inverted(self) -> "PulseTrain":
        """Same timing, every polarity flipped."""
        return PulseTrain(self.times, -self.polarities, self.origin)

    def allclose(self, other: "PulseTrain", atol: float = TIME_TOL) -> bool:
        """True when both trains have the same polarities and times within `atol`."""
        return (
            len(self) == len(other)
            and np.array_equal(self.polarities, other.polarities)
            and bool(np.all(np.abs(self.times - other.times) <= atol))
        )


@dataclass(frozen=True)
class Verdict:
    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(train: PulseTrain) -> Verdict:
    """
    Check the ordering invariants of a pulse train.

    Returns a truthy :class:`Verdict` when all times are finite, at or after
    the origin, strictly increasing, and every polarity is +1 or -1.
    Otherwise the verdict names the first offending index.
    """
    t = train.times
    p = train.polarities
    if not np.isfinite(train.origin):
        return Verdict(False, 0, "origin is not finite")
    for k in range(t.size):
        if not np.isfinite(t[k]):
            return Verdict(False, k, "time is not finite")
        if t[k] < train.origin:
            return Verdict(False, k, f"time {t[k]!r} precedes origin {train.origin!r}")
        if k and t[k] <= t[k - 1]:
            return Verdict(False, k, "times not strictly increasing")
        if p[k] not in (1, -1):
            return Verdict(False, k, f"polarity {int(p[k])} is not +1 or -1")
    return Verdict(True)


@dataclass(frozen=True)
class InterPulseInterval:
    duration: float
    polarity: int

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"interval duration must be positive, got {self.duration!r}")


def intervals(train: PulseTrain) -> list[InterPulseInterval]:
    """
    Split a valid train into inter-pulse intervals.

    The k-th interval spans the previous event (or the origin, for the
    first) up to event k and takes that event's polarity.
    """
    train.check()
    return [
        InterPulseInterval(float(d), int(p))
        for d, p in zip(train.durations, train.polarities)
    ]


def from_intervals(ivals: Sequence[InterPulseInterval], origin: float = 0.0) -> PulseTrain:
    """Inverse of :func:`intervals`."""
    if not ivals:
        return PulseTrain.empty(origin)
    d = np.array([iv.duration for iv in ivals])
    p = np.array([iv.polarity for iv in ivals])
    return PulseTrain(origin + np.cumsum(d), p, origin)


@dataclass(frozen=True)
class ReferenceTrain:
    """
    Periodic +1 train standing for the constant value 1.

    Attributes
    ----------
    period : float
        Pulse spacing in seconds.
    count : int
        Number of pulses.
    """

    period: float
    count: int = field(default=0)

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError(f"reference period must be positive, got {self.period!r}")
        if self.count < 0:
            raise ValueError(f"reference count must be non-negative, got {self.count!r}")

    def expand(self, origin: float = 0.0) -> PulseTrain:
        return expand(self, origin)


def expand(ref: ReferenceTrain, origin: float = 0.0) -> PulseTrain:
    """Pulses at origin + R, origin + 2R, ..., origin + count*R, all +1."""
    k = np.arange(1, ref.count + 1)
    return PulseTrain(origin + k * ref.period, np.ones(ref.count, dtype=np.int8), origin)
