"""
Pulse-domain arithmetic.

Every operand train is turned into a piecewise-constant rate profile: the
interval between consecutive pulses carries 1/D constant areas per second
with the sign of its closing pulse. Operations combine profiles segment by
segment on the union of all pulse times, and :func:`integrate` turns a
profile back into pulses by accumulating area and firing each time the
running total reaches +1 or -1. Emission times are solved exactly inside
each segment, and the leftover (excess) area is carried into the next one.

Combination laws, for signed rates a, b and reference period R:

    product   R * a * b
    quotient  a / (R * b)
    sum       a + b
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .pulses import PulseTrain

__all__ = [
    "RateSegment",
    "CarryState",
    "SegmentRecord",
    "Emission",
    "rate_profile",
    "combine",
    "product_profile",
    "quotient_profile",
    "sum_profile",
    "integrate",
    "interval_nsa",
    "accumulator_at",
    "multiply",
    "divide",
    "add",
    "apply_refractory",
    "area_between",
]

Profile = Sequence["RateSegment"]

# Area slack when deciding that the accumulator has reached a whole constant area.
AREA_SNAP = 1e-9


@dataclass(frozen=True)
class RateSegment:
    """Constant-rate stretch of a profile: `rate` constant areas per second."""

    start: float
    end: float
    rate: float
    polarity: int = 1

    def __post_init__(self):
        if not self.end > self.start:
            raise ValueError(f"segment end {self.end!r} must exceed start {self.start!r}")
        if not (math.isfinite(self.rate) and self.rate >= 0):
            raise ValueError(f"segment rate must be finite and >= 0, got {self.rate!r}")

    @property
    def signed_rate(self) -> float:
        return self.rate * self.polarity

    @property
    def area(self) -> float:
        return self.signed_rate * (self.end - self.start)


@dataclass(frozen=True)
class CarryState:
    """
    Bookkeeping handed from one segment to the next.

    `excess_area` is the signed area accumulated since the last emission;
    its magnitude stays below one constant area. `anchor_time` is the time
    of the last emitted pulse (or the profile start if none fired yet).
    """

    excess_area: float = 0.0
    anchor_time: float = 0.0


@dataclass(frozen=True)
class SegmentRecord:
    start: float
    end: float
    signed_rate: float
    carry_in: float
    area: float
    emitted: int
    carry_out: float

    @property
    def nsa(self) -> float:
        """Net sum area: carried excess plus the area added in this segment."""
        return self.carry_in + self.area


@dataclass(frozen=True)
class Emission:
    train: PulseTrain
    carry: CarryState
    trace: tuple[SegmentRecord, ...]
    profile: tuple[RateSegment, ...]


def _require_pulses(train: PulseTrain, name: str) -> None:
    train.check()
    if not len(train):
        raise ValueError(f"{name} is empty; no rate can be derived")


def rate_profile(train: PulseTrain, window_end: Optional[float] = None) -> list[RateSegment]:
    """
    Piecewise-constant rate profile of a pulse train.

    Parameters
    ----------
    train : PulseTrain
        Non-empty valid train. The first segment starts at its origin.
    window_end : float, optional
        End of the profile. Defaults to the last pulse. Past the last pulse
        the final rate and polarity are extended; before it, the profile is
        cut short.
    """
    _require_pulses(train, "pulse train")
    end = train.last_time if window_end is None else float(window_end)
    if not end > train.origin:
        raise ValueError(f"window end {end!r} must be after origin {train.origin!r}")
    left = np.concatenate(([train.origin], train.times[:-1]))
    segs = []
    for a, b, p in zip(left.tolist(), train.times.tolist(), train.polarities.tolist()):
        if a >= end:
            break
        segs.append(RateSegment(a, min(b, end), 1.0 / (b - a), int(p)))
    if end > train.last_time:
        last = segs[-1]
        segs.append(RateSegment(train.last_time, end, last.rate, last.polarity))
    return segs


def combine(law: Callable[..., float], *profiles: Profile) -> list[RateSegment]:
    """
    Merge profiles on the union of their breakpoints and apply `law`.

    `law` receives one signed rate per profile and returns the signed output
    rate. The result covers the overlap of all profiles.
    """
    if not profiles or any(len(p) == 0 for p in profiles):
        raise ValueError("combine needs non-empty profiles")
    lo = max(p[0].start for p in profiles)
    hi = min(p[-1].end for p in profiles)
    if not hi > lo:
        raise ValueError(f"profiles do not overlap ({lo!r} >= {hi!r})")
    cuts = {lo, hi}
    starts, rates = [], []
    for p in profiles:
        s = np.array([seg.start for seg in p])
        starts.append(s)
        rates.append(np.array([seg.signed_rate for seg in p]))
        cuts.update(x for x in s.tolist() if lo < x < hi)
        cuts.update(seg.end for seg in p if lo < seg.end < hi)
    edges = np.array(sorted(cuts))
    mids = 0.5 * (edges[:-1] + edges[1:])
    cols = []
    for s, r in zip(starts, rates):
        idx = np.searchsorted(s, mids, side="right") - 1
        cols.append(r[idx])
    out = []
    for k in range(mids.size):
        value = law(*(float(c[k]) for c in cols))
        if not math.isfinite(value):
            raise ZeroDivisionError(
                f"rate law produced {value!r} on ({edges[k]!r}, {edges[k + 1]!r})"
            )
        out.append(RateSegment(float(edges[k]), float(edges[k + 1]), abs(value), -1 if value < 0 else 1))
    return out


def product_profile(a: Profile, b: Profile, reference_period: float) -> list[RateSegment]:
    """Rate profile of the pulse-domain product: R * a * b."""
    if not reference_period > 0:
        raise ValueError(f"reference period must be positive, got {reference_period!r}")
    R = float(reference_period)
    return combine(lambda x, y: R * x * y, a, b)


def quotient_profile(a: Profile, b: Profile, reference_period: float) -> list[RateSegment]:
    """Rate profile of a / b: a / (R * b). Raises if `b` has a zero-rate segment."""
    if not reference_period > 0:
        raise ValueError(f"reference period must be positive, got {reference_period!r}")
    R = float(reference_period)

    def law(x, y):
        if y == 0.0:
            return math.inf
        return x / (R * y)

    return combine(law, a, b)


def sum_profile(a: Profile, b: Profile) -> list[RateSegment]:
    return combine(lambda x, y: x + y, a, b)


def integrate(profile: Profile, carry: Optional[CarryState] = None) -> Emission:
    """
    Emit pulses from a rate profile.

    The signed accumulator starts at ``carry.excess_area`` (0 by default).
    Inside a segment of signed rate r the accumulator moves linearly; each
    time it reaches +1 (-1) a +1 (-1) pulse is emitted at the exact
    crossing time and one constant area is removed. What is left at the end
    is returned as the final :class:`CarryState`.
    """
    profile = tuple(profile)
    if not profile:
        raise ValueError("cannot integrate an empty profile")
    origin = profile[0].start
    acc = 0.0 if carry is None else float(carry.excess_area)
    anchor = origin if carry is None else carry.anchor_time
    times: list[float] = []
    pols: list[int] = []
    trace = []
    for seg in profile:
        r = seg.signed_rate
        span = seg.end - seg.start
        area = r * span
        new = acc + area
        n = 0
        if r != 0.0:
            sign = 1 if r > 0 else -1
            n = max(0, math.floor(sign * new + AREA_SNAP))
            if n:
                speed = abs(r)
                base = sign * acc
                for k in range(1, n + 1):
                    t = seg.start + (k - base) / speed
                    times.append(min(t, seg.end))
                    pols.append(sign)
                anchor = times[-1]
            out = new - sign * n
        else:
            out = new
        if abs(out) < AREA_SNAP:
            out = 0.0
        trace.append(SegmentRecord(seg.start, seg.end, r, acc, area, n, out))
        acc = out
    train = PulseTrain(times, np.array(pols, dtype=np.int8), origin)
    return Emission(train, CarryState(acc, anchor), tuple(trace), profile)


def accumulator_at(emission: Emission, t: float) -> float:
    """Signed excess area held by the accumulator just after time `t`."""
    times = emission.train.times
    for rec in emission.trace:
        if rec.start <= t <= rec.end:
            fired = int(np.count_nonzero((times > rec.start) & (times <= t))) if rec.emitted else 0
            sign = 1 if rec.signed_rate >= 0 else -1
            value = rec.carry_in + rec.signed_rate * (t - rec.start) - sign * fired
            return 0.0 if abs(value) < AREA_SNAP else value
    raise ValueError(f"time {t!r} outside the emission window")


def interval_nsa(emission: Emission, boundaries: Sequence[float]) -> list[tuple[float, int]]:
    """
    Net sum area and pulse count for each interval between `boundaries`.

    The first interval starts at the profile origin. Returns one
    ``(nsa, pulses)`` pair per boundary, where nsa is the excess carried
    into the interval plus the area accrued over it.
    """
    times = emission.train.times
    out = []
    lo = emission.trace[0].start
    for b in boundaries:
        b = float(b)
        nsa = accumulator_at(emission, lo) + area_between(emission.profile, lo, b)
        count = int(np.count_nonzero((times > lo) & (times <= b)))
        out.append((nsa, count))
        lo = b
    return out


def _window(p1: PulseTrain, p2: PulseTrain, window_end: Optional[float]) -> float:
    if window_end is not None:
        return float(window_end)
    return min(p1.last_time, p2.last_time)


def multiply(
    p1: PulseTrain,
    p2: PulseTrain,
    reference_period: float,
    window_end: Optional[float] = None,
) -> PulseTrain:
    """
    Pulse-domain product of a multiplicand `p1` and multiplier `p2`.

    Both trains are split at every pulse of either train. Within each
    piece the product accrues ``R / (E * C)`` constant areas per second,
    where E and C are the enclosing multiplier and multiplicand intervals;
    output polarity is the product of the operand polarities.

    By default the result covers the time up to the earlier of the two
    last pulses; pass `window_end` to extend (last rates are held) or cut.
    """
    _require_pulses(p1, "multiplicand")
    _require_pulses(p2, "multiplier")
    w = _window(p1, p2, window_end)
    prof = product_profile(rate_profile(p1, w), rate_profile(p2, w), reference_period)
    return integrate(prof).train


def divide(
    p1: PulseTrain,
    p2: PulseTrain,
    reference_period: float,
    window_end: Optional[float] = None,
) -> PulseTrain:
    """Pulse-domain quotient p1 / p2, accruing ``E / (R * C)`` areas per second."""
    _require_pulses(p1, "dividend")
    _require_pulses(p2, "divisor")
    w = _window(p1, p2, window_end)
    prof = quotient_profile(rate_profile(p1, w), rate_profile(p2, w), reference_period)
    return integrate(prof).train


def add(p1: PulseTrain, p2: PulseTrain, window_end: Optional[float] = None) -> PulseTrain:
    """Pulse-domain sum: signed rates add, output polarity follows the net rate."""
    _require_pulses(p1, "augend")
    _require_pulses(p2, "addend")
    w = _window(p1, p2, window_end)
    return integrate(sum_profile(rate_profile(p1, w), rate_profile(p2, w))).train


def apply_refractory(train: PulseTrain, refractory: float) -> PulseTrain:
    """Shift the k-th pulse (1-based) by k * refractory."""
    if not refractory >= 0:
        raise ValueError(f"refractory must be >= 0, got {refractory!r}")
    if refractory == 0 or not len(train):
        return train
    k = np.arange(1, len(train) + 1)
    return train.with_times(train.times + k * refractory)


def area_between(profile: Profile, t0: float, t1: float) -> float:
    """Signed area of `profile` over [t0, t1]."""
    total = 0.0
    for seg in profile:
        a = max(seg.start, t0)
        b = min(seg.end, t1)
        if b > a:
            total += seg.signed_rate * (b - a)
    return total
