"""CSV readers and writers for pulse trains and sampled signals."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

import numpy as np

from .codec import SampledSignal
from .pulses import PulseTrain

__all__ = ["read_pulses", "write_pulses", "read_signal", "write_signal", "FormatError"]


class FormatError(ValueError):
    pass


def _rows(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]


def read_pulses(path) -> PulseTrain:
    """Read a ``t,p`` CSV into a validated pulse train."""
    rows = _rows(path)
    if not rows or [c.strip() for c in rows[0]] != ["t", "p"]:
        raise FormatError(f"{path}: expected header 't,p'")
    t, p = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise FormatError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            t.append(float(row[0]))
            pol = int(row[1])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: cannot parse {row!r}") from None
        if pol not in (1, -1):
            raise FormatError(f"{path}:{lineno}: polarity must be 1 or -1, got {pol}")
        p.append(pol)
    return PulseTrain(t, np.array(p, dtype=np.int8)).check()


def write_pulses(train: PulseTrain, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,p\n")
        for t, p in train:
            fh.write(f"{t:.12f},{p}\n")


def read_signal(path, sample_rate: Optional[float] = None) -> SampledSignal:
    """
    Read a signal CSV.

    Either a ``t,v`` file (sample rate taken from the time column unless
    given) or a headerless single column of values, which needs
    `sample_rate`.
    """
    rows = _rows(path)
    if not rows:
        raise FormatError(f"{path}: empty signal file")
    head = [c.strip() for c in rows[0]]
    try:
        if head == ["t", "v"]:
            data = np.array([[float(a), float(b)] for a, b in rows[1:]])
            if data.size == 0:
                raise FormatError(f"{path}: no samples")
            t, v = data[:, 0], data[:, 1]
            if sample_rate is None:
                if t.size < 2:
                    raise FormatError(f"{path}: need two samples or --fs to infer the rate")
                steps = np.diff(t)
                if np.any(steps <= 0) or np.ptp(steps) > 1e-6 * steps.mean():
                    raise FormatError(f"{path}: time column is not uniformly increasing")
                sample_rate = 1.0 / steps.mean()
            return SampledSignal(v, sample_rate, float(t[0]))
        if len(head) != 1:
            raise FormatError(f"{path}: expected header 't,v' or a single column")
        v = np.array([float(r[0]) for r in rows])
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"{path}: {exc}") from None
    if sample_rate is None:
        raise FormatError(f"{path}: single-column signal needs a sample rate")
    return SampledSignal(v, sample_rate)


def write_signal(signal: SampledSignal, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,v\n")
        for t, v in zip(signal.times, signal.samples):
            fh.write(f"{t:.9f},{v:.9f}\n")
