"""
Closed-form pulse timings for two restricted multiplication regimes.

These evaluate explicit timing formulas and serve as independent oracles
for the streaming engine in :mod:`pulsealgebra.algebra`. Both take a
multiplicand with a single pulse at C1 and a multiplier with pulses at
e_1 < ... < e_m, all positive, against a reference period R.

* ``closed_form_t1``: R > C1 = e_m (both operands above unit amplitude).
* ``closed_form_t2``: C1 > R with all e_j on one side of R, so every
  multiplier interval accrues R / C1 < 1 area and fires at most once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

__all__ = [
    "RegimeError",
    "ClosedFormCase",
    "T1Result",
    "T2Step",
    "closed_form_t1",
    "closed_form_t2",
    "roman",
]

# floor() slack so that exact-integer net areas (e.g. 1.2 / 0.4) are not lost to rounding
_SLACK = 1e-9


class RegimeError(ValueError):
    """Inputs fall outside the configuration a closed form is valid for."""


@dataclass(frozen=True)
class ClosedFormCase:
    regime: str
    case_label: str
    interval: int
    pulses: int


@dataclass(frozen=True)
class T1Result:
    pulses: list[tuple[int, int, float]]
    counts: list[int]
    cases: list[ClosedFormCase] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return [t for _, _, t in self.pulses]


@dataclass(frozen=True)
class T2Step:
    interval: int
    time: Optional[float]
    case_label: str
    nsa: float
    carry: float


def roman(n: int) -> str:
    vals = [(10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")]
    out = []
    for v, s in vals:
        while n >= v:
            out.append(s)
            n -= v
    return "".join(out)


def _check_increasing(times: Sequence[float]) -> list[float]:
    e = [float(t) for t in times]
    if not e:
        raise RegimeError("multiplier needs at least one pulse")
    if e[0] <= 0 or any(b <= a for a, b in zip(e, e[1:])):
        raise RegimeError("multiplier times must be positive and strictly increasing")
    return e


def closed_form_t1(R: float, C1: float, multiplier_times: Sequence[float]) -> T1Result:
    """
    Pulse times of the product when R > C1 = e_m.

    For interval j (from e_{j-1} to e_j, with e_0 = 0) the count is

        n_j = floor((j R - C1 * sum_{i<j} n_i) / C1)

    and the k-th pulse in it sits at

        T_k^(j) = e_{j-1} + (E_j / R) * (k C1 - (j - 1) R + C1 * sum_{i<j} n_i).
    """
    e = _check_increasing(multiplier_times)
    if not R > C1 > 0:
        raise RegimeError(f"need R > C1 > 0, got R={R!r}, C1={C1!r}")
    if abs(C1 - e[-1]) > 1e-12 * max(1.0, abs(C1)):
        raise RegimeError(f"need C1 == e_m, got C1={C1!r}, e_m={e[-1]!r}")
    pulses = []
    counts = []
    cases = []
    prev = 0.0
    done = 0
    for j, ej in enumerate(e, start=1):
        E = ej - prev
        n = math.floor((j * R - C1 * done) / C1 + _SLACK)
        for k in range(1, n + 1):
            pulses.append((j, k, prev + E / R * (k * C1 - (j - 1) * R + C1 * done)))
        counts.append(n)
        cases.append(ClosedFormCase("T1", "-", j, n))
        done += n
        prev = ej
    return T1Result(pulses, counts, cases)


def closed_form_t2(R: float, C1: float, multiplier_times: Sequence[float]) -> list[T2Step]:
    """
    Interval-by-interval evaluation when every multiplier interval adds R / C1 < 1.

    Valid for C1 > R > e_m (amplitude below one on the multiplicand side)
    and for C1 > e_m > ... > e_1 > R. In interval j the net sum area is the
    carried excess plus R / C1; below one nothing fires (case "(a)"),
    otherwise exactly one pulse fires (case "(b)") at

        e_{j-1} + (1 - carry) * E_j * C1 / R

    and the carry drops by one. The roman numeral counts the pulses already
    emitted plus one; the first interval is labelled "-".
    """
    e = _check_increasing(multiplier_times)
    if not C1 > R > 0:
        raise RegimeError(f"need C1 > R > 0, got R={R!r}, C1={C1!r}")
    if not (R > e[-1] or e[0] > R) or not C1 > e[-1]:
        raise RegimeError("multiplier pulses must all precede C1 and lie on one side of R")
    steps = []
    prev = 0.0
    fired = 0
    for j, ej in enumerate(e, start=1):
        E = ej - prev
        carry = (j - 1) * R / C1 - fired
        nsa = carry + R / C1
        if nsa + _SLACK >= 1.0:
            t = prev + (1.0 - carry) * E * C1 / R
            fired += 1
            suffix = "(b)"
        else:
            t = None
            suffix = "(a)"
        label = "-" if j == 1 else roman(fired + (0 if t is None else -1) + 1) + suffix
        steps.append(T2Step(j, t, label, nsa, j * R / C1 - fired))
        prev = ej
    return steps
