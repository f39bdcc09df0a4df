"""
Seeded random instances and empirical checks of the multiplication laws.

Each ``check_*`` function draws `cases` instances from a
:class:`numpy.random.Generator` and returns a :class:`LawResult`. The
instance generators respect the ordering hypotheses under which each law
is stated (e.g. all multiplier pulses before the reference period).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import (
    Emission,
    integrate,
    interval_nsa,
    multiply,
    divide,
    product_profile,
    quotient_profile,
    rate_profile,
    sum_profile,
)
from .closed_form import closed_form_t1, closed_form_t2
from .pulses import TIME_TOL, PulseTrain, ReferenceTrain, expand

__all__ = [
    "LawResult",
    "t1_instance",
    "t2_instance",
    "ordered_triple",
    "random_train",
    "LAWS",
    "run_laws",
]

NSA_RTOL = 1e-12


@dataclass(frozen=True)
class LawResult:
    name: str
    cases: int
    failures: int
    worst: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.cases > 0 and self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases - self.failures}/{self.cases} cases, worst {self.worst:.3g}"


def _sorted_distinct(rng, lo, hi, n, min_gap):
    while True:
        x = np.sort(rng.uniform(lo, hi, n))
        gaps = np.diff(np.concatenate(([lo], x)))
        if n == 0 or gaps.min() > min_gap:
            return x


def t1_instance(rng: np.random.Generator):
    """(R, multiplicand, multiplier) with R > C1 = e_m > ... > e_1."""
    R = rng.uniform(0.5, 2.0)
    C1 = R * rng.uniform(0.1, 0.9)
    m = int(rng.integers(1, 9))
    e = np.append(_sorted_distinct(rng, 0.0, C1 * (1 - 1e-3), m - 1, 1e-3 * C1), C1)
    return R, PulseTrain([C1]), PulseTrain(e)


def t2_instance(rng: np.random.Generator, side: Optional[str] = None):
    """
    (R, multiplicand, multiplier) with C1 > R and every e_j on one side of R.

    side="below" gives C1 > R > e_m; side="above" gives C1 > e_m > ... > e_1 > R.
    """
    side = side or ("below" if rng.random() < 0.5 else "above")
    R = rng.uniform(0.5, 2.0)
    C1 = R * rng.uniform(1.1, 5.0)
    m = int(rng.integers(1, 9))
    if side == "below":
        e = _sorted_distinct(rng, 0.0, 0.98 * R, m, 1e-3 * R)
    else:
        e = _sorted_distinct(rng, 1.02 * R, 0.98 * C1, m, 1e-3 * R)
    return R, PulseTrain([C1]), PulseTrain(e)


def ordered_triple(rng: np.random.Generator):
    """
    (R, P1, P2, P3): P1 at e_1 < ... < e_m, P2 single pulse at C1 = e_m,
    P3 single pulse at d_1, with R > d_1 > C1.
    """
    R = rng.uniform(0.5, 2.0)
    d1 = R * rng.uniform(0.2, 0.95)
    C1 = d1 * rng.uniform(0.1, 0.95)
    m = int(rng.integers(1, 9))
    e = np.append(_sorted_distinct(rng, 0.0, C1 * (1 - 1e-3), m - 1, 1e-3 * C1), C1)
    return R, PulseTrain(e), PulseTrain([C1]), PulseTrain([d1])


def random_train(rng: np.random.Generator, n: int, lo: float, hi: float, mixed: bool = False) -> PulseTrain:
    """`n` pulses with intervals drawn uniformly from [lo, hi]."""
    t = np.cumsum(rng.uniform(lo, hi, n))
    p = rng.choice([-1, 1], n) if mixed else np.ones(n)
    return PulseTrain(t, p)


def _time_dev(a: PulseTrain, b: PulseTrain) -> float:
    if len(a) != len(b) or not np.array_equal(a.polarities, b.polarities):
        return np.inf
    return float(np.max(np.abs(a.times - b.times), initial=0.0))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _tally(name, devs, tol, detail=""):
    devs = np.asarray(devs, dtype=float)
    return LawResult(name, devs.size, int(np.sum(~(devs <= tol))), float(devs.max(initial=0.0)), detail)


def check_closed_form_t1(rng, cases: int) -> LawResult:
    devs = []
    for _ in range(cases):
        R, p1, p2 = t1_instance(rng)
        oracle = closed_form_t1(R, float(p1.times[0]), p2.times)
        em = integrate(product_profile(rate_profile(p1), rate_profile(p2), R))
        d = _time_dev(em.train, PulseTrain(oracle.times))
        # running count after interval j is floor(j R / C1)
        C1 = float(p1.times[0])
        counts = [n for _, n in interval_nsa(em, p2.times)]
        expected = [int(np.floor(j * R / C1 + 1e-9)) for j in range(1, len(p2) + 1)]
        if np.cumsum(counts).tolist() != expected or oracle.counts != counts:
            d = np.inf
        devs.append(d)
    return _tally("closed_form_t1", devs, TIME_TOL)


def check_closed_form_t2(rng, cases: int) -> LawResult:
    devs = []
    for _ in range(cases):
        R, p1, p2 = t2_instance(rng)
        steps = closed_form_t2(R, float(p1.times[0]), p2.times)
        out = multiply(p1, p2, R)
        expected = PulseTrain([s.time for s in steps if s.time is not None])
        devs.append(_time_dev(out, expected))
    return _tally("closed_form_t2", devs, TIME_TOL)


def check_t2_count_bound(rng, cases: int) -> LawResult:
    devs = []
    for _ in range(cases):
        R, p1, p2 = t2_instance(rng)
        em = integrate(product_profile(rate_profile(p1), rate_profile(p2), R))
        counts = [n for _, n in interval_nsa(em, p2.times)]
        ok = counts[0] == 0 and max(counts) <= 1
        devs.append(0.0 if ok else np.inf)
    return _tally("t2_count_bound", devs, 0.0)


def check_commutativity(rng, cases: int) -> LawResult:
    devs = []
    for i in range(cases):
        kind = i % 3
        if kind == 0:
            R, p1, p2 = t1_instance(rng)
        elif kind == 1:
            R, p1, p2 = t2_instance(rng)
        else:
            R = rng.uniform(0.5, 2.0)
            p1 = random_train(rng, int(rng.integers(1, 12)), 0.2 * R, 3 * R, mixed=True)
            p2 = random_train(rng, int(rng.integers(1, 12)), 0.2 * R, 3 * R, mixed=True)
        devs.append(_time_dev(multiply(p1, p2, R), multiply(p2, p1, R)))
    return _tally("commutativity", devs, TIME_TOL)


def _identity_for(R: float, horizon: float) -> PulseTrain:
    return expand(ReferenceTrain(R, int(np.ceil(horizon / R)) + 2))


def check_identity(rng, cases: int) -> LawResult:
    devs = []
    for _ in range(cases):
        R = rng.uniform(0.5, 2.0)
        # intervals straddle R so both amplitude > 1 and < 1 pieces occur
        p = random_train(rng, int(rng.integers(1, 12)), 0.2 * R, 3 * R, mixed=True)
        ident = _identity_for(R, p.last_time)
        d = max(_time_dev(multiply(p, ident, R), p), _time_dev(multiply(ident, p, R), p))
        devs.append(d)
    return _tally("identity", devs, TIME_TOL)


def check_inverse(rng, cases: int) -> LawResult:
    """
    Half the cases: divisor pulses all before R, compared by per-interval
    net sum area of P2 * (I / P2) against I at the profile level. The other
    half: periodic divisors over several reference periods, compared by
    pulse times, plus a jittered inverse that must fail.
    """
    failures = 0
    worst = 0.0
    notes = []
    for i in range(cases):
        R = rng.uniform(0.5, 2.0)
        if i % 2 == 0:
            m = int(rng.integers(1, 9))
            e = _sorted_distinct(rng, 0.0, 0.98 * R, m, 1e-3 * R)
            p2 = PulseTrain(e)
            w = p2.last_time
            prof_i = rate_profile(_identity_for(R, R), w)
            prof_2 = rate_profile(p2, w)
            back = integrate(product_profile(prof_2, quotient_profile(prof_i, prof_2, R), R))
            got = interval_nsa(back, e)
            want = interval_nsa(integrate(prof_i), e)
            d = max(_rel(a[0], b[0]) for a, b in zip(got, want))
            if d > NSA_RTOL or [c for _, c in got] != [c for _, c in want]:
                failures += 1
                notes.append(f"case {i}: nsa rel dev {d:.3g}")
        else:
            amp = rng.uniform(0.3, 3.0)
            E = R / amp
            n = int(rng.integers(5, 15) * amp) + 2
            p2 = PulseTrain(E * np.arange(1, n + 1))
            q = divide(_identity_for(R, p2.last_time), p2, R)
            w = min(p2.last_time, q.last_time)
            unit = PulseTrain(R * np.arange(1, int(np.floor(w / R + 1e-9)) + 1))
            d = _time_dev(multiply(p2, q, R), unit)
            worst = max(worst, d)
            if not d <= TIME_TOL:
                failures += 1
                notes.append(f"case {i}: time dev {d:.3g}")
            # a perturbed inverse must not reproduce the identity
            step = 1e-3 * q.durations.min()
            jittered = q.with_times(q.times + step * (-1.0) ** np.arange(len(q)))
            if _time_dev(multiply(p2, jittered, R), unit) <= TIME_TOL:
                failures += 1
                notes.append(f"case {i}: jittered inverse also matched")
    return LawResult("inverse", cases, failures, worst, "; ".join(notes[:3]))


def check_associativity(rng, cases: int) -> LawResult:
    devs = []
    for _ in range(cases):
        R, p1, p2, p3 = ordered_triple(rng)
        w = p1.last_time
        a, b, c = (rate_profile(p, w) for p in (p1, p2, p3))
        left = integrate(product_profile(product_profile(a, b, R), c, R))
        right = integrate(product_profile(a, product_profile(b, c, R), R))
        nl = interval_nsa(left, p1.times)
        nr = interval_nsa(right, p1.times)
        d = max(_rel(x[0], y[0]) for x, y in zip(nl, nr))
        if [x[1] for x in nl] != [y[1] for y in nr]:
            d = np.inf
        devs.append(d)
    return _tally("associativity", devs, NSA_RTOL)


def _distributive(rng, cases: int, right: bool) -> LawResult:
    devs = []
    for _ in range(cases):
        R, p1, p2, p3 = ordered_triple(rng)
        w = p1.last_time
        a, b, c = (rate_profile(p, w) for p in (p1, p2, p3))
        if right:
            lhs = product_profile(a, sum_profile(b, c), R)
            rhs = sum_profile(product_profile(a, b, R), product_profile(a, c, R))
        else:
            lhs = product_profile(sum_profile(a, b), c, R)
            rhs = sum_profile(product_profile(a, c, R), product_profile(b, c, R))
        devs.append(_time_dev(integrate(lhs).train, integrate(rhs).train))
    return _tally("right_distributivity" if right else "left_distributivity", devs, TIME_TOL)


def check_left_distributivity(rng, cases: int) -> LawResult:
    return _distributive(rng, cases, right=False)


def check_right_distributivity(rng, cases: int) -> LawResult:
    return _distributive(rng, cases, right=True)


LAWS: dict[str, Callable[[np.random.Generator, int], LawResult]] = {
    "closed_form_t1": check_closed_form_t1,
    "closed_form_t2": check_closed_form_t2,
    "t2_count_bound": check_t2_count_bound,
    "commutativity": check_commutativity,
    "identity": check_identity,
    "inverse": check_inverse,
    "associativity": check_associativity,
    "left_distributivity": check_left_distributivity,
    "right_distributivity": check_right_distributivity,
}


def run_laws(seed: int = 0, cases: int = 100, names=None) -> list[LawResult]:
    """Run the selected law checks, each on its own stream derived from `seed`."""
    names = list(LAWS) if names is None else list(names)
    seqs = np.random.SeedSequence(seed).spawn(len(LAWS))
    streams = dict(zip(LAWS, seqs))
    return [LAWS[n](np.random.default_rng(streams[n]), cases) for n in names]
