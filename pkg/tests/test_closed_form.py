import numpy as np
import pytest

from pulsealgebra.algebra import multiply
from pulsealgebra.closed_form import RegimeError, closed_form_t1, closed_form_t2, roman
from pulsealgebra.laws import t1_instance, t2_instance
from pulsealgebra.pulses import PulseTrain


def test_t1_worked_example():
    res = closed_form_t1(1.0, 0.4, [0.2, 0.4])
    assert res.counts == [2, 3]
    assert res.times == pytest.approx([0.08, 0.16, 0.24, 0.32, 0.40])


def test_t1_second_example():
    res = closed_form_t1(1.0, 0.5, [0.25, 0.5])
    assert res.counts == [2, 2]
    assert res.times == pytest.approx([0.125, 0.25, 0.375, 0.5])


def test_t1_first_interval_last_pulse():
    # k = n_1 in interval 1 reduces to n_1 * E_1 * C_1 / R
    R, C1, e = 1.3, 0.3, [0.1, 0.3]
    res = closed_form_t1(R, C1, e)
    n1 = res.counts[0]
    assert res.pulses[n1 - 1][2] == pytest.approx(n1 * e[0] * C1 / R)


@pytest.mark.parametrize(
    "R, C1, e",
    [
        (0.3, 0.4, [0.2, 0.4]),  # R < C1
        (1.0, 0.4, [0.2, 0.5]),  # C1 != e_m
        (1.0, 0.4, [0.3, 0.2, 0.4]),  # not increasing
    ],
)
def test_t1_regime_checked(R, C1, e):
    with pytest.raises(RegimeError):
        closed_form_t1(R, C1, e)


def test_t2_case_tree():
    steps = closed_form_t2(1.0, 2.5, [0.3, 0.6, 0.9])
    assert [(s.interval, s.case_label) for s in steps] == [(1, "-"), (2, "I(a)"), (3, "I(b)")]
    assert [s.time for s in steps[:2]] == [None, None]
    assert steps[2].time == pytest.approx(0.75)
    assert [s.nsa for s in steps] == pytest.approx([0.4, 0.8, 1.2])


def test_t2_two_routes_agree():
    steps = closed_form_t2(1.0, 1.6, [0.4, 0.8])
    assert steps[0].time is None and steps[0].nsa == pytest.approx(0.625)
    # carry route and direct interval formula e_1 + (E_2 / R)(C_1 - R)
    assert steps[1].time == pytest.approx(0.4 + 0.4 * (1 - 0.625) * 1.6)
    assert steps[1].time == pytest.approx(0.4 + 0.4 * (1.6 - 1.0))


def test_t2_carry_after_emission():
    R, C1 = 1.0, 1.6
    steps = closed_form_t2(R, C1, [0.4, 0.8])
    assert steps[1].carry == pytest.approx(2 * R / C1 - 1)
    assert steps[1].carry == pytest.approx(steps[1].nsa - 1)


def test_t2_second_condition_branch():
    # R / C1 = 0.8: carries 0.8, 0.6 -> intervals 2 and 3 both fire, 3 on branch II
    R, C1, e = 1.0, 1.25, [0.2, 0.5, 0.9]
    steps = closed_form_t2(R, C1, e)
    assert [s.case_label for s in steps] == ["-", "I(b)", "II(b)"]
    E3 = 0.4
    assert steps[2].time == pytest.approx(0.5 + E3 * (2 * C1 - 2 * R) / R)
    out = multiply(PulseTrain([C1]), PulseTrain(e), R)
    assert out.times == pytest.approx([s.time for s in steps if s.time is not None])


def test_t2_regime_checked():
    with pytest.raises(RegimeError):
        closed_form_t2(1.0, 0.8, [0.3, 0.6])
    with pytest.raises(RegimeError):
        closed_form_t2(1.0, 2.0, [0.5, 1.5])  # straddles R


def test_roman():
    assert [roman(i) for i in (1, 2, 3, 4, 9, 14)] == ["I", "II", "III", "IV", "IX", "XIV"]


def test_engine_matches_t1(rng):
    for _ in range(30):
        R, p1, p2 = t1_instance(rng)
        res = closed_form_t1(R, float(p1.times[0]), p2.times)
        out = multiply(p1, p2, R)
        assert np.allclose(out.times, res.times, atol=1e-9, rtol=0)


def test_engine_matches_t2(rng):
    for side in ("below", "above"):
        for _ in range(15):
            R, p1, p2 = t2_instance(rng, side)
            steps = closed_form_t2(R, float(p1.times[0]), p2.times)
            expected = [s.time for s in steps if s.time is not None]
            assert np.allclose(multiply(p1, p2, R).times, expected, atol=1e-9, rtol=0)
