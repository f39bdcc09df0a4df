import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pulsealgebra.codec import (
    IfcParams,
    SampledSignal,
    UnreachableThresholdError,
    encode,
    make_reference,
    quantize_times,
    reconstruct,
    reference_period,
)
from pulsealgebra.metrics import snr_db
from pulsealgebra.pulses import PulseTrain, validate

FS = 1e5


def const(value, duration, fs=FS):
    return SampledSignal(np.full(int(round(duration * fs)), value), fs)


def test_encode_unit_constant():
    tr = encode(const(1.0, 0.01), IfcParams(0.001))
    assert tr.times == pytest.approx(0.001 * np.arange(1, 11), abs=1e-12)
    assert set(tr.polarities) == {1}


def test_encode_zero_is_silent():
    assert len(encode(const(0.0, 0.01), IfcParams(0.001))) == 0


def test_encode_negative_constant():
    tr = encode(const(-2.0, 0.01), IfcParams(0.001))
    assert np.diff(tr.times, prepend=0) == pytest.approx(np.full(20, 0.0005), abs=1e-12)
    assert set(tr.polarities) == {-1}


def test_encode_rejects_bad_inputs():
    with pytest.raises(ValueError):
        IfcParams(0.0)
    with pytest.raises(ValueError):
        SampledSignal([0.0, float("nan")], FS)


@pytest.mark.parametrize("amp", [0.3, 0.76, 1.7, 4.0])
def test_constant_area_invariant(amp):
    # constant input, no leak: every interval is threshold / amplitude
    fs = 2e4
    tr = encode(const(amp, 0.05, fs), IfcParams(0.001))
    assert np.allclose(tr.durations, 0.001 / amp, atol=1 / fs)


@given(st.floats(0.2, 3.0), st.floats(1.01, 4.0))
@settings(max_examples=25, deadline=None)
def test_scaling_divides_intervals(amp, s):
    p = IfcParams(0.001)
    a = encode(const(amp, 0.02, 1e4), p).durations
    b = encode(const(amp * s, 0.02, 1e4), p).durations
    n = min(a.size, b.size)
    assert np.allclose(b[:n], a[:n] / s, rtol=1e-9)


def test_refractory_adds_dead_time():
    tr = encode(const(1.0, 0.01), IfcParams(0.001, refractory=0.0005))
    # first pulse after 1 ms of charge, then 0.5 ms idle + 1 ms charge each
    assert tr.times[:3] == pytest.approx([0.001, 0.0025, 0.004], abs=1e-12)


def test_reconstruct_constant():
    tr = PulseTrain(0.001 * np.arange(1, 21))
    rec = reconstruct(tr, IfcParams(0.001), 1e4, 0.02)
    assert np.allclose(rec.samples, 1.0)


def test_reconstruct_empty_train():
    rec = reconstruct(PulseTrain.empty(), IfcParams(0.001), 1e3, 0.01)
    assert np.all(rec.samples == 0) and len(rec) == 10
    assert rec.warning


@pytest.mark.parametrize("leak", [0.0, 40.0])
def test_round_trip_constant(leak):
    p = IfcParams(0.001, leak)
    rec = reconstruct(encode(const(0.76, 0.1), p), p, 1e4, 0.1)
    assert rec.samples.mean() == pytest.approx(0.76, rel=1e-3)
    assert np.max(np.abs(rec.samples - 0.76)) < 0.76e-3


def test_make_reference_no_leak():
    ref = make_reference(IfcParams(0.001), 0.01)
    assert ref.period == pytest.approx(0.001) and ref.count == 10
    ref = make_reference(IfcParams(0.5), 2.0)
    assert ref.period == pytest.approx(0.5) and ref.count == 4


def test_make_reference_leaky_matches_encoder():
    p = IfcParams(0.001, 40.0)
    R = make_reference(p, 0.01).period
    assert R > 0.001
    # the encoder's own interval for 1 V is the reference period
    ipi = encode(const(1.0, 0.05), p).durations
    assert np.allclose(ipi, R, rtol=1e-7)
    # closed form of the leaky charge curve
    assert (1 - math.exp(-40 * R)) / 40 == pytest.approx(0.001, rel=1e-12)


def test_make_reference_unreachable():
    with pytest.raises(UnreachableThresholdError):
        reference_period(IfcParams(0.03, 40.0))


def test_quantize_examples():
    q = quantize_times(PulseTrain([0.0123456]), 1e-6)
    assert q.times[0] == pytest.approx(0.012346, abs=1e-15)
    q = quantize_times(PulseTrain([0.000005]), 1e-6)
    assert q.times[0] == pytest.approx(0.000005, abs=1e-18)
    q = quantize_times(PulseTrain([0.0000014, 0.0000016]), 1e-6)
    assert q.times == pytest.approx([1e-6, 2e-6], abs=1e-18)


def test_quantize_collision_push():
    q = quantize_times(PulseTrain([1.1e-6, 1.2e-6, 1.3e-6]), 1e-6)
    assert q.times == pytest.approx([1e-6, 2e-6, 3e-6], abs=1e-18)


@given(
    st.lists(st.floats(1e-9, 1e-3), min_size=1, max_size=60),
    st.sampled_from([1e-7, 1e-6, 1e-5]),
)
def test_quantize_properties(steps, clock):
    tr = PulseTrain(np.cumsum(steps))
    if not validate(tr):
        return
    q = quantize_times(tr, clock)
    assert validate(q)
    ticks = q.times / clock
    assert np.allclose(ticks, np.round(ticks), atol=1e-6)
    if np.all(np.diff(tr.times) > clock) and tr.times[0] > clock:
        assert np.max(np.abs(q.times - tr.times)) <= clock * (0.5 + 1e-9)


@pytest.mark.parametrize("freq", [5.0, 20.0, 50.0])
def test_bandlimited_round_trip_snr(freq):
    # oversampled sinusoid with a DC offset so the IFC never starves
    fs = 100 * freq * 20
    p = IfcParams(0.001, 0.0, 0.0, 1e-6)
    fn = lambda t: 1.5 + np.sin(2 * np.pi * freq * t)
    sig = SampledSignal.from_function(fn, fs, 2 / freq)
    rec = reconstruct(encode(sig, p), p, fs, sig.duration)
    assert snr_db(sig, rec) >= 30.0


def test_zero_mean_sinusoid_round_trip_snr():
    # without an offset the pulse rate collapses near zero crossings, so a
    # large amplitude is needed to keep the bound
    freq = 12.0
    fs = 1000 * freq
    p = IfcParams(0.001, 0.0, 0.0, 1e-6)
    sig = SampledSignal.from_function(lambda t: 3.0 * np.sin(2 * np.pi * freq * t), fs, 3 / freq)
    rec = reconstruct(encode(sig, p), p, fs, sig.duration)
    assert snr_db(sig, rec) >= 30.0
