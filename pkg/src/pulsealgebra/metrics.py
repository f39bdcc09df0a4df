"""Signal power and SNR."""

from __future__ import annotations

import numpy as np

from .codec import SampledSignal

__all__ = ["SNR_CAP_DB", "power", "snr_db"]

#: Ceiling of :func:`snr_db`; returned for zero error and for float-residue errors.
SNR_CAP_DB = 300.0


def power(signal: SampledSignal) -> float:
    """Mean squared amplitude."""
    if not len(signal):
        raise ValueError("power of an empty signal is undefined")
    x = signal.samples
    return float(np.mean(x * x))


def snr_db(desired: SampledSignal, reconstructed: SampledSignal) -> float:
    """
    10 * log10(power(desired) / power(desired - reconstructed)).

    The denominator is the power of the error signal. Results are clipped
    to :data:`SNR_CAP_DB`, which is also returned for zero error; a zero
    desired signal with non-zero error gives -inf.
    """
    if len(desired) != len(reconstructed):
        raise ValueError(f"length mismatch: {len(desired)} vs {len(reconstructed)}")
    if desired.sample_rate != reconstructed.sample_rate:
        raise ValueError(
            f"sample rate mismatch: {desired.sample_rate} vs {reconstructed.sample_rate}"
        )
    p_err = power(desired - reconstructed)
    if p_err == 0.0:
        return SNR_CAP_DB
    p_sig = power(desired)
    if p_sig == 0.0:
        return -np.inf
    return float(min(10.0 * np.log10(p_sig / p_err), SNR_CAP_DB))
