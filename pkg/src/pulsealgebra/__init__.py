"""
Arithmetic on integrate-and-fire pulse trains.

Encode analog signals into +/-1 pulse trains, multiply, divide and add them
directly in the pulse domain, and reconstruct the result.

    >>> import numpy as np
    >>> from pulsealgebra import IfcParams, SampledSignal, encode, multiply, reference_period
    >>> p = IfcParams(threshold=0.001)
    >>> a = encode(SampledSignal(np.full(2000, 0.5), 1e5), p)
    >>> b = encode(SampledSignal(np.full(2000, 0.8), 1e5), p)
    >>> prod = multiply(a, b, reference_period(p))
"""

from .algebra import (
    CarryState,
    Emission,
    RateSegment,
    add,
    apply_refractory,
    divide,
    integrate,
    interval_nsa,
    multiply,
    product_profile,
    quotient_profile,
    rate_profile,
    sum_profile,
)
from .closed_form import RegimeError, closed_form_t1, closed_form_t2
from .codec import (
    IfcParams,
    SampledSignal,
    encode,
    make_reference,
    quantize_times,
    reconstruct,
    reference_period,
)
from .experiments import ExperimentConfig, ExperimentResult, run_experiment
from .metrics import power, snr_db
from .pulses import (
    InterPulseInterval,
    InvalidTrainError,
    PulseTrain,
    ReferenceTrain,
    expand,
    intervals,
    validate,
)

__version__ = "0.1.0"
