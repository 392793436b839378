__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math

import numpy as np
import pytest

from hytrans.errors import ValidationError
from hytrans.readout import (
    ReadoutConfig,
    averaging_count,
    b0_amplitude,
    noise_level,
    nv_phase_factor,
    nv_signal,
    sample_readout,
    synthesize_field,
)
from hytrans.sequence import SequenceConfig, SignalTrace, run_protocol


@pytest.fixture
def flat_trace(env):
    n = 2000
    return SignalTrace(
        times=1e-3 * np.arange(1, n + 1),
        values=np.zeros(n),
        full_scale=1.0,
        block_time=1e-3,
        detections=1,
        environment=env,
    )


def test_readout_config():
    readout = ReadoutConfig.from_dict({"omega_hz": 10e3, "contrast": 0.1})
    assert readout.omega == pytest.approx(2 * math.pi * 10e3)
    assert readout.contrast == 0.1
    assert readout.t2_nv == 10e-6
    assert readout.to_dict()["omega_hz"] == pytest.approx(10e3)
    with pytest.raises(ValidationError):
        ReadoutConfig(contrast=0.0)
    with pytest.raises(ValidationError):
        ReadoutConfig(t_exp=-1.0)


def test_b0_amplitude(env, readout):
    assert b0_amplitude(env, readout, 1.0) == pytest.approx(3.83609e-16, rel=1e-5)
    assert np.allclose(
        b0_amplitude(env, readout, np.array([0.5, -1.0])),
        np.array([0.5, -1.0]) * b0_amplitude(env, readout, 1.0),
    )
    with pytest.raises(ValidationError):
        b0_amplitude(env, readout, 1.5)


def test_nv_phase_factor_nulls(readout):
    gamma = 2 * math.pi * 42.6e6
    null = 2 / readout.omega
    assert null == pytest.approx(15.9e-6, rel=1e-3)
    assert nv_phase_factor(gamma, readout.omega, null, 1.0) == pytest.approx(0.0, abs=1e-9)
    peak = 1 / readout.omega
    factor = nv_phase_factor(gamma, readout.omega, peak, 1.0)
    assert factor == pytest.approx(
        4 * 1.76085963e11 * gamma / readout.omega, rel=1e-6
    )
    with pytest.raises(ValidationError):
        nv_phase_factor(gamma, 0.0, peak, 1.0)


def test_nv_signal_scale(flat_trace, readout):
    trace = flat_trace.replace(values=np.ones(flat_trace.n))
    assert nv_signal(trace, readout)[0] == pytest.approx(0.486599, rel=1e-4)


def test_noise_level(flat_trace, readout):
    assert averaging_count(flat_trace, readout) == pytest.approx(500.0)
    sigma = noise_level(flat_trace, readout)
    assert sigma == pytest.approx(1 / (0.07 * math.sqrt(500)))
    assert noise_level(flat_trace, readout.replace(contrast=0.14)) == pytest.approx(sigma / 2)
    with pytest.raises(ValidationError):
        averaging_count(flat_trace, readout.replace(t_exp=1.0))


def test_sample_readout(flat_trace, readout):
    print("Testing sample_readout...")
    first = sample_readout(flat_trace, readout, 11)
    again = sample_readout(flat_trace, readout, 11)
    other = sample_readout(flat_trace, readout, 12)
    assert np.array_equal(first.readout, again.readout)
    assert not np.array_equal(first.readout, other.readout)
    assert np.std(first.readout) == pytest.approx(noise_level(flat_trace, readout), rel=0.1)
    assert flat_trace.readout is None


def test_synthesize_field(hcn, hcn_sequence, readout):
    config = SequenceConfig(
        transfer_time=hcn_sequence.transfer_time, loading_time=1e-3, blocks=3, detections=4
    )
    trace = run_protocol(hcn, None, config, readout)
    frame = synthesize_field(trace, readout)
    per_unit = readout.samples_per_period * readout.rotation_periods
    assert len(frame) == 3 * 4 * per_unit
    assert list(frame.columns) == ["block", "t_s", "field_t"]
    lead = trace.block_time - 4 * trace.unit_time
    assert frame["t_s"].iloc[0] == pytest.approx(lead)
    assert np.all(np.diff(frame["t_s"].to_numpy()) > 0)
    limit = np.max(np.abs(b0_amplitude(trace.environment, readout, trace.normalized)))
    assert np.max(np.abs(frame["field_t"])) <= limit * 1.01
    with pytest.raises(ValidationError):
        synthesize_field(trace, readout.replace(samples_per_period=8))
