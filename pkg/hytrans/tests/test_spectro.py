__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import dataclasses
import math

import numpy as np
import pytest

import hytrans.defaults as defaults
from hytrans.errors import PeakFitError, ValidationError
from hytrans.sequence import SignalTrace, run_protocol
from hytrans.spectro import (
    PeakFit,
    Spectrum,
    fit_peaks,
    lorentzian,
    snr,
    snr_ratio,
    spectrum,
)


def tone_trace(freqs, n=240, tau=1e-3):
    times = tau * np.arange(1, n + 1)
    values = sum(np.cos(2 * math.pi * f * times) for f in freqs)
    return SignalTrace(times=times, values=values)


def test_lorentzian():
    assert lorentzian(10.0, 2.0, 10.0, 4.0) == 2.0
    assert lorentzian(12.0, 2.0, 10.0, 4.0) == pytest.approx(1.0)
    assert lorentzian(8.0, 2.0, 10.0, 4.0) == pytest.approx(1.0)


def test_spectrum_axes():
    spec = spectrum(tone_trace([100.0]))
    assert spec.resolution == pytest.approx(1 / 0.24)
    assert spec.spacing == pytest.approx(spec.resolution / defaults.zero_padding)
    assert spec.freqs.size == 240 * 4 // 2 + 1
    assert list(spec.to_frame().columns) == ["freq_hz", "magnitude"]


def test_spectrum_energy():
    trace = tone_trace([100.0, 230.0])
    spec = spectrum(trace)
    assert spec.energy() == pytest.approx(240 * 4 * np.sum(trace.values**2), rel=1e-9)


def test_spectrum_validation():
    trace = tone_trace([100.0])
    with pytest.raises(ValidationError):
        spectrum(trace, padding=0)
    uneven = SignalTrace(times=np.array([1.0, 2.0, 4.0]), values=np.zeros(3))
    with pytest.raises(ValidationError):
        spectrum(uneven)


def test_fit_peaks():
    print("Testing fit_peaks on two tones...")
    spec = spectrum(tone_trace([100.0, 200.0]))
    low, high = fit_peaks(spec, 2)
    assert low.center == pytest.approx(100.0, abs=0.3)
    assert high.center == pytest.approx(200.0, abs=0.3)
    assert low.model == "lorentzian"
    assert low.height == pytest.approx(120.0, rel=0.15)
    assert 0 < low.width <= 4 * spec.resolution

    (guessed,) = fit_peaks(spec, 1, guesses=[201.0])
    assert guessed.center == pytest.approx(200.0, abs=0.3)
    with pytest.raises(PeakFitError):
        fit_peaks(spec, 10000)
    with pytest.raises(PeakFitError):
        fit_peaks(spec, 2, guesses=[100.0])
    with pytest.raises(ValidationError):
        fit_peaks(spec, 0)


def test_snr_capped_without_noise():
    magnitudes = np.zeros(1000)
    magnitudes[500] = 1.0
    spec = Spectrum(
        freqs=0.25 * np.arange(1000),
        magnitudes=magnitudes,
        resolution=1.0,
        spacing=0.25,
        padding=4,
        n=250,
    )
    result = snr(spec, PeakFit(center=125.0, height=1.0, width=1.0))
    assert result.capped
    assert result.value == defaults.snr_cap


def test_snr_halves_with_doubled_noise():
    rng = np.random.default_rng(5)
    noise = rng.normal(size=480)
    trace = SignalTrace(times=1e-3 * np.arange(1, 481), values=np.zeros(480))
    peak = PeakFit(center=100.0, height=50.0, width=2.0)
    quiet = snr(spectrum(trace.replace(readout=0.01 * noise)), peak)
    loud = snr(spectrum(trace.replace(readout=0.02 * noise)), peak)
    assert not quiet.capped
    assert loud.value / quiet.value == pytest.approx(0.5, rel=0.1)
    assert loud.noise_floor == pytest.approx(2 * quiet.noise_floor, rel=0.1)


def test_snr_needs_noise_bins():
    spec = spectrum(tone_trace([100.0], n=10), padding=4)
    with pytest.raises(PeakFitError):
        snr(spec, PeakFit(center=100.0, height=1.0, width=10.0))


def test_snr_ratio_monte_carlo(hcn, hcn_sequence, readout):
    print("Testing the measured HCN SNR ratio...")
    report = snr_ratio(hcn, None, hcn_sequence, hcn_sequence, readout, seeds=50, seed=0)
    assert report.seeds == 50
    assert report.snr_h > report.snr_1 > 0
    assert abs(report.snr_ratio_measured / 11.1 - 1) <= 0.2
    assert report.snr_ratio_pred == pytest.approx(1 / 0.0862, rel=0.02)

    again = snr_ratio(hcn, None, hcn_sequence, hcn_sequence, readout, seeds=50, seed=0)
    assert again.snr_ratio_measured == report.snr_ratio_measured

    other = dataclasses.replace(hcn_sequence, blocks=100)
    with pytest.raises(ValidationError):
        snr_ratio(hcn, None, hcn_sequence, other, readout, seeds=2)


def test_hcn_coupling_mode_peak(hcn, hcn_sequence):
    print("Testing the HCN J-coupling mode spectrum...")
    spec = spectrum(run_protocol(hcn, None, hcn_sequence))
    (peak,) = fit_peaks(spec, 1)
    assert peak.center == pytest.approx(12.5, abs=1.0)
    assert spec.freqs[np.argmax(spec.magnitudes)] == pytest.approx(12.5, abs=spec.spacing)


def test_hcn_shift_mode_twin_peaks(hcn, hcn_sequence):
    print("Testing the HCN chemical-shift mode spectrum...")
    shifted = dataclasses.replace(hcn_sequence, with_pi_pulses=False)
    spec = spectrum(run_protocol(hcn, None, shifted))
    low, high = fit_peaks(spec, 2)
    assert low.center == pytest.approx(37.5, abs=1.0)
    assert high.center == pytest.approx(62.5, abs=1.0)
