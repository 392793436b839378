__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.optimize
import scipy.signal

import hytrans.defaults as defaults
from hytrans.decorator import ensure_environment, ensure_molecule
from hytrans.errors import PeakFitError, ValidationError
from hytrans.logger import logger
from hytrans.molecule import Environment, Molecule
from hytrans.readout import ReadoutConfig, sample_readout
from hytrans.sensitivity import SensitivityParams, SensitivityReport, sensitivity_report
from hytrans.sequence import (
    SequenceConfig,
    SignalTrace,
    apply_dephasing,
    run_protocol,
    run_standard_protocol,
)
from hytrans.types import seed_type


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Magnitude spectrum of a block trace.

    resolution is the native bin width 1/(n τ); spacing the width of the
    zero-padded bins actually stored.
    """

    freqs: np.ndarray
    magnitudes: np.ndarray
    resolution: float
    spacing: float
    padding: int = defaults.zero_padding
    n: int = 0

    def energy(self) -> float:
        """
        Sum of squared magnitudes over the full two-sided spectrum.
        """
        weights = np.full(self.magnitudes.size, 2.0)
        weights[0] = 1.0
        length = self.n * self.padding
        if length % 2 == 0:
            weights[-1] = 1.0
        return float(np.sum(weights * self.magnitudes**2))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"freq_hz": self.freqs, "magnitude": self.magnitudes})


@dataclass(frozen=True)
class PeakFit:
    center: float
    height: float
    width: float
    model: str = "lorentzian"

    def __post_init__(self):
        if not self.width > 0:
            raise ValidationError(f"Peak width must be > 0, got {self.width}")

    def to_dict(self) -> dict:
        return {
            "center_hz": self.center,
            "height": self.height,
            "width_hz": self.width,
            "model": self.model,
        }


@dataclass(frozen=True)
class SNRResult:
    value: float
    noise_floor: float
    capped: bool = False


def lorentzian(x, height, center, width):
    """
    Lorentzian line of full width at half maximum width.
    """
    return height / (1 + (2 * (x - center) / width) ** 2)


def spectrum(trace: SignalTrace, padding: int = defaults.zero_padding) -> Spectrum:
    """
    Magnitude of the discrete Fourier transform of a trace, zero padded, with
    no window. The noisy readout is used when the trace carries one.

    :param trace: a uniformly sampled trace
    :type trace: SignalTrace
    :param padding: zero padding factor
    :type padding: int
    """
    if padding < 1:
        raise ValidationError(f"Padding must be >= 1, got {padding}")
    times = trace.times
    if times.size < 2:
        raise ValidationError("A spectrum needs at least two samples")
    tau = times[1] - times[0]
    if not np.allclose(np.diff(times), tau, rtol=1e-9, atol=0):
        raise ValidationError("Trace times are not uniformly sampled")

    samples = trace.readout if trace.readout is not None else trace.values
    length = trace.n * padding
    magnitudes = np.abs(np.fft.rfft(samples, length))
    freqs = np.fft.rfftfreq(length, tau)
    return Spectrum(
        freqs=freqs,
        magnitudes=magnitudes,
        resolution=1 / (trace.n * tau),
        spacing=freqs[1],
        padding=padding,
        n=trace.n,
    )


def _candidates(spec: Spectrum, k: int, guesses: Optional[Sequence[float]]) -> List[int]:
    maxima, _ = scipy.signal.find_peaks(spec.magnitudes)
    if guesses is None:
        if maxima.size < k:
            raise PeakFitError(f"Spectrum has {maxima.size} maxima, {k} requested")
        order = np.argsort(spec.magnitudes[maxima])[::-1]
        return [int(i) for i in maxima[order[:k]]]

    if len(guesses) < k:
        raise PeakFitError(f"{len(guesses)} frequency guesses given, {k} requested")
    reach = defaults.peak_window_bins * spec.padding
    chosen = []
    for guess in guesses[:k]:
        index = int(round(guess / spec.spacing))
        near = maxima[np.abs(maxima - index) <= reach]
        if near.size:
            index = int(near[np.argmax(spec.magnitudes[near])])
        chosen.append(min(max(index, 0), spec.freqs.size - 1))
    return chosen


def _fit_one(spec: Spectrum, index: int) -> PeakFit:
    reach = defaults.peak_window_bins * spec.padding
    low, high = max(index - reach, 0), min(index + reach + 1, spec.freqs.size)
    x, y = spec.freqs[low:high], spec.magnitudes[low:high]
    width_bounds = (spec.spacing / 10, 4 * spec.resolution)
    start = (spec.magnitudes[index], spec.freqs[index], spec.resolution)
    try:
        (height, center, width), _ = scipy.optimize.curve_fit(
            lorentzian,
            x,
            y,
            p0=start,
            bounds=(
                (0, x[0], width_bounds[0]),
                (np.inf, x[-1], width_bounds[1]),
            ),
        )
    except (RuntimeError, ValueError) as e:
        logger.warning(
            f"Lorentzian fit near {spec.freqs[index]:.3g} Hz failed ({e}), using the raw bin"
        )
        return PeakFit(
            center=float(spec.freqs[index]),
            height=float(spec.magnitudes[index]),
            width=spec.resolution,
            model="bin",
        )
    return PeakFit(center=float(center), height=float(height), width=float(width))


def fit_peaks(
    spec: Spectrum, k: int, guesses: Optional[Sequence[float]] = None
) -> List[PeakFit]:
    """
    Fit the k highest local maxima (or the maxima nearest to frequency
    guesses) with Lorentzian lines, returned by increasing center.

    :param spec: the spectrum
    :type spec: Spectrum
    :param k: number of peaks expected
    :type k: int
    :param guesses: optional expected centers in Hz
    :type guesses: list of float
    """
    if k < 1:
        raise ValidationError(f"At least one peak must be requested, got {k}")
    peaks = [_fit_one(spec, index) for index in _candidates(spec, k, guesses)]
    return sorted(peaks, key=lambda peak: peak.center)


def snr(
    spec: Spectrum, peak: PeakFit, peaks: Optional[Sequence[PeakFit]] = None
) -> SNRResult:
    """
    Peak height over the standard deviation of the detrended noise floor.

    Noise bins lie at least five fitted widths (plus the smoothing half
    window) from every peak and away from both spectrum edges.

    :param spec: the spectrum
    :type spec: Spectrum
    :param peak: the peak to measure
    :type peak: PeakFit
    :param peaks: every fitted peak to keep out of the noise floor
    :type peaks: list of PeakFit
    """
    peaks = list(peaks) if peaks is not None else [peak]
    if peak not in peaks:
        peaks.append(peak)
    window = 8 * spec.padding + 1
    half = window // 2
    if spec.magnitudes.size <= window:
        raise PeakFitError("Spectrum is too short for a noise floor")
    baseline = scipy.signal.savgol_filter(spec.magnitudes, window, 2)
    residual = spec.magnitudes - baseline

    mask = np.zeros(spec.magnitudes.size, dtype=bool)
    mask[half : spec.magnitudes.size - half] = True
    for other in peaks:
        reach = defaults.noise_exclusion_widths * other.width + half * spec.spacing
        mask &= np.abs(spec.freqs - other.center) >= reach
    count = int(mask.sum())
    if count < defaults.min_noise_bins:
        raise PeakFitError(
            f"Only {count} noise bins left, {defaults.min_noise_bins} needed"
        )

    noise = float(np.std(residual[mask]))
    if noise <= 1e-12 * abs(peak.height):
        logger.warning(f"Noise floor vanishes near {peak.center:.3g} Hz, SNR capped")
        return SNRResult(value=defaults.snr_cap, noise_floor=noise, capped=True)
    return SNRResult(value=peak.height / noise, noise_floor=noise)


def expected_peak_count(spec: Spectrum) -> int:
    maxima, _ = scipy.signal.find_peaks(spec.magnitudes)
    if not maxima.size:
        raise PeakFitError("Noiseless spectrum has no maxima")
    heights = spec.magnitudes[maxima]
    return int(np.sum(heights >= 0.5 * heights.max()))


def _measure(trace: SignalTrace, guesses: Sequence[float]) -> float:
    spec = spectrum(trace)
    peaks = fit_peaks(spec, len(guesses), guesses)
    highest = max(peaks, key=lambda peak: peak.height)
    return snr(spec, highest, peaks).value


def _seed_snr(job) -> Tuple[float, float]:
    """
    Top-level worker: SNR of both protocols for one seed.
    """
    transfer, standard, readout, guesses, seed = job
    transfer_seed, standard_seed = seed.spawn(2)
    return (
        _measure(sample_readout(transfer, readout, transfer_seed), guesses[0]),
        _measure(sample_readout(standard, readout, standard_seed), guesses[1]),
    )


@ensure_molecule
@ensure_environment
def snr_ratio(
    molecule: Molecule,
    env: Optional[Environment],
    transfer_config: SequenceConfig,
    standard_config: SequenceConfig,
    readout: Optional[ReadoutConfig] = None,
    seeds: int = 50,
    seed: seed_type = None,
    workers: int = 1,
) -> SensitivityReport:
    """
    Measure the SNR ratio of the two protocols by Monte Carlo, next to the
    predicted one.

    Both dephased traces are computed once; every seed then draws a noisy
    readout per protocol from its own stream, and the SNR of the highest
    line is measured at the centers fitted on the noiseless spectra.

    :param molecule: the spin system (or a reference to load)
    :type molecule: Molecule
    :param env: field and temperature
    :type env: Environment
    :param transfer_config: sequence of the transfer protocol
    :type transfer_config: SequenceConfig
    :param standard_config: sequence of the standard protocol
    :type standard_config: SequenceConfig
    :param readout: readout settings
    :type readout: ReadoutConfig
    :param seeds: number of noise realizations
    :type seeds: int
    :param seed: top-level seed
    :type seed: int or SeedSequence
    :param workers: worker processes (1 runs in process)
    :type workers: int
    """
    if seeds < 1:
        raise ValidationError(f"At least one seed is needed, got {seeds}")
    if (
        transfer_config.loading_time != standard_config.loading_time
        or transfer_config.blocks != standard_config.blocks
    ):
        raise ValidationError("Both protocols must share the loading time and block count")
    readout = readout or ReadoutConfig()

    transfer = apply_dephasing(
        run_protocol(molecule, env, transfer_config, readout),
        molecule,
        transfer_config,
        readout,
    )
    standard = apply_dephasing(
        run_standard_protocol(molecule, env, standard_config, readout),
        molecule,
        standard_config,
        readout,
    )

    guesses = []
    for trace in (transfer, standard):
        spec = spectrum(trace)
        guesses.append([p.center for p in fit_peaks(spec, expected_peak_count(spec))])

    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    jobs = [(transfer, standard, readout, guesses, child) for child in root.spawn(seeds)]
    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for done, result in enumerate(executor.map(_seed_snr, jobs), start=1):
                results.append(result)
                logger.progress(done, seeds, "seeds")
    else:
        for done, job in enumerate(jobs, start=1):
            results.append(_seed_snr(job))
            logger.progress(done, seeds, "seeds")

    snr_h = float(np.mean([r[0] for r in results]))
    snr_1 = float(np.mean([r[1] for r in results]))
    params = SensitivityParams.from_config(molecule, transfer_config, readout).replace(
        standard_detections=standard_config.m1,
        t2_1=SensitivityParams.from_config(molecule, standard_config, readout).t2_1,
    )
    report = sensitivity_report(params, optimize=False)
    measured = snr_h / snr_1 if snr_1 > 0 else math.inf
    logger.info(
        f"{molecule.name}: measured SNR ratio {measured:.3g}, "
        f"predicted {report.snr_ratio_pred:.3g} over {seeds} seeds"
    )
    return report.replace(
        snr_ratio_measured=measured, snr_h=snr_h, snr_1=snr_1, seeds=seeds
    )
