__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

import hytrans.defaults as defaults
from hytrans.analytic import general_amplitude
from hytrans.decorator import ensure_molecule
from hytrans.errors import ValidationError
from hytrans.logger import logger
from hytrans.molecule import Molecule
from hytrans.readout import ReadoutConfig, nv_phase_factor
from hytrans.sequence import SequenceConfig, emitter_timing, protocol_name, target_index

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SensitivityParams:
    """
    Everything the sensitivity expressions of both protocols need.

    t2_h is the hydrogen decoherence time and t2_1 the target's (T2 with pi
    pulses, T2* without). Infinite decoherence times are allowed.
    """

    transfer_time: float
    loading_time: float
    blocks: int
    detections: int
    standard_detections: int
    unit_time: float
    target_unit_time: float
    t2_h: float
    t2_1: float
    gamma_h: float
    gamma_1: float
    omega_h: float
    omega_1: float
    readout: ReadoutConfig = field(default_factory=ReadoutConfig)
    amplitude_factor: float = 1.0

    def __post_init__(self):
        if self.transfer_time < 0:
            raise ValidationError(f"Transfer time must be >= 0, got {self.transfer_time}")
        for name in ("loading_time", "unit_time", "target_unit_time", "t2_h", "t2_1"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.blocks < 1 or self.detections < 1 or self.standard_detections < 1:
            raise ValidationError("Blocks and detection counts must be >= 1")
        if not self.amplitude_factor > 0:
            raise ValidationError(
                f"Amplitude factor must be > 0, got {self.amplitude_factor}"
            )

    def replace(self, **changes) -> "SensitivityParams":
        return replace(self, **changes)

    @classmethod
    def from_config(
        cls,
        molecule: Molecule,
        config: SequenceConfig,
        readout: Optional[ReadoutConfig] = None,
        amplitude_factor: Optional[float] = None,
    ) -> "SensitivityParams":
        """
        Derive parameters from a molecule, a sequence and a readout.

        The target uses T2 when the loading pi pulses are on and T2* otherwise.
        The amplitude factor defaults to the first-order transfer amplitude at
        the configured transfer time.
        """
        readout = readout or ReadoutConfig()
        transfer = emitter_timing(molecule, config, "transfer", readout)
        standard = emitter_timing(molecule, config, "standard", readout)
        target = target_index(molecule, config.target)
        if amplitude_factor is None:
            amplitude_factor = general_amplitude(molecule, config.transfer_time).first_order
        return cls(
            transfer_time=config.transfer_time,
            loading_time=config.loading_time,
            blocks=config.blocks,
            detections=config.detections,
            standard_detections=config.m1,
            unit_time=transfer.unit_time,
            target_unit_time=standard.unit_time,
            t2_h=molecule.t2_of(molecule.hydrogens[0]),
            t2_1=molecule.t2_of(target, star=not config.with_pi_pulses),
            gamma_h=transfer.gamma,
            gamma_1=standard.gamma,
            omega_h=transfer.omega,
            omega_1=standard.omega,
            readout=readout,
            amplitude_factor=amplitude_factor,
        )


@dataclass(frozen=True)
class SensitivityReport:
    """
    Predicted (and optionally measured) comparison of the two protocols.
    """

    t2_eff_h: float
    t2_eff_1: float
    eta_ratio: float
    snr_ratio_pred: float
    optimal_m: int
    optimal_m1: int
    amplitude_factor: float = 1.0
    snr_ratio_measured: Optional[float] = None
    snr_h: Optional[float] = None
    snr_1: Optional[float] = None
    seeds: int = 0

    def replace(self, **changes) -> "SensitivityReport":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


def _protocol_block(protocol: str, params: SensitivityParams, detections: ArrayLike):
    if protocol == "transfer":
        return (
            2 * params.transfer_time + params.loading_time + detections * params.unit_time
        )
    return params.loading_time + detections * params.target_unit_time


def _t2_eff(protocol: str, params: SensitivityParams, detections: ArrayLike) -> ArrayLike:
    """
    Effective decoherence time over one loading period, vectorized over the
    detection count. Works on rates so infinite T2 values are exact.
    """
    tau = params.loading_time
    if protocol == "transfer":
        outside = 2 * params.transfer_time + detections * params.unit_time
        rate = outside / (tau * params.t2_h) + 1 / params.t2_1
    else:
        rate = (tau + detections * params.target_unit_time) / (tau * params.t2_1)
    with np.errstate(divide="ignore"):
        return np.divide(1.0, rate)


def t2_eff(protocol: str, params: SensitivityParams) -> float:
    """
    Effective decoherence time of a protocol.

    transfer: T2H T21 τ / ((2t + M tH) T21 + τ T2H)
    standard: T21 τ / (τ + M1 t1)

    :param protocol: transfer (or ours) or standard
    :type protocol: str
    :param params: sensitivity parameters
    :type params: SensitivityParams
    """
    protocol = protocol_name(protocol)
    detections = params.detections if protocol == "transfer" else params.standard_detections
    return float(_t2_eff(protocol, params, detections))


def peak_height(t2: ArrayLike, duration: float) -> ArrayLike:
    """
    Height of a decaying line sampled for a duration: T (1 - exp(-duration/T)),
    the duration itself when T is infinite.
    """
    t2 = np.asarray(t2, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        finite = t2 * -np.expm1(-duration / t2)
    result = np.where(np.isinf(t2), duration, finite)
    return result if result.ndim else float(result)


def phase_amplitude(gamma: float, omega: float, t2_nv: ArrayLike) -> ArrayLike:
    """
    NV response to a unit polarization of an emitter; the emitted field
    carries one factor of gamma and the phase another.
    """
    return gamma * nv_phase_factor(gamma, omega, t2_nv, 1.0)


def _eta(protocol: str, params: SensitivityParams, detections: ArrayLike) -> ArrayLike:
    detections = np.asarray(detections, dtype=float)
    duration = params.blocks * params.loading_time
    height = peak_height(_t2_eff(protocol, params, detections), duration)
    t2_nv = params.readout.t2_nv
    if protocol == "transfer":
        amplitude = params.amplitude_factor * phase_amplitude(
            params.gamma_h, params.omega_h, t2_nv
        )
    else:
        amplitude = phase_amplitude(params.gamma_1, params.omega_1, t2_nv)
    total_time = params.blocks * _protocol_block(protocol, params, detections)
    with np.errstate(divide="ignore"):
        return (
            np.sqrt(total_time / params.readout.t_exp)
            / np.sqrt(detections)
            / (height * np.abs(amplitude))
        )


def eta(protocol: str, params: SensitivityParams) -> float:
    """
    Sensitivity of one protocol, up to the proportionality constant both
    protocols share. Smaller is better.
    """
    protocol = protocol_name(protocol)
    detections = params.detections if protocol == "transfer" else params.standard_detections
    return float(_eta(protocol, params, detections))


def eta_ratio(params: SensitivityParams) -> float:
    """
    Sensitivity of the transfer protocol relative to the standard one.

    The product of the line height ratio, the NV response ratio, the square
    root of the block duration ratio and the square root of the detection
    count ratio, divided by the transfer amplitude.
    """
    duration = params.blocks * params.loading_time
    heights = peak_height(t2_eff("standard", params), duration) / peak_height(
        t2_eff("transfer", params), duration
    )
    t2_nv = params.readout.t2_nv
    with np.errstate(divide="ignore"):
        response = np.abs(
            phase_amplitude(params.gamma_1, params.omega_1, t2_nv)
        ) / np.abs(phase_amplitude(params.gamma_h, params.omega_h, t2_nv))
    blocks = _protocol_block("transfer", params, params.detections) / _protocol_block(
        "standard", params, params.standard_detections
    )
    counts = params.standard_detections / params.detections
    return float(
        heights * response * math.sqrt(blocks) * math.sqrt(counts) / params.amplitude_factor
    )


def optimize_measurements(
    params: SensitivityParams, m_max: Optional[int] = None
) -> Tuple[int, int]:
    """
    Detection counts (M, M1) minimizing each protocol's own sensitivity over
    1..m_max; ties go to the smaller count.

    :param params: sensitivity parameters
    :type params: SensitivityParams
    :param m_max: largest count searched (defaults.m_max)
    :type m_max: int
    """
    m_max = m_max or defaults.m_max
    if m_max < 1:
        raise ValidationError(f"m_max must be >= 1, got {m_max}")
    counts = np.arange(1, m_max + 1)
    best_m = int(counts[np.argmin(_eta("transfer", params, counts))])
    best_m1 = int(counts[np.argmin(_eta("standard", params, counts))])
    return best_m, best_m1


def sensitivity_report(
    params: SensitivityParams, m_max: Optional[int] = None, optimize: bool = True
) -> SensitivityReport:
    """
    Predicted comparison of the two protocols, optionally at the optimal
    detection counts.
    """
    if optimize:
        best_m, best_m1 = optimize_measurements(params, m_max)
        params = params.replace(detections=best_m, standard_detections=best_m1)
    ratio = eta_ratio(params)
    return SensitivityReport(
        t2_eff_h=t2_eff("transfer", params),
        t2_eff_1=t2_eff("standard", params),
        eta_ratio=ratio,
        snr_ratio_pred=1 / ratio,
        optimal_m=params.detections,
        optimal_m1=params.standard_detections,
        amplitude_factor=params.amplitude_factor,
    )


def null_distance(t2_nv: ArrayLike, omega: float) -> ArrayLike:
    """
    Relative distance of T2nv to the nearest null of 1 - cos(π T2nv Ω),
    which sit at T2nv = 2m/Ω for m >= 1.
    """
    t2_nv = np.asarray(t2_nv, dtype=float)
    order = np.maximum(np.round(t2_nv * omega / 2), 1)
    null = 2 * order / omega
    return np.abs(t2_nv - null) / null


def filter_ratio(t2_nv: ArrayLike, omega_h: float, omega_1: float) -> ArrayLike:
    """
    Ratio of the target and hydrogen NV filters, 1 - cos(π T2nv Ω). Above 1
    the hydrogen response has fallen below the target's. Infinite on a
    hydrogen null.
    """
    t2_nv = np.asarray(t2_nv, dtype=float)
    hydrogen = 1 - np.cos(math.pi * t2_nv * omega_h)
    target = 1 - np.cos(math.pi * t2_nv * omega_1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(hydrogen > 0, target / np.where(hydrogen > 0, hydrogen, 1), np.inf)
    return ratio if ratio.ndim else float(ratio)


def sweep_t2nv(
    params: SensitivityParams, grid: np.ndarray, m_max: Optional[int] = None
) -> pd.DataFrame:
    """
    Sensitivity ratio across NV coherence times, re-optimizing M and M1 at
    every point. A point is marked near_null when it sits within 2% of a
    null of the hydrogen response or when the hydrogen filter has dropped
    below the target filter (filter_ratio >= 1).

    :param params: sensitivity parameters
    :type params: SensitivityParams
    :param grid: NV coherence times in seconds
    :type grid: numpy.ndarray
    :param m_max: largest detection count searched
    :type m_max: int
    """
    grid = np.asarray(grid, dtype=float)
    low, high = defaults.t2nv_range
    if grid.size == 0 or grid.min() < low or grid.max() > high:
        raise ValidationError(f"T2nv grid must lie within [{low}, {high}] s")

    ratios, best_ms, best_m1s = [], [], []
    for done, t2_nv in enumerate(grid, start=1):
        point = params.replace(readout=params.readout.replace(t2_nv=float(t2_nv)))
        best_m, best_m1 = optimize_measurements(point, m_max)
        point = point.replace(detections=best_m, standard_detections=best_m1)
        ratios.append(eta_ratio(point))
        best_ms.append(best_m)
        best_m1s.append(best_m1)
        if done % 10 == 0 or done == grid.size:
            logger.progress(done, grid.size, "T2nv points")

    filters = np.asarray(filter_ratio(grid, params.omega_h, params.omega_1))
    return pd.DataFrame(
        {
            "t2_nv_s": grid,
            "eta_ratio": ratios,
            "optimal_m": best_ms,
            "optimal_m1": best_m1s,
            "filter_ratio": filters,
            "near_null": (null_distance(grid, params.omega_h) <= 0.02) | (filters >= 1),
        }
    )


@ensure_molecule
def sensitivity_table(
    molecule: Molecule,
    config: SequenceConfig,
    readout: Optional[ReadoutConfig] = None,
    m_max: Optional[int] = None,
) -> pd.DataFrame:
    """
    Predicted comparison in J-coupling mode (loading pi pulses on, target T2)
    and chemical-shift mode (pi pulses off, target T2*), each at its optimal
    detection counts.
    """
    rows = []
    for mode, pulses in (("j-coupling", True), ("chemical-shift", False)):
        params = SensitivityParams.from_config(
            molecule, replace(config, with_pi_pulses=pulses), readout
        )
        report = sensitivity_report(params, m_max)
        rows.append(
            {
                "mode": mode,
                "optimal_m": report.optimal_m,
                "optimal_m1": report.optimal_m1,
                "t2_eff_h_s": report.t2_eff_h,
                "t2_eff_1_s": report.t2_eff_1,
                "eta_ratio": report.eta_ratio,
                "snr_ratio_pred": report.snr_ratio_pred,
                "amplitude_factor": report.amplitude_factor,
            }
        )
    return pd.DataFrame(rows)
