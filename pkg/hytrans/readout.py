__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
import pandas as pd
import scipy.constants

import hytrans.defaults as defaults
from hytrans.errors import ValidationError
from hytrans.logger import logger
from hytrans.molecule import Environment
from hytrans.sequence import SignalTrace
from hytrans.types import seed_type

# electron gyromagnetic ratio, rad s^-1 T^-1
gamma_electron = scipy.constants.physical_constants["electron gyromag. ratio"][0]


@dataclass(frozen=True)
class ReadoutConfig:
    """
    NV ensemble readout settings.

    omega is the hydrogen RF Rabi frequency (rad/s); rho_h the hydrogen
    density (m^-3); f3 the sample geometry factor; gamma_h the hydrogen
    gyromagnetic ratio used for the classical sample field.
    """

    omega: float = defaults.readout.omega
    t2_nv: float = defaults.readout.t2_nv
    contrast: float = defaults.readout.contrast
    t_exp: float = defaults.readout.t_exp
    rho_h: float = defaults.readout.rho_h
    f3: float = defaults.readout.f3
    gamma_h: float = defaults.gamma_h_field
    shot_noise: float = defaults.readout.shot_noise
    rotation_periods: int = defaults.readout.rotation_periods
    dead_time: float = defaults.readout.dead_time
    samples_per_period: int = defaults.readout.samples_per_period

    def __post_init__(self):
        if not 0 < self.contrast <= 1:
            raise ValidationError(f"Contrast must be in (0, 1], got {self.contrast}")
        for name in ("omega", "t2_nv", "t_exp", "rho_h"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"Readout {name} must be > 0, got {getattr(self, name)}")
        if self.shot_noise < 0 or self.dead_time < 0:
            raise ValidationError("Shot noise and dead time must be >= 0")
        if self.rotation_periods < 1:
            raise ValidationError("A detection unit needs at least one rotation period")

    def replace(self, **changes) -> "ReadoutConfig":
        return replace(self, **changes)

    @classmethod
    def from_dict(cls, block: Optional[dict]) -> "ReadoutConfig":
        """
        Build from the readout block of a run document (frequencies in Hz).
        """
        block = block or {}
        base = cls()
        return cls(
            omega=2 * math.pi * block["omega_hz"] if "omega_hz" in block else base.omega,
            t2_nv=block.get("t2_nv_s", base.t2_nv),
            contrast=block.get("contrast", base.contrast),
            t_exp=block.get("t_exp_s", base.t_exp),
            rho_h=block.get("rho_h_per_m3", base.rho_h),
            f3=block.get("f3", base.f3),
            gamma_h=(
                2 * math.pi * block["gamma_h_hz_per_tesla"]
                if "gamma_h_hz_per_tesla" in block
                else base.gamma_h
            ),
            shot_noise=block.get("shot_noise", base.shot_noise),
            rotation_periods=block.get("rotation_periods", base.rotation_periods),
            dead_time=block.get("dead_time_s", base.dead_time),
            samples_per_period=block.get("samples_per_period", base.samples_per_period),
        )

    def to_dict(self) -> dict:
        return {
            "omega_hz": self.omega / (2 * math.pi),
            "t2_nv_s": self.t2_nv,
            "contrast": self.contrast,
            "t_exp_s": self.t_exp,
            "rho_h_per_m3": self.rho_h,
            "f3": self.f3,
            "gamma_h_hz_per_tesla": self.gamma_h / (2 * math.pi),
            "shot_noise": self.shot_noise,
            "rotation_periods": self.rotation_periods,
            "dead_time_s": self.dead_time,
            "samples_per_period": self.samples_per_period,
        }


def b0_amplitude(
    env: Environment,
    readout: ReadoutConfig,
    expectation: Union[float, np.ndarray],
    gamma: Optional[float] = None,
) -> Union[float, np.ndarray]:
    """
    Classical field amplitude (Tesla) of the sample at a polarization fraction.

    B0 = (2π)² ħ² γ μ0 ρ_H B_z / (16 π k_B T) · F3 · expectation

    :param env: field and temperature
    :type env: Environment
    :param readout: density and geometry factor
    :type readout: ReadoutConfig
    :param expectation: polarization fraction(s) in [-1, 1]
    :type expectation: float or numpy.ndarray
    :param gamma: emitter gyromagnetic ratio (defaults to readout.gamma_h)
    :type gamma: float
    """
    values = np.asarray(expectation, dtype=float)
    if values.size and np.max(np.abs(values)) > 1 + 1e-12:
        raise ValidationError("Expectation values must lie in [-1, 1]")
    gamma = readout.gamma_h if gamma is None else gamma
    scale = (
        (2 * math.pi) ** 2
        * scipy.constants.hbar**2
        * gamma
        * scipy.constants.mu_0
        * readout.rho_h
        * env.b_field
        / (16 * math.pi * scipy.constants.k * env.temperature)
        * readout.f3
    )
    result = scale * values
    return result if result.ndim else float(result)


def nv_phase_factor(
    gamma_nuc: float,
    omega: float,
    t2_nv: Union[float, np.ndarray],
    expectation: Union[float, np.ndarray],
) -> Union[float, np.ndarray]:
    """
    Phase accumulated by the NV ensemble over one coherence window of a field
    oscillating at omega: 2 γe γ / Ω · x · (1 - cos(π T2nv Ω)).
    """
    if not omega > 0:
        raise ValidationError(f"Rabi frequency must be > 0, got {omega}")
    filtered = 1 - np.cos(math.pi * np.asarray(t2_nv, dtype=float) * omega)
    result = 2 * gamma_electron * gamma_nuc / omega * np.asarray(expectation) * filtered
    return result if np.ndim(result) else float(result)


def nv_signal(trace: SignalTrace, readout: ReadoutConfig) -> np.ndarray:
    """
    Noiseless NV observable of every block of a trace.
    """
    env = trace.environment or Environment()
    field = b0_amplitude(env, readout, trace.normalized, gamma=trace.gamma)
    return np.asarray(nv_phase_factor(trace.gamma, trace.omega, readout.t2_nv, field))


def averaging_count(trace: SignalTrace, readout: ReadoutConfig) -> float:
    """
    Number of times the whole protocol fits in the experiment time.
    """
    if not trace.block_time > 0:
        raise ValidationError("Trace carries no block duration")
    repetitions = readout.t_exp / (trace.n * trace.block_time)
    if repetitions < 1:
        raise ValidationError(
            f"Experiment time {readout.t_exp} s is shorter than one protocol "
            f"run of {trace.n * trace.block_time:.4g} s"
        )
    return repetitions


def noise_level(trace: SignalTrace, readout: ReadoutConfig) -> float:
    """
    Standard deviation of the per-block NV estimate.
    """
    repetitions = averaging_count(trace, readout)
    return readout.shot_noise / (
        readout.contrast * math.sqrt(repetitions * trace.detections)
    )


def sample_readout(
    trace: SignalTrace, readout: ReadoutConfig, seed: seed_type = None
) -> SignalTrace:
    """
    Draw a noisy NV readout for every block of a trace.

    The estimate is Gaussian around the noiseless NV observable, with a
    standard deviation set by contrast, detections per block and the number
    of repetitions that fit in the experiment time.

    :param trace: the (possibly dephased) trace
    :type trace: SignalTrace
    :param readout: readout settings
    :type readout: ReadoutConfig
    :param seed: seed for numpy's default generator
    :type seed: int or SeedSequence
    """
    sigma = noise_level(trace, readout)
    rng = np.random.default_rng(seed)
    noisy = nv_signal(trace, readout) + rng.normal(0.0, sigma, trace.n)
    logger.debug(f"{trace.protocol} readout noise {sigma:.4g} per block")
    return trace.replace(readout=noisy)


def synthesize_field(trace: SignalTrace, readout: ReadoutConfig) -> pd.DataFrame:
    """
    Time-domain field of the emitters during every detection window.

    Block k contributes its detection units after the loading (and transfer)
    stages; consecutive units alternate sign and each holds rotation_periods
    periods of sin(Ω t) scaled by the block's field amplitude.

    :param trace: the trace to render
    :type trace: SignalTrace
    :param readout: readout settings
    :type readout: ReadoutConfig
    """
    if readout.samples_per_period < defaults.readout.samples_per_period:
        raise ValidationError(
            f"At least {defaults.readout.samples_per_period} samples per period "
            f"are needed, got {readout.samples_per_period}"
        )
    env = trace.environment or Environment()
    amplitudes = b0_amplitude(env, readout, trace.normalized, gamma=trace.gamma)
    amplitudes = np.atleast_1d(amplitudes)

    period = 2 * math.pi / trace.omega
    per_unit = readout.samples_per_period * readout.rotation_periods
    offsets = np.arange(per_unit) * period / readout.samples_per_period
    wave = np.sin(trace.omega * offsets)
    units = np.arange(trace.detections)
    signs = np.where(units % 2 == 0, 1.0, -1.0)

    lead = trace.block_time - trace.detections * trace.unit_time
    starts = np.arange(trace.n) * trace.block_time + lead
    times = (
        starts[:, None, None]
        + units[None, :, None] * trace.unit_time
        + offsets[None, None, :]
    )
    field = amplitudes[:, None, None] * signs[None, :, None] * wave[None, None, :]
    blocks = np.broadcast_to(np.arange(1, trace.n + 1)[:, None, None], times.shape)
    return pd.DataFrame(
        {
            "block": blocks.ravel(),
            "t_s": times.ravel(),
            "field_t": field.ravel(),
        }
    )
