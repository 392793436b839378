__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.linalg

import hytrans.defaults as defaults
from hytrans.decorator import ensure_environment, ensure_molecule
from hytrans.errors import CapacityError, NumericalCheckError, ValidationError
from hytrans.logger import logger
from hytrans.molecule import (
    Environment,
    Molecule,
    boltzmann_factor,
    classify_pairs,
    thermal_state,
)
from hytrans.spin import (
    DensityMatrix,
    SpinOperator,
    check_capacity,
    conjugate,
    expectation,
    flip_flop_indices,
    propagator,
    pulse_unitary,
    total_z,
    z_diagonal,
)

if TYPE_CHECKING:
    from hytrans.readout import ReadoutConfig

PROTOCOLS = ("transfer", "standard")
STAGES = ("transfer", "loading")
MODES = ("effective", "explicit")


def protocol_name(protocol: str) -> str:
    """
    Canonical protocol name ("ours" is accepted for the transfer protocol).
    """
    protocol = "transfer" if protocol == "ours" else protocol
    if protocol not in PROTOCOLS:
        raise ValidationError(f"Unknown protocol {protocol}, choose one of {PROTOCOLS}")
    return protocol


@dataclass
class SequenceConfig:
    """
    Timing and switches of one protocol run.

    detections is the hydrogen detection count M per block, and
    standard_detections the target count M1 used by the standard protocol
    (defaults to M). t_rf, when set, overrides the hydrogen detection unit.
    """

    transfer_time: float
    loading_time: float
    blocks: int
    detections: int = 1
    standard_detections: Optional[int] = None
    t_rf: Optional[float] = None
    with_pi_pulses: bool = True
    mode: str = "effective"
    target: Optional[str] = None

    def __post_init__(self):
        if not self.transfer_time > 0:
            raise ValidationError(f"Transfer time must be > 0, got {self.transfer_time}")
        if not self.loading_time > 0:
            raise ValidationError(f"Loading time must be > 0, got {self.loading_time}")
        if self.blocks < 1:
            raise ValidationError(f"At least one block is needed, got {self.blocks}")
        if self.detections < 1 or self.m1 < 1:
            raise ValidationError("Detection counts must be >= 1")
        if self.t_rf is not None and not self.t_rf > 0:
            raise ValidationError(f"RF rotation time must be > 0, got {self.t_rf}")
        if self.mode not in MODES:
            raise ValidationError(f"Unknown engine mode {self.mode}, choose one of {MODES}")

    @property
    def m1(self) -> int:
        return self.standard_detections or self.detections

    @classmethod
    def from_dict(cls, block: dict) -> "SequenceConfig":
        """
        Build from the sequence block of a run document.
        """
        return cls(
            transfer_time=block["t_s"],
            loading_time=block["tau_s"],
            blocks=block["n"],
            detections=block.get("m", 1),
            standard_detections=block.get("m1"),
            t_rf=block.get("t_rf_s"),
            with_pi_pulses=block.get("pi_pulses", True),
            mode=block.get("mode", "effective"),
            target=block.get("target"),
        )

    def to_dict(self) -> dict:
        return {
            "t_s": self.transfer_time,
            "tau_s": self.loading_time,
            "n": self.blocks,
            "m": self.detections,
            "m1": self.m1,
            "t_rf_s": self.t_rf,
            "pi_pulses": self.with_pi_pulses,
            "mode": self.mode,
            "target": self.target,
        }


class Timing(NamedTuple):
    gamma: float
    omega: float
    unit_time: float
    detections: int
    block_time: float


def detection_unit(
    omega: float, rotation_periods: int = 1, dead_time: float = 0.0
) -> float:
    """
    Duration of one detection unit: whole RF nutation periods plus dead time.
    """
    return rotation_periods * 2 * math.pi / omega + dead_time


def target_index(molecule: Molecule, label: Optional[str] = None) -> int:
    """
    The interrogated target: the labelled nucleus, else the first target.
    """
    if label is not None:
        index = molecule.index(label)
        if molecule.nuclei[index].role != "target":
            raise ValidationError(f"Nucleus {label} does not have the target role")
        return index
    if not molecule.targets:
        raise ValidationError(f"{molecule.name} has no target nucleus")
    return molecule.targets[0]


def emitter_timing(
    molecule: Molecule,
    config: SequenceConfig,
    protocol: str,
    readout: Optional["ReadoutConfig"] = None,
) -> Timing:
    """
    Emitter gyromagnetic ratio, RF Rabi frequency, detection unit, detection
    count and block duration of a protocol.

    The target is driven by the same RF field as hydrogen, so its Rabi
    frequency is scaled by |gamma_1| / gamma_H.
    """
    protocol = protocol_name(protocol)
    omega_h = readout.omega if readout is not None else defaults.readout.omega
    periods = (
        readout.rotation_periods
        if readout is not None
        else defaults.readout.rotation_periods
    )
    dead_time = readout.dead_time if readout is not None else defaults.readout.dead_time
    if not molecule.hydrogens:
        raise ValidationError(f"{molecule.name} has no hydrogen nucleus")
    gamma_h = molecule.nuclei[molecule.hydrogens[0]].gamma

    if protocol == "transfer":
        unit = config.t_rf or detection_unit(omega_h, periods, dead_time)
        block = 2 * config.transfer_time + config.loading_time + config.detections * unit
        return Timing(gamma_h, omega_h, unit, config.detections, block)

    gamma = molecule.nuclei[target_index(molecule, config.target)].gamma
    omega = omega_h * abs(gamma) / abs(gamma_h)
    unit = detection_unit(omega, periods, dead_time)
    block = config.loading_time + config.m1 * unit
    return Timing(gamma, omega, unit, config.m1, block)


@dataclass(frozen=True, eq=False)
class SignalTrace:
    """
    Block-indexed emitter expectation values.

    values are Tr(rho Sz) summed over the emitter (hydrogens for the transfer
    protocol, the target for the standard one). full_scale is the fully
    polarized hydrogen signal B_H N_H / 4, so values / full_scale is the
    polarization fraction read by the NV ensemble. readout holds the noisy
    NV estimate once sampled.
    """

    times: np.ndarray
    values: np.ndarray
    emitter: str = "hydrogen"
    attenuation_applied: bool = False
    protocol: str = "transfer"
    full_scale: float = 1.0
    gamma: float = defaults.gyromagnetic_ratios["1H"]
    omega: float = defaults.readout.omega
    unit_time: float = 2 * math.pi / defaults.readout.omega
    detections: int = 1
    block_time: float = 0.0
    environment: Optional[Environment] = None
    readout: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValidationError(
                f"Trace times {times.shape} and values {values.shape} do not match"
            )
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValidationError("Trace times must be strictly increasing")
        if self.readout is not None:
            noisy = np.asarray(self.readout, dtype=float)
            if noisy.shape != values.shape:
                raise ValidationError("Readout and values must have the same length")
            object.__setattr__(self, "readout", noisy)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def normalized(self) -> np.ndarray:
        return self.values / self.full_scale

    def replace(self, **changes) -> "SignalTrace":
        return replace(self, **changes)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "k": np.arange(1, self.n + 1),
                "t_s": self.times,
                "expectation": self.values,
                "noisy_readout": (
                    self.readout if self.readout is not None else np.full(self.n, np.nan)
                ),
            }
        )


# Hamiltonians


def _channel(molecule: Molecule, index: int) -> str:
    return molecule.nuclei[index].role


def _assemble(
    molecule: Molecule,
    pairs: Iterable[Tuple[int, int]],
    shifts: Iterable[int],
    classes: Dict[Tuple[int, int], str],
) -> SpinOperator:
    """
    Dense Hamiltonian from chemical-shift terms and classified couplings:
    zz for het/neq pairs and the full dot product for eq pairs.
    """
    n = molecule.size
    check_capacity(n)
    zs: Dict[int, np.ndarray] = {}

    def z(site):
        if site not in zs:
            zs[site] = z_diagonal(n, site)
        return zs[site]

    diagonal = np.zeros(2**n)
    for i in shifts:
        if molecule.nuclei[i].chemical_shift:
            diagonal += molecule.nuclei[i].chemical_shift * z(i)

    flips = []
    for i, j in pairs:
        coupling = molecule.coupling(i, j)
        if not coupling:
            continue
        diagonal += coupling * z(i) * z(j)
        if classes[(i, j)] == "eq":
            flips.append((i, j, coupling))

    entries = np.diag(diagonal).astype(complex)
    for i, j, coupling in flips:
        rows, cols = flip_flop_indices(n, i, j)
        entries[rows, cols] += coupling / 2
    return SpinOperator(entries, hermitian=True)


def _all_pairs(molecule: Molecule) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(molecule.size) for j in range(i + 1, molecule.size)]


def full_hamiltonian(molecule: Molecule, env: Optional[Environment] = None) -> SpinOperator:
    """
    Rotating-frame Hamiltonian with every chemical shift and every coupling in
    its secular form.
    """
    classes = classify_pairs(molecule, env)
    return _assemble(molecule, _all_pairs(molecule), range(molecule.size), classes)


def effective_hamiltonian(
    molecule: Molecule, stage: str, with_pi_pulses: bool = True
) -> SpinOperator:
    """
    Average Hamiltonian of a stage once its refocusing pulses are accounted for.

    transfer keeps hydrogen-target couplings and the couplings inside each
    pulsed channel (hydrogen-hydrogen, target-target, other-other). loading
    keeps couplings among non-hydrogen nuclei and among hydrogens, plus the
    non-hydrogen chemical shifts when the midway pi pulses are off.

    :param molecule: the spin system
    :type molecule: Molecule
    :param stage: transfer or loading
    :type stage: str
    :param with_pi_pulses: loading pi pulses on the non-hydrogen channels
    :type with_pi_pulses: bool
    """
    if stage not in STAGES:
        raise ValidationError(f"Unknown stage {stage}, choose one of {STAGES}")
    classes = classify_pairs(molecule)
    shifts: Iterable[int] = ()
    if stage == "transfer":
        pairs = [
            (i, j)
            for i, j in _all_pairs(molecule)
            if _channel(molecule, i) == _channel(molecule, j)
            or {_channel(molecule, i), _channel(molecule, j)} == {"hydrogen", "target"}
        ]
    else:
        pairs = [
            (i, j)
            for i, j in _all_pairs(molecule)
            if (_channel(molecule, i) == "hydrogen") == (_channel(molecule, j) == "hydrogen")
        ]
        if not with_pi_pulses:
            shifts = [i for i, n in enumerate(molecule.nuclei) if n.role != "hydrogen"]
    H = _assemble(molecule, pairs, shifts, classes)
    logger.debug(
        f"{stage} Hamiltonian for {molecule.name}: {len(pairs)} pair terms, dimension {H.dim}"
    )
    return H


# Transfer stage


def _transfer_pulses(molecule: Molecule) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pulses bracketing the transfer evolution: before, hydrogens +pi/2 about y
    and targets -pi/2 about y; after, hydrogens +pi/2 about x and targets
    -pi/2 about y.
    """
    half = math.pi / 2
    before = {h: ("y", half) for h in molecule.hydrogens}
    after = {h: ("x", half) for h in molecule.hydrogens}
    for j in molecule.targets:
        before[j] = after[j] = ("y", -half)
    return pulse_unitary(molecule.size, before), pulse_unitary(molecule.size, after)


def transfer_propagator(molecule: Molecule, t: float) -> np.ndarray:
    """
    Unitary of one transfer stage of duration t, pulses included.
    """
    before, after = _transfer_pulses(molecule)
    evolution = propagator(effective_hamiltonian(molecule, "transfer"), t)
    return after @ evolution @ before


def run_transfer(
    rho: DensityMatrix, molecule: Molecule, t: float, direction: str = "forward"
) -> DensityMatrix:
    """
    Apply a transfer stage (forward) or its exact inverse (rewind).

    A stage of zero length is skipped, pulses included.

    :param rho: the state
    :type rho: DensityMatrix
    :param molecule: the spin system
    :type molecule: Molecule
    :param t: transfer time in seconds
    :type t: float
    :param direction: forward or rewind
    :type direction: str
    """
    if direction not in ("forward", "rewind"):
        raise ValidationError(f"Unknown direction {direction}, choose forward or rewind")
    if t < 0:
        raise ValidationError(f"Transfer time must be >= 0, got {t}")
    if t == 0:
        return rho
    unitary = transfer_propagator(molecule, t)
    if direction == "rewind":
        unitary = unitary.conj().T
    return conjugate(rho, unitary)


# Effective engine


def _block_trace(
    rho: np.ndarray,
    prepare: np.ndarray,
    loading: SpinOperator,
    tau: float,
    blocks: int,
    observable: np.ndarray,
    store: np.ndarray,
) -> np.ndarray:
    """
    Tr(L^k sigma L^-k . store^dagger O store) for k = 1..blocks, where sigma is
    the prepared state and L the loading propagator.

    The recursion runs in the eigenbasis of the loading Hamiltonian, where a
    block multiplies every coherence by a fixed phase. The rewind that follows
    each readout undoes the store exactly, so the stored state never needs to
    be carried from block to block.
    """
    energies, vectors = scipy.linalg.eigh(loading.entries)
    sigma = prepare @ rho @ prepare.conj().T
    sigma = vectors.conj().T @ sigma @ vectors
    measured = store.conj().T @ observable @ store
    measured_t = (vectors.conj().T @ measured @ vectors).T.copy()
    phase = np.exp(-1j * np.subtract.outer(energies, energies) * tau)

    values = np.empty(blocks)
    for k in range(blocks):
        sigma *= phase
        value = np.sum(sigma * measured_t)
        if abs(value.imag) > defaults.imaginary_tol:
            raise NumericalCheckError(
                f"Block {k + 1} expectation has imaginary part {value.imag:.3e}"
            )
        values[k] = value.real
    return values


def _check_roles(molecule: Molecule):
    if not molecule.hydrogens:
        raise ValidationError(f"{molecule.name} has no hydrogen nucleus")
    if not molecule.targets:
        raise ValidationError(f"{molecule.name} has no target nucleus")


def _full_scale(molecule: Molecule, env: Environment) -> float:
    gamma_h = molecule.nuclei[molecule.hydrogens[0]].gamma
    return boltzmann_factor(gamma_h, env) * len(molecule.hydrogens) / 4


def make_trace(
    values: np.ndarray,
    molecule: Molecule,
    env: Environment,
    config: SequenceConfig,
    protocol: str,
    readout: Optional["ReadoutConfig"],
) -> SignalTrace:
    timing = emitter_timing(molecule, config, protocol, readout)
    return SignalTrace(
        times=config.loading_time * np.arange(1, config.blocks + 1),
        values=values,
        emitter="hydrogen" if protocol == "transfer" else "target",
        protocol=protocol,
        full_scale=_full_scale(molecule, env),
        gamma=timing.gamma,
        omega=timing.omega,
        unit_time=timing.unit_time,
        detections=timing.detections,
        block_time=timing.block_time,
        environment=env,
    )


@ensure_molecule
@ensure_environment
def run_protocol(
    molecule: Molecule,
    env: Optional[Environment],
    config: SequenceConfig,
    readout: Optional["ReadoutConfig"] = None,
) -> SignalTrace:
    """
    Run the hydrogen-transfer protocol and return the hydrogen Sz sampled in
    every block, after the second transfer stage.

    Detection leaves the nuclear state unchanged, and the rewind stage undoes
    the second transfer, so each block amounts to one loading evolution.

    :param molecule: the spin system (or a reference to load)
    :type molecule: Molecule
    :param env: field and temperature (defaults to the molecule's)
    :type env: Environment
    :param config: sequence timing and switches
    :type config: SequenceConfig
    :param readout: readout settings used for the detection timing
    :type readout: ReadoutConfig
    """
    _check_roles(molecule)
    check_capacity(molecule.size)
    if config.mode == "explicit":
        return run_explicit_pulse_check(molecule, env, config, readout)

    rho = thermal_state(molecule, env).entries
    transfer = transfer_propagator(molecule, config.transfer_time)
    loading = effective_hamiltonian(molecule, "loading", config.with_pi_pulses)
    observable = total_z(molecule.size, molecule.hydrogens).entries
    values = _block_trace(
        rho, transfer, loading, config.loading_time, config.blocks, observable, transfer
    )
    logger.debug(f"Transfer protocol on {molecule.name}: {config.blocks} blocks")
    return make_trace(values, molecule, env, config, "transfer", readout)


def _standard_state(
    molecule: Molecule, env: Environment, target: int
) -> Tuple[DensityMatrix, np.ndarray]:
    """
    Thermal state with the target prepolarized to the hydrogen Boltzmann
    factor, and the pi/2 pulse about y that excites (and later stores) it.
    """
    gamma_h = molecule.nuclei[molecule.hydrogens[0]].gamma
    rho = thermal_state(molecule, env, {target: boltzmann_factor(gamma_h, env)})
    pulse = pulse_unitary(molecule.size, {target: ("y", math.pi / 2)})
    return rho, pulse


@ensure_molecule
@ensure_environment
def run_standard_protocol(
    molecule: Molecule,
    env: Optional[Environment],
    config: SequenceConfig,
    readout: Optional["ReadoutConfig"] = None,
) -> SignalTrace:
    """
    Run the standard baseline: a prepolarized target is excited, loaded and
    read out directly, with no hydrogen transfer.
    """
    _check_roles(molecule)
    check_capacity(molecule.size)
    if config.mode == "explicit":
        return run_explicit_pulse_check(molecule, env, config, readout, "standard")

    target = target_index(molecule, config.target)
    rho, pulse = _standard_state(molecule, env, target)
    loading = effective_hamiltonian(molecule, "loading", config.with_pi_pulses)
    observable = SpinOperator.diagonal(z_diagonal(molecule.size, target)).entries
    values = _block_trace(
        rho.entries,
        pulse,
        loading,
        config.loading_time,
        config.blocks,
        observable,
        pulse,
    )
    logger.debug(
        f"Standard protocol on {molecule.name} target {molecule.labels[target]}: "
        f"{config.blocks} blocks"
    )
    return make_trace(values, molecule, env, config, "standard", readout)


# Explicit engine

Step = Tuple[str, object, float]


def _pi(sites: Iterable[int]) -> Dict[int, Tuple[str, float]]:
    return {site: ("x", math.pi) for site in sites}


def _explicit_transfer_steps(molecule: Molecule, t: float) -> List[Step]:
    """
    pi pulses on hydrogens and targets at t/2 and t, on other nuclei at t/4
    and 3t/4, bracketed by the transfer pi/2 pulses.
    """
    half = math.pi / 2
    before = {h: ("y", half) for h in molecule.hydrogens}
    after = {h: ("x", half) for h in molecule.hydrogens}
    for j in molecule.targets:
        before[j] = after[j] = ("y", -half)
    paired = _pi(molecule.hydrogens + molecule.targets)
    others = _pi(molecule.others)
    quarter = t / 4
    return [
        ("pulse", before, 0.0),
        ("evolve", None, quarter),
        ("pulse", others, 0.0),
        ("evolve", None, quarter),
        ("pulse", paired, 0.0),
        ("evolve", None, quarter),
        ("pulse", others, 0.0),
        ("evolve", None, quarter),
        ("pulse", paired, 0.0),
        ("pulse", after, 0.0),
    ]


def _explicit_loading_steps(molecule: Molecule, tau: float, with_pi_pulses: bool) -> List[Step]:
    """
    pi pulses on hydrogens at tau/4 and 3tau/4 and, with pi pulses on, on every
    non-hydrogen at tau/2 and tau.
    """
    hydrogens = _pi(molecule.hydrogens)
    rest = _pi(i for i in range(molecule.size) if i not in molecule.hydrogens)
    if not with_pi_pulses:
        rest = {}
    quarter = tau / 4
    return [
        ("evolve", None, quarter),
        ("pulse", hydrogens, 0.0),
        ("evolve", None, quarter),
        ("pulse", rest, 0.0),
        ("evolve", None, quarter),
        ("pulse", hydrogens, 0.0),
        ("evolve", None, quarter),
        ("pulse", rest, 0.0),
    ]


def _compile(steps: List[Step], size: int, H: SpinOperator, rewind: bool = False):
    """
    Turn steps into the unitaries applied in order, reversed with negated
    Hamiltonian and angles for a rewind.
    """
    if rewind:
        steps = [
            (kind, {s: (a, -angle) for s, (a, angle) in rotations.items()}, duration)
            if kind == "pulse"
            else (kind, rotations, duration)
            for kind, rotations, duration in reversed(steps)
        ]
        H = -H
    cache: Dict[float, np.ndarray] = {}
    unitaries = []
    for kind, rotations, duration in steps:
        if kind == "pulse":
            if rotations:
                unitaries.append(pulse_unitary(size, rotations))
        elif duration > 0:
            if duration not in cache:
                cache[duration] = propagator(H, duration)
            unitaries.append(cache[duration])
    return unitaries


def _apply(rho: DensityMatrix, unitaries: List[np.ndarray]) -> DensityMatrix:
    for unitary in unitaries:
        rho = conjugate(rho, unitary)
    return rho


@ensure_molecule
@ensure_environment
def run_explicit_pulse_check(
    molecule: Molecule,
    env: Optional[Environment],
    config: SequenceConfig,
    readout: Optional["ReadoutConfig"] = None,
    protocol: str = "transfer",
) -> SignalTrace:
    """
    Run a protocol pulse by pulse under the full Hamiltonian, chemical shifts
    included, with every block applied literally (transfer, loading, readout
    transfer, rewind). Limited to small molecules.

    :param molecule: the spin system (or a reference to load)
    :type molecule: Molecule
    :param env: field and temperature
    :type env: Environment
    :param config: sequence timing and switches
    :type config: SequenceConfig
    :param readout: readout settings used for the detection timing
    :type readout: ReadoutConfig
    :param protocol: transfer or standard
    :type protocol: str
    """
    protocol = protocol_name(protocol)
    _check_roles(molecule)
    if molecule.size > defaults.max_explicit_spins:
        raise CapacityError(
            f"Explicit pulse mode accepts at most {defaults.max_explicit_spins} spins, "
            f"{molecule.name} has {molecule.size}"
        )
    H = full_hamiltonian(molecule, env)
    size = molecule.size
    loading = _compile(
        _explicit_loading_steps(molecule, config.loading_time, config.with_pi_pulses),
        size,
        H,
    )

    if protocol == "transfer":
        rho = thermal_state(molecule, env)
        transfer = _explicit_transfer_steps(molecule, config.transfer_time)
        prepare = _compile(transfer, size, H)
        readout_steps = prepare
        rewind = _compile(transfer, size, H, rewind=True)
        observable = total_z(size, molecule.hydrogens)
    else:
        target = target_index(molecule, config.target)
        rho, pulse = _standard_state(molecule, env, target)
        prepare = readout_steps = [pulse]
        rewind = [pulse.conj().T]
        observable = SpinOperator.diagonal(z_diagonal(size, target))

    rho = _apply(rho, prepare)
    values = np.empty(config.blocks)
    for k in range(config.blocks):
        rho = _apply(rho, loading)
        stored = _apply(rho, readout_steps)
        values[k] = expectation(stored, observable)
        rho = _apply(stored, rewind)
    logger.debug(f"Explicit {protocol} protocol on {molecule.name}: {config.blocks} blocks")
    return make_trace(values, molecule, env, config, protocol, readout)


def apply_dephasing(
    trace: SignalTrace,
    molecule: Molecule,
    config: SequenceConfig,
    readout: Optional["ReadoutConfig"] = None,
) -> SignalTrace:
    """
    Multiply value k by exp(-k tau / T2eff), with the effective decoherence time
    of the trace's protocol.
    """
    import hytrans.sensitivity

    if trace.attenuation_applied:
        raise ValidationError("Dephasing was already applied to this trace")
    params = hytrans.sensitivity.SensitivityParams.from_config(molecule, config, readout)
    t2 = hytrans.sensitivity.t2_eff(trace.protocol, params)
    envelope = np.exp(-trace.times / t2)
    logger.debug(f"{trace.protocol} dephasing with T2eff = {t2:.4g} s")
    return trace.replace(values=trace.values * envelope, attenuation_applied=True)
