__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import itertools
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np
import scipy.optimize

import hytrans.defaults as defaults
from hytrans.decorator import ensure_environment, ensure_molecule
from hytrans.errors import ValidationError
from hytrans.logger import logger
from hytrans.molecule import Environment, Molecule, boltzmann_factor, classify_pairs
from hytrans.sequence import (
    SequenceConfig,
    SignalTrace,
    make_trace,
    protocol_name,
    target_index,
)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class AmplitudeBreakdown:
    """
    Transfer amplitude of a molecule at one transfer time.

    first_order sums, over hydrogens i and targets j, the share of hydrogen i
    polarization carried by target j. per_target holds the same sum split by
    target and per_hydrogen split by hydrogen. third_order sums distinct
    target triples and is never folded into first_order.
    """

    first_order: float
    third_order: float = 0.0
    per_hydrogen: Tuple[float, ...] = ()
    per_target: Dict[int, float] = field(default_factory=dict)
    triples: Dict[Tuple[int, int, int], float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "first_order": self.first_order,
            "third_order": self.third_order,
            "per_hydrogen": list(self.per_hydrogen),
        }


def _loading_partners(molecule: Molecule, target: int) -> Dict[int, float]:
    classes = classify_pairs(molecule)
    return {
        j: coupling
        for j, coupling in molecule.partners(target).items()
        if molecule.nuclei[j].role != "hydrogen" and classes[(target, j)] != "eq"
    }


def c_factor(
    molecule: Molecule,
    ktau: ArrayLike,
    with_shifts: bool = False,
    target: Optional[int] = None,
) -> ArrayLike:
    """
    Loading modulation of a target: the product of cos(J kτ/2) over its
    inequivalent non-hydrogen partners, times cos(δ kτ) when the chemical
    shift is not refocused.

    :param molecule: the spin system
    :type molecule: Molecule
    :param ktau: elapsed loading time(s) in seconds
    :type ktau: float or numpy.ndarray
    :param with_shifts: keep the target chemical shift (no pi pulses)
    :type with_shifts: bool
    :param target: target index (defaults to the first target)
    :type target: int
    """
    if target is None:
        target = target_index(molecule)
    if molecule.nuclei[target].role != "target":
        raise ValidationError(f"Nucleus {molecule.labels[target]} is not a target")
    ktau = np.asarray(ktau, dtype=float)
    result = np.ones_like(ktau)
    for coupling in _loading_partners(molecule, target).values():
        result = result * np.cos(coupling * ktau / 2)
    if with_shifts:
        result = result * np.cos(molecule.nuclei[target].chemical_shift * ktau)
    return result if result.ndim else float(result)


def _hydrogen_terms(molecule: Molecule, t: ArrayLike) -> Dict[Tuple[int, int], np.ndarray]:
    """
    sin²(J_ij t/2) Π_{k≠j} cos²(J_ik t/2) for every hydrogen i and target j.
    """
    t = np.asarray(t, dtype=float)
    terms = {}
    for i in molecule.hydrogens:
        sines = {j: np.sin(molecule.coupling(i, j) * t / 2) ** 2 for j in molecule.targets}
        for j in molecule.targets:
            value = sines[j]
            for k in molecule.targets:
                if k != j:
                    value = value * (1 - sines[k])
            terms[(i, j)] = value
    return terms


def first_order_amplitude(molecule: Molecule, t: ArrayLike) -> ArrayLike:
    """
    First-order transfer amplitude, vectorized over t.
    """
    terms = _hydrogen_terms(molecule, t)
    total = sum(terms.values(), np.zeros_like(np.asarray(t, dtype=float)))
    return total if np.ndim(total) else float(total)


@ensure_molecule
def general_amplitude(molecule: Molecule, t: float) -> AmplitudeBreakdown:
    """
    Transfer amplitude of a general molecule at transfer time t.

    Homonuclear hydrogen couplings are not part of this expression.

    :param molecule: the spin system (or a reference to load)
    :type molecule: Molecule
    :param t: transfer time in seconds
    :type t: float
    """
    if not molecule.hydrogens or not molecule.targets:
        raise ValidationError(f"{molecule.name} needs a hydrogen and a target")
    terms = _hydrogen_terms(molecule, t)
    per_hydrogen = tuple(
        float(sum(terms[(i, j)] for j in molecule.targets)) for i in molecule.hydrogens
    )
    per_target = {
        j: float(sum(terms[(i, j)] for i in molecule.hydrogens)) for j in molecule.targets
    }

    triples = {}
    for triple in itertools.combinations(molecule.targets, 3):
        value = 0.0
        for i in molecule.hydrogens:
            product = 1.0
            for k in molecule.targets:
                s2 = float(np.sin(molecule.coupling(i, k) * t / 2) ** 2)
                product *= s2 if k in triple else 1 - s2
            value += product
        triples[triple] = value

    first = float(sum(per_hydrogen))
    third = float(sum(triples.values()))
    if first > 0 and third > defaults.third_order_warning * first:
        logger.warning(
            f"{molecule.name}: third-order amplitude {third:.3g} exceeds "
            f"{defaults.third_order_warning:.0%} of first order {first:.3g}"
        )
    return AmplitudeBreakdown(
        first_order=first,
        third_order=third,
        per_hydrogen=per_hydrogen,
        per_target=per_target,
        triples=triples,
    )


@ensure_molecule
@ensure_environment
def oracle_trace(
    molecule: Molecule,
    env: Optional[Environment],
    config: SequenceConfig,
    include_third_order: bool = False,
    protocol: str = "transfer",
    readout=None,
) -> SignalTrace:
    """
    Closed-form block trace: -B_H/4 times the transfer amplitude of each
    target times its loading modulation, summed over targets.

    The standard protocol has amplitude one on the interrogated target.
    """
    protocol = protocol_name(protocol)
    if not molecule.hydrogens or not molecule.targets:
        raise ValidationError(f"{molecule.name} needs a hydrogen and a target")
    b_h = boltzmann_factor(molecule.nuclei[molecule.hydrogens[0]].gamma, env)
    times = config.loading_time * np.arange(1, config.blocks + 1)
    with_shifts = not config.with_pi_pulses

    def modulation(j):
        return c_factor(molecule, times, with_shifts, j)

    if protocol == "standard":
        values = -b_h / 4 * modulation(target_index(molecule, config.target))
    else:
        amplitude = general_amplitude(molecule, config.transfer_time)
        values = np.zeros_like(times)
        for j, share in amplitude.per_target.items():
            values = values + share * modulation(j)
        if include_third_order:
            for triple, share in amplitude.triples.items():
                product = np.ones_like(times)
                for j in triple:
                    product = product * modulation(j)
                values = values + share * product
        values = -b_h / 4 * values
    return make_trace(values, molecule, env, config, protocol, readout)


@ensure_molecule
def optimal_transfer_time(
    molecule: Molecule, grid: Optional[np.ndarray] = None
) -> float:
    """
    Transfer time maximizing the first-order amplitude, searched on a grid
    (default 0.1 to 10 ms) and refined between the neighbours of the best
    grid point.
    """
    if grid is None:
        grid = np.linspace(1e-4, 1e-2, 2000)
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or np.any(grid <= 0):
        raise ValidationError("The transfer time grid needs two or more positive points")
    values = first_order_amplitude(molecule, grid)
    # the amplitude is periodic in t, keep the earliest lobe reaching the maximum
    best = int(np.flatnonzero(values >= (1 - 1e-3) * values.max())[0])
    while best + 1 < grid.size and values[best + 1] > values[best]:
        best += 1
    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, grid.size - 1)]
    result = scipy.optimize.minimize_scalar(
        lambda t: -first_order_amplitude(molecule, t),
        bounds=(low, high),
        method="bounded",
        options={"xatol": 1e-12},
    )
    t = float(result.x) if -result.fun >= values[best] else float(grid[best])
    logger.debug(f"{molecule.name}: optimal transfer time {t * 1e3:.4g} ms")
    return t
