__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math
from typing import List, Optional, Tuple

import numpy as np

import hytrans.defaults as defaults
from hytrans.analytic import general_amplitude, oracle_trace
from hytrans.errors import NumericalCheckError, ValidationError
from hytrans.logger import logger
from hytrans.molecule import Molecule, random_molecule
from hytrans.sequence import (
    PROTOCOLS,
    SequenceConfig,
    SignalTrace,
    run_explicit_pulse_check,
    run_protocol,
    run_standard_protocol,
    target_index,
)

from . import prepare

# blocks per random molecule check
random_blocks = 16


def deviation(reference: SignalTrace, other: SignalTrace) -> float:
    """
    Largest absolute difference of two traces relative to the full scale.
    """
    return float(np.max(np.abs(reference.values - other.values)) / reference.full_scale)


def corrupted_coupling(molecule: Molecule, target: int) -> Tuple[int, int]:
    """
    The coupling the corruption switch alters: the target's first non-hydrogen
    partner, else its coupling to the first hydrogen.
    """
    for partner, value in sorted(molecule.partners(target).items()):
        if value and partner not in molecule.hydrogens:
            return target, partner
    return molecule.hydrogens[0], target


def corrupt(molecule: Molecule, config: SequenceConfig) -> Molecule:
    """
    Flip the sign of one coupling and scale it by 1.1 (a pure sign flip is
    invisible, signals only see J through even functions).
    """
    i, j = corrupted_coupling(molecule, target_index(molecule, config.target))
    value = molecule.coupling(i, j)
    if not value:
        raise ValidationError(f"{molecule.name} has no coupling to corrupt")
    labels = molecule.labels
    logger.warning(
        f"Corrupting J({labels[i]}, {labels[j]}) = {value / (2 * math.pi):.4g} Hz "
        "in the explicit engine"
    )
    return molecule.with_coupling(i, j, -1.1 * value)


def oracle_applies(molecule: Molecule, config: SequenceConfig) -> Optional[str]:
    """
    Reason the closed form does not cover a molecule, or None.
    """
    hydrogens = molecule.hydrogens
    for a in hydrogens:
        for b in hydrogens:
            if a < b and molecule.coupling(a, b):
                return "homonuclear hydrogen couplings"
    amplitude = general_amplitude(molecule, config.transfer_time)
    if amplitude.third_order > defaults.third_order_warning * amplitude.first_order:
        return "a large third-order term"
    return None


def check_molecule(
    molecule: Molecule,
    config: SequenceConfig,
    readout=None,
    corrupt_j: bool = False,
) -> List[bool]:
    """
    Compare the fast engine against the closed form and the explicit engine
    for both protocols, returning one result per comparison run.
    """
    results = []
    skip = oracle_applies(molecule, config)
    explicit_molecule = corrupt(molecule, config) if corrupt_j else molecule
    for protocol in PROTOCOLS:
        run = run_protocol if protocol == "transfer" else run_standard_protocol
        engine = run(molecule, None, config, readout)

        if skip:
            logger.info(f"{molecule.name} {protocol}: oracle skipped ({skip})")
        else:
            oracle = oracle_trace(molecule, None, config, protocol=protocol, readout=readout)
            results.append(
                logger.check(
                    f"{molecule.name} {protocol} oracle",
                    deviation(engine, oracle),
                    defaults.oracle_threshold,
                )
            )

        if molecule.size > defaults.max_explicit_spins:
            logger.info(
                f"{molecule.name} {protocol}: explicit check skipped ({molecule.size} spins)"
            )
            continue
        explicit = run_explicit_pulse_check(
            explicit_molecule, None, config, readout, protocol
        )
        results.append(
            logger.check(
                f"{molecule.name} {protocol} explicit",
                deviation(engine, explicit),
                defaults.explicit_threshold,
            )
        )
    return results


def random_cases(seed: int, count: int):
    """
    Seeded random molecules of three and four spins, each with a sequence
    transferring at the peak of its hydrogen-target coupling.
    """
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(count)):
        molecule = random_molecule(child, 3 + i % 2)
        coupling = abs(molecule.coupling(molecule.hydrogens[0], molecule.targets[0]))
        config = SequenceConfig(
            transfer_time=math.pi / coupling, loading_time=1e-3, blocks=random_blocks
        )
        yield molecule, config


def main(args, parser):
    config, molecule = prepare(args)
    if args.random < 0:
        raise ValidationError(f"--random must be >= 0, got {args.random}")

    results = check_molecule(molecule, config.sequence, config.readout, args.corrupt_j)
    for case, sequence in random_cases(config.seed, args.random):
        results += check_molecule(case, sequence, config.readout, args.corrupt_j)

    failed = results.count(False)
    if not results:
        logger.warning("No comparison applies to this molecule")
    if failed:
        raise NumericalCheckError(f"{failed} of {len(results)} checks failed")
    logger.info(f"All {len(results)} checks passed")
    return 0
