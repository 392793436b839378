__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

# Seeded randomized checks, 100 draws per invariant.

import dataclasses
import json
import math

import numpy as np
import pytest
import scipy.linalg

from hytrans.molecule import (
    Molecule,
    Nucleus,
    classify_pairs,
    load_molecule,
    random_molecule,
)
from hytrans.readout import (
    ReadoutConfig,
    noise_level,
    nv_signal,
    sample_readout,
    synthesize_field,
)
from hytrans.sequence import (
    SequenceConfig,
    SignalTrace,
    run_explicit_pulse_check,
    run_protocol,
    run_standard_protocol,
)
from hytrans.spectro import spectrum
from hytrans.spin import (
    DensityMatrix,
    SpinOperator,
    apply_pulse,
    embed_pauli,
    evolve,
    is_hermitian,
)

CASES = 100
AXES = ("x", "y", "z")


def random_state(rng, size):
    dim = 2**size
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    entries = a @ a.conj().T
    return DensityMatrix(entries / np.trace(entries).real)


def random_hamiltonian(rng, size, scale=2 * math.pi * 200.0):
    dim = 2**size
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return SpinOperator(scale * (a + a.conj().T) / 2, hermitian=True)


def random_sites(rng, size):
    count = int(rng.integers(1, size + 1))
    return sorted(int(s) for s in rng.choice(size, count, replace=False))


def random_sequence(rng, blocks=8, **changes):
    config = SequenceConfig(
        transfer_time=float(rng.uniform(1e-3, 5e-3)),
        loading_time=1e-3,
        blocks=blocks,
    )
    return dataclasses.replace(config, **changes)


def deviation(first, second):
    return np.max(np.abs(first.values - second.values)) / first.full_scale


def test_evolve_composes():
    rng = np.random.default_rng(101)
    for _ in range(CASES):
        rho = random_state(rng, 3)
        H = random_hamiltonian(rng, 3)
        t1, t2 = rng.uniform(0, 5e-3, 2)
        stepped = evolve(evolve(rho, H, t1), H, t2)
        assert stepped.distance(evolve(rho, H, t1 + t2)) < 1e-10


def test_unitary_steps_keep_a_valid_state():
    rng = np.random.default_rng(102)
    for _ in range(CASES):
        size = int(rng.integers(1, 5))
        rho = random_state(rng, size)
        before = scipy.linalg.eigvalsh(rho.entries)
        evolved = evolve(rho, random_hamiltonian(rng, size), rng.uniform(0, 1e-2))
        pulsed = apply_pulse(
            evolved, random_sites(rng, size), AXES[rng.integers(3)], rng.uniform(-7, 7)
        )
        for state in (evolved, pulsed):
            assert abs(np.trace(state.entries) - 1) < 1e-10
            assert is_hermitian(state.entries)
            assert np.allclose(scipy.linalg.eigvalsh(state.entries), before, atol=1e-10)


def test_site_operators_commute():
    rng = np.random.default_rng(103)
    for _ in range(CASES):
        size = int(rng.integers(2, 6))
        a, b = (int(s) for s in rng.choice(size, 2, replace=False))
        first = embed_pauli(size, a, AXES[rng.integers(3)])
        second = embed_pauli(size, b, AXES[rng.integers(3)])
        assert first.commutator(second).norm() < 1e-12

        # on one site [Sx, Sy] = i Sz, cyclically
        k = int(rng.integers(3))
        x, y, z = (embed_pauli(size, a, AXES[(k + i) % 3]) for i in range(3))
        assert np.allclose(x.commutator(y).entries, 1j * z.entries, atol=1e-12)


def test_pulse_identities():
    rng = np.random.default_rng(104)
    for _ in range(CASES):
        size = int(rng.integers(1, 5))
        rho = random_state(rng, size)
        sites = random_sites(rng, size)
        full = apply_pulse(rho, sites, AXES[rng.integers(3)], 2 * math.pi)
        assert full.distance(rho) < 1e-12

        composed = apply_pulse(rho, sites, "y", math.pi / 2)
        composed = apply_pulse(composed, sites, "x", math.pi)
        composed = apply_pulse(composed, sites, "y", math.pi / 2)
        assert composed.distance(apply_pulse(rho, sites, "x", math.pi)) < 1e-12


def test_pi_pulses_refocus_shifts():
    rng = np.random.default_rng(105)
    for case in range(CASES):
        molecule = random_molecule(case, int(rng.integers(2, 5)))
        shifted = molecule.with_shifts(
            {i: 2 * math.pi * rng.uniform(-500, 500) for i in range(molecule.size)}
        )
        config = random_sequence(rng)
        reference = run_explicit_pulse_check(molecule, None, config)
        assert deviation(reference, run_explicit_pulse_check(shifted, None, config)) < 1e-8
        engine = run_protocol(molecule, None, config)
        assert deviation(engine, run_protocol(shifted, None, config)) == 0


def test_block_prefix():
    rng = np.random.default_rng(106)
    for case in range(CASES):
        molecule = random_molecule(case, int(rng.integers(2, 5)))
        blocks = int(rng.integers(1, 31))
        config = random_sequence(rng, blocks, with_pi_pulses=bool(rng.integers(2)))
        for run in (run_protocol, run_standard_protocol):
            short = run(molecule, None, config)
            long = run(molecule, None, dataclasses.replace(config, blocks=2 * blocks))
            assert long.n == 2 * blocks
            assert np.allclose(
                long.values[:blocks], short.values, rtol=0, atol=1e-12 * short.full_scale
            )


def test_engine_matches_explicit_on_random_molecules():
    print("Testing effective against explicit on random molecules...")
    rng = np.random.default_rng(107)
    for case in range(CASES):
        molecule = random_molecule(case, int(rng.integers(2, 5)))
        config = SequenceConfig(
            transfer_time=math.pi / abs(molecule.coupling(0, 1)),
            loading_time=1e-3,
            blocks=8,
            with_pi_pulses=bool(case % 2),
        )
        for protocol, run in (
            ("transfer", run_protocol),
            ("standard", run_standard_protocol),
        ):
            engine = run(molecule, None, config)
            explicit = run_explicit_pulse_check(molecule, None, config, protocol=protocol)
            assert deviation(engine, explicit) < 1e-8


def mixed_molecule(rng):
    """
    Random roles and species, with shifts drawn from a short list so that
    equivalent pairs occur.
    """
    size = int(rng.integers(2, 7))
    species = rng.choice(["1H", "1H", "13C", "15N"], size)
    shifts = rng.choice([0.0, 40.0, 120.0], size)
    nuclei = []
    for i, (s, shift) in enumerate(zip(species, shifts)):
        role = "hydrogen" if s == "1H" else ("target" if s == "13C" else "other")
        nuclei.append(
            Nucleus(
                label=f"n{i}",
                species=str(s),
                gamma=2 * math.pi * {"1H": 42.6e6, "13C": 10.7e6, "15N": -4.3e6}[s],
                chemical_shift=2 * math.pi * float(shift),
                role=role,
            )
        )
    couplings = {
        (i, j): 2 * math.pi * rng.uniform(-300, 300)
        for i in range(size)
        for j in range(i + 1, size)
        if rng.random() < 0.7
    }
    t2 = {str(s): {"t2": 1.0, "t2_star": 0.5} for s in set(species)}
    return Molecule(nuclei=tuple(nuclei), couplings=couplings, t2=t2, name="mixed")


def test_molecule_round_trip():
    rng = np.random.default_rng(108)
    for _ in range(CASES):
        molecule = mixed_molecule(rng)
        loaded = load_molecule(json.dumps(molecule.to_dict()))
        assert loaded.labels == molecule.labels
        assert [n.role for n in loaded.nuclei] == [n.role for n in molecule.nuclei]
        for ours, theirs in zip(molecule.nuclei, loaded.nuclei):
            assert theirs.species == ours.species
            assert theirs.gamma == pytest.approx(ours.gamma, rel=1e-12)
            assert theirs.chemical_shift == pytest.approx(ours.chemical_shift, rel=1e-12)
        assert set(loaded.couplings) == set(molecule.couplings)
        for key, value in molecule.couplings.items():
            assert loaded.couplings[key] == pytest.approx(value, rel=1e-12)
        assert loaded.t2_of(0) == molecule.t2_of(0)


def test_classify_pairs_symmetric():
    rng = np.random.default_rng(109)
    for _ in range(CASES):
        molecule = mixed_molecule(rng)
        classes = classify_pairs(molecule)
        assert len(classes) == molecule.size * (molecule.size - 1)
        for (i, j), kind in classes.items():
            assert classes[(j, i)] == kind
            a, b = molecule.nuclei[i], molecule.nuclei[j]
            if (a.role == "hydrogen") != (b.role == "hydrogen"):
                assert kind == "het"
            elif a.species == b.species and a.chemical_shift == b.chemical_shift:
                assert kind == "eq"
            else:
                assert kind == "neq"


def random_trace(rng, readout):
    n = int(rng.integers(8, 65))
    detections = int(rng.integers(1, 7))
    unit_time = readout.rotation_periods * 2 * math.pi / readout.omega
    return SignalTrace(
        times=1e-3 * np.arange(1, n + 1),
        values=rng.uniform(-1, 1, n),
        full_scale=1.0,
        omega=readout.omega,
        unit_time=unit_time,
        detections=detections,
        block_time=1e-3 + detections * unit_time,
    )


def test_readout_mean_converges():
    rng = np.random.default_rng(110)
    draws = 200
    for case in range(CASES):
        readout = ReadoutConfig(contrast=float(rng.uniform(0.02, 0.3)))
        trace = random_trace(rng, readout)
        children = np.random.SeedSequence(case).spawn(draws)
        mean = np.mean([sample_readout(trace, readout, c).readout for c in children], axis=0)
        signal = nv_signal(trace, readout)
        sigma = noise_level(trace, readout)
        assert sigma > 0
        assert np.max(np.abs(mean - signal)) <= 6 * sigma / math.sqrt(draws)


def test_field_vanishes_over_each_window():
    rng = np.random.default_rng(111)
    for _ in range(CASES):
        readout = ReadoutConfig(
            rotation_periods=int(rng.integers(1, 4)),
            samples_per_period=int(rng.integers(20, 41)),
        )
        trace = random_trace(rng, readout)
        frame = synthesize_field(trace, readout)
        per_window = trace.detections * readout.rotation_periods * readout.samples_per_period
        assert len(frame) == trace.n * per_window
        peak = frame["field_t"].abs().max()
        assert peak > 0
        sums = frame.groupby("block")["field_t"].sum()
        assert np.all(np.abs(sums) <= 1e-9 * peak * per_window)
        windows = frame.groupby("block")["t_s"]
        starts = trace.block_time * np.arange(trace.n) + 1e-3
        assert np.allclose(windows.min().to_numpy(), starts, rtol=0, atol=1e-12)


def test_parseval():
    rng = np.random.default_rng(112)
    for _ in range(CASES):
        n = int(rng.integers(8, 300))
        values = rng.normal(size=n)
        trace = SignalTrace(times=1e-3 * np.arange(1, n + 1), values=values)
        spec = spectrum(trace, padding=int(rng.integers(1, 5)))
        expected = n * spec.padding * np.sum(values**2)
        assert spec.energy() == pytest.approx(expected, rel=1e-9)
