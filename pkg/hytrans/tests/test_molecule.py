__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math

import pytest

from hytrans.errors import CapacityError, ValidationError
from hytrans.molecule import (
    Environment,
    boltzmann_factor,
    classify_pairs,
    load_molecule,
    packaged_molecules,
    random_molecule,
    thermal_state,
)
from hytrans.spin import embed_pauli, expectation


def test_packaged_molecules():
    assert set(packaged_molecules()) == {"hcn", "pch33"}


def test_load_hcn(hcn):
    assert hcn.size == 3
    assert hcn.hydrogens == (0,)
    assert hcn.targets == (1,)
    assert hcn.others == (2,)
    assert hcn.coupling(0, 1) == pytest.approx(2 * math.pi * 267.0)
    assert hcn.coupling(2, 1) == hcn.coupling(1, 2)
    assert hcn.nuclei[1].chemical_shift == pytest.approx(2 * math.pi * 50.0)
    assert hcn.environment == Environment(2.0, 300.0)
    assert hcn.t2_of(1) == 4.0
    assert hcn.t2_of(1, star=True) == 0.4


def test_load_pch33():
    molecule = load_molecule("pch33")
    assert molecule.size == 11
    assert len(molecule.hydrogens) == 9


def test_invalid_documents():
    base = {
        "nuclei": [
            {"label": "H", "species": "1H", "role": "hydrogen"},
            {"label": "C", "species": "13C", "role": "target"},
        ]
    }
    with pytest.raises(ValidationError):
        load_molecule({**base, "couplings": [{"a": "H", "b": "X", "j_hz": 1.0}]})
    with pytest.raises(ValidationError):
        load_molecule(
            {
                **base,
                "couplings": [
                    {"a": "H", "b": "C", "j_hz": 100.0},
                    {"a": "C", "b": "H", "j_hz": 90.0},
                ],
            }
        )
    with pytest.raises(ValidationError):
        load_molecule({"nuclei": [{"label": "Q", "species": "2Q", "role": "other"}]})
    with pytest.raises(ValidationError):
        load_molecule({"nuclei": [{"label": "H", "species": "1H", "role": "spy"}]})
    with pytest.raises(FileNotFoundError):
        load_molecule("no-such-molecule")


def test_load_json_string():
    molecule = load_molecule(
        '{"nuclei": [{"label": "H", "species": "1H", "role": "hydrogen"}]}'
    )
    assert molecule.labels == ("H",)


def test_boltzmann_factor(env):
    gamma = 2 * math.pi * 42.6e6
    assert boltzmann_factor(gamma, env) == pytest.approx(1.363e-5, rel=1e-3)


def test_thermal_state(hcn, env):
    print("Testing thermal_state...")
    rho = thermal_state(hcn, env)
    for i, nucleus in enumerate(hcn.nuclei):
        value = expectation(rho, embed_pauli(hcn.size, i, "z"))
        assert value == pytest.approx(boltzmann_factor(nucleus.gamma, env) / 4, rel=1e-9)

    boosted = thermal_state(hcn, env, {1: 1e-3})
    assert expectation(boosted, embed_pauli(3, 1, "z")) == pytest.approx(2.5e-4)


def test_thermal_state_capacity(env):
    nuclei = [{"label": f"H{i}", "species": "1H", "role": "hydrogen"} for i in range(13)]
    with pytest.raises(CapacityError):
        thermal_state(load_molecule({"nuclei": nuclei}), env)


def test_classify_pairs(hcn):
    classes = classify_pairs(hcn)
    assert classes[(0, 1)] == classes[(1, 0)] == "het"
    assert classes[(0, 2)] == "het"
    assert classes[(1, 2)] == "neq"

    methyl = load_molecule("pch33")
    assert classify_pairs(methyl)[(0, 1)] == "eq"


def test_with_coupling_copies(hcn):
    changed = hcn.with_coupling(2, 1, 1.0)
    assert changed.coupling(1, 2) == 1.0
    assert hcn.coupling(1, 2) == pytest.approx(2 * math.pi * -25.0)


def test_random_molecule():
    first, again = random_molecule(7, 4), random_molecule(7, 4)
    assert first.size == 4
    assert first.couplings == again.couplings
    assert abs(first.coupling(0, 1)) >= 2 * math.pi * 50 - 1e-9
    with pytest.raises(ValidationError):
        random_molecule(7, 5)
