__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import math

import numpy as np
import pytest

from hytrans.analytic import (
    c_factor,
    first_order_amplitude,
    general_amplitude,
    optimal_transfer_time,
    oracle_trace,
)
from hytrans.errors import ValidationError
from hytrans.molecule import Molecule, Nucleus, boltzmann_factor, load_molecule


@pytest.fixture
def three_targets():
    gamma_h, gamma_c = 2 * math.pi * 42.6e6, 2 * math.pi * 10.7e6
    nuclei = (Nucleus("H", "1H", gamma_h, role="hydrogen"),) + tuple(
        Nucleus(f"C{i}", "13C", gamma_c, chemical_shift=2 * math.pi * 30.0 * i, role="target")
        for i in (1, 2, 3)
    )
    couplings = {(0, i): 2 * math.pi * j for i, j in ((1, 100.0), (2, 150.0), (3, 200.0))}
    return Molecule(nuclei=nuclei, couplings=couplings, name="three-targets")


def test_c_factor(hcn):
    j_cn = hcn.coupling(1, 2)
    times = np.array([0.0, 5e-3, 20e-3])
    assert np.allclose(c_factor(hcn, times), np.cos(j_cn * times / 2))
    assert c_factor(hcn, 20e-3) == pytest.approx(0.0, abs=1e-12)

    delta = hcn.nuclei[1].chemical_shift
    shifted = c_factor(hcn, times, with_shifts=True)
    assert np.allclose(shifted, np.cos(j_cn * times / 2) * np.cos(delta * times))
    with pytest.raises(ValidationError):
        c_factor(hcn, times, target=2)


def test_first_order_amplitude(hcn):
    t = 1 / (2 * 267.0)
    assert first_order_amplitude(hcn, t) == pytest.approx(1.0)
    grid = np.linspace(1e-4, 4e-3, 7)
    values = first_order_amplitude(hcn, grid)
    assert values.shape == grid.shape
    assert np.allclose(values, np.sin(hcn.coupling(0, 1) * grid / 2) ** 2)


def test_general_amplitude(three_targets):
    print("Testing general_amplitude with three targets...")
    t = 2e-3
    s = [math.sin(math.pi * j * t) ** 2 for j in (100.0, 150.0, 200.0)]
    first = sum(s[j] * math.prod(1 - s[k] for k in range(3) if k != j) for j in range(3))

    amplitude = general_amplitude(three_targets, t)
    assert amplitude.first_order == pytest.approx(first)
    assert amplitude.third_order == pytest.approx(s[0] * s[1] * s[2])
    assert amplitude.per_target[1] == pytest.approx(s[0] * (1 - s[1]) * (1 - s[2]))
    assert sum(amplitude.per_target.values()) == pytest.approx(first)
    assert amplitude.per_hydrogen == pytest.approx((first,))
    assert set(amplitude.to_dict()) == {"first_order", "third_order", "per_hydrogen"}


def test_general_amplitude_needs_roles():
    lonely = Molecule(nuclei=(Nucleus("H", "1H", 1.0, role="hydrogen"),))
    with pytest.raises(ValidationError):
        general_amplitude(lonely, 1e-3)


def test_optimal_transfer_time(hcn, pair):
    assert optimal_transfer_time(hcn) == pytest.approx(1 / (2 * 267.0), rel=1e-4)
    assert optimal_transfer_time(pair) == pytest.approx(2.5e-3, rel=1e-4)
    with pytest.raises(ValidationError):
        optimal_transfer_time(hcn, grid=np.array([1e-3]))


def test_oracle_trace(hcn, hcn_sequence, env):
    b_h = boltzmann_factor(hcn.nuclei[0].gamma, env)
    trace = oracle_trace(hcn, env, hcn_sequence)
    expected = -b_h / 4 * c_factor(hcn, trace.times)
    assert np.allclose(trace.values, expected, rtol=1e-9, atol=0)
    assert trace.protocol == "transfer"

    standard = oracle_trace(hcn, env, hcn_sequence, protocol="standard")
    assert standard.emitter == "target"
    assert np.allclose(standard.values, expected, rtol=1e-9, atol=0)


def test_third_order_oracle(three_targets, short_sequence):
    plain = oracle_trace(three_targets, None, short_sequence)
    full = oracle_trace(three_targets, None, short_sequence, include_third_order=True)
    assert not np.allclose(plain.values, full.values)


def test_methyl_phosphine_transfer_time():
    assert optimal_transfer_time("pch33") == pytest.approx(5.7e-3, abs=0.3e-3)


def test_pch33_first_order():
    pch33 = load_molecule("pch33")
    assert general_amplitude(pch33, 5.7e-3).first_order == pytest.approx(8.667, rel=1e-2)
