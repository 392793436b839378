import math
import os

import pytest

from hytrans.config import load_run_config
from hytrans.molecule import Environment, Molecule, Nucleus, load_molecule
from hytrans.readout import ReadoutConfig
from hytrans.sequence import SequenceConfig

here = os.path.abspath(os.path.dirname(__file__))


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HYTRANS_SLOW") == "true":
        return
    skip = pytest.mark.skip(reason="export HYTRANS_SLOW=true to run larger spin systems")
    for item in items:
        if item.get_closest_marker("slow"):
            item.add_marker(skip)


@pytest.fixture
def hcn():
    return load_molecule("hcn")


@pytest.fixture
def hcn_run():
    return load_run_config("hcn-run")


@pytest.fixture
def hcn_sequence(hcn_run):
    return hcn_run.sequence


@pytest.fixture
def readout():
    return ReadoutConfig()


@pytest.fixture
def env():
    return Environment()


@pytest.fixture
def pair():
    """
    A hydrogen coupled to a single carbon target, nothing else.
    """
    return Molecule(
        nuclei=(
            Nucleus("H", "1H", 2 * math.pi * 42.6e6, role="hydrogen"),
            Nucleus("C", "13C", 2 * math.pi * 10.7e6, role="target"),
        ),
        couplings={(0, 1): 2 * math.pi * 200.0},
        t2={"1H": {"t2": 1.0, "t2_star": 1.0}, "13C": {"t2": 2.0, "t2_star": 0.5}},
        name="pair",
    )


@pytest.fixture
def short_sequence():
    return SequenceConfig(transfer_time=2.5e-3, loading_time=1e-3, blocks=32)
