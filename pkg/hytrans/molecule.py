__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Tuple, Union

import jsonschema
import numpy as np
import scipy.constants

import hytrans.defaults as defaults
import hytrans.schemas
import hytrans.utils as utils
from hytrans.errors import ValidationError
from hytrans.logger import logger
from hytrans.spin import DensityMatrix, check_capacity, z_diagonal

ROLES = ("hydrogen", "target", "other")
PAIR_CLASSES = ("eq", "neq", "het")

here = os.path.dirname(os.path.abspath(__file__))
data_dir = os.path.join(here, "data")


@dataclass(frozen=True)
class Nucleus:
    """
    One spin-1/2 nucleus. Frequencies are stored in rad/s.
    """

    label: str
    species: str
    gamma: float
    chemical_shift: float = 0.0
    role: str = "other"

    def __post_init__(self):
        if self.gamma == 0:
            raise ValidationError(f"Nucleus {self.label} has a zero gyromagnetic ratio")
        if self.role not in ROLES:
            raise ValidationError(
                f"Nucleus {self.label} has role {self.role}, choose one of {ROLES}"
            )


@dataclass(frozen=True)
class Environment:
    """
    Static field (Tesla) and sample temperature (Kelvin).
    """

    b_field: float = defaults.environment.b_field
    temperature: float = defaults.environment.temperature

    def __post_init__(self):
        if not self.b_field > 0:
            raise ValidationError(f"Field must be positive, got {self.b_field}")
        if not self.temperature > 0:
            raise ValidationError(f"Temperature must be positive, got {self.temperature}")

    @classmethod
    def from_dict(cls, doc: Optional[dict]) -> "Environment":
        doc = doc or {}
        return cls(
            b_field=doc.get("b_tesla", defaults.environment.b_field),
            temperature=doc.get("temperature_k", defaults.environment.temperature),
        )

    def to_dict(self) -> dict:
        return {"b_tesla": self.b_field, "temperature_k": self.temperature}


@dataclass(frozen=True, eq=False)
class Molecule:
    """
    Nuclei with roles, a symmetric J-coupling table and per-species decoherence
    times. Couplings are keyed by index pairs (i < j) and stored in rad/s.
    """

    nuclei: Tuple[Nucleus, ...]
    couplings: Mapping[Tuple[int, int], float] = field(default_factory=dict)
    t2: Mapping[str, Mapping[str, float]] = field(default_factory=dict)
    name: str = "molecule"
    environment: Optional[Environment] = None

    def __post_init__(self):
        nuclei = tuple(self.nuclei)
        if not nuclei:
            raise ValidationError("A molecule needs at least one nucleus")
        labels = [n.label for n in nuclei]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"Nucleus labels must be unique: {labels}")
        couplings = {}
        for (a, b), value in self.couplings.items():
            if a == b:
                raise ValidationError(f"Self-coupling on nucleus {labels[a]}")
            for index in (a, b):
                if not 0 <= index < len(nuclei):
                    raise ValidationError(f"Coupling references unknown nucleus {index}")
            key = (min(a, b), max(a, b))
            if key in couplings and couplings[key] != value:
                raise ValidationError(
                    f"Asymmetric coupling between {labels[a]} and {labels[b]}"
                )
            couplings[key] = float(value)
        object.__setattr__(self, "nuclei", nuclei)
        object.__setattr__(self, "couplings", couplings)

    def __repr__(self) -> str:
        return f"Molecule({self.name}, {self.size} spins)"

    @property
    def size(self) -> int:
        return len(self.nuclei)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(n.label for n in self.nuclei)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"{self.name} has no nucleus labelled {label}")

    def role_indices(self, role: str) -> Tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.nuclei) if n.role == role)

    @property
    def hydrogens(self) -> Tuple[int, ...]:
        return self.role_indices("hydrogen")

    @property
    def targets(self) -> Tuple[int, ...]:
        return self.role_indices("target")

    @property
    def others(self) -> Tuple[int, ...]:
        return self.role_indices("other")

    def coupling(self, i: int, j: int) -> float:
        return self.couplings.get((min(i, j), max(i, j)), 0.0)

    def partners(self, index: int) -> Dict[int, float]:
        """
        Every nucleus coupled to index, with the coupling in rad/s.
        """
        result = {}
        for (a, b), value in self.couplings.items():
            if a == index:
                result[b] = value
            elif b == index:
                result[a] = value
        return result

    def t2_of(self, index: int, star: bool = False) -> float:
        """
        Decoherence time of a nucleus from its species entry (inf when absent).

        :param index: nucleus index
        :type index: int
        :param star: return T2* (falls back to T2 when not given)
        :type star: bool
        """
        times = self.t2.get(self.nuclei[index].species, {})
        if star and "t2_star" in times:
            return times["t2_star"]
        return times.get("t2", math.inf)

    def with_coupling(self, i: int, j: int, value: float) -> "Molecule":
        """
        A copy with one coupling (rad/s) replaced.
        """
        couplings = dict(self.couplings)
        couplings[(min(i, j), max(i, j))] = value
        return replace(self, couplings=couplings)

    def with_shifts(self, shifts: Mapping[int, float]) -> "Molecule":
        """
        A copy with chemical shifts (rad/s) replaced for some nuclei.
        """
        nuclei = tuple(
            replace(n, chemical_shift=shifts[i]) if i in shifts else n
            for i, n in enumerate(self.nuclei)
        )
        return replace(self, nuclei=nuclei)

    def to_dict(self) -> dict:
        """
        Serialize back to the document format (frequencies in Hz).
        """
        doc = {
            "name": self.name,
            "nuclei": [
                {
                    "label": n.label,
                    "species": n.species,
                    "gamma_hz_per_tesla": n.gamma / (2 * math.pi),
                    "shift_hz": n.chemical_shift / (2 * math.pi),
                    "role": n.role,
                }
                for n in self.nuclei
            ],
            "couplings": [
                {
                    "a": self.nuclei[a].label,
                    "b": self.nuclei[b].label,
                    "j_hz": value / (2 * math.pi),
                }
                for (a, b), value in sorted(self.couplings.items())
            ],
            "t2": {
                species: {
                    "t2_s": times["t2"],
                    "t2_star_s": times.get("t2_star", times["t2"]),
                }
                for species, times in self.t2.items()
            },
        }
        if self.environment is not None:
            doc["environment"] = self.environment.to_dict()
        return doc


def packaged_molecules() -> Dict[str, str]:
    """
    Molecule documents shipped with the package, by name.
    """
    found = {}
    for filename in sorted(os.listdir(data_dir)):
        if filename.endswith(".json") and not filename.endswith("-run.json"):
            found[filename[:-5]] = os.path.join(data_dir, filename)
    return found


def find_molecule(name: str) -> str:
    """
    Resolve a molecule path or packaged molecule name to an existing file.
    """
    if os.path.exists(name):
        return name
    packaged = packaged_molecules()
    if name in packaged:
        return packaged[name]
    raise FileNotFoundError(f"Molecule {name} is not a file or a packaged molecule")


def load_molecule(document: Union[str, dict]) -> Molecule:
    """
    Load and validate a molecule document.

    The document can be a dictionary, a JSON string, a path, or the name of a
    packaged molecule (e.g., hcn, pch33). Frequencies are given in Hz and
    stored in rad/s.

    :param document: the molecule document or a reference to it
    :type document: dict or str
    """
    source = "molecule document"
    if isinstance(document, str):
        if document.lstrip().startswith("{"):
            document = json.loads(document)
        else:
            source = find_molecule(document)
            document = utils.read_json(source)

    try:
        jsonschema.validate(document, schema=hytrans.schemas.molecule)
    except jsonschema.ValidationError as e:
        raise ValidationError(f"{source}: {e.message}")

    nuclei = []
    for entry in document["nuclei"]:
        if "gamma_hz_per_tesla" in entry:
            gamma = 2 * math.pi * entry["gamma_hz_per_tesla"]
        elif entry["species"] in defaults.gyromagnetic_ratios:
            gamma = defaults.gyromagnetic_ratios[entry["species"]]
        else:
            raise ValidationError(
                f"{source}: unknown species {entry['species']} and no gamma given"
            )
        nuclei.append(
            Nucleus(
                label=entry["label"],
                species=entry["species"],
                gamma=gamma,
                chemical_shift=2 * math.pi * entry.get("shift_hz", 0.0),
                role=entry["role"],
            )
        )

    labels = [n.label for n in nuclei]
    couplings: Dict[Tuple[int, int], float] = {}
    for entry in document.get("couplings", []):
        for label in (entry["a"], entry["b"]):
            if label not in labels:
                raise ValidationError(f"{source}: coupling names unknown nucleus {label}")
        a, b = labels.index(entry["a"]), labels.index(entry["b"])
        if a == b:
            raise ValidationError(f"{source}: self-coupling on {entry['a']}")
        key = (min(a, b), max(a, b))
        value = 2 * math.pi * entry["j_hz"]
        if key in couplings and couplings[key] != value:
            raise ValidationError(
                f"{source}: asymmetric coupling between {entry['a']} and {entry['b']}"
            )
        couplings[key] = value

    t2 = {}
    for species, times in document.get("t2", {}).items():
        t2[species] = {
            "t2": times["t2_s"],
            "t2_star": times.get("t2_star_s", times["t2_s"]),
        }

    environment = None
    if "environment" in document:
        environment = Environment.from_dict(document["environment"])

    molecule = Molecule(
        nuclei=tuple(nuclei),
        couplings=couplings,
        t2=t2,
        name=document.get("name", "molecule"),
        environment=environment,
    )
    logger.debug(f"Loaded {molecule} from {source}")
    return molecule


def boltzmann_factor(gamma: float, env: Environment) -> float:
    """
    First-order thermal polarization hbar gamma B / (k_B T).

    :param gamma: gyromagnetic ratio in rad s^-1 T^-1
    :type gamma: float
    :param env: field and temperature
    :type env: Environment
    """
    return scipy.constants.hbar * gamma * env.b_field / (scipy.constants.k * env.temperature)


def thermal_state(
    molecule: Molecule,
    env: Environment,
    polarizations: Optional[Mapping[int, float]] = None,
) -> DensityMatrix:
    """
    rho0 = (1 + sum_i B_i S_i^z) / 2^N, first order in the Boltzmann factors.

    :param molecule: the spin system
    :type molecule: Molecule
    :param env: field and temperature
    :type env: Environment
    :param polarizations: override B_i for some nuclei (e.g., prepolarization)
    :type polarizations: dict
    """
    check_capacity(molecule.size)
    polarizations = polarizations or {}
    diagonal = np.ones(2**molecule.size)
    for i, nucleus in enumerate(molecule.nuclei):
        factor = polarizations.get(i, boltzmann_factor(nucleus.gamma, env))
        if factor:
            diagonal = diagonal + factor * z_diagonal(molecule.size, i)
    return DensityMatrix(np.diag(diagonal / 2**molecule.size))


def classify_pairs(
    molecule: Molecule, env: Optional[Environment] = None
) -> Dict[Tuple[int, int], str]:
    """
    Classify every pair of nuclei for the secular coupling form.

    het: a hydrogen with a non-hydrogen (zz coupling). eq: same species and
    identical shift (full dot product). neq: anything else (zz coupling).
    Both orderings of each pair are present in the result.

    :param molecule: the spin system
    :type molecule: Molecule
    :param env: when given, pairs whose Larmor gap is not large against J are flagged
    :type env: Environment
    """
    classes = {}
    for i in range(molecule.size):
        for j in range(i + 1, molecule.size):
            a, b = molecule.nuclei[i], molecule.nuclei[j]
            if (a.role == "hydrogen") != (b.role == "hydrogen"):
                kind = "het"
            elif a.species == b.species and a.chemical_shift == b.chemical_shift:
                kind = "eq"
            else:
                kind = "neq"
            classes[(i, j)] = classes[(j, i)] = kind

            coupling = molecule.coupling(i, j)
            if env is not None and kind != "eq" and coupling:
                gap = abs(
                    (a.gamma - b.gamma) * env.b_field
                    + (a.chemical_shift - b.chemical_shift)
                )
                if gap < 10 * abs(coupling):
                    logger.warning(
                        f"{a.label}-{b.label}: Larmor gap {gap / (2 * math.pi):.3g} Hz "
                        f"is not large against J = {coupling / (2 * math.pi):.3g} Hz"
                    )
    return classes


def random_molecule(seed: Union[int, np.random.SeedSequence], size: int = 3) -> Molecule:
    """
    A seeded random single-hydrogen molecule used by the validation harness.

    Site 0 is a hydrogen, site 1 a 13C target, further sites 15N and 31P.
    Couplings are drawn in [-300, 300] Hz, shifts in [-200, 200] Hz.

    :param seed: seed for numpy's default generator
    :type seed: int or SeedSequence
    :param size: 2 to 4 spins
    :type size: int
    """
    if not 2 <= size <= defaults.max_explicit_spins:
        raise ValidationError(
            f"Random molecules have 2 to {defaults.max_explicit_spins} spins, got {size}"
        )
    rng = np.random.default_rng(seed)
    species = ["1H", "13C", "15N", "31P"][:size]
    roles = ["hydrogen", "target", "other", "other"][:size]
    nuclei = tuple(
        Nucleus(
            label=f"{s}{i}",
            species=s,
            gamma=defaults.gyromagnetic_ratios[s],
            chemical_shift=2 * math.pi * rng.uniform(-200, 200),
            role=role,
        )
        for i, (s, role) in enumerate(zip(species, roles))
    )
    couplings = {}
    for i in range(size):
        for j in range(i + 1, size):
            couplings[(i, j)] = 2 * math.pi * rng.uniform(-300, 300)
    # keep the transfer coupling away from zero
    if abs(couplings[(0, 1)]) < 2 * math.pi * 50:
        couplings[(0, 1)] = math.copysign(2 * math.pi * 50, couplings[(0, 1)])
    t2 = {s: {"t2": 1.0, "t2_star": 0.5} for s in species}
    return Molecule(nuclei=nuclei, couplings=couplings, t2=t2, name="random")
