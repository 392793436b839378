__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import os
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import jsonschema

import hytrans.defaults as defaults
import hytrans.schemas
import hytrans.utils as utils
from hytrans.errors import ValidationError
from hytrans.logger import logger
from hytrans.molecule import Molecule, data_dir, load_molecule
from hytrans.readout import ReadoutConfig
from hytrans.sequence import SequenceConfig


@dataclass(frozen=True)
class SensitivitySettings:
    m_max: int = defaults.m_max
    seeds: int = 0
    workers: int = 1
    sweep_t2nv: Optional[str] = None

    @classmethod
    def from_dict(cls, block: Optional[dict]) -> "SensitivitySettings":
        block = block or {}
        return cls(
            m_max=block.get("m_max", defaults.m_max),
            seeds=block.get("seeds", 0),
            workers=block.get("workers", 1),
            sweep_t2nv=block.get("sweep_t2nv"),
        )

    def to_dict(self) -> dict:
        return {
            "m_max": self.m_max,
            "seeds": self.seeds,
            "workers": self.workers,
            "sweep_t2nv": self.sweep_t2nv,
        }


@dataclass(frozen=True)
class RunConfig:
    """
    A reproducible run: which molecule, which sequence and readout, where to
    write, and the single seed every random stream derives from.

    sequence is None until resolved against the molecule (see resolve).
    """

    molecule: str
    sequence: Optional[SequenceConfig] = None
    readout: ReadoutConfig = field(default_factory=ReadoutConfig)
    sensitivity: SensitivitySettings = field(default_factory=SensitivitySettings)
    output: Optional[str] = None
    seed: int = 0
    source_dir: Optional[str] = None

    def replace(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def molecule_path(self) -> str:
        """
        The molecule as given, else relative to the config file, else a
        packaged molecule name.
        """
        if os.path.exists(self.molecule):
            return self.molecule
        if self.source_dir:
            relative = os.path.join(self.source_dir, self.molecule)
            if os.path.exists(relative):
                return relative
        return self.molecule

    def load_molecule(self) -> Molecule:
        return load_molecule(self.molecule_path())

    def resolve(self, molecule: Molecule) -> "RunConfig":
        """
        Fill a missing sequence from the molecule: optimal transfer time,
        1 ms loading, 240 blocks and optimal detection counts.
        """
        if self.sequence is not None:
            return self
        from hytrans.analytic import optimal_transfer_time
        from hytrans.sensitivity import SensitivityParams, optimize_measurements

        sequence = SequenceConfig(
            transfer_time=optimal_transfer_time(molecule), loading_time=1e-3, blocks=240
        )
        params = SensitivityParams.from_config(molecule, sequence, self.readout)
        best_m, best_m1 = optimize_measurements(params, self.sensitivity.m_max)
        sequence = replace(sequence, detections=best_m, standard_detections=best_m1)
        logger.debug(f"Derived sequence for {molecule.name}: {sequence.to_dict()}")
        return self.replace(sequence=sequence)

    def to_dict(self) -> dict:
        return {
            "molecule": self.molecule,
            "sequence": self.sequence.to_dict() if self.sequence else None,
            "readout": self.readout.to_dict(),
            "sensitivity": self.sensitivity.to_dict(),
            "seed": self.seed,
        }

    def config_hash(self) -> str:
        """
        Hash of everything that determines the results (the output directory
        is left out).
        """
        return utils.config_hash(self.to_dict())

    def output_dir(self, override: Optional[str] = None) -> str:
        return (
            override
            or self.output
            or os.environ.get(defaults.outdir_envar)
            or defaults.default_outdir
        )


def load_run_config(document: Union[str, dict]) -> RunConfig:
    """
    Load and validate a run configuration document (a path, a packaged run
    name such as hcn-run, or a dictionary).

    :param document: the run document or a reference to it
    :type document: str or dict
    """
    source, source_dir = "run configuration", None
    if isinstance(document, str):
        path = document
        if not os.path.exists(path):
            packaged = os.path.join(data_dir, f"{document}.json")
            if not os.path.exists(packaged):
                raise FileNotFoundError(f"Run configuration {document} does not exist")
            path = packaged
        source, source_dir = path, os.path.dirname(os.path.abspath(path))
        document = utils.read_json(path)

    try:
        jsonschema.validate(document, schema=hytrans.schemas.run_config)
    except jsonschema.ValidationError as e:
        raise ValidationError(f"{source}: {e.message}")

    sequence = None
    if "sequence" in document:
        block = document["sequence"]
        if "t_s" not in block or "tau_s" not in block or "n" not in block:
            raise ValidationError(f"{source}: a sequence block needs t_s, tau_s and n")
        sequence = SequenceConfig.from_dict(block)

    return RunConfig(
        molecule=document["molecule"],
        sequence=sequence,
        readout=ReadoutConfig.from_dict(document.get("readout")),
        sensitivity=SensitivitySettings.from_dict(document.get("sensitivity")),
        output=document.get("output"),
        seed=document.get("seed", 0),
        source_dir=source_dir,
    )
