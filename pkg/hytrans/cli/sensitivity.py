__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors."
__license__ = "Apache-2.0"

import dataclasses
import os

import numpy as np

import hytrans.utils as utils
from hytrans.analytic import general_amplitude
from hytrans.errors import ValidationError
from hytrans.logger import logger
from hytrans.sensitivity import (
    SensitivityParams,
    sensitivity_report,
    sensitivity_table,
    sweep_t2nv,
)
from hytrans.spectro import snr_ratio

from . import header, prepare


def parse_sweep(text: str) -> np.ndarray:
    """
    Parse LO:HI:N into N log-spaced NV coherence times.
    """
    parts = text.split(":")
    try:
        low, high, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise ValidationError(f"T2nv sweep must be LO:HI:N, got {text}")
    if len(parts) != 3 or count < 2 or not 0 < low < high:
        raise ValidationError(f"T2nv sweep must be LO:HI:N with 0 < LO < HI, N >= 2, got {text}")
    return np.geomspace(low, high, count)


def main(args, parser):
    config, molecule = prepare(args)
    settings = config.sensitivity
    m_max = args.m_max or settings.m_max
    seeds = args.seeds if args.seeds is not None else settings.seeds
    workers = args.workers or settings.workers
    sweep = args.sweep_t2nv or settings.sweep_t2nv
    grid = parse_sweep(sweep) if sweep else None

    sequence = config.sequence
    params = SensitivityParams.from_config(molecule, sequence, config.readout)
    report = sensitivity_report(params, m_max)
    logger.info(
        f"{molecule.name}: predicted SNR ratio {report.snr_ratio_pred:.4g} "
        f"(M={report.optimal_m}, M1={report.optimal_m1})"
    )

    if seeds > 0:
        optimal = dataclasses.replace(
            sequence,
            detections=report.optimal_m,
            standard_detections=report.optimal_m1,
        )
        report = snr_ratio(
            molecule,
            None,
            optimal,
            optimal,
            config.readout,
            seeds=seeds,
            seed=config.seed,
            workers=workers,
        )

    table = sensitivity_table(molecule, sequence, config.readout, m_max)
    amplitude = general_amplitude(molecule, sequence.transfer_time)
    lines = header(config)

    outdir = config.output_dir(args.out)
    with utils.staged_output(outdir) as staging:
        utils.write_json(
            {
                "tool": "hytrans",
                "header": lines,
                "molecule": molecule.name,
                "report": report.to_dict(),
                "amplitude": amplitude.to_dict(),
            },
            os.path.join(staging, "report.json"),
        )
        utils.write_csv(table, os.path.join(staging, "table.csv"), lines)
        if grid is not None:
            frame = sweep_t2nv(params, grid, m_max)
            nulls = int(frame["near_null"].sum())
            if nulls:
                logger.warning(
                    f"{nulls} T2nv points sit where the hydrogen filter is near a null "
                    "or below the target filter"
                )
            utils.write_csv(
                frame[["t2_nv_s", "eta_ratio"]],
                os.path.join(staging, "t2nv_sweep.csv"),
                lines,
            )
    logger.info(f"Results written to {outdir}")
    return 0
