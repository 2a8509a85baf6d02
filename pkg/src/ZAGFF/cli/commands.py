"""
Command implementations of the `zagff` runner.

Each command takes a validated ExperimentConfig and a RunDirectory, writes
its artefacts, and returns a CommandResult whose `acceptance` decides the
exit code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..core.logging_config import get_logger
from ..services.extremes import normalizing_constants
from ..services.greens import (
    convergence_report,
    decay_profile_torus,
    green_table_frame,
    lattice_green_origin,
    zero_average_green,
)
from ..services.lattice import FieldConfig
from ..services.sampler import SeedPolicy, iter_batch, write_field_binary, write_field_csv
from ..services.stats import DEFAULT_BANDS, IndicatorFunction, run_extremes_suite
from .config import ExperimentConfig
from .output import RunDirectory
from .verify import run_verify_suite

logger = get_logger(__name__)


@dataclass
class CommandResult:
    """
    Outcome of a command.

    Attributes:
        acceptance (dict[str, bool]): Flags that must all hold for exit code 0
        summary (dict[str, Any]): Short machine-readable summary for stdout
    """

    acceptance: dict[str, bool] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.acceptance.values())


def cmd_greens(config: ExperimentConfig, out: RunDirectory) -> CommandResult:
    """
    Green tables, decay profiles and the convergence report.

    Writes green_table_n{n}.csv and decay_profile_n{n}.csv per side length,
    convergence.csv (n, v_n, v, gap, bound, ...) and report.json.
    """
    ns = config.resolved_n_list()
    tables = []
    for n in ns:
        table = zero_average_green(FieldConfig(d=config.d, n=n))
        profile = decay_profile_torus(table)
        out.write_csv(f"green_table_n{n}.csv", green_table_frame(table))
        out.write_csv(f"decay_profile_n{n}.csv", profile.frame)
        tables.append(
            {
                "n": n,
                "v_n": table.v_n,
                "invariants": table.invariant_residuals(),
                "c_star": profile.c_star,
                "max_distance_value": profile.max_distance_value,
            }
        )

    convergence = convergence_report(ns, config.d, strict=False)
    out.write_csv("convergence.csv", convergence.to_frame())
    acceptance = {"gaps_decreasing": convergence.gaps_decreasing}
    out.write_report(
        "greens",
        {
            "d": config.d,
            "v": lattice_green_origin(config.d),
            "tables": tables,
            "convergence": convergence.model_dump(),
            "acceptance": acceptance,
        },
    )
    return CommandResult(
        acceptance=acceptance,
        summary={"n": ns, "gaps": [row.gap for row in convergence.rows]},
    )


def cmd_verify(config: ExperimentConfig, out: RunDirectory) -> CommandResult:
    """Run the identity and oracle checks; report.json lists every check."""
    report = run_verify_suite(
        d=config.d, seed=config.seed, inject_fault=config.inject_fault, mc_replicates=config.mc_replicates
    )
    out.write_report("verify", report.model_dump())
    failed = [c.name for c in report.checks if not c.passed]
    return CommandResult(
        acceptance={c.name: c.passed for c in report.checks},
        summary={"checks": len(report.checks), "failed": failed},
    )


def cmd_extremes(config: ExperimentConfig, out: RunDirectory) -> CommandResult:
    """
    Gumbel, Poisson, Laplace and boundary experiments on one sweep.

    Writes replicates.csv (one row per replicate: maxima, counts, Laplace
    summand, boundary flag) and report.json.
    """
    cfg = FieldConfig(d=config.d, n=config.n)
    constants = normalizing_constants(cfg.N, lattice_green_origin(config.d))
    result = run_extremes_suite(
        cfg,
        constants,
        config.replicates,
        SeedPolicy(master_seed=config.seed),
        delta=config.delta,
        split=config.split,
        test_function=IndicatorFunction(c=config.laplace_c, delta=config.delta),
        beta=config.beta,
        floor=config.floor,
        bands=DEFAULT_BANDS,
    )
    out.write_csv("replicates.csv", result.replicate_frame)
    out.write_report("extremes", result.report.model_dump())
    report = result.report
    acceptance = {} if config.report_only else report.acceptance
    return CommandResult(
        acceptance=acceptance,
        summary={
            "ks_distance": report.gumbel.ks_distance,
            "mean_count": report.poisson.mean,
            "dispersion": report.poisson.dispersion,
            "laplace": [report.laplace.empirical, report.laplace.theoretical],
            "acceptance": report.acceptance,
        },
    )


def cmd_sample(config: ExperimentConfig, out: RunDirectory) -> CommandResult:
    """Write `count` sampled fields as field_{i}.bin or field_{i}.csv."""
    cfg = FieldConfig(d=config.d, n=config.n)
    policy = SeedPolicy(master_seed=config.seed)
    fields = []
    for i, fld in enumerate(iter_batch(cfg, policy, config.count)):
        if config.format == "binary":
            path = write_field_binary(fld, out.file(f"field_{i:05d}.bin"))
        else:
            path = write_field_csv(fld, out.file(f"field_{i:05d}.csv"))
        fields.append({"index": i, "seed": fld.seed, "file": path.name, "sum_residual": fld.sum_residual()})
    out.write_report("sample", {"d": cfg.d, "n": cfg.n, "format": config.format, "fields": fields})
    return CommandResult(summary={"fields": len(fields)})


COMMANDS = {
    "greens": cmd_greens,
    "verify": cmd_verify,
    "extremes": cmd_extremes,
    "sample": cmd_sample,
}
