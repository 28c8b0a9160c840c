"""
Command-line interface for wpduality.

Usage:
    wpduality list                                   # Show the relation catalog
    wpduality verify --relations R19 --dims 2x2      # Ensemble verification
    wpduality sweep --relations R12 --dims-list 2x2,2x3,3x3
    wpduality state-info --state bell --cut "A|B"    # Measures of one state
    wpduality check-units                            # Units diagnostic

Exit codes: 0 no violations, 2 violations found, 1 usage/config/IO errors.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import re
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import click
from pydantic import ValidationError, field_validator

from . import __version__
from .channels import KrausChannel, depolarizing_channel, partial_trace_channel
from .config.settings import settings
from .duality import LogBase, entanglement_entropy, generalized_concurrence, measure_set
from .ensemble import EnsembleConfig, EnsembleReport, EnsembleVerifier
from .exceptions import ConfigError, DualityError, InapplicableRelationError
from .profile import Cut, DimensionProfile
from .relations import CATALOG, RelationContext, list_relations
from .reports import build_document, to_csv, to_json, write_text
from .serialization import fingerprint, read_state_file
from .states import DensityMatrix, PureState, maximally_mixed, named_pure, named_state, schmidt_pure
from .utils import format_duration, setup_logging, validate_output_path

__all__ = ["cli", "main", "RunConfig", "load_state"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATIONS = 2

_SCHMIDT_RE = re.compile(r"^\s*schmidt\s*\(([^)]*)\)\s*$")


class RunConfig(EnsembleConfig):
    """Full configuration of one CLI invocation."""

    command: Literal["verify", "sweep", "state-info", "check-units"] = "verify"
    dims_list: List[str] = []
    out_path: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    workers: int = settings.WORKERS
    timing: bool = False

    @field_validator("dims_list")
    @classmethod
    def _dims_list_parse(cls, v: List[str]) -> List[str]:
        return [DimensionProfile.parse(spec).spec for spec in v]

    @field_validator("workers")
    @classmethod
    def _workers_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"workers must be >= 1, got {v}")
        return v

    @classmethod
    def load(cls, command: str, config_file: Optional[str], overrides: Dict[str, Any]) -> "RunConfig":
        """Config file values first, explicit CLI flags on top."""
        values: Dict[str, Any] = {}
        if config_file:
            try:
                values = json.loads(Path(config_file).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigError(f"Could not read config file {config_file}: {e}") from e
            if not isinstance(values, dict):
                raise ConfigError(f"Config file {config_file} must hold a JSON object")
        values.update({k: v for k, v in overrides.items() if v is not None})
        values["command"] = command
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(_validation_message(e)) from e
        except DualityError as e:
            raise ConfigError(str(e)) from e

    def for_dims(self, dims: str) -> "RunConfig":
        return RunConfig(**{**self.model_dump(), "dims": dims})

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude={"witness_cap", "out_path", "workers", "timing", "format"})


def _validation_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        where = ".".join(str(p) for p in item["loc"]) or "config"
        parts.append(f"{where}: {item['msg']}")
    return "; ".join(parts)


class _ExitCodeGroup(click.Group):
    """Group that maps every click usage error to exit code 1."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode, **extra)
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_ERROR)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def _fail(message: str) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(EXIT_ERROR)


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path is None:
        click.echo(text, nl=False)
        return
    ok, reason = validate_output_path(out_path)
    if not ok:
        _fail(f"Cannot write report: {reason}")
    write_text(text, out_path)


def _exit_for(reports: Sequence[EnsembleReport]) -> None:
    violated = [r.relation_id for r in reports if r.status == "violated"]
    if violated:
        click.echo(f"Violations found: {', '.join(sorted(set(violated)))}", err=True)
        sys.exit(EXIT_VIOLATIONS)
    sys.exit(EXIT_OK)


def _run(config: RunConfig, dims_specs: Sequence[str]) -> Tuple[List[EnsembleReport], Optional[float]]:
    verifier = EnsembleVerifier(workers=config.workers)
    start = time.perf_counter()
    reports: List[EnsembleReport] = []
    for dims in dims_specs:
        reports.extend(verifier.run(config.for_dims(dims)))
    elapsed = time.perf_counter() - start
    logger.info(f"Run finished in {format_duration(elapsed)}")
    return reports, (elapsed if config.timing else None)


def _render(config: RunConfig, reports: Sequence[EnsembleReport], runtime: Optional[float]) -> str:
    if config.format == "csv":
        return to_csv(reports)
    return to_json(build_document(config.echo(), reports, runtime))


def run_options(func):
    """Options shared by verify and sweep."""
    options = [
        click.option("--relations", "-r", default=None, help='Comma-separated relation ids or "all"'),
        click.option("--ensemble", "-e", default=None, help="haar-pure, ginibre(rank), schmidt-sweep, named(name), unital-channel(k)"),
        click.option("--samples", "-n", type=int, default=None, help="Samples per relation"),
        click.option("--seed", type=int, default=None, help="Run seed (default WPD_SEED)"),
        click.option("--log-base", type=click.Choice(["2", "e"]), default=None, help="Entropy logarithm base"),
        click.option("--tol", type=float, default=None, help="Satisfaction tolerance"),
        click.option("--sat-tol", type=float, default=None, help="Saturation tolerance"),
        click.option("--cut", default=None, help='Bipartition such as "A|BC"'),
        click.option("--out", "out_path", type=click.Path(), default=None, help="Output file (default stdout)"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None, help="Report format"),
        click.option("--workers", "-w", type=int, default=None, help="Worker processes"),
        click.option("--config", "config_file", type=click.Path(), default=None, help="JSON config file"),
        click.option("--timing", is_flag=True, default=None, help="Record runtime_seconds in the report"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _overrides(**kwargs) -> Dict[str, Any]:
    fmt = kwargs.pop("fmt", None)
    if fmt is not None:
        kwargs["format"] = fmt
    return kwargs


@click.group(cls=_ExitCodeGroup)
@click.version_option(version=__version__, prog_name="wpduality")
@click.option("--log-level", default=None, help="Logging level (default LOG_LEVEL)")
def cli(log_level: Optional[str]):
    """
    Wave-particle duality measures and relation verifier.

    Examples:

        wpduality verify --relations R19 --dims 2x2 --samples 1000

        wpduality sweep --relations R12 --dims-list 2x2,2x3,3x3

        wpduality state-info --state ghz --cut "A|BC"
    """
    setup_logging(log_level)
    if not settings.validate_config():
        _fail("Invalid WPD_* environment configuration")


@cli.command("list")
@click.option("--tag", default=None, help="Only relations carrying this tag")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table", help="Output format")
def list_cmd(tag: Optional[str], fmt: str):
    """
    Show the relation catalog.

    Examples:

        wpduality list --tag pure-only
    """
    entries = list_relations(tag=tag)
    if fmt == "json":
        click.echo(json.dumps(entries, indent=2))
        return
    for entry in entries:
        tags = ",".join(entry["tags"])
        click.echo(f"{entry['id']:<12} {entry['direction']:<4} {entry['description']}")
        click.echo(f"{'':<12} [{tags}] {entry['anchor']}")


@cli.command()
@click.option("--dims", "-d", default=None, help='Profile spec such as "2x3"')
@run_options
def verify(dims, **kwargs):
    """
    Verify relations over a sampled ensemble.

    Examples:

        wpduality verify --relations R19 --dims 2x2 --ensemble haar-pure --samples 100000 --seed 42

        wpduality verify --relations R12,R15 --dims 3x3 --log-base 2
    """
    try:
        config = RunConfig.load("verify", kwargs.pop("config_file"), _overrides(dims=dims, **kwargs))
        reports, runtime = _run(config, [config.dims])
        _emit(_render(config, reports, runtime), config.out_path)
    except DualityError as e:
        _fail(str(e))
    _exit_for(reports)


@cli.command()
@click.option("--dims-list", "-D", "dims_list", multiple=True, help='Profiles, comma-separated or repeated: "2x2,2x3"')
@run_options
def sweep(dims_list: Tuple[str, ...], **kwargs):
    """
    Margin statistics per (relation, profile), as CSV by default.

    Examples:

        wpduality sweep --relations R12 --dims-list 2x2,2x3,3x3,2x4

        wpduality sweep --relations R6 -D 2x2x2 -D 2x2x3 --ensemble haar-pure
    """
    specs = [part.strip() for entry in dims_list for part in entry.split(",") if part.strip()]
    fmt = kwargs.pop("fmt") or "csv"
    try:
        config = RunConfig.load("sweep", kwargs.pop("config_file"), _overrides(dims_list=specs or None, fmt=fmt, **kwargs))
        if not config.dims_list:
            _fail("sweep needs at least one profile in --dims-list")
        reports, runtime = _run(config, config.dims_list)
        _emit(_render(config, reports, runtime), config.out_path)
    except DualityError as e:
        _fail(str(e))
    _exit_for(reports)


def load_state(spec: str, dims: Optional[str] = None) -> Tuple[DensityMatrix, Optional[PureState]]:
    """
    Resolve a state spec: a state file, schmidt(c1,c2,...), or a named state.

    Returns the density matrix and, when the state is known to be pure, its vector.
    """
    profile = DimensionProfile.parse(dims) if dims else None
    if Path(spec).is_file():
        rho = read_state_file(spec)
        return (rho.with_profile(profile) if profile else rho), None
    match = _SCHMIDT_RE.match(spec)
    if match:
        try:
            coeffs = [float(c) for c in match.group(1).split(",") if c.strip()]
        except ValueError as e:
            raise ConfigError(f"Malformed Schmidt coefficients in '{spec}': {e}") from e
        if profile is None:
            profile = DimensionProfile((len(coeffs), len(coeffs)))
        psi = schmidt_pure(coeffs, profile)
        return psi.density(), psi
    try:
        psi = named_pure(spec, profile)
        return psi.density(), psi
    except DualityError:
        return named_state(spec, profile), None


def _marginals(rho: DensityMatrix, base: LogBase) -> Dict[str, Any]:
    profile = rho.profile
    joiner = "" if all(len(label) == 1 for label in profile.labels) else ","
    out = {}
    for size in range(1, profile.n_parties):
        for keep in itertools.combinations(range(profile.n_parties), size):
            name = joiner.join(profile.labels[i] for i in keep)
            out[name] = measure_set(rho.reduced(keep), base).model_dump(mode="json")
    return out


def _state_info_channel(rho: DensityMatrix, cut: Optional[Cut]) -> KrausChannel:
    if cut is None:
        return depolarizing_channel(rho.dim, 0.5)
    return partial_trace_channel(rho.profile, cut.left)


@cli.command("state-info")
@click.option("--state", "-s", "state_spec", required=True, help="Named state, schmidt(c1,c2,...) or state file")
@click.option("--dims", "-d", default=None, help="Profile for named/schmidt states")
@click.option("--cut", default=None, help='Bipartition such as "A|BC"')
@click.option("--log-base", type=click.Choice(["2", "e"]), default=settings.DEFAULT_LOG_BASE, help="Entropy logarithm base")
@click.option("--tol", type=float, default=settings.TOL, help="Satisfaction tolerance")
@click.option("--sat-tol", type=float, default=settings.SAT_TOL, help="Saturation tolerance")
@click.option("--out", "out_path", type=click.Path(), default=None, help="Output file (default stdout)")
def state_info(state_spec: str, dims: Optional[str], cut: Optional[str], log_base: str, tol: float, sat_tol: float, out_path: Optional[str]):
    """
    Measures of one state plus every applicable relation record.

    Examples:

        wpduality state-info --state bell --cut "A|B"

        wpduality state-info --state w --cut "A|BC"

        wpduality state-info --state "schmidt(0.6,0.8)"
    """
    try:
        base = LogBase.parse(log_base)
        rho, psi = load_state(state_spec, dims)
        ctx = RelationContext.of(psi if psi is not None else rho, cut=cut, base=base, tol=tol, sat_tol=sat_tol)
        resolved_cut = ctx.resolved_cut
        ctx = RelationContext.of(
            psi if psi is not None else rho,
            cut=resolved_cut,
            sigma=maximally_mixed(rho.profile),
            channel=_state_info_channel(rho, resolved_cut),
            base=base,
            tol=tol,
            sat_tol=sat_tol,
        )
        document: Dict[str, Any] = {
            "tool_version": __version__,
            "state": {
                "spec": state_spec,
                "dims": rho.profile.spec,
                "labels": list(rho.profile.labels),
                "fingerprint": fingerprint(rho),
                "pure": ctx.is_pure,
            },
            "cut": resolved_cut.label(rho.profile) if resolved_cut else None,
            "measures": measure_set(rho, base).model_dump(mode="json"),
            "marginals": _marginals(rho, base),
        }
        if ctx.is_pure and resolved_cut is not None:
            document["bipartite"] = {
                "entanglement_entropy": entanglement_entropy(ctx.psi, resolved_cut, base),
                "generalized_concurrence": generalized_concurrence(ctx.psi, resolved_cut),
            }
        records, inapplicable = [], {}
        for relation in CATALOG.relations():
            try:
                records.append(relation.record(ctx).model_dump(mode="json"))
            except InapplicableRelationError as e:
                inapplicable[relation.id] = e.reason
        document["relations"] = records
        document["inapplicable"] = inapplicable
        _emit(json.dumps(document, indent=2) + "\n", out_path)
    except DualityError as e:
        _fail(str(e))


def _units_row(record) -> Dict[str, Any]:
    return {
        "lhs": record.lhs_value,
        "rhs": record.rhs_value,
        "margin": record.margin,
        "satisfied": record.satisfied,
    }


@cli.command("check-units")
@click.option("--samples", "-n", type=int, default=1000, help="Haar samples for the margin distribution")
@click.option("--seed", type=int, default=settings.DEFAULT_SEED, help="Run seed (default WPD_SEED)")
@click.option("--dims", "-d", default="2x2", help="Bipartite profile of the Haar ensemble")
@click.option("--out", "out_path", type=click.Path(), default=None, help="Output file (default stdout)")
def check_units(samples: int, seed: int, dims: str, out_path: Optional[str]):
    """
    Entanglement tradeoff under three unit readings on |00> and a Haar ensemble.

    The literal reading (nats entropy with the 1/(2 ln 2) constant) is
    expected to fail on product states; this command always exits 0.
    """
    try:
        product = named_pure("basis(0)", DimensionProfile.parse("2x2"))
        literal = CATALOG.get("R12-literal").record(RelationContext.of(product))
        bits = CATALOG.get("R12").record(RelationContext.of(product, base=LogBase.TWO))
        nats = CATALOG.get("R12").record(RelationContext.of(product, base=LogBase.E))
        config = RunConfig.load(
            "check-units", None,
            {"relations": ["R12-literal"], "dims": dims, "ensemble": "haar-pure", "samples": samples, "seed": seed},
        )
        (report,) = EnsembleVerifier().run(config)
        document = {
            "tool_version": __version__,
            "product_state": {
                "state": "|00>",
                "literal_nats": _units_row(literal),
                "base_two": _units_row(bits),
                "consistent_nats": _units_row(nats),
                "expected_literal_margin": math.log(2.0) - 1.0 / (2.0 * math.log(2.0)),
            },
            "config": config.echo(),
            "haar_ensemble": report.model_dump(mode="json", exclude={"run_config", "witnesses"}),
        }
        _emit(json.dumps(document, indent=2) + "\n", out_path)
    except DualityError as e:
        _fail(str(e))
    sys.exit(EXIT_OK)


def main():
    """Console-script entry point."""
    cli()


if __name__ == "__main__":
    main()
