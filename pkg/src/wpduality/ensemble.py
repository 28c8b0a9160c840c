"""
Ensemble verification engine.

Samples are drawn from per-sample seeds derived from (run seed, sample
index, stream), so a report depends only on its configuration and never on
the worker count or chunking.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import Pool
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .channels import KrausChannel, random_unital
from .config.settings import settings
from .duality import LogBase
from .exceptions import (
    ConfigError,
    DualityError,
    InapplicableRelationError,
    InvalidProfileError,
    UnknownRelationError,
)
from .profile import Cut, DimensionProfile
from .relations import CATALOG, Relation, RelationContext
from .serialization import to_record
from .states import (
    DensityMatrix,
    PureState,
    derive_seed,
    ginibre_mixed,
    haar_pure,
    named_pure,
    named_state,
)

__all__ = [
    "EnsembleSpec",
    "EnsembleConfig",
    "EnsembleReport",
    "Witness",
    "EnsembleVerifier",
    "run_ensemble",
    "draw_sample",
    "schmidt_grid",
]

logger = logging.getLogger(__name__)

STATE_STREAM = 0
PARTNER_STREAM = 1
CHANNEL_STREAM = 2
DEFAULT_UNITARIES = 4
MAX_GRID_RESOLUTION = 200

_SPEC_RE = re.compile(r"^\s*([a-z-]+)\s*(?:\((.*)\))?\s*$")

Sample = Union[PureState, DensityMatrix]


class EnsembleSpec(BaseModel):
    """Parsed ensemble spec: haar-pure, ginibre[(rank)], schmidt-sweep, named(name), unital-channel[(k)]."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["haar-pure", "ginibre", "schmidt-sweep", "named", "unital-channel"]
    rank: Optional[int] = None
    name: Optional[str] = None
    unitaries: int = DEFAULT_UNITARIES

    @classmethod
    def parse(cls, text: str) -> "EnsembleSpec":
        match = _SPEC_RE.match(text or "")
        if not match:
            raise ConfigError(f"Malformed ensemble spec '{text}'")
        kind, arg = match.group(1), match.group(2)
        try:
            if kind in ("haar-pure", "schmidt-sweep"):
                if arg:
                    raise ConfigError(f"Ensemble '{kind}' takes no argument")
                return cls(kind=kind)
            if kind == "ginibre":
                return cls(kind=kind, rank=int(arg) if arg else None)
            if kind == "named":
                if not arg:
                    raise ConfigError("Ensemble 'named' needs a state name, e.g. named(ghz)")
                return cls(kind=kind, name=arg)
            if kind == "unital-channel":
                return cls(kind=kind, unitaries=int(arg) if arg else DEFAULT_UNITARIES)
        except ValueError as e:
            raise ConfigError(f"Invalid argument in ensemble spec '{text}': {e}") from e
        raise ConfigError(
            f"Unknown ensemble '{kind}'; expected haar-pure, ginibre(rank), schmidt-sweep, named(name) or unital-channel(k)"
        )

    @field_validator("rank")
    @classmethod
    def _rank_positive(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError(f"ginibre rank must be >= 1, got {v}")
        return v

    @field_validator("unitaries")
    @classmethod
    def _unitaries_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"unital-channel needs at least one unitary, got {v}")
        return v

    @property
    def label(self) -> str:
        if self.kind == "ginibre" and self.rank is not None:
            return f"ginibre({self.rank})"
        if self.kind == "named":
            return f"named({self.name})"
        if self.kind == "unital-channel":
            return f"unital-channel({self.unitaries})"
        return self.kind

    def is_pure(self, profile: DimensionProfile) -> bool:
        if self.kind in ("haar-pure", "schmidt-sweep"):
            return True
        if self.kind == "ginibre":
            return self.rank == 1
        if self.kind == "named":
            return named_state(self.name, profile).is_pure()
        return False


def _partitions(total: int, parts: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of `total` into at most `parts` nonincreasing parts, zero padded."""
    largest = total if largest is None else largest
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total == 0:
        yield (0,) * parts
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=32)
def schmidt_grid(components: int, budget: int) -> Tuple[Tuple[float, ...], ...]:
    """
    Schmidt coefficient vectors on a simplex grid of squared coefficients.

    The resolution is the largest one whose grid fits in `budget` points;
    an empty tuple means not even the coarsest grid fits.
    """
    best: Tuple[Tuple[int, ...], ...] = ()
    resolution = 0
    for r in range(1, MAX_GRID_RESOLUTION + 1):
        points = tuple(_partitions(r, components))
        if len(points) > budget:
            break
        best, resolution = points, r
    return tuple(tuple(math.sqrt(k / resolution) for k in point) for point in best)


def _schmidt_sample(coeffs: Sequence[float], profile: DimensionProfile, cut: Cut) -> PureState:
    if cut.left != tuple(range(len(cut.left))):
        raise InvalidProfileError(f"schmidt-sweep needs a cut of leading parties, got {cut.label(profile)}")
    n_left, n_right = profile.dim_of(cut.left), profile.dim_of(cut.right)
    amps = np.zeros((n_left, n_right), dtype=np.complex128)
    for i, c in enumerate(coeffs):
        amps[i, i] = c
    return PureState(amps.reshape(-1), profile)


def draw_sample(spec: EnsembleSpec, profile: DimensionProfile, run_seed: int, index: int, samples: int, cut: Cut, stream: int = STATE_STREAM) -> Sample:
    """The state for sample `index` of a run; a pure function of its arguments."""
    seed = derive_seed(run_seed, index, stream)
    if spec.kind == "haar-pure":
        return haar_pure(None, seed, profile)
    if spec.kind == "ginibre":
        return ginibre_mixed(None, spec.rank, seed, profile)
    if spec.kind == "unital-channel":
        return ginibre_mixed(None, None, seed, profile)
    if spec.kind == "named":
        try:
            return named_pure(spec.name, profile)
        except DualityError:
            return named_state(spec.name, profile)
    if profile.n_parties < 2:
        raise InvalidProfileError(f"schmidt-sweep needs a multipartite profile, got {profile.spec}")
    components = min(profile.dim_of(cut.left), profile.dim_of(cut.right))
    grid = schmidt_grid(components, samples // 2)
    if index < len(grid):
        return _schmidt_sample(grid[index], profile, cut)
    return haar_pure(None, seed, profile)


class Witness(BaseModel):
    """A violating sample, kept as its serialized state record."""

    model_config = ConfigDict(frozen=True)

    sample_index: int
    sample_seed: int
    lhs_value: float
    rhs_value: float
    margin: float
    state: str
    partner: Optional[str] = None


class EnsembleReport(BaseModel):
    """Aggregated statistics of one relation over one ensemble run."""

    model_config = ConfigDict(frozen=True)

    relation_id: str
    dims: str
    samples: int
    violations: int
    min_margin: Optional[float]
    mean_margin: Optional[float]
    max_margin: Optional[float]
    saturation_count: int
    skipped: int = 0
    status: Literal["ok", "violated", "inapplicable"] = "ok"
    reason: Optional[str] = None
    witnesses: List[Witness] = Field(default_factory=list)
    run_config: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_counts(self) -> "EnsembleReport":
        if not 0 <= self.violations <= self.samples:
            raise ValueError(f"violations={self.violations} outside [0, samples={self.samples}]")
        if len(self.witnesses) > self.violations:
            raise ValueError("more witnesses than violations")
        expected = "inapplicable" if self.status == "inapplicable" else ("violated" if self.violations else "ok")
        if self.status != expected:
            raise ValueError(f"status '{self.status}' inconsistent with {self.violations} violations")
        return self

    @property
    def max_abs_margin(self) -> Optional[float]:
        if self.min_margin is None:
            return None
        return max(abs(self.min_margin), abs(self.max_margin))


class EnsembleConfig(BaseModel):
    """Inputs of one ensemble run."""

    model_config = ConfigDict(frozen=True, validate_default=True)

    relations: List[str] = Field(default_factory=lambda: ["all"])
    dims: str = "2x2"
    ensemble: str = "haar-pure"
    samples: int = settings.DEFAULT_SAMPLES
    seed: int = settings.DEFAULT_SEED
    log_base: LogBase = LogBase.parse(settings.DEFAULT_LOG_BASE)
    tol: float = settings.TOL
    sat_tol: float = settings.SAT_TOL
    cut: Optional[str] = None
    witness_cap: int = settings.WITNESS_CAP

    @field_validator("relations", mode="before")
    @classmethod
    def _resolve_relations(cls, v: Union[str, Sequence[str]]) -> List[str]:
        try:
            return [r.id for r in CATALOG.resolve(v)]
        except UnknownRelationError as e:
            raise ValueError(str(e)) from e

    @field_validator("dims")
    @classmethod
    def _dims_parse(cls, v: str) -> str:
        return DimensionProfile.parse(v).spec

    @field_validator("ensemble")
    @classmethod
    def _ensemble_parse(cls, v: str) -> str:
        return EnsembleSpec.parse(v).label

    @field_validator("log_base", mode="before")
    @classmethod
    def _log_base_parse(cls, v: Any) -> LogBase:
        return LogBase.parse(v)

    @field_validator("samples")
    @classmethod
    def _samples_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"samples must be >= 1, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def _seed_64bit(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {v}")
        return v

    @field_validator("tol", "sat_tol")
    @classmethod
    def _tolerance_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"tolerances must be positive, got {v}")
        return v

    @field_validator("witness_cap")
    @classmethod
    def _cap_nonnegative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"witness_cap must be >= 0, got {v}")
        return v

    @model_validator(mode="after")
    def _cut_fits_profile(self) -> "EnsembleConfig":
        if self.cut is not None:
            Cut.parse(self.cut, self.profile)
        return self

    @property
    def profile(self) -> DimensionProfile:
        return DimensionProfile.parse(self.dims)

    @property
    def spec(self) -> EnsembleSpec:
        return EnsembleSpec.parse(self.ensemble)

    def resolved_cut(self) -> Optional[Cut]:
        profile = self.profile
        if self.cut is not None:
            return Cut.parse(self.cut, profile)
        return Cut.default(profile) if profile.n_parties >= 2 else None

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude={"witness_cap"})


@dataclass
class _Tally:
    """Running statistics of one relation over a block of samples."""

    margins: List[float] = field(default_factory=list)
    violations: int = 0
    saturations: int = 0
    skipped: int = 0
    witnesses: List[Witness] = field(default_factory=list)

    def merge(self, other: "_Tally", cap: int) -> None:
        self.margins.extend(other.margins)
        self.violations += other.violations
        self.saturations += other.saturations
        self.skipped += other.skipped
        room = cap - len(self.witnesses)
        if room > 0:
            self.witnesses.extend(other.witnesses[:room])


@dataclass(frozen=True)
class _Block:
    config: EnsembleConfig
    relation_ids: Tuple[str, ...]
    start: int
    stop: int


def _context_for(config: EnsembleConfig, relations: Sequence[Relation], index: int, cut: Optional[Cut]) -> RelationContext:
    spec, profile = config.spec, config.profile
    state = draw_sample(spec, profile, config.seed, index, config.samples, cut)
    sigma = None
    if any(r.needs_pair for r in relations):
        partner = draw_sample(spec, profile, config.seed, index, config.samples, cut, PARTNER_STREAM)
        sigma = partner.density() if isinstance(partner, PureState) else partner
    channel: Optional[KrausChannel] = None
    if any(r.needs_channel for r in relations):
        channel = random_unital(profile.total_dim, spec.unitaries, derive_seed(config.seed, index, CHANNEL_STREAM))
    seed_info = {
        "run_seed": config.seed,
        "sample_index": index,
        "sample_seed": derive_seed(config.seed, index, STATE_STREAM),
    }
    return RelationContext.of(
        state, cut=cut, sigma=sigma, channel=channel, base=config.log_base,
        tol=config.tol, sat_tol=config.sat_tol, seed_info=seed_info,
    )


def _evaluate_block(block: _Block) -> Dict[str, _Tally]:
    """Evaluate every relation on samples [start, stop); runs inside pool workers."""
    config = block.config
    relations = [CATALOG.get(rid) for rid in block.relation_ids]
    cut = config.resolved_cut()
    tallies = {r.id: _Tally() for r in relations}
    for index in range(block.start, block.stop):
        ctx = _context_for(config, relations, index, cut)
        logger.debug(f"sample {index} seed {ctx.seed_info['sample_seed']}")
        for relation in relations:
            tally = tallies[relation.id]
            try:
                record = relation.record(ctx)
            except InapplicableRelationError:
                tally.skipped += 1
                continue
            tally.margins.append(record.margin)
            if record.saturated:
                tally.saturations += 1
            if not record.satisfied:
                tally.violations += 1
                if len(tally.witnesses) < config.witness_cap:
                    tally.witnesses.append(
                        Witness(
                            sample_index=index,
                            sample_seed=ctx.seed_info["sample_seed"],
                            lhs_value=record.lhs_value,
                            rhs_value=record.rhs_value,
                            margin=record.margin,
                            state=to_record(ctx.state),
                            partner=to_record(ctx.sigma) if relation.needs_pair else None,
                        )
                    )
    return tallies


class EnsembleVerifier:
    """Runs relation batteries over sampled ensembles and aggregates the results."""

    def __init__(self, workers: int = settings.WORKERS, block_size: int = 256):
        self.logger = logging.getLogger(__name__)
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self.block_size = block_size

    def run(self, config: EnsembleConfig) -> List[EnsembleReport]:
        """
        Evaluate every configured relation over `config.samples` samples.

        Relations that can never apply to the profile or ensemble come back
        as inapplicable reports without sampling.

        Args:
            config: The run configuration.

        Returns:
            List[EnsembleReport]: One report per relation, in configured order.
        """
        try:
            profile, spec = config.profile, config.spec
            pure = spec.is_pure(profile)
            active: List[Relation] = []
            blocked: Dict[str, str] = {}
            for rid in config.relations:
                relation = CATALOG.get(rid)
                reason = relation.structural_problem(profile, pure_ensemble=pure)
                if reason:
                    self.logger.warning(f"{rid} inapplicable on {profile.spec}/{spec.label}: {reason}")
                    blocked[rid] = reason
                else:
                    active.append(relation)

            tallies = self._sample(config, active) if active else {}
            reports = []
            for rid in config.relations:
                if rid in blocked:
                    reports.append(self._inapplicable(config, rid, blocked[rid]))
                else:
                    reports.append(self._summarize(config, rid, tallies[rid]))
            return reports
        except DualityError as e:
            self.logger.error(f"Ensemble run failed for {config.dims}/{config.ensemble}: {e}")
            raise

    def _blocks(self, config: EnsembleConfig, relation_ids: Tuple[str, ...]) -> List[_Block]:
        return [
            _Block(config, relation_ids, start, min(start + self.block_size, config.samples))
            for start in range(0, config.samples, self.block_size)
        ]

    def _sample(self, config: EnsembleConfig, relations: List[Relation]) -> Dict[str, _Tally]:
        ids = tuple(r.id for r in relations)
        blocks = self._blocks(config, ids)
        self.logger.info(
            f"Sampling {config.samples} x {config.ensemble} on {config.dims} for {', '.join(ids)} "
            f"({len(blocks)} blocks, {self.workers} workers)"
        )
        if self.workers > 1 and len(blocks) > 1:
            with Pool(processes=self.workers) as pool:
                partials = pool.map(_evaluate_block, blocks)
        else:
            partials = [_evaluate_block(block) for block in blocks]

        totals = {rid: _Tally() for rid in ids}
        for partial in partials:
            for rid, tally in partial.items():
                totals[rid].merge(tally, config.witness_cap)
        return totals

    def _summarize(self, config: EnsembleConfig, relation_id: str, tally: _Tally) -> EnsembleReport:
        evaluated = len(tally.margins)
        if evaluated == 0:
            return self._inapplicable(config, relation_id, f"inapplicable on all {tally.skipped} samples", tally.skipped)
        if tally.violations:
            self.logger.warning(f"{relation_id}: {tally.violations}/{evaluated} violations on {config.dims}")
        else:
            self.logger.info(f"{relation_id}: {evaluated} samples, no violations")
        return EnsembleReport(
            relation_id=relation_id,
            dims=config.dims,
            samples=evaluated,
            violations=tally.violations,
            min_margin=min(tally.margins),
            mean_margin=math.fsum(tally.margins) / evaluated,
            max_margin=max(tally.margins),
            saturation_count=tally.saturations,
            skipped=tally.skipped,
            status="violated" if tally.violations else "ok",
            witnesses=tally.witnesses,
            run_config=config.echo(),
        )

    def _inapplicable(self, config: EnsembleConfig, relation_id: str, reason: str, skipped: int = 0) -> EnsembleReport:
        return EnsembleReport(
            relation_id=relation_id,
            dims=config.dims,
            samples=0,
            violations=0,
            min_margin=None,
            mean_margin=None,
            max_margin=None,
            saturation_count=0,
            skipped=skipped,
            status="inapplicable",
            reason=reason,
            run_config=config.echo(),
        )


def run_ensemble(config: Union[EnsembleConfig, Dict[str, Any]], workers: int = 1) -> List[EnsembleReport]:
    """Convenience wrapper: validate `config` and run it."""
    if not isinstance(config, EnsembleConfig):
        config = EnsembleConfig(**config)
    return EnsembleVerifier(workers=workers).run(config)
