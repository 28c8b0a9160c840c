"""
The relation catalog.

Each complementarity, monogamy or tradeoff relation is a Relation whose
evaluator returns one or more (lhs, rhs) sub-checks, all oriented along the
relation's direction. A record keeps the sub-check with the smallest margin.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from .channels import KrausChannel, apply, is_unital
from .config.settings import settings
from .duality import (
    LogBase,
    entanglement_entropy,
    generalized_concurrence,
    info_content_I,
    info_content_S,
    norm_sandwich_factor,
    pinsker_lower_bound,
    predictability,
    qubit_predictability,
    qubit_visibility,
    rank_factor_R,
    relative_entropy,
    reverse_pinsker_M,
    two_qubit_pure_measures,
    visibility,
)
from .exceptions import InapplicableRelationError, InvalidCutError, UnknownRelationError
from .profile import Cut, DimensionProfile
from .qlinalg import hermitian_eig, hs_norm, trace_norm
from .serialization import fingerprint
from .states import DensityMatrix, PureState, TwoQubitAmplitudes, maximally_mixed

__all__ = [
    "Direction",
    "Relation",
    "RelationContext",
    "RelationRecord",
    "RelationCatalog",
    "CATALOG",
    "list_relations",
    "evaluate_relation",
]

logger = logging.getLogger(__name__)

Check = Tuple[float, float]


class Direction(str, Enum):
    LEQ = "LEQ"
    GEQ = "GEQ"
    EQ = "EQ"

    def margin(self, lhs: float, rhs: float) -> float:
        if self is Direction.LEQ:
            return rhs - lhs
        if self is Direction.GEQ:
            return lhs - rhs
        return -abs(lhs - rhs)


def _s2(rho: DensityMatrix) -> float:
    return info_content_S(rho) ** 2


def _max_s2(n: int) -> float:
    return 2.0 * (n - 1) / n


@dataclass(frozen=True, eq=False)
class RelationContext:
    """Everything a relation may look at: the state plus optional cut, partner state, channel."""

    state: DensityMatrix
    pure: Optional[PureState] = None
    cut: Optional[Cut] = None
    sigma: Optional[DensityMatrix] = None
    channel: Optional[KrausChannel] = None
    base: LogBase = LogBase.TWO
    tol: float = settings.TOL
    sat_tol: float = settings.SAT_TOL
    seed_info: Optional[Dict[str, int]] = None

    @classmethod
    def of(
        cls,
        state: Union[DensityMatrix, PureState],
        cut: Optional[Union[Cut, str]] = None,
        sigma: Optional[DensityMatrix] = None,
        channel: Optional[KrausChannel] = None,
        base: Union[LogBase, str] = LogBase.TWO,
        tol: float = settings.TOL,
        sat_tol: float = settings.SAT_TOL,
        seed_info: Optional[Dict[str, int]] = None,
    ) -> "RelationContext":
        pure = state if isinstance(state, PureState) else None
        rho = state.density() if isinstance(state, PureState) else state
        if isinstance(cut, str):
            cut = Cut.parse(cut, rho.profile)
        return cls(rho, pure, cut, sigma, channel, LogBase.parse(base), tol, sat_tol, seed_info)

    @property
    def profile(self) -> DimensionProfile:
        return self.state.profile

    @property
    def n(self) -> int:
        return self.state.dim

    @cached_property
    def resolved_cut(self) -> Optional[Cut]:
        if self.cut is not None:
            return self.cut
        if self.profile.n_parties < 2:
            return None
        return Cut.default(self.profile)

    @cached_property
    def is_pure(self) -> bool:
        return self.pure is not None or self.state.is_pure(1e-10)

    @cached_property
    def psi(self) -> PureState:
        if self.pure is not None:
            return self.pure
        top = hermitian_eig(self.state.op).eigenvectors[:, 0]
        return PureState(top / np.linalg.norm(top), self.profile)

    @cached_property
    def sides(self) -> Tuple[DensityMatrix, DensityMatrix]:
        cut = self.resolved_cut
        return self.state.reduced(cut.left), self.state.reduced(cut.right)

    @cached_property
    def entanglement(self) -> float:
        return entanglement_entropy(self.psi, self.resolved_cut, self.base)

    @cached_property
    def entanglement_nats(self) -> float:
        return entanglement_entropy(self.psi, self.resolved_cut, LogBase.E)

    def reduced(self, keep: Iterable[int]) -> DensityMatrix:
        return self.state.reduced(keep)

    @cached_property
    def fingerprint(self) -> str:
        return fingerprint(self.state)


class RelationRecord(BaseModel):
    """One evaluation of one relation on one context."""

    model_config = ConfigDict(frozen=True)

    relation_id: str
    direction: Direction
    lhs_value: float
    rhs_value: float
    margin: float
    satisfied: bool
    saturated: bool
    state_fingerprint: str
    seed_info: Optional[Dict[str, int]] = None


Applicability = Callable[[RelationContext], Optional[str]]
Structural = Callable[[DimensionProfile], Optional[str]]


@dataclass(frozen=True)
class Relation:
    """A registered relation with its evaluator and applicability rules."""

    id: str
    description: str
    direction: Direction
    anchor: str
    evaluate: Callable[[RelationContext], List[Check]] = field(repr=False)
    tags: FrozenSet[str] = frozenset()
    requirements: Tuple[Applicability, ...] = field(default=(), repr=False)
    structure: Tuple[Structural, ...] = field(default=(), repr=False)
    saturation_note: str = ""

    @property
    def diagnostic(self) -> bool:
        return "diagnostic" in self.tags

    @property
    def needs_pair(self) -> bool:
        return "pair" in self.tags

    @property
    def needs_channel(self) -> bool:
        return "channel" in self.tags

    @property
    def pure_only(self) -> bool:
        return "pure-only" in self.tags

    def structural_problem(self, profile: DimensionProfile, pure_ensemble: Optional[bool] = None) -> Optional[str]:
        """Reason this relation can never apply on the profile/ensemble, or None."""
        for rule in self.structure:
            reason = rule(profile)
            if reason:
                return reason
        if self.pure_only and pure_ensemble is False:
            return "requires pure states but the ensemble is mixed"
        return None

    def why_inapplicable(self, ctx: RelationContext) -> Optional[str]:
        reason = self.structural_problem(ctx.profile)
        if reason:
            return reason
        for rule in self.requirements:
            try:
                reason = rule(ctx)
            except InvalidCutError as e:
                reason = str(e)
            if reason:
                return reason
        return None

    def applies(self, ctx: RelationContext) -> bool:
        return self.why_inapplicable(ctx) is None

    def describe(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "description": self.description,
            "direction": self.direction.value,
            "anchor": self.anchor,
            "tags": sorted(self.tags),
            "saturation_note": self.saturation_note,
        }

    def record(self, ctx: RelationContext) -> RelationRecord:
        reason = self.why_inapplicable(ctx)
        if reason:
            raise InapplicableRelationError(self.id, reason)
        checks = self.evaluate(ctx)
        margins = [self.direction.margin(lhs, rhs) for lhs, rhs in checks]
        worst = int(np.argmin(margins))
        lhs, rhs = checks[worst]
        margin = margins[worst]
        if margin < -ctx.tol:
            logger.debug(f"{self.id} violated on {ctx.fingerprint}: margin {margin:.3e}")
        return RelationRecord(
            relation_id=self.id,
            direction=self.direction,
            lhs_value=float(lhs),
            rhs_value=float(rhs),
            margin=float(margin),
            satisfied=bool(margin >= -ctx.tol),
            saturated=bool(abs(margin) <= ctx.sat_tol),
            state_fingerprint=ctx.fingerprint,
            seed_info=ctx.seed_info,
        )


# Applicability rules ---------------------------------------------------------


def _parties(count: int) -> Structural:
    def rule(profile: DimensionProfile) -> Optional[str]:
        if profile.n_parties != count:
            return f"requires exactly {count} parties, profile {profile.spec} has {profile.n_parties}"
        return None

    return rule


def _at_least_two_parties(profile: DimensionProfile) -> Optional[str]:
    if profile.n_parties < 2:
        return f"requires a multipartite profile, got {profile.spec}"
    return None


def _two_qubits(profile: DimensionProfile) -> Optional[str]:
    if profile.dims != (2, 2):
        return f"requires a 2x2 profile, got {profile.spec}"
    return None


def _has_qubit(profile: DimensionProfile) -> Optional[str]:
    if 2 not in profile.dims:
        return f"requires at least one qubit party, got {profile.spec}"
    return None


def _pure(ctx: RelationContext) -> Optional[str]:
    return None if ctx.is_pure else "requires a pure state"


def _cut_valid(ctx: RelationContext) -> Optional[str]:
    if ctx.resolved_cut is None:
        return "requires a cut"
    Cut.from_groups(ctx.resolved_cut.left, ctx.resolved_cut.right, ctx.profile)
    return None


def _partner(ctx: RelationContext) -> Optional[str]:
    if ctx.sigma is None:
        return "requires a second state sigma"
    if ctx.sigma.dim != ctx.n:
        return f"sigma has dim {ctx.sigma.dim}, state has dim {ctx.n}"
    if math.isinf(relative_entropy(ctx.state, ctx.sigma, ctx.base)):
        return "D(rho||sigma) is infinite (support of rho not inside support of sigma)"
    return None


def _unital_channel(ctx: RelationContext) -> Optional[str]:
    if ctx.channel is None:
        return "requires a channel"
    if ctx.channel.in_dim != ctx.n:
        return f"channel input dim {ctx.channel.in_dim} does not match state dim {ctx.n}"
    if not is_unital(ctx.channel, 1e-10):
        return "channel is not unital"
    return None


# Evaluators ------------------------------------------------------------------


def _r1(ctx):
    return [(_s2(ctx.state), _max_s2(ctx.n))]


def _r2(ctx):
    c2 = generalized_concurrence(ctx.psi, ctx.resolved_cut) ** 2
    return [(_s2(side) + c2, _max_s2(side.dim)) for side in ctx.sides]


def _r3(ctx):
    c2 = generalized_concurrence(ctx.psi, ctx.resolved_cut) ** 2
    a, b = ctx.sides
    return [(_s2(a) + _s2(b) + 2.0 * c2, _max_s2(a.dim) + _max_s2(b.dim))]


def _tripartite(ctx):
    n_a, n_b, n_c = ctx.profile.dims
    return n_a, n_b, n_c, ctx.reduced((0, 1)), ctx.reduced((0, 2))


def _monogamy(coefficient: Callable[[int, int, int], float]):
    def evaluate(ctx):
        n_a, n_b, n_c, ab, ac = _tripartite(ctx)
        return [(_s2(ab) + _s2(ac), coefficient(n_a, n_b, n_c) * _s2(ctx.state))]

    return evaluate


def _tight_coefficient(n_a: int, n_b: int, n_c: int) -> float:
    n = n_a * n_b * n_c
    return (2.0 * n - n_c - n_b) / (n - 1.0)


def _r4_purity(ctx):
    n_a, n_b, n_c, ab, ac = _tripartite(ctx)
    p = ctx.state.purity()
    return [(ab.purity(), n_c * p), (ac.purity(), n_b * p)]


def _r7(ctx):
    gap = ctx.state.op - maximally_mixed(ctx.profile).op
    return [(info_content_S(ctx.state), math.sqrt(2.0) * hs_norm(gap))]


def _r8(ctx):
    a, b = ctx.sides
    s2_ab = _s2(ctx.state)
    return [(s2_ab, _s2(a) / b.dim), (s2_ab, _s2(b) / a.dim)]


def _r8_purity(ctx):
    a, b = ctx.sides
    p_ab = ctx.state.purity()
    ratio_a = p_ab / a.purity()
    ratio_b = p_ab / b.purity()
    return [(1.0 / b.dim, ratio_a), (ratio_a, float(a.dim)), (1.0 / a.dim, ratio_b), (ratio_b, float(b.dim))]


def _r9(ctx):
    i = info_content_I(ctx.state)
    return [(_s2(ctx.state), i), (i, _max_s2(ctx.n))]


def _r10(ctx):
    return [(info_content_I(ctx.state), _max_s2(ctx.n))]


def _sandwich(factor):
    def evaluate(ctx):
        s = info_content_S(ctx.state)
        i = info_content_I(ctx.state)
        r = factor(ctx.state, maximally_mixed(ctx.profile))
        return [(s, i), (i, math.sqrt(2.0 * r) * s)]

    return evaluate


def _pv2(rho: DensityMatrix) -> float:
    return predictability(rho) ** 2 + visibility(rho) ** 2


def _r12(ctx):
    c = ctx.base.pinsker_constant
    return [(ctx.entanglement + c * info_content_I(k) ** 2, float(ctx.base.log(k.dim))) for k in ctx.sides]


def _r12_literal(ctx):
    c = 1.0 / (2.0 * math.log(2.0))
    return [(ctx.entanglement_nats + c * info_content_I(k) ** 2, math.log(k.dim)) for k in ctx.sides]


def _r13(ctx):
    c = ctx.base.pinsker_constant
    checks = []
    for k in ctx.sides:
        bound = float(ctx.base.log(k.dim))
        checks.append((ctx.entanglement + c * _s2(k), bound))
        checks.append((ctx.entanglement + c * _pv2(k), bound))
    return checks


def _r14(ctx):
    c = ctx.base.pinsker_constant
    total = sum(_pv2(k) for k in ctx.sides)
    return [(2.0 * ctx.entanglement + c * total, float(ctx.base.log(ctx.n)))]


def _reverse_terms(ctx, k: DensityMatrix) -> Tuple[float, float]:
    mixed = maximally_mixed(k.profile)
    return reverse_pinsker_M(k, mixed, ctx.base), norm_sandwich_factor(k, mixed)


def _r15(ctx):
    checks = []
    for k in ctx.sides:
        m, _ = _reverse_terms(ctx, k)
        checks.append((ctx.entanglement + m * info_content_I(k), float(ctx.base.log(k.dim))))
    return checks


def _r16(ctx):
    checks = []
    for k in ctx.sides:
        m, r = _reverse_terms(ctx, k)
        checks.append((ctx.entanglement + m * math.sqrt(2.0 * r * _pv2(k)), float(ctx.base.log(k.dim))))
    return checks


def _r16_s(ctx):
    checks = []
    for k in ctx.sides:
        m, r = _reverse_terms(ctx, k)
        checks.append((ctx.entanglement + m * math.sqrt(2.0 * r) * info_content_S(k), float(ctx.base.log(k.dim))))
    return checks


def _r17(ctx):
    return [(info_content_I(apply(ctx.channel, ctx.state)), info_content_I(ctx.state))]


def _r17_ptrace(ctx):
    whole = info_content_I(ctx.state)
    return [(whole, info_content_I(k)) for k in ctx.sides]


def _r17_hs(ctx):
    whole = info_content_S(ctx.state)
    return [(whole, info_content_S(k)) for k in ctx.sides]


def _r18(ctx):
    _, _, _, ab, ac = _tripartite(ctx)
    return [(info_content_I(ab) + info_content_I(ac), 2.0 * info_content_I(ctx.state))]


def _r19(ctx):
    measures = two_qubit_pure_measures(TwoQubitAmplitudes.from_pure(ctx.psi))
    s1, s2 = measures.complementarity_sums()
    return [(s1, 1.0), (s2, 1.0)]


def _r20(ctx):
    if ctx.profile.n_parties == 1:
        qubits = [ctx.state]
    else:
        qubits = [ctx.reduced((i,)) for i, d in enumerate(ctx.profile.dims) if d == 2]
    return [(qubit_predictability(q) ** 2 + qubit_visibility(q) ** 2, 1.0) for q in qubits]


def _r21(ctx):
    return [(relative_entropy(ctx.state, ctx.sigma, ctx.base), pinsker_lower_bound(ctx.state, ctx.sigma, ctx.base))]


def _r22(ctx):
    d = relative_entropy(ctx.state, ctx.sigma, ctx.base)
    m = reverse_pinsker_M(ctx.state, ctx.sigma, ctx.base)
    return [(d, m * trace_norm(ctx.state.op - ctx.sigma.op))]


# Catalog ---------------------------------------------------------------------


class RelationCatalog:
    """Registry of relations in stable registration order."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._relations: Dict[str, Relation] = {}

    def register(self, relation: Relation) -> Relation:
        if relation.id in self._relations:
            raise ValueError(f"Relation {relation.id} is already registered")
        self._relations[relation.id] = relation
        return relation

    def get(self, relation_id: str) -> Relation:
        try:
            return self._relations[relation_id]
        except KeyError:
            raise UnknownRelationError(relation_id)

    def __contains__(self, relation_id: str) -> bool:
        return relation_id in self._relations

    def __len__(self) -> int:
        return len(self._relations)

    def ids(self) -> List[str]:
        return list(self._relations)

    def relations(self, tag: Optional[str] = None, include_diagnostic: bool = True) -> List[Relation]:
        selected = []
        for relation in self._relations.values():
            if tag is not None and tag not in relation.tags:
                continue
            if relation.diagnostic and not include_diagnostic:
                continue
            selected.append(relation)
        return selected

    def resolve(self, ids: Union[str, Sequence[str]]) -> List[Relation]:
        """Relations for an id list; 'all' expands to every non-diagnostic relation."""
        if isinstance(ids, str):
            ids = [part.strip() for part in ids.split(",") if part.strip()]
        if not ids:
            raise UnknownRelationError("")
        selected: List[Relation] = []
        for relation_id in ids:
            batch = self.relations(include_diagnostic=False) if relation_id.lower() == "all" else [self.get(relation_id)]
            selected.extend(r for r in batch if r not in selected)
        self.logger.debug(f"Resolved relations: {[r.id for r in selected]}")
        return selected


def _build_catalog() -> RelationCatalog:
    catalog = RelationCatalog()
    add = catalog.register
    LEQ, GEQ, EQ = Direction.LEQ, Direction.GEQ, Direction.EQ
    bipartite_pure = (_pure, _cut_valid)
    bipartite = (_cut_valid,)
    three = (_parties(3),)

    add(Relation("R1", "S^2 <= 2(n-1)/n", LEQ,
                 "single-party complementarity: total information content bound", _r1,
                 frozenset({"single"}), saturation_note="equality iff the state is pure"))
    add(Relation("R2", "S_k^2 + (C^n)^2 = 2(n_k-1)/n_k for pure bipartite states", EQ,
                 "subsystem information content plus generalized concurrence", _r2,
                 frozenset({"pure-only", "bipartite", "identity"}), bipartite_pure, (_at_least_two_parties,),
                 "identity on pure states"))
    add(Relation("R3", "S_A^2 + S_B^2 + 2(C^n)^2 <= 2(n_A-1)/n_A + 2(n_B-1)/n_B", LEQ,
                 "sum of both subsystem complementarity relations", _r3,
                 frozenset({"pure-only", "bipartite"}), bipartite_pure, (_at_least_two_parties,),
                 "equality on every pure state"))
    add(Relation("R4", "S^2_AB + S^2_AC <= (n_B + n_C) S^2_ABC", LEQ,
                 "tripartite monogamy for mixed states, coefficient as derived in the proof",
                 _monogamy(lambda a, b, c: float(b + c)), frozenset({"tripartite", "mixed"}), (), three))
    add(Relation("R4'", "S^2_AB + S^2_AC <= (n_A + n_B) S^2_ABC", LEQ,
                 "tripartite monogamy for mixed states, coefficient as printed in the statement",
                 _monogamy(lambda a, b, c: float(a + b)), frozenset({"tripartite", "mixed", "diagnostic"}), (), three,
                 "differs from R4 only when n_A != n_C"))
    add(Relation("R4-purity", "tr rho_AB^2 <= n_C tr rho_ABC^2 and tr rho_AC^2 <= n_B tr rho_ABC^2", LEQ,
                 "purity bounds behind the tripartite monogamy proof", _r4_purity,
                 frozenset({"tripartite", "mixed", "purity"}), (), three))
    add(Relation("R5", "S^2_AB + S^2_AC <= 2 S^2_ABC for pure tripartite states", LEQ,
                 "improved monogamy bound for pure states", _monogamy(lambda a, b, c: 2.0),
                 frozenset({"pure-only", "tripartite"}), (_pure,), three))
    add(Relation("R6", "S^2_AB + S^2_AC <= (2n - n_B - n_C)/(n - 1) S^2_ABC for pure tripartite states", LEQ,
                 "tightest monogamy bound for pure states", _monogamy(_tight_coefficient),
                 frozenset({"pure-only", "tripartite"}), (_pure,), three))
    add(Relation("R7", "S = sqrt(2) ||rho - I/n||_2", EQ,
                 "information content as Hilbert-Schmidt distance to the maximally mixed state", _r7,
                 frozenset({"single", "identity"}), saturation_note="identity"))
    add(Relation("R8", "S^2_AB >= S^2_A / n_B and S^2_AB >= S^2_B / n_A", GEQ,
                 "composite Hilbert-Schmidt information content versus subsystems", _r8,
                 frozenset({"bipartite", "mixed"}), bipartite, (_at_least_two_parties,)))
    add(Relation("R8-purity", "1/n_B <= tr rho_AB^2 / tr rho_A^2 <= n_A (and A <-> B)", LEQ,
                 "purity ratio bounds behind the subsystem relations", _r8_purity,
                 frozenset({"bipartite", "mixed", "purity"}), bipartite, (_at_least_two_parties,)))
    add(Relation("R9", "S^2 = I = 2(1 - 1/n) for pure states", EQ,
                 "pure-state identity between both information contents", _r9,
                 frozenset({"pure-only", "single", "identity"}), (_pure,)))
    add(Relation("R10", "I <= 2(1 - 1/n)", LEQ,
                 "upper bound on the trace-distance information content", _r10,
                 frozenset({"single"}), saturation_note="equality iff the state is pure"))
    add(Relation("R11", "S <= I <= sqrt(2 R(rho, I/n)) S, R = r_rho r_sigma / (r_rho + r_sigma)", LEQ,
                 "norm sandwich between the two information contents", _sandwich(norm_sandwich_factor),
                 frozenset({"single"})))
    add(Relation("R11'", "S <= I <= sqrt(2 R(rho, I/n)) S, R = (r_rho + r_sigma) / (r_rho r_sigma)", LEQ,
                 "norm sandwich with the rank factor as printed in the statement", _sandwich(rank_factor_R),
                 frozenset({"single", "diagnostic"}), saturation_note="fails on full-rank states once n >= 4"))
    add(Relation("R12", "E + c I(rho_k)^2 <= log n_k", LEQ,
                 "entanglement versus trace-distance information content (Pinsker)", _r12,
                 frozenset({"pure-only", "bipartite", "entropy"}), bipartite_pure, (_at_least_two_parties,),
                 "equality on maximally entangled states"))
    add(Relation("R12-literal", "E_nats + I(rho_k)^2 / (2 ln 2) <= ln n_k", LEQ,
                 "entanglement tradeoff read literally with natural-log entropies and the bits constant", _r12_literal,
                 frozenset({"pure-only", "bipartite", "entropy", "diagnostic"}), bipartite_pure,
                 (_at_least_two_parties,), "violated by product states: 1/(2 ln 2) > ln 2"))
    add(Relation("R13", "E + c S(rho_k)^2 <= log n_k and E + c (P_k^2 + V_k^2) <= log n_k", LEQ,
                 "entanglement versus Hilbert-Schmidt information content", _r13,
                 frozenset({"pure-only", "bipartite", "entropy"}), bipartite_pure, (_at_least_two_parties,)))
    add(Relation("R14", "2E + c sum_k (P_k^2 + V_k^2) <= log n", LEQ,
                 "sum of both subsystem entanglement tradeoffs", _r14,
                 frozenset({"pure-only", "bipartite", "entropy"}), bipartite_pure, (_at_least_two_parties,)))
    add(Relation("R15", "E + M(rho_k, I/n_k) I(rho_k) >= log n_k", GEQ,
                 "reverse entanglement tradeoff (reverse Pinsker)", _r15,
                 frozenset({"pure-only", "bipartite", "entropy"}), bipartite_pure, (_at_least_two_parties,),
                 "equality on maximally entangled states"))
    add(Relation("R16", "E + M sqrt(2R (P_k^2 + V_k^2)) >= log n_k", GEQ,
                 "reverse tradeoff in predictability/visibility form", _r16,
                 frozenset({"pure-only", "bipartite", "entropy"}), bipartite_pure, (_at_least_two_parties,)))
    add(Relation("R16-S", "E + M sqrt(2R) S(rho_k) >= log n_k", GEQ,
                 "reverse tradeoff in Hilbert-Schmidt information content form", _r16_s,
                 frozenset({"pure-only", "bipartite", "entropy"}), bipartite_pure, (_at_least_two_parties,)))
    add(Relation("R17", "I(Phi(rho)) <= I(rho) for unital Phi", LEQ,
                 "trace-distance information content is monotone under unital channels", _r17,
                 frozenset({"channel"}), (_unital_channel,)))
    add(Relation("R17-ptrace", "I(rho_AB) >= I(rho_A) and I(rho_AB) >= I(rho_B)", GEQ,
                 "composite information content dominates its parts (partial trace is unital)", _r17_ptrace,
                 frozenset({"bipartite", "mixed"}), bipartite, (_at_least_two_parties,)))
    add(Relation("R17-HS", "S(rho_AB) >= S(rho_A) and S(rho_AB) >= S(rho_B)", GEQ,
                 "Hilbert-Schmidt information content under partial trace (not monotone)", _r17_hs,
                 frozenset({"bipartite", "mixed", "diagnostic"}), bipartite, (_at_least_two_parties,),
                 "violated e.g. by |0><0| (x) I/2"))
    add(Relation("R18", "I(rho_AB) + I(rho_AC) <= 2 I(rho_ABC)", LEQ,
                 "weak monogamy of the trace-distance information content", _r18,
                 frozenset({"tripartite", "mixed"}), (), three))
    add(Relation("R19", "C^2 + P_k^2 + V_k^2 = 1 (k = 1, 2) for two-qubit pure states", EQ,
                 "two-qubit complementarity identity", _r19,
                 frozenset({"pure-only", "two-qubit", "identity"}), (_pure,), (_two_qubits,)))
    add(Relation("R20", "P^2 + V^2 <= 1 for every qubit", LEQ,
                 "qubit wave-particle complementarity", _r20, frozenset({"qubit"}), (), (_has_qubit,),
                 "equality iff the qubit is pure"))
    add(Relation("R21", "D(rho||sigma) >= c ||rho - sigma||_1^2", GEQ,
                 "quantum Pinsker inequality", _r21, frozenset({"pair", "entropy"}), (_partner,)))
    add(Relation("R22", "D(rho||sigma) <= M(rho, sigma) ||rho - sigma||_1", LEQ,
                 "reverse Pinsker inequality", _r22, frozenset({"pair", "entropy"}), (_partner,)))
    return catalog


CATALOG = _build_catalog()


def list_relations(tag: Optional[str] = None, include_diagnostic: bool = True) -> List[Dict[str, object]]:
    """Descriptors of every registered relation, in stable order."""
    return [r.describe() for r in CATALOG.relations(tag=tag, include_diagnostic=include_diagnostic)]


def evaluate_relation(relation_id: str, context: RelationContext) -> RelationRecord:
    """Evaluate one relation; raises InapplicableRelationError rather than skipping."""
    return CATALOG.get(relation_id).record(context)
