"""Weighted tile counting and the relative termination argument.

A configuration assigns positive weights to tiles and counts morphisms of
a chosen class from each tile into a graph. A rule is provably decreasing
when every nonpattern tiling of R' can be slid back into L' and the
weighted count of tilings of L exceeds that of R; nonincreasing when it
at least matches it. Pruning removes decreasing rules as long as no rule
is possibly increasing; an empty remainder proves termination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .graphs import (
    GraphError,
    GraphMorphism,
    LabeledGraph,
    MorphismClass,
    compose,
    in_class,
)
from .kernel import (
    enumerate_morphisms,
    factorize,
    pullback,
    right_inverses,
)
from .rewriting import PbpoRule, RuleSystem

# Bound on the number of slide choice functions tried before falling back
# to the canonical one.
_CHOICE_SEARCH_CAP = 512
# Bound on the number of outcome-set combinations enumerated for the
# ways-to-slide count.
_WAYS_CAP = 100_000


class AnalysisError(RuntimeError):
    """Raised when an analysis cannot be carried out exactly."""


@dataclass(frozen=True)
class Tile:
    """A small named graph whose occurrences are counted.

    ``source`` keeps the literal the tile was parsed from, for display."""

    name: str
    graph: LabeledGraph
    source: str | None = None


@dataclass(frozen=True)
class TileEntry:
    tile: Tile
    weight: int
    counting: MorphismClass

    def __post_init__(self) -> None:
        if not isinstance(self.weight, int) or self.weight < 1:
            raise GraphError(f"tile weight must be a positive integer, got {self.weight!r}")


@dataclass(frozen=True)
class TileConfig:
    entries: tuple[TileEntry, ...]

    @staticmethod
    def of(*entries: TileEntry) -> "TileConfig":
        return TileConfig(tuple(entries))


def tiling_weight(
    config: TileConfig,
    graph: LabeledGraph,
    *,
    budget: Callable[[], None] | None = None,
) -> int:
    """Total weight of the graph: sum over tiles of weight times count."""
    return sum(
        entry.weight
        * len(
            enumerate_morphisms(
                entry.tile.graph, graph, entry.counting, budget=budget
            )
        )
        for entry in config.entries
    )


def partition_by_iso(
    t_r: GraphMorphism, tilings: list[GraphMorphism]
) -> tuple[list[GraphMorphism], list[GraphMorphism]]:
    """Split tilings of R' into those that restrict isomorphically to R
    and the rest (pulling tR back along the tiling must be an iso)."""
    iso, noniso = [], []
    for t in tilings:
        if pullback(t_r, t).to_right.is_iso():
            iso.append(t)
        else:
            noniso.append(t)
    return iso, noniso


def valid_tilings(
    rule: PbpoRule,
    tile: Tile,
    counting: MorphismClass,
    *,
    budget: Callable[[], None] | None = None,
) -> tuple[list[GraphMorphism], list[GraphMorphism]]:
    """All tile morphisms into R', and the valid ones among them.

    A tiling is valid when pulling it back along tR lands in the counting
    class, i.e. its overlap with the pattern part is innocuous.
    """
    if rule.tR is None:
        raise GraphError(f"rule {rule.name} is not completed")
    homs = enumerate_morphisms(
        tile.graph, rule.Rp, MorphismClass.HOMOMORPHISM, budget=budget
    )
    valid = [
        t for t in homs if in_class(pullback(t, rule.tR).to_right, counting)
    ]
    return homs, valid


def compute_phi(
    rule: PbpoRule,
    tile: Tile,
    counting: MorphismClass,
    *,
    budget: Callable[[], None] | None = None,
) -> list[GraphMorphism]:
    """The valid tilings of R' that do not restrict isomorphically to R;
    these are the ones that must slide back into L'."""
    _, valid = valid_tilings(rule, tile, counting, budget=budget)
    _, noniso = partition_by_iso(rule.tR, valid)
    return noniso


@dataclass(frozen=True)
class SlideOption:
    """One way of transferring a tiling of R' to L'."""

    composite: GraphMorphism  # T -> K'
    slid: GraphMorphism  # T -> L'


def _morphism_key(m: GraphMorphism) -> tuple:
    return m.key()


def slide_options(
    rule: PbpoRule, f: GraphMorphism, counting: MorphismClass
) -> list[SlideOption]:
    """All class-compatible ways to slide one tiling of R' into L'.

    The tiling is pulled back along r'; every section of the projection to
    the tile yields a composite into K', kept when the mono part of its
    image factorization still lands in the class after l'. The slid tiling
    is l' composed with the composite. Empty when the projection has no
    section or every section is filtered out.
    """
    if rule.rp is None:
        raise GraphError(f"rule {rule.name} is not completed")
    pb = pullback(rule.rp, f)
    to_kp, to_tile = pb.to_left, pb.to_right
    options: dict[tuple, SlideOption] = {}
    for section in right_inverses(to_tile):
        composite = compose(to_kp, section)
        _, mono = factorize(composite)
        if not in_class(compose(rule.lp, mono), counting):
            continue
        slid = compose(rule.lp, composite)
        options.setdefault(_morphism_key(composite), SlideOption(composite, slid))
    return [options[k] for k in sorted(options)]


@dataclass
class SlidePreconditions:
    """Result of checking that sliding is possible and unambiguous."""

    ok: bool
    failure: str | None
    # Chosen option per (entry index, phi member index), when ok.
    chosen: dict[tuple[int, int], SlideOption] = field(default_factory=dict)


def check_slide_preconditions(
    rule: PbpoRule,
    config: TileConfig,
    *,
    budget: Callable[[], None] | None = None,
) -> SlidePreconditions:
    """Verify every nonpattern tiling slides, under one consistent choice.

    Each tiling needs at least one slide option, and a single choice
    function must keep slid results distinguishable: if two distinct
    composites are chosen, composing with l' must not identify them.
    Searches over choice functions up to a cap, then falls back to the
    canonical first choice.
    """
    members: list[tuple[int, int, Tile, list[SlideOption]]] = []
    for entry_idx, entry in enumerate(config.entries):
        phi = compute_phi(rule, entry.tile, entry.counting, budget=budget)
        for member_idx, f in enumerate(phi):
            options = slide_options(rule, f, entry.counting)
            if not options:
                return SlidePreconditions(
                    ok=False,
                    failure=(
                        f"tile {entry.tile.name}: a tiling of R' cannot be slid "
                        f"into L'"
                    ),
                )
            members.append((entry_idx, member_idx, entry.tile, options))

    def consistent(choice: tuple[SlideOption, ...]) -> bool:
        for a, b in itertools.combinations(choice, 2):
            if a.composite.dom != b.composite.dom:
                continue
            same_slid = (
                a.slid.vmap == b.slid.vmap and a.slid.emap == b.slid.emap
            )
            same_composite = (
                a.composite.vmap == b.composite.vmap
                and a.composite.emap == b.composite.emap
            )
            if same_slid and not same_composite:
                return False
        return True

    option_lists = [options for (_, _, _, options) in members]
    n_combos = 1
    for options in option_lists:
        n_combos *= len(options)
        if n_combos > _CHOICE_SEARCH_CAP:
            break
    if n_combos <= _CHOICE_SEARCH_CAP:
        combos = itertools.product(*option_lists)
    else:
        combos = iter([tuple(options[0] for options in option_lists)])
    for choice in combos:
        if consistent(choice):
            chosen = {
                (entry_idx, member_idx): option
                for (entry_idx, member_idx, _, _), option in zip(members, choice)
            }
            return SlidePreconditions(ok=True, failure=None, chosen=chosen)
    return SlidePreconditions(
        ok=False,
        failure="no slide choice keeps all slid tilings distinguishable",
    )


def count_ways_to_slide(option_lists: list[list[SlideOption]]) -> int:
    """Number of distinct outcome sets of slid tilings over all choices."""
    if any(not options for options in option_lists):
        return 0
    slid_lists = [
        sorted({_morphism_key(o.slid) for o in options})
        for options in option_lists
    ]
    total = 1
    for keys in slid_lists:
        total *= len(keys)
        if total > _WAYS_CAP:
            raise AnalysisError("too many slide combinations to count exactly")
    outcomes = {
        frozenset(choice) for choice in itertools.product(*slid_lists)
    }
    return len(outcomes)


def compute_delta(
    rule: PbpoRule,
    tile: Tile,
    counting: MorphismClass,
    *,
    budget: Callable[[], None] | None = None,
    strict: bool = False,
) -> list[GraphMorphism]:
    """The largest valid tiling of L: all class morphisms from the tile.

    Candidates colliding with a slid tiling would have to be dropped, but
    no collision can occur when tK is monic and the completion square is a
    pushout along it (always the case for validated rules here); with
    ``strict`` that vacuity is re-verified against every slide option.
    Pairwise distinguishability under tL is automatic since tL is monic.
    """
    candidates = enumerate_morphisms(tile.graph, rule.L, counting, budget=budget)
    if strict:
        phi = compute_phi(rule, tile, counting, budget=budget)
        slid_keys = {
            _morphism_key(option.slid)
            for f in phi
            for option in slide_options(rule, f, counting)
        }
        for t in candidates:
            if _morphism_key(compose(rule.tL, t)) in slid_keys:
                raise AnalysisError(
                    f"rule {rule.name}: tiling of L collides with a slid tiling, "
                    f"contradicting the vacuity argument"
                )
    return candidates


class RuleVerdict(Enum):
    DECREASING = "decreasing"
    NONINCREASING = "nonincreasing"
    UNKNOWN = "unknown"

    @property
    def display(self) -> str:
        return {
            RuleVerdict.DECREASING: "PROVABLY DECREASING",
            RuleVerdict.NONINCREASING: "PROVABLY NONINCREASING",
            RuleVerdict.UNKNOWN: "POSSIBLY INCREASING",
        }[self]


@dataclass
class TileReport:
    """Per-tile counters for one rule analysis."""

    tile: Tile
    weight: int
    counting: MorphismClass
    hom_into_r1: int
    valid: int
    iso_in_r: int
    noniso_in_r: int
    ways_to_slide: int
    delta_size: int

    @property
    def r_size(self) -> int:
        return self.iso_in_r


@dataclass
class RuleReport:
    """Verdict and evidence for one rule under one configuration."""

    rule_name: str
    slide_successful: bool
    slide_failure: str | None
    delta_weight: int
    r_weight: int
    verdict: RuleVerdict
    tiles: list[TileReport]
    notes: list[str] = field(default_factory=list)


def classify_rule(
    rule: PbpoRule,
    config: TileConfig,
    *,
    budget: Callable[[], None] | None = None,
    strict: bool = False,
) -> RuleReport:
    """Classify one completed rule as decreasing, nonincreasing or unknown."""
    if rule.rp is None or rule.tR is None:
        raise GraphError(f"rule {rule.name} is not completed")
    preconditions = check_slide_preconditions(rule, config, budget=budget)
    tiles: list[TileReport] = []
    delta_weight = 0
    r_weight = 0
    notes: list[str] = []
    for entry in config.entries:
        homs, valid = valid_tilings(rule, entry.tile, entry.counting, budget=budget)
        iso, noniso = partition_by_iso(rule.tR, valid)
        option_lists = [
            slide_options(rule, f, entry.counting) for f in noniso
        ]
        delta = compute_delta(
            rule, entry.tile, entry.counting, budget=budget, strict=strict
        )
        report = TileReport(
            tile=entry.tile,
            weight=entry.weight,
            counting=entry.counting,
            hom_into_r1=len(homs),
            valid=len(valid),
            iso_in_r=len(iso),
            noniso_in_r=len(noniso),
            ways_to_slide=count_ways_to_slide(option_lists),
            delta_size=len(delta),
        )
        tiles.append(report)
        delta_weight += entry.weight * report.delta_size
        r_weight += entry.weight * report.iso_in_r
        if not in_class(rule.tL, entry.counting):
            notes.append(
                f"tile {entry.tile.name}: conditional on match restriction "
                f"(tL is outside the counting class)"
            )
    if not preconditions.ok:
        verdict = RuleVerdict.UNKNOWN
    elif delta_weight > r_weight:
        verdict = RuleVerdict.DECREASING
    elif delta_weight >= r_weight:
        verdict = RuleVerdict.NONINCREASING
    else:
        verdict = RuleVerdict.UNKNOWN
    return RuleReport(
        rule_name=rule.name,
        slide_successful=preconditions.ok,
        slide_failure=preconditions.failure,
        delta_weight=delta_weight,
        r_weight=r_weight,
        verdict=verdict,
        tiles=tiles,
        notes=notes,
    )


def check_deleting_rule(rule: PbpoRule) -> bool:
    """True for rules that strictly delete: l' monic, l not epic, r iso.

    Such rules terminate on their own under monic matching with the
    pattern itself as the only tile, independently of weights.
    """
    return rule.lp.is_monic() and not rule.l.is_epic() and rule.r.is_iso()


@dataclass
class ProofStage:
    """One analysis round: the configuration used, the verdicts, and the
    rules pruned as a result."""

    config: TileConfig
    reports: list[RuleReport]
    pruned: list[str]


@dataclass
class ProofState:
    """Progress of an interactive termination proof for one system."""

    system: RuleSystem
    remaining: list[str]
    stages: list[ProofStage] = field(default_factory=list)

    @staticmethod
    def initial(system: RuleSystem) -> "ProofState":
        return ProofState(system=system, remaining=[r.name for r in system.rules])

    @property
    def terminated(self) -> bool:
        return not self.remaining

    def remaining_rules(self) -> list[PbpoRule]:
        return [r for r in self.system.rules if r.name in self.remaining]

    def undone(self) -> "ProofState":
        if not self.stages:
            raise AnalysisError("nothing to undo")
        stages = self.stages[:-1]
        pruned = {name for stage in stages for name in stage.pruned}
        remaining = [r.name for r in self.system.rules if r.name not in pruned]
        return ProofState(system=self.system, remaining=remaining, stages=stages)


def analyze_system(
    state: ProofState,
    config: TileConfig,
    *,
    budget: Callable[[], None] | None = None,
    strict: bool = False,
) -> tuple[list[RuleReport], ProofState]:
    """Classify all remaining rules and prune the decreasing ones.

    Pruning only happens when no rule came out unknown (the relative
    termination argument needs every rule nonincreasing); in that case a
    new stage is appended, otherwise the state is returned unchanged.
    """
    reports = [
        classify_rule(rule, config, budget=budget, strict=strict)
        for rule in state.remaining_rules()
    ]
    if any(r.verdict is RuleVerdict.UNKNOWN for r in reports):
        return reports, state
    pruned = [r.rule_name for r in reports if r.verdict is RuleVerdict.DECREASING]
    next_state = ProofState(
        system=state.system,
        remaining=[name for name in state.remaining if name not in pruned],
        stages=state.stages + [ProofStage(config=config, reports=reports, pruned=pruned)],
    )
    return reports, next_state
