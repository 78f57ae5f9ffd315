"""Interactive termination prover for graph transformation systems.

Rules rewrite vertex- and edge-labeled multigraphs by pullback-pushout
steps against a typed pattern; termination is proved by counting weighted
occurrences of small tiles and pruning rules whose counts provably shrink.
"""

from .graphs import (
    Edge,
    GraphError,
    GraphMorphism,
    LabeledGraph,
    LabelSet,
    MorphismClass,
    compose,
    identity,
    in_class,
)
from .kernel import (
    BudgetExceeded,
    classify_morphism,
    disjoint_union,
    enumerate_morphisms,
    factorize,
    find_isomorphism,
    is_isomorphic,
    pullback,
    pushout,
    pushout_mediator,
    right_inverses,
)
from .rewriting import (
    DpoRule,
    PbpoRule,
    RewriteStep,
    RuleSystem,
    complete_rule,
    encode_dpo_rule,
    enumerate_adherences,
    apply_step,
    partial_map_classifier,
    successors,
    validate_rule,
)
from .termination import (
    AnalysisError,
    ProofStage,
    ProofState,
    RuleReport,
    RuleVerdict,
    Tile,
    TileConfig,
    TileEntry,
    TileReport,
    analyze_system,
    check_deleting_rule,
    classify_rule,
    tiling_weight,
)
from .corpus import (
    CorpusError,
    Workspace,
    load_workspace,
    parse_system,
    parse_tile,
    serialize_system,
    write_workspace,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "BudgetExceeded",
    "CorpusError",
    "DpoRule",
    "Edge",
    "GraphError",
    "GraphMorphism",
    "LabelSet",
    "LabeledGraph",
    "MorphismClass",
    "PbpoRule",
    "ProofStage",
    "ProofState",
    "RewriteStep",
    "RuleReport",
    "RuleSystem",
    "RuleVerdict",
    "Tile",
    "TileConfig",
    "TileEntry",
    "TileReport",
    "Workspace",
    "analyze_system",
    "apply_step",
    "check_deleting_rule",
    "classify_morphism",
    "classify_rule",
    "complete_rule",
    "compose",
    "disjoint_union",
    "encode_dpo_rule",
    "enumerate_adherences",
    "enumerate_morphisms",
    "factorize",
    "find_isomorphism",
    "identity",
    "in_class",
    "is_isomorphic",
    "load_workspace",
    "parse_system",
    "parse_tile",
    "partial_map_classifier",
    "pullback",
    "pushout",
    "pushout_mediator",
    "right_inverses",
    "serialize_system",
    "successors",
    "tiling_weight",
    "validate_rule",
    "write_workspace",
]
