"""Rules with typed context, their rewrite steps, and the DPO embedding.

A rule is a span L <-l- K -r-> R together with typings tL: L -> L', tK: K
-> K' and l': K' -> L' such that tL . l = l' . tK is a pullback square and
tL, tK are monic. Completion pushes the right leg out to obtain R', r':
K' -> R' and tR: R -> R'.

A step applies a rule to a host graph through an adherence, a morphism
host -> L' that restricts to an isomorphism on the pattern part. Pulling
the host back along l' deletes and duplicates, pushing out along r adds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

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
    enumerate_morphisms,
    find_isomorphism,
    pullback,
    pushout,
    pushout_mediator,
    _iso_profile,
)


@dataclass
class PbpoRule:
    """A named rewrite rule; completion fields are filled by complete_rule."""

    name: str
    l: GraphMorphism  # K -> L
    tL: GraphMorphism  # L -> L'
    tK: GraphMorphism  # K -> K'
    lp: GraphMorphism  # K' -> L'
    r: GraphMorphism  # K -> R
    rp: GraphMorphism | None = None  # K' -> R'
    tR: GraphMorphism | None = None  # R -> R'

    @property
    def L(self) -> LabeledGraph:
        return self.l.cod

    @property
    def K(self) -> LabeledGraph:
        return self.l.dom

    @property
    def R(self) -> LabeledGraph:
        return self.r.cod

    @property
    def Lp(self) -> LabeledGraph:
        return self.tL.cod

    @property
    def Kp(self) -> LabeledGraph:
        return self.tK.cod

    @property
    def Rp(self) -> LabeledGraph:
        if self.rp is None:
            raise GraphError(f"rule {self.name} is not completed")
        return self.rp.cod


@dataclass
class RuleSystem:
    """An ordered collection of rules under one name."""

    name: str
    rules: list[PbpoRule]
    source_text: str | None = None

    def rule_named(self, name: str) -> PbpoRule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise KeyError(name)


def complete_rule(
    name: str,
    l: GraphMorphism,
    tL: GraphMorphism,
    tK: GraphMorphism,
    lp: GraphMorphism,
    r: GraphMorphism,
) -> PbpoRule:
    """Fill in R', r' and tR as the pushout of tK along r."""
    po = pushout(tK, r)
    return PbpoRule(
        name=name, l=l, tL=tL, tK=tK, lp=lp, r=r, rp=po.from_left, tR=po.from_right
    )


def validate_rule(rule: PbpoRule) -> list[str]:
    """All violated well-formedness conditions (empty list means valid)."""
    violations: list[str] = []
    for attr in ("l", "tL", "tK", "lp", "r"):
        try:
            getattr(rule, attr).validate()
        except GraphError as exc:
            violations.append(f"{attr} is not a morphism: {exc}")
    if violations:
        return violations
    if rule.l.dom != rule.tK.dom or rule.l.dom != rule.r.dom:
        violations.append("l, tK and r must share their domain K")
    if rule.l.cod != rule.tL.dom:
        violations.append("cod(l) must equal dom(tL)")
    if rule.tK.cod != rule.lp.dom:
        violations.append("cod(tK) must equal dom(l')")
    if rule.tL.cod != rule.lp.cod:
        violations.append("cod(tL) must equal cod(l')")
    if violations:
        return violations
    left = compose(rule.tL, rule.l)
    right = compose(rule.lp, rule.tK)
    if left.vmap != right.vmap or left.emap != right.emap:
        violations.append("left square does not commute (tL . l != l' . tK)")
        return violations
    if not rule.tL.is_monic():
        violations.append("tL must be monic")
    if not rule.tK.is_monic():
        violations.append("tK must be monic")
    # The canonical comparison arrow into the pullback of (tL, l') must be
    # an isomorphism for the left square to be a pullback.
    pb = pullback(rule.tL, rule.lp)
    pair_v = {
        (pb.to_left.vmap[p], pb.to_right.vmap[p]): p for p in pb.apex.vertices
    }
    pair_e = {(pb.to_left.emap[p], pb.to_right.emap[p]): p for p in pb.apex.edges}
    vmap = {}
    emap = {}
    for k in rule.K.vertices:
        vmap[k] = pair_v[(rule.l.vmap[k], rule.tK.vmap[k])]
    for k in rule.K.edges:
        emap[k] = pair_e[(rule.l.emap[k], rule.tK.emap[k])]
    comparison = GraphMorphism(rule.K, pb.apex, vmap, emap)
    if not comparison.is_iso():
        violations.append("left square is not a pullback")
    return violations


@dataclass
class RewriteStep:
    """One application of a rule, with every derived morphism of the step."""

    rule: PbpoRule
    host: LabeledGraph  # G_L
    adherence: GraphMorphism  # alpha: G_L -> L'
    match: GraphMorphism  # m: L -> G_L
    interface: LabeledGraph  # G_K
    gl: GraphMorphism  # G_K -> G_L
    u: GraphMorphism  # K -> G_K
    u_type: GraphMorphism  # G_K -> K'
    result: LabeledGraph  # G_R
    gr: GraphMorphism  # G_K -> G_R
    co_match: GraphMorphism  # w: R -> G_R
    w_type: GraphMorphism  # G_R -> R'


def strong_match(
    rule: PbpoRule, alpha: GraphMorphism
) -> GraphMorphism | None:
    """The match induced by an adherence, or None if alpha is not one.

    alpha: host -> L' is an adherence when pulling tL back along alpha
    gives an isomorphism onto L; the match is the other projection
    composed with its inverse.
    """
    pb = pullback(rule.tL, alpha)
    j, n = pb.to_left, pb.to_right
    if not j.is_iso():
        return None
    return compose(n, j.inverse())


def enumerate_adherences(
    rule: PbpoRule,
    host: LabeledGraph,
    match_class: MorphismClass = MorphismClass.MONO,
    *,
    reduce_host_symmetry: bool = False,
    budget: Callable[[], None] | None = None,
) -> list[tuple[GraphMorphism, GraphMorphism]]:
    """All (adherence, match) pairs for a rule on a host graph."""
    found = []
    for alpha in enumerate_morphisms(
        host,
        rule.Lp,
        MorphismClass.HOMOMORPHISM,
        reduce_domain_symmetry=reduce_host_symmetry,
        budget=budget,
    ):
        m = strong_match(rule, alpha)
        if m is not None and in_class(m, match_class):
            found.append((alpha, m))
    return found


def apply_step(
    rule: PbpoRule, host: LabeledGraph, alpha: GraphMorphism
) -> RewriteStep:
    """Apply a completed rule along an adherence.

    The interface is the pullback of the adherence along l'; the pattern
    copy inside it is recovered by pulling its typing back along tK, and
    the result is the pushout gluing R onto the interface.
    """
    if rule.rp is None or rule.tR is None:
        raise GraphError(f"rule {rule.name} is not completed")
    m = strong_match(rule, alpha)
    if m is None:
        raise GraphError("the given morphism is not an adherence (no strong match)")

    pb2 = pullback(alpha, rule.lp)
    interface, gl, u_type = pb2.apex, pb2.to_left, pb2.to_right

    pb3 = pullback(u_type, rule.tK)
    y_apex, v, i = pb3.apex, pb3.to_left, pb3.to_right
    if not i.is_iso():
        raise GraphError(
            "interface typing does not restrict to an isomorphism on the pattern"
        )
    u = compose(v, i.inverse())

    po = pushout(compose(rule.r, i), v)
    # pushout legs: from R and from the interface.
    result, w, gr = po.apex, po.from_left, po.from_right
    w_type = pushout_mediator(po, rule.tR, compose(rule.rp, u_type))
    return RewriteStep(
        rule=rule,
        host=host,
        adherence=alpha,
        match=m,
        interface=interface,
        gl=gl,
        u=u,
        u_type=u_type,
        result=result,
        gr=gr,
        co_match=w,
        w_type=w_type,
    )


@dataclass
class SuccessorSet:
    """One-step results up to isomorphism, with a truncation flag."""

    graphs: list[LabeledGraph]
    truncated: bool = False


def successors(
    rules: list[PbpoRule],
    host: LabeledGraph,
    match_class: MorphismClass = MorphismClass.MONO,
    bound: int = 10_000,
    *,
    budget: Callable[[], None] | None = None,
) -> SuccessorSet:
    """All one-step results of any rule on the host, deduplicated up to iso.

    Adherences are enumerated up to host symmetry, which cannot lose
    results up to isomorphism. Exploration stops once ``bound`` distinct
    results have been collected.
    """
    buckets: dict[tuple, list[LabeledGraph]] = {}
    out: list[LabeledGraph] = []
    for rule in rules:
        for alpha, _m in enumerate_adherences(
            rule, host, match_class, reduce_host_symmetry=True, budget=budget
        ):
            step = apply_step(rule, host, alpha)
            profile = _iso_profile(step.result)
            bucket = buckets.setdefault(profile, [])
            if any(find_isomorphism(step.result, seen) for seen in bucket):
                continue
            bucket.append(step.result)
            out.append(step.result)
            if len(out) >= bound:
                return SuccessorSet(out, truncated=True)
    return SuccessorSet(out, truncated=False)


def longest_derivation_length(
    rules: list[PbpoRule],
    host: LabeledGraph,
    match_class: MorphismClass = MorphismClass.MONO,
    *,
    budget: Callable[[], None] | None = None,
) -> int:
    """Length of the longest rewrite sequence from the host, by exhaustive
    search with memoization up to isomorphism. Diverges on nonterminating
    systems; meant for small terminating examples."""
    cache: dict[tuple, list[tuple[LabeledGraph, int]]] = {}

    def go(g: LabeledGraph) -> int:
        profile = _iso_profile(g)
        for seen, length in cache.get(profile, []):
            if find_isomorphism(g, seen):
                return length
        best = 0
        for nxt in successors(rules, g, match_class, budget=budget).graphs:
            best = max(best, 1 + go(nxt))
        cache.setdefault(profile, []).append((g, best))
        return best

    return go(host)


def _fresh_id(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name = "_" + name
    taken.add(name)
    return name


def partial_map_classifier(
    graph: LabeledGraph, labels: LabelSet
) -> tuple[LabeledGraph, GraphMorphism]:
    """The classifying graph T(X) with its inclusion X -> T(X).

    T(X) extends X with one context vertex per vertex label and one fresh
    edge for every ordered pair of T(X) vertices and every edge label.
    Morphisms Y -> T(X) then correspond exactly to partial maps from Y to
    X (the subgraph of Y sent into X, mapped by restriction).
    """
    vertices = dict(graph.vertices)
    taken_v = set(vertices)
    single_vl = len(labels.vertex_labels) == 1
    for vl in sorted(labels.vertex_labels):
        cid = _fresh_id("c" if single_vl else f"c_{vl}", taken_v)
        vertices[cid] = vl
    edges = dict(graph.edges)
    taken_e = set(edges)
    single_el = len(labels.edge_labels) == 1
    all_vertices = sorted(vertices)
    for u in all_vertices:
        for v in all_vertices:
            for el in sorted(labels.edge_labels):
                base = f"{u}_{v}" if single_el else f"{u}_{v}_{el}"
                edges[_fresh_id(base, taken_e)] = Edge(u, v, el)
    classifier = LabeledGraph(vertices, edges)
    eta = GraphMorphism(
        graph,
        classifier,
        {v: v for v in graph.vertices},
        {e: e for e in graph.edges},
    )
    return classifier, eta


@dataclass
class DpoRule:
    """A double-pushout span L <-l- K -r-> R with monic l."""

    name: str
    l: GraphMorphism  # K -> L
    r: GraphMorphism  # K -> R


def encode_dpo_rule(dpo: DpoRule, labels: LabelSet | None = None) -> PbpoRule:
    """Embed a left-linear double-pushout rule as a typed-context rule.

    The interface typing is the classifier inclusion K -> T(K), and the
    pattern typing arises by pushing l out along it. Vertices deleted by
    the rule get no context edges in L', which is exactly the dangling
    condition: hosts whose context touches deleted vertices admit no
    adherence. The encoded rule generates the same step relation as the
    source rule under monic matching.
    """
    if not dpo.l.is_monic():
        raise GraphError(
            f"rule {dpo.name}: only rules with monic l can be encoded"
        )
    if labels is None:
        labels = LabelSet.inferred(dpo.l.cod, dpo.l.dom, dpo.r.cod)
    kp, eta = partial_map_classifier(dpo.l.dom, labels)
    po = pushout(dpo.l, eta)
    rule = complete_rule(
        name=dpo.name,
        l=dpo.l,
        tL=po.from_left,
        tK=eta,
        lp=po.from_right,
        r=dpo.r,
    )
    violations = validate_rule(rule)
    if violations:
        raise GraphError(f"encoded rule {dpo.name} invalid: " + "; ".join(violations))
    return rule
