"""Analyzer tests: weights, partitions, slides, verdicts and pruning."""

from pathlib import Path

import pytest

from tileterm.corpus import load_workspace
from tileterm.graphs import (
    Edge,
    GraphError,
    GraphMorphism,
    LabeledGraph,
    MorphismClass,
    compose,
    identity,
)
from tileterm.rewriting import complete_rule
from tileterm.termination import (
    AnalysisError,
    ProofState,
    RuleVerdict,
    Tile,
    TileConfig,
    TileEntry,
    analyze_system,
    check_deleting_rule,
    check_slide_preconditions,
    classify_rule,
    compute_delta,
    compute_phi,
    count_ways_to_slide,
    partition_by_iso,
    slide_options,
    tiling_weight,
    valid_tilings,
)

from fixtures import (
    broken_unfold_system,
    c_edge_tile,
    string_pattern_tile,
    string_system,
    two_opposing_edges_tile,
)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

H = MorphismClass.HOMOMORPHISM
M = MorphismClass.MONO


def workspace():
    return load_workspace(CORPUS)


def tile_named(ws, name: str) -> Tile:
    return next(t for t in ws.tiles if t.name == name)


def system_named(ws, name: str):
    return next(s for s in ws.systems if s.name == name)


def node_tile() -> Tile:
    return Tile(name="node", graph=LabeledGraph(vertices={"n": "0"}))


def edge_tile() -> Tile:
    return Tile(
        name="edge",
        graph=LabeledGraph(
            vertices={"x": "0", "y": "0"}, edges={"E": Edge("x", "y", "0")}
        ),
    )


class TestTileConfig:
    def test_zero_weight_rejected(self):
        with pytest.raises(GraphError):
            TileEntry(tile=node_tile(), weight=0, counting=H)

    def test_negative_weight_rejected(self):
        with pytest.raises(GraphError):
            TileEntry(tile=node_tile(), weight=-3, counting=M)

    def test_non_integer_weight_rejected(self):
        with pytest.raises(GraphError):
            TileEntry(tile=node_tile(), weight=1.5, counting=H)  # type: ignore[arg-type]


class TestTilingWeight:
    def test_node_counts_vertices(self):
        cfg = TileConfig.of(TileEntry(node_tile(), 1, H))
        g = LabeledGraph(
            vertices={"a": "0", "b": "0", "c": "0"},
            edges={"E": Edge("a", "b", "0")},
        )
        assert tiling_weight(cfg, g) == 3

    def test_weighted_mix(self):
        cfg = TileConfig.of(
            TileEntry(node_tile(), 2, H), TileEntry(edge_tile(), 1, H)
        )
        g = LabeledGraph(
            vertices={"a": "0", "b": "0"},
            edges={"E": Edge("a", "b", "0"), "F": Edge("b", "a", "0")},
        )
        assert tiling_weight(cfg, g) == 2 * 2 + 2

    def test_empty_config(self):
        assert tiling_weight(TileConfig.of(), edge_tile().graph) == 0

    def test_mono_class_skips_loops(self):
        cfg = TileConfig.of(TileEntry(edge_tile(), 1, M))
        loop = LabeledGraph(vertices={"x": "0"}, edges={"E": Edge("x", "x", "0")})
        assert tiling_weight(cfg, loop) == 0
        cfg_h = TileConfig.of(TileEntry(edge_tile(), 1, H))
        assert tiling_weight(cfg_h, loop) == 1


class TestPartitionAndPhi:
    def test_iso_base_puts_everything_in_iso_part(self):
        g = edge_tile().graph
        tilings = [identity(g)]
        iso, noniso = partition_by_iso(identity(g), tilings)
        assert len(iso) == 1 and noniso == []

    def test_folding_partition(self):
        ws = workspace()
        rule = system_named(ws, "folding_an_edge").rules[0]
        tile = tile_named(ws, "single_nonloop_edge")
        homs, valid = valid_tilings(rule, tile, M)
        assert len(homs) == 10 and len(valid) == 5
        iso, noniso = partition_by_iso(rule.tR, valid)
        assert len(iso) == 0 and len(noniso) == 5
        assert len(compute_phi(rule, tile, M)) == 5

    def test_multiset_b_loop_iso_part(self):
        ws = workspace()
        rule = system_named(ws, "multiset_as_graph").rules[0]
        tile = tile_named(ws, "b_loop")
        _, valid = valid_tilings(rule, tile, M)
        iso, noniso = partition_by_iso(rule.tR, valid)
        assert len(iso) == 3 and len(noniso) == 1

    def test_multiset_a_loop_phi_is_context_loop(self):
        ws = workspace()
        rule = system_named(ws, "multiset_as_graph").rules[0]
        tile = tile_named(ws, "a_loop")
        phi = compute_phi(rule, tile, M)
        assert len(phi) == 1

    def test_unrelated_tile_has_empty_phi(self):
        ws = workspace()
        rule = system_named(ws, "folding_an_edge").rules[0]
        alien = Tile(name="alien", graph=LabeledGraph(vertices={"q": "zz"}))
        assert compute_phi(rule, alien, H) == []


class TestSlide:
    def test_folding_each_phi_member_slides_once(self):
        ws = workspace()
        rule = system_named(ws, "folding_an_edge").rules[0]
        tile = tile_named(ws, "single_nonloop_edge")
        phi = compute_phi(rule, tile, M)
        option_lists = [slide_options(rule, f, M) for f in phi]
        assert all(len(opts) == 1 for opts in option_lists)
        assert count_ways_to_slide(option_lists) == 1
        for opts in option_lists:
            slid = opts[0].slid
            assert slid.cod == rule.Lp

    def test_iso_r_prime_slides_identically(self):
        # With a trivial interface extension, r' is an isomorphism and the
        # slid tiling is literally the original one.
        g = edge_tile().graph
        from tileterm.rewriting import partial_map_classifier
        from tileterm.graphs import LabelSet

        t_g, eta = partial_map_classifier(
            g, LabelSet(vertex_labels=frozenset({"0"}), edge_labels=frozenset({"0"}))
        )
        rule = complete_rule(
            name="noop", l=identity(g), tL=eta, tK=eta, lp=identity(t_g), r=identity(g)
        )
        assert rule.rp.is_iso()
        tile = edge_tile()
        phi = compute_phi(rule, tile, M)
        assert phi  # the context offers nonpattern tilings
        for f in phi:
            opts = slide_options(rule, f, M)
            assert len(opts) == 1
            assert opts[0].slid.vmap == f.vmap and opts[0].slid.emap == f.emap

    def test_broken_unfold_cannot_slide(self):
        rule = broken_unfold_system().rules[0]
        tile = two_opposing_edges_tile()
        config = TileConfig.of(TileEntry(tile, 1, M))
        pre = check_slide_preconditions(rule, config)
        assert not pre.ok
        assert "cannot be slid" in pre.failure

    def test_ways_to_slide_zero_when_any_member_fails(self):
        assert count_ways_to_slide([[], []]) == 0

    def test_slide_preconditions_ok_on_all_corpus_rules(self):
        ws = workspace()
        tile_cfgs = {
            "folding_an_edge": TileConfig.of(
                TileEntry(tile_named(ws, "single_nonloop_edge"), 1, M)
            ),
            "multiset_as_graph": TileConfig.of(
                TileEntry(tile_named(ws, "a_loop"), 5, M),
                TileEntry(tile_named(ws, "b_loop"), 3, M),
            ),
            "generalized_multiset_as_graph": TileConfig.of(
                TileEntry(tile_named(ws, "a_loop"), 5, M),
                TileEntry(tile_named(ws, "b_loop"), 3, M),
            ),
            "delete_loop_and_nonloop": TileConfig.of(
                TileEntry(tile_named(ws, "single_nonloop_edge"), 1, H)
            ),
            "unfold_to_triangle": TileConfig.of(
                TileEntry(tile_named(ws, "two_opposing_edges"), 1, M)
            ),
            "duplicating_bipartite_components": TileConfig.of(
                TileEntry(tile_named(ws, "single_loop"), 1, M)
            ),
        }
        for system in ws.systems:
            config = tile_cfgs[system.name]
            for rule in system.rules:
                assert check_slide_preconditions(rule, config).ok


class TestDelta:
    def test_folding_delta(self):
        ws = workspace()
        rule = system_named(ws, "folding_an_edge").rules[0]
        delta = compute_delta(rule, tile_named(ws, "single_nonloop_edge"), M)
        assert len(delta) == 1

    def test_multiset_a_loop_delta(self):
        ws = workspace()
        rule = system_named(ws, "multiset_as_graph").rules[0]
        delta = compute_delta(rule, tile_named(ws, "a_loop"), M)
        assert len(delta) == 2  # both pattern a-loops

    def test_no_morphisms_into_l(self):
        ws = workspace()
        rule = system_named(ws, "folding_an_edge").rules[0]
        alien = Tile(name="alien", graph=LabeledGraph(vertices={"q": "zz"}))
        assert compute_delta(rule, alien, H) == []

    def test_strict_vacuity_holds_on_corpus(self):
        # The disjointness shortcut must agree with the explicit check.
        ws = workspace()
        for system in ws.systems:
            for rule in system.rules:
                for tname in ("single_node", "single_loop", "single_nonloop_edge"):
                    compute_delta(rule, tile_named(ws, tname), M, strict=True)


class TestClassify:
    def test_folding_decreasing(self):
        ws = workspace()
        rule = system_named(ws, "folding_an_edge").rules[0]
        cfg = TileConfig.of(TileEntry(tile_named(ws, "single_nonloop_edge"), 1, M))
        report = classify_rule(rule, cfg)
        assert report.verdict is RuleVerdict.DECREASING
        assert report.slide_successful and report.slide_failure is None
        assert (report.delta_weight, report.r_weight) == (1, 0)
        t = report.tiles[0]
        assert (
            t.hom_into_r1,
            t.valid,
            t.iso_in_r,
            t.noniso_in_r,
            t.ways_to_slide,
            t.delta_size,
        ) == (10, 5, 0, 5, 1, 1)

    def test_multiset_weights(self):
        ws = workspace()
        system = system_named(ws, "multiset_as_graph")
        cfg = TileConfig.of(
            TileEntry(tile_named(ws, "a_loop"), 5, M),
            TileEntry(tile_named(ws, "b_loop"), 3, M),
        )
        rho = classify_rule(system.rule_named("rho"), cfg)
        tau = classify_rule(system.rule_named("tau"), cfg)
        assert (rho.delta_weight, rho.r_weight) == (10, 9)
        assert (tau.delta_weight, tau.r_weight) == (6, 5)
        assert rho.verdict is tau.verdict is RuleVerdict.DECREASING

    def test_string_tau_nonincreasing_under_pattern_tile(self):
        system = string_system()
        cfg = TileConfig.of(TileEntry(string_pattern_tile(), 1, M))
        tau = classify_rule(system.rule_named("tau"), cfg)
        assert tau.verdict is RuleVerdict.NONINCREASING
        assert tau.delta_weight == 0 and tau.r_weight == 0

    def test_broken_unfold_unknown(self):
        rule = broken_unfold_system().rules[0]
        cfg = TileConfig.of(TileEntry(two_opposing_edges_tile(), 1, M))
        report = classify_rule(rule, cfg)
        assert report.verdict is RuleVerdict.UNKNOWN
        assert not report.slide_successful

    def test_verdict_display_strings(self):
        assert RuleVerdict.DECREASING.display == "PROVABLY DECREASING"
        assert RuleVerdict.NONINCREASING.display == "PROVABLY NONINCREASING"
        assert RuleVerdict.UNKNOWN.display == "POSSIBLY INCREASING"

    def test_match_restriction_note_for_nonmonic_tl(self):
        # classify_rule does not insist on validation; a collapsing tL puts
        # monic counting outside the provable range and must be flagged.
        one = LabeledGraph(vertices={"z": "0"})
        two = LabeledGraph(vertices={"x": "0", "y": "0"})
        collapse = GraphMorphism(dom=two, cod=one, vmap={"x": "z", "y": "z"}, emap={})
        rule = complete_rule(
            name="squash",
            l=identity(two),
            tL=collapse,
            tK=collapse,
            lp=identity(one),
            r=identity(two),
        )
        cfg = TileConfig.of(TileEntry(node_tile(), 1, M))
        report = classify_rule(rule, cfg)
        assert any("match restriction" in note for note in report.notes)


class TestDeletingRule:
    def test_duplicating_tau_is_deleting(self):
        ws = workspace()
        system = system_named(ws, "duplicating_bipartite_components")
        assert check_deleting_rule(system.rule_named("tau"))
        assert not check_deleting_rule(system.rule_named("rho"))

    def test_identity_rule_is_not_deleting(self):
        g = LabeledGraph(vertices={"x": "0"})
        rule = complete_rule(
            name="idr",
            l=identity(g),
            tL=identity(g),
            tK=identity(g),
            lp=identity(g),
            r=identity(g),
        )
        assert not check_deleting_rule(rule)  # l is epic

    def test_deleting_rule_own_pattern_decreases(self):
        # For a deleting rule, its own pattern as a weight-1 mono tile
        # always classifies it as decreasing.
        ws = workspace()
        tau = system_named(ws, "duplicating_bipartite_components").rule_named("tau")
        pattern = Tile(name="pattern", graph=tau.L)
        report = classify_rule(tau, TileConfig.of(TileEntry(pattern, 1, M)))
        assert report.verdict is RuleVerdict.DECREASING


class TestAnalyzeSystem:
    def test_folding_terminates_in_one_stage(self):
        ws = workspace()
        system = system_named(ws, "folding_an_edge")
        state = ProofState.initial(system)
        cfg = TileConfig.of(TileEntry(tile_named(ws, "single_nonloop_edge"), 1, M))
        reports, nxt = analyze_system(state, cfg)
        assert [r.verdict for r in reports] == [RuleVerdict.DECREASING]
        assert nxt.terminated and nxt.remaining == []
        assert len(nxt.stages) == 1 and nxt.stages[0].pruned == ["rho"]

    def test_unknown_blocks_pruning(self):
        system = broken_unfold_system()
        state = ProofState.initial(system)
        cfg = TileConfig.of(TileEntry(two_opposing_edges_tile(), 1, M))
        reports, nxt = analyze_system(state, cfg)
        assert reports[0].verdict is RuleVerdict.UNKNOWN
        assert nxt is state  # untouched, no stage recorded

    def test_duplicating_two_stage_proof(self):
        ws = workspace()
        system = system_named(ws, "duplicating_bipartite_components")
        state = ProofState.initial(system)
        loop_cfg = TileConfig.of(TileEntry(tile_named(ws, "single_loop"), 1, M))
        reports, state = analyze_system(state, loop_cfg)
        by_name = {r.rule_name: r.verdict for r in reports}
        assert by_name == {
            "rho": RuleVerdict.DECREASING,
            "tau": RuleVerdict.NONINCREASING,
        }
        assert state.remaining == ["tau"] and not state.terminated
        node_cfg = TileConfig.of(TileEntry(tile_named(ws, "single_node"), 1, M))
        reports, state = analyze_system(state, node_cfg)
        assert [r.rule_name for r in reports] == ["tau"]
        assert reports[0].verdict is RuleVerdict.DECREASING
        assert state.terminated and len(state.stages) == 2

    def test_string_two_stage_proof(self):
        system = string_system()
        state = ProofState.initial(system)
        reports, state = analyze_system(
            state, TileConfig.of(TileEntry(string_pattern_tile(), 1, M))
        )
        by_name = {r.rule_name: r.verdict for r in reports}
        assert by_name == {
            "rho": RuleVerdict.DECREASING,
            "tau": RuleVerdict.NONINCREASING,
        }
        assert state.remaining == ["tau"]
        reports, state = analyze_system(
            state, TileConfig.of(TileEntry(c_edge_tile(), 1, M))
        )
        assert reports[0].verdict is RuleVerdict.DECREASING
        assert state.terminated

    def test_undo_restores_remaining(self):
        ws = workspace()
        system = system_named(ws, "duplicating_bipartite_components")
        state = ProofState.initial(system)
        _, state = analyze_system(
            state, TileConfig.of(TileEntry(tile_named(ws, "single_loop"), 1, M))
        )
        assert state.remaining == ["tau"]
        back = state.undone()
        assert back.remaining == ["rho", "tau"] and back.stages == []

    def test_undo_without_stages_rejected(self):
        ws = workspace()
        state = ProofState.initial(system_named(ws, "folding_an_edge"))
        with pytest.raises(AnalysisError):
            state.undone()
