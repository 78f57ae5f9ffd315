"""Shared example systems built in code for tests.

The plump string system and the broken unfold variant are not part of the
shipped workspace; they are reconstructed here from their double-pushout
spans and literal sources so several test modules can use them.
"""

from __future__ import annotations

from tileterm.corpus import parse_system, parse_tile
from tileterm.graphs import Edge, GraphMorphism, LabeledGraph, LabelSet
from tileterm.rewriting import DpoRule, RuleSystem, encode_dpo_rule
from tileterm.termination import Tile

STRING_LABELS = LabelSet(
    vertex_labels=frozenset({"0"}),
    edge_labels=frozenset({"a", "b", "c", "d"}),
)


def _word_graph(word: str, prefix: str = "v") -> LabeledGraph:
    """A path spelling the word in its edge labels."""
    vertices = {f"{prefix}{i}": "0" for i in range(len(word) + 1)}
    edges = {
        f"{prefix}e{i}": Edge(f"{prefix}{i}", f"{prefix}{i + 1}", letter)
        for i, letter in enumerate(word)
    }
    return LabeledGraph(vertices=vertices, edges=edges)


def _string_dpo(name: str, lhs: str, rhs: str) -> DpoRule:
    """The string rule lhs -> rhs keeping only the word endpoints."""
    l_graph = _word_graph(lhs, "l")
    r_graph = _word_graph(rhs, "r")
    k_graph = LabeledGraph(vertices={"s": "0", "t": "0"})
    to_l = GraphMorphism(
        dom=k_graph, cod=l_graph, vmap={"s": "l0", "t": f"l{len(lhs)}"}, emap={}
    )
    to_r = GraphMorphism(
        dom=k_graph, cod=r_graph, vmap={"s": "r0", "t": f"r{len(rhs)}"}, emap={}
    )
    return DpoRule(name=name, l=to_l, r=to_r)


def string_system() -> RuleSystem:
    """The two encoded string rules ab -> ac and cd -> db."""
    rho = encode_dpo_rule(_string_dpo("rho", "ab", "ac"), STRING_LABELS)
    tau = encode_dpo_rule(_string_dpo("tau", "cd", "db"), STRING_LABELS)
    return RuleSystem(name="plump_string", rules=[rho, tau])


def string_pattern_tile() -> Tile:
    """The left-hand pattern of the first string rule, used as stage 1 tile."""
    return Tile(name="ab_path", graph=_word_graph("ab", "p"))


def c_edge_tile() -> Tile:
    return Tile(
        name="c_edge",
        graph=LabeledGraph(
            vertices={"x": "0", "y": "0"}, edges={"E": Edge("x", "y", "c")}
        ),
    )


BROKEN_UNFOLD = """
=== rho ===
L  { x:0 -A:0-> y:0 -B:0-> <-C:0- z:0 }
L' { x:0 -A:0-> y:0 -B:0-> <-C:0- z:0
     x:0 -XX:0-> x:0   y:0 -YY:0-> y:0
     x:0 -XY:0-> <-YX:0- y:0
     x:0 -XC:0-> <-CX:0- c:0
     y:0 -YC:0-> <-CY:0- c:0
     c:0 -CC:0-> c:0 }
K  { x:0 y:0 }
K' { x:0 -XX:0-> x:0   y:0 -YY:0-> y:0
     x:0 -XY:0-> <-YX:0- y:0
     x:0 -XC:0-> <-CX:0- c:0
     y:0 -YC:0-> <-CY:0- c:0
     c:0 -CC:0-> c:0 }
R  { x:0 -A:0-> y:0 -D:0-> w:0 -E:0-> x:0 }
"""


def broken_unfold_system() -> RuleSystem:
    """The unfold rule with the matched edge dropped from the interface.

    Still a valid rule, but the edge is deleted rather than preserved, so
    tilings of R' that use it cannot be slid back into L': the analysis
    must stay inconclusive.
    """
    return parse_system(BROKEN_UNFOLD, "broken_unfold")


def two_opposing_edges_tile() -> Tile:
    return parse_tile("x:0 -XY:0-> <-YX:0- y:0", "two_opposing_edges")
