"""Finite labeled directed multigraphs and label-preserving homomorphisms.

Graphs are the objects, homomorphisms the arrows. Vertices and edges are
keyed by string identifiers so that parallel edges stay distinct and so
that constructions (pullbacks, pushouts) can give their carriers readable
canonical names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple


class GraphError(ValueError):
    """Raised when a graph or morphism is structurally invalid."""


class MorphismClass(Enum):
    """Morphism classes that tiles may count: h, m or r.

    In this category the regular monos coincide with the monos, so "r" and
    "m" count the same maps; both are kept because configurations name them
    separately.
    """

    HOMOMORPHISM = "h"
    MONO = "m"
    REGULAR_MONO = "r"

    @classmethod
    def from_letter(cls, letter: str) -> "MorphismClass":
        try:
            return cls(letter)
        except ValueError:
            raise GraphError(
                f"unknown morphism class {letter!r} (expected one of h, m, r)"
            ) from None

    @property
    def display_name(self) -> str:
        return {
            MorphismClass.HOMOMORPHISM: "ALL HOMOMORPHISMS",
            MorphismClass.MONO: "MONOS only",
            MorphismClass.REGULAR_MONO: "REGULAR MONOS only",
        }[self]


class Edge(NamedTuple):
    src: str
    tgt: str
    label: str


@dataclass
class LabeledGraph:
    """A finite directed multigraph with vertex and edge labels.

    ``vertices`` maps vertex id -> vertex label; ``edges`` maps edge id ->
    (src, tgt, label). Identifiers are plain strings.
    """

    vertices: dict[str, str] = field(default_factory=dict)
    edges: dict[str, Edge] = field(default_factory=dict)

    def validate(self) -> None:
        for eid, edge in self.edges.items():
            if edge.src not in self.vertices:
                raise GraphError(f"edge {eid!r} has unknown source {edge.src!r}")
            if edge.tgt not in self.vertices:
                raise GraphError(f"edge {eid!r} has unknown target {edge.tgt!r}")

    @property
    def vertex_ids(self) -> list[str]:
        return sorted(self.vertices)

    @property
    def edge_ids(self) -> list[str]:
        return sorted(self.edges)

    def degree(self, vid: str) -> int:
        return sum(1 for e in self.edges.values() for end in (e.src, e.tgt) if end == vid)

    def is_isolated(self, vid: str) -> bool:
        return all(e.src != vid and e.tgt != vid for e in self.edges.values())

    def copy(self) -> "LabeledGraph":
        return LabeledGraph(dict(self.vertices), dict(self.edges))

    def __str__(self) -> str:
        vs = ", ".join(f"{v}:{l}" for v, l in sorted(self.vertices.items()))
        es = ", ".join(
            f"{e}:{d.label}({d.src}->{d.tgt})" for e, d in sorted(self.edges.items())
        )
        return f"Graph[{vs} | {es}]"


@dataclass(frozen=True)
class LabelSet:
    """The vertex and edge alphabets a family of graphs draws labels from."""

    vertex_labels: frozenset[str]
    edge_labels: frozenset[str]

    @staticmethod
    def inferred(*graphs: LabeledGraph) -> "LabelSet":
        vl: set[str] = set()
        el: set[str] = set()
        for g in graphs:
            vl.update(g.vertices.values())
            el.update(e.label for e in g.edges.values())
        return LabelSet(frozenset(vl), frozenset(el))

    def union(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(
            self.vertex_labels | other.vertex_labels,
            self.edge_labels | other.edge_labels,
        )


@dataclass
class GraphMorphism:
    """A label-preserving graph homomorphism given by vertex and edge maps."""

    dom: LabeledGraph
    cod: LabeledGraph
    vmap: dict[str, str] = field(default_factory=dict)
    emap: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        for vid, label in self.dom.vertices.items():
            img = self.vmap.get(vid)
            if img is None:
                raise GraphError(f"vertex {vid!r} has no image")
            if img not in self.cod.vertices:
                raise GraphError(f"vertex {vid!r} maps outside the codomain ({img!r})")
            if self.cod.vertices[img] != label:
                raise GraphError(
                    f"vertex {vid!r} changes label {label!r} -> {self.cod.vertices[img]!r}"
                )
        extra = set(self.vmap) - set(self.dom.vertices)
        if extra:
            raise GraphError(f"vertex map mentions unknown vertices {sorted(extra)}")
        for eid, edge in self.dom.edges.items():
            img = self.emap.get(eid)
            if img is None:
                raise GraphError(f"edge {eid!r} has no image")
            if img not in self.cod.edges:
                raise GraphError(f"edge {eid!r} maps outside the codomain ({img!r})")
            target = self.cod.edges[img]
            if target.label != edge.label:
                raise GraphError(
                    f"edge {eid!r} changes label {edge.label!r} -> {target.label!r}"
                )
            if target.src != self.vmap[edge.src] or target.tgt != self.vmap[edge.tgt]:
                raise GraphError(f"edge {eid!r} does not commute with src/tgt")
        extra = set(self.emap) - set(self.dom.edges)
        if extra:
            raise GraphError(f"edge map mentions unknown edges {sorted(extra)}")

    def apply_vertex(self, vid: str) -> str:
        return self.vmap[vid]

    def apply_edge(self, eid: str) -> str:
        return self.emap[eid]

    def is_monic(self) -> bool:
        return len(set(self.vmap.values())) == len(self.vmap) and len(
            set(self.emap.values())
        ) == len(self.emap)

    def is_epic(self) -> bool:
        return set(self.vmap.values()) == set(self.cod.vertices) and set(
            self.emap.values()
        ) == set(self.cod.edges)

    def is_iso(self) -> bool:
        return self.is_monic() and self.is_epic()

    def inverse(self) -> "GraphMorphism":
        if not self.is_iso():
            raise GraphError("only isomorphisms can be inverted")
        return GraphMorphism(
            self.cod,
            self.dom,
            {img: v for v, img in self.vmap.items()},
            {img: e for e, img in self.emap.items()},
        )

    def key(self) -> tuple:
        """Canonical sort key: images in canonical domain order."""
        return (
            tuple(self.vmap[v] for v in self.dom.vertex_ids),
            tuple(self.emap[e] for e in self.dom.edge_ids),
        )


def identity(g: LabeledGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.vertices}, {e: e for e in g.edges})


def compose(outer: GraphMorphism, inner: GraphMorphism) -> GraphMorphism:
    """The composite outer . inner (first inner, then outer)."""
    if inner.cod != outer.dom:
        raise GraphError("composition mismatch: codomain of inner != domain of outer")
    return GraphMorphism(
        inner.dom,
        outer.cod,
        {v: outer.vmap[img] for v, img in inner.vmap.items()},
        {e: outer.emap[img] for e, img in inner.emap.items()},
    )


def in_class(m: GraphMorphism, cls: MorphismClass) -> bool:
    """Membership test for the countable classes (regular monos == monos here)."""
    if cls is MorphismClass.HOMOMORPHISM:
        return True
    return m.is_monic()


@dataclass(frozen=True)
class Span:
    """Two morphisms sharing a domain."""

    left: GraphMorphism
    right: GraphMorphism

    def validate(self) -> None:
        if self.left.dom != self.right.dom:
            raise GraphError("span legs must share their domain")


@dataclass(frozen=True)
class Cospan:
    """Two morphisms sharing a codomain."""

    left: GraphMorphism
    right: GraphMorphism

    def validate(self) -> None:
        if self.left.cod != self.right.cod:
            raise GraphError("cospan legs must share their codomain")


def iter_morphism_pairs(
    morphisms: list[GraphMorphism],
) -> Iterator[tuple[GraphMorphism, GraphMorphism]]:
    for i, m1 in enumerate(morphisms):
        for m2 in morphisms[i + 1 :]:
            yield m1, m2
