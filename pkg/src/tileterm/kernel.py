"""Computational operations on graphs: hom enumeration, limits, colimits.

Everything here is deterministic: carriers are built in sorted order and
enumerations return results sorted by their canonical key.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator

from .graphs import (
    Edge,
    GraphError,
    GraphMorphism,
    LabeledGraph,
    MorphismClass,
    compose,
    identity,
)


class BudgetExceeded(RuntimeError):
    """Raised by search routines when a caller-supplied budget check fires."""


# How many search-tree expansions happen between budget checks.
_BUDGET_STRIDE = 4096


def _make_ticker(budget: Callable[[], None] | None):
    if budget is None:
        return lambda: None
    state = {"n": 0}

    def tick() -> None:
        state["n"] += 1
        if state["n"] % _BUDGET_STRIDE == 0:
            budget()

    return tick


def enumerate_morphisms(
    dom: LabeledGraph,
    cod: LabeledGraph,
    cls: MorphismClass = MorphismClass.HOMOMORPHISM,
    *,
    reduce_domain_symmetry: bool = False,
    first_only: bool = False,
    budget: Callable[[], None] | None = None,
) -> list[GraphMorphism]:
    """All label-preserving homomorphisms dom -> cod in the given class.

    Backtracks over vertex assignments (most-constrained vertices first, by
    descending degree) with label and adjacency pruning, then over edge
    assignments. Results come back sorted by canonical key, so the order is
    independent of the search order.

    With ``reduce_domain_symmetry``, interchangeable domain elements
    (isolated vertices with equal labels; parallel edges with equal label)
    are forced to take images in canonical order. That returns one
    representative per orbit of those symmetries instead of every morphism,
    which is only safe when the caller cares about results up to
    precomposition with domain automorphisms.
    """
    tick = _make_ticker(budget)
    monic = cls is not MorphismClass.HOMOMORPHISM

    dom_vertices = sorted(dom.vertices, key=lambda v: (-dom.degree(v), v))
    cod_vertex_order = {v: i for i, v in enumerate(cod.vertex_ids)}
    cod_by_label: dict[str, list[str]] = {}
    for v in cod.vertex_ids:
        cod_by_label.setdefault(cod.vertices[v], []).append(v)

    cod_edge_index: dict[tuple[str, str, str], list[str]] = {}
    for eid in cod.edge_ids:
        e = cod.edges[eid]
        cod_edge_index.setdefault((e.src, e.tgt, e.label), []).append(eid)

    # Parallel-edge multiplicities in the domain, used for capacity pruning.
    dom_edge_groups: dict[tuple[str, str, str], list[str]] = {}
    for eid in dom.edge_ids:
        e = dom.edges[eid]
        dom_edge_groups.setdefault((e.src, e.tgt, e.label), []).append(eid)

    incident: dict[str, list[tuple[str, Edge]]] = {v: [] for v in dom.vertices}
    for eid, e in dom.edges.items():
        incident[e.src].append((eid, e))
        if e.tgt != e.src:
            incident[e.tgt].append((eid, e))

    vertex_twin_group: dict[str, str] = {}
    edge_twin_group: dict[str, tuple[str, str, str]] = {}
    if reduce_domain_symmetry:
        for v in dom.vertices:
            if dom.is_isolated(v):
                vertex_twin_group[v] = dom.vertices[v]
        for key, group in dom_edge_groups.items():
            if len(group) > 1:
                for eid in group:
                    edge_twin_group[eid] = key

    results: list[GraphMorphism] = []
    vmap: dict[str, str] = {}
    used_vertices: set[str] = set()
    # Last image index chosen inside each twin group, for symmetry breaking.
    twin_floor: dict[str, int] = {}

    sorted_dom_edges = dom.edge_ids

    def assign_edges(idx: int, emap: dict[str, str], used_edges: set[str]) -> bool:
        tick()
        if idx == len(sorted_dom_edges):
            results.append(
                GraphMorphism(dom, cod, dict(vmap), dict(emap))
            )
            return first_only
        eid = sorted_dom_edges[idx]
        e = dom.edges[eid]
        candidates = cod_edge_index.get((vmap[e.src], vmap[e.tgt], e.label), [])
        group = edge_twin_group.get(eid)
        for img in candidates:
            if monic and img in used_edges:
                continue
            if group is not None:
                floor = twin_floor.get(("e",) + group, -1)
                rank = cod_edge_index[(vmap[e.src], vmap[e.tgt], e.label)].index(img)
                if rank < floor:
                    continue
                twin_floor[("e",) + group] = rank
                emap[eid] = e_img = img
                if monic:
                    used_edges.add(img)
                if assign_edges(idx + 1, emap, used_edges):
                    return True
                if monic:
                    used_edges.discard(img)
                del emap[eid]
                twin_floor[("e",) + group] = floor
            else:
                emap[eid] = img
                if monic:
                    used_edges.add(img)
                if assign_edges(idx + 1, emap, used_edges):
                    return True
                if monic:
                    used_edges.discard(img)
                del emap[eid]
        return False

    def compatible(v: str, img: str) -> bool:
        # Every fully-assigned edge group touching v must have candidates.
        seen: set[tuple[str, str, str]] = set()
        for eid, e in incident[v]:
            if e.src in vmap or e.src == v:
                if e.tgt in vmap or e.tgt == v:
                    src_img = img if e.src == v else vmap[e.src]
                    tgt_img = img if e.tgt == v else vmap[e.tgt]
                    key = (e.src, e.tgt, e.label)
                    if key in seen:
                        continue
                    seen.add(key)
                    available = cod_edge_index.get((src_img, tgt_img, e.label), [])
                    needed = len(dom_edge_groups[key])
                    if not available:
                        return False
                    if monic and needed > len(available):
                        return False
        return True

    def assign_vertices(idx: int) -> bool:
        tick()
        if idx == len(dom_vertices):
            return assign_edges(0, {}, set())
        v = dom_vertices[idx]
        group = vertex_twin_group.get(v)
        for img in cod_by_label.get(dom.vertices[v], []):
            if monic and img in used_vertices:
                continue
            if group is not None:
                floor = twin_floor.get(("v", group), -1)
                rank = cod_vertex_order[img]
                if rank < floor or (monic and rank == floor):
                    continue
            if not compatible(v, img):
                continue
            vmap[v] = img
            used_vertices.add(img)
            old_floor = None
            if group is not None:
                old_floor = twin_floor.get(("v", group), -1)
                twin_floor[("v", group)] = cod_vertex_order[img]
            if assign_vertices(idx + 1):
                return True
            if group is not None:
                twin_floor[("v", group)] = old_floor
            del vmap[v]
            used_vertices.discard(img)
        return False

    assign_vertices(0)
    results.sort(key=lambda m: m.key())
    return results


def classify_morphism(m: GraphMorphism) -> dict[str, bool]:
    """Structural properties of a morphism.

    Regular monos coincide with monos in this category; split epis are
    detected by searching for an actual right inverse.
    """
    monic = m.is_monic()
    epic = m.is_epic()
    return {
        "monic": monic,
        "epic": epic,
        "iso": monic and epic,
        "regularMonic": monic,
        "splitEpic": epic and bool(right_inverses(m, first_only=True)),
    }


@dataclass
class Pullback:
    """Pullback of a cospan f: A -> C <- B :g, with projections to A and B."""

    apex: LabeledGraph
    to_left: GraphMorphism
    to_right: GraphMorphism


def pullback(f: GraphMorphism, g: GraphMorphism) -> Pullback:
    """Pullback of f: A -> C and g: B -> C; carrier ids are "(a,b)" pairs."""
    if f.cod != g.cod:
        raise GraphError("pullback requires a cospan (shared codomain)")
    a_graph, b_graph = f.dom, g.dom
    vertices: dict[str, str] = {}
    vmap_l: dict[str, str] = {}
    vmap_r: dict[str, str] = {}
    pair_of: dict[tuple[str, str], str] = {}
    for av in a_graph.vertex_ids:
        for bv in b_graph.vertex_ids:
            if f.vmap[av] == g.vmap[bv]:
                pid = f"({av},{bv})"
                vertices[pid] = a_graph.vertices[av]
                vmap_l[pid] = av
                vmap_r[pid] = bv
                pair_of[(av, bv)] = pid
    edges: dict[str, Edge] = {}
    emap_l: dict[str, str] = {}
    emap_r: dict[str, str] = {}
    for ae in a_graph.edge_ids:
        for be in b_graph.edge_ids:
            if f.emap[ae] == g.emap[be]:
                a_edge = a_graph.edges[ae]
                b_edge = b_graph.edges[be]
                pid = f"({ae},{be})"
                edges[pid] = Edge(
                    pair_of[(a_edge.src, b_edge.src)],
                    pair_of[(a_edge.tgt, b_edge.tgt)],
                    a_edge.label,
                )
                emap_l[pid] = ae
                emap_r[pid] = be
    apex = LabeledGraph(vertices, edges)
    return Pullback(
        apex,
        GraphMorphism(apex, a_graph, vmap_l, emap_l),
        GraphMorphism(apex, b_graph, vmap_r, emap_r),
    )


def pullback_arrow(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """The arrow obtained by pulling f back along g (it lands in dom(g))."""
    return pullback(f, g).to_right


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _merged_id(member_ids: list[str]) -> str:
    atoms: set[str] = set()
    for mid in member_ids:
        atoms.update(mid.split("."))
    return ".".join(sorted(atoms))


@dataclass
class Pushout:
    """Pushout of a span B <-f- A -g-> C, with injections from B and C."""

    apex: LabeledGraph
    from_left: GraphMorphism
    from_right: GraphMorphism


def pushout(f: GraphMorphism, g: GraphMorphism) -> Pushout:
    """Pushout of f: A -> B and g: A -> C.

    The carrier is the quotient of the disjoint union of B and C by the
    equivalence generated by f(a) ~ g(a); merged ids are the dot-joined
    sorted component identifiers.
    """
    if f.dom != g.dom:
        raise GraphError("pushout requires a span (shared domain)")
    b_graph, c_graph = f.cod, g.cod

    uf_v = _UnionFind()
    for bv in b_graph.vertices:
        uf_v.find(("L", bv))
    for cv in c_graph.vertices:
        uf_v.find(("R", cv))
    for av in f.dom.vertices:
        uf_v.union(("L", f.vmap[av]), ("R", g.vmap[av]))

    uf_e = _UnionFind()
    for be in b_graph.edges:
        uf_e.find(("L", be))
    for ce in c_graph.edges:
        uf_e.find(("R", ce))
    for ae in f.dom.edges:
        uf_e.union(("L", f.emap[ae]), ("R", g.emap[ae]))

    def classes(uf: _UnionFind, left_ids, right_ids):
        by_root: dict = {}
        for side, ids in (("L", left_ids), ("R", right_ids)):
            for x in ids:
                by_root.setdefault(uf.find((side, x)), []).append((side, x))
        return sorted(by_root.values(), key=lambda ms: _merged_id([m[1] for m in ms]))

    def name_classes(class_list):
        names: dict[tuple[str, str], str] = {}
        used: Counter = Counter()
        for members in class_list:
            base = _merged_id([m[1] for m in members])
            used[base] += 1
            name = base if used[base] == 1 else f"{base}~{used[base] - 1}"
            for m in members:
                names[m] = name
        return names

    v_classes = classes(uf_v, b_graph.vertices, c_graph.vertices)
    v_name = name_classes(v_classes)
    vertices: dict[str, str] = {}
    for members in v_classes:
        labels = {
            (b_graph if side == "L" else c_graph).vertices[vid]
            for side, vid in members
        }
        if len(labels) != 1:
            raise GraphError(f"label conflict in merged vertex class {members}")
        vertices[v_name[members[0]]] = labels.pop()

    e_classes = classes(uf_e, b_graph.edges, c_graph.edges)
    e_name = name_classes(e_classes)
    edges: dict[str, Edge] = {}
    for members in e_classes:
        reps = []
        for side, eid in members:
            src_graph = b_graph if side == "L" else c_graph
            e = src_graph.edges[eid]
            reps.append(
                Edge(v_name[(side, e.src)], v_name[(side, e.tgt)], e.label)
            )
        if len(set(reps)) != 1:
            raise GraphError(f"incoherent merged edge class {members}")
        edges[e_name[members[0]]] = reps[0]

    apex = LabeledGraph(vertices, edges)
    from_left = GraphMorphism(
        b_graph,
        apex,
        {v: v_name[("L", v)] for v in b_graph.vertices},
        {e: e_name[("L", e)] for e in b_graph.edges},
    )
    from_right = GraphMorphism(
        c_graph,
        apex,
        {v: v_name[("R", v)] for v in c_graph.vertices},
        {e: e_name[("R", e)] for e in c_graph.edges},
    )
    return Pushout(apex, from_left, from_right)


def pushout_mediator(
    po: Pushout, y_left: GraphMorphism, y_right: GraphMorphism
) -> GraphMorphism:
    """The unique arrow out of a pushout induced by a commuting cospan.

    Requires y_left: B -> Y and y_right: C -> Y with y_left . f = y_right . g
    for the span the pushout was built from; the result u satisfies
    u . from_left = y_left and u . from_right = y_right.
    """
    if y_left.cod != y_right.cod:
        raise GraphError("mediating cospan must share its codomain")
    vmap: dict[str, str] = {}
    for v, img in po.from_left.vmap.items():
        vmap[img] = y_left.vmap[v]
    for v, img in po.from_right.vmap.items():
        if img in vmap and vmap[img] != y_right.vmap[v]:
            raise GraphError("cospan does not commute with the pushout span")
        vmap[img] = y_right.vmap[v]
    emap: dict[str, str] = {}
    for e, img in po.from_left.emap.items():
        emap[img] = y_left.emap[e]
    for e, img in po.from_right.emap.items():
        if img in emap and emap[img] != y_right.emap[e]:
            raise GraphError("cospan does not commute with the pushout span")
        emap[img] = y_right.emap[e]
    mediator = GraphMorphism(po.apex, y_left.cod, vmap, emap)
    mediator.validate()
    return mediator


def factorize(f: GraphMorphism) -> tuple[GraphMorphism, GraphMorphism]:
    """Epi-mono factorization through the image subgraph of the codomain."""
    image = LabeledGraph(
        {img: f.cod.vertices[img] for img in f.vmap.values()},
        {img: f.cod.edges[img] for img in f.emap.values()},
    )
    epi = GraphMorphism(f.dom, image, dict(f.vmap), dict(f.emap))
    mono = identity(image)
    mono = GraphMorphism(image, f.cod, mono.vmap, mono.emap)
    return epi, mono


def right_inverses(
    e: GraphMorphism, *, first_only: bool = False
) -> list[GraphMorphism]:
    """All sections g with e . g = id on the codomain of e.

    Empty when e is not a split epi. Every returned section is monic (it
    has a left inverse). The enumeration is exhaustive.
    """
    cod, dom = e.cod, e.dom
    v_fibers: dict[str, list[str]] = {v: [] for v in cod.vertices}
    for v, img in e.vmap.items():
        v_fibers[img].append(v)
    if any(not fiber for fiber in v_fibers.values()):
        return []
    e_fibers: dict[str, list[str]] = {eid: [] for eid in cod.edges}
    for eid, img in e.emap.items():
        e_fibers[img].append(eid)
    if any(not fiber for fiber in e_fibers.values()):
        return []

    cod_vs = cod.vertex_ids
    cod_es = cod.edge_ids
    results: list[GraphMorphism] = []
    vmap: dict[str, str] = {}

    def assign_edge(idx: int, emap: dict[str, str]) -> bool:
        if idx == len(cod_es):
            results.append(GraphMorphism(cod, dom, dict(vmap), dict(emap)))
            return first_only
        eid = cod_es[idx]
        edge = cod.edges[eid]
        for cand in sorted(e_fibers[eid]):
            d_edge = dom.edges[cand]
            if d_edge.src != vmap[edge.src] or d_edge.tgt != vmap[edge.tgt]:
                continue
            emap[eid] = cand
            if assign_edge(idx + 1, emap):
                return True
            del emap[eid]
        return False

    def assign_vertex(idx: int) -> bool:
        if idx == len(cod_vs):
            return assign_edge(0, {})
        v = cod_vs[idx]
        for cand in sorted(v_fibers[v]):
            vmap[v] = cand
            if assign_vertex(idx + 1):
                return True
            del vmap[v]
        return False

    assign_vertex(0)
    results.sort(key=lambda m: m.key())
    return results


def _iso_profile(g: LabeledGraph) -> tuple:
    vertex_profile = sorted(
        (
            g.vertices[v],
            sum(1 for e in g.edges.values() if e.src == v),
            sum(1 for e in g.edges.values() if e.tgt == v),
        )
        for v in g.vertices
    )
    edge_profile = sorted(e.label for e in g.edges.values())
    return (len(g.vertices), len(g.edges), tuple(vertex_profile), tuple(edge_profile))


def find_isomorphism(g: LabeledGraph, h: LabeledGraph) -> GraphMorphism | None:
    """An isomorphism g -> h, or None.

    Cheap invariants (cardinalities, label multisets, degree profiles) are
    compared first; then a monic morphism is searched, which by equal
    cardinalities must be an isomorphism.
    """
    if _iso_profile(g) != _iso_profile(h):
        return None
    found = enumerate_morphisms(
        g, h, MorphismClass.MONO, reduce_domain_symmetry=True, first_only=True
    )
    return found[0] if found else None


def is_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    return find_isomorphism(g, h) is not None


def disjoint_union(g: LabeledGraph, h: LabeledGraph) -> LabeledGraph:
    """Disjoint union, renaming h's carriers on id collisions."""
    vertices = dict(g.vertices)
    edges = dict(g.edges)
    vrename: dict[str, str] = {}
    for v, lbl in sorted(h.vertices.items()):
        name = v
        while name in vertices:
            name += "'"
        vrename[v] = name
        vertices[name] = lbl
    for e, edge in sorted(h.edges.items()):
        name = e
        while name in edges:
            name += "'"
        edges[name] = Edge(vrename[edge.src], vrename[edge.tgt], edge.label)
    return LabeledGraph(vertices, edges)
