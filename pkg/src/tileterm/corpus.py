"""Reading and writing rewrite systems and tiles in the .pbpop text format.

A system file is a sequence of rule blocks::

    === rho ===
    L  { x:0 -P:0-> y:0 }
    L' { ... }
    K  { ... }
    K' { ... }
    R  { x.y:0 -P:0-> x.y:0 }

Graph literals list chains of vertices and edges. ``x:0 -P:0-> y:0`` is an
edge P with label 0 from x to y; ``<-Q:0-`` points the other way, and
chains like ``x:0 -A:0-> <-B:0- y:0`` put two opposite edges between the
same endpoints. A bare ``v:0`` is an isolated vertex. Block comments
``/* ... */`` are stripped.

The five graphs per rule carry the rule's morphisms implicitly: an element
maps to the unique element of the target graph whose dot-split id set
contains its own id components (so K's ``y`` and ``z`` may both map to an
L vertex ``y.z``). Ambiguous or missing images are parse errors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .graphs import Edge, GraphError, GraphMorphism, LabeledGraph
from .rewriting import PbpoRule, RuleSystem, complete_rule, validate_rule
from .termination import Tile

_ID = r"[A-Za-z0-9_.]+"
_LABEL = r"[A-Za-z0-9_]+"
_VERTEX_RE = re.compile(rf"^({_ID}):({_LABEL})$")
_EDGE_FWD_RE = re.compile(rf"^-({_ID}):({_LABEL})->$")
_EDGE_REV_RE = re.compile(rf"^<-({_ID}):({_LABEL})-$")
_RULE_HEADER_RE = re.compile(rf"^\s*===\s*({_ID})\s*===\s*$", re.MULTILINE)
_SECTION_RE = re.compile(r"(L'|K'|L|K|R)\s*\{([^{}]*)\}")
_SAFE_ID_RE = re.compile(rf"^{_ID}$")
_SAFE_LABEL_RE = re.compile(rf"^{_LABEL}$")


class CorpusError(ValueError):
    """Raised for malformed corpus files."""


def strip_comments(text: str) -> str:
    if "/*" in re.sub(r"/\*.*?\*/", " ", text, flags=re.DOTALL):
        raise CorpusError("unterminated /* comment")
    return re.sub(r"/\*.*?\*/", " ", text, flags=re.DOTALL)


def parse_graph_literal(text: str, *, where: str = "graph") -> LabeledGraph:
    """Parse one graph literal (the body of a braced section, or a tile)."""
    graph = LabeledGraph()
    last_vertex: str | None = None
    pending: list[tuple[str, str, bool]] = []  # (edge id, label, forward?)

    def add_vertex(vid: str, label: str) -> None:
        known = graph.vertices.get(vid)
        if known is not None and known != label:
            raise CorpusError(
                f"{where}: vertex {vid!r} listed with labels {known!r} and {label!r}"
            )
        graph.vertices[vid] = label

    for token in text.split():
        m = _VERTEX_RE.match(token)
        if m:
            vid, vlabel = m.groups()
            add_vertex(vid, vlabel)
            if pending:
                if last_vertex is None:
                    raise CorpusError(f"{where}: edge before any vertex")
                for eid, elabel, forward in pending:
                    if eid in graph.edges:
                        raise CorpusError(f"{where}: duplicate edge id {eid!r}")
                    src, tgt = (last_vertex, vid) if forward else (vid, last_vertex)
                    graph.edges[eid] = Edge(src, tgt, elabel)
                pending = []
            last_vertex = vid
            continue
        m = _EDGE_FWD_RE.match(token)
        if m:
            if last_vertex is None:
                raise CorpusError(f"{where}: edge {token!r} before any vertex")
            pending.append((m.group(1), m.group(2), True))
            continue
        m = _EDGE_REV_RE.match(token)
        if m:
            if last_vertex is None:
                raise CorpusError(f"{where}: edge {token!r} before any vertex")
            pending.append((m.group(1), m.group(2), False))
            continue
        raise CorpusError(f"{where}: cannot parse token {token!r}")
    if pending:
        raise CorpusError(f"{where}: dangling edge with no target vertex")
    graph.validate()
    return graph


def _atoms(identifier: str) -> set[str]:
    return set(identifier.split("."))


def implicit_morphism(
    dom: LabeledGraph, cod: LabeledGraph, *, where: str
) -> GraphMorphism:
    """The morphism determined by id conventions between two rule graphs.

    Each domain element maps to the unique codomain element whose dot-split
    id set contains all of its own id components.
    """

    def image_of(src_id: str, candidates: dict, kind: str) -> str:
        src_atoms = _atoms(src_id)
        hits = [c for c in sorted(candidates) if src_atoms <= _atoms(c)]
        if not hits:
            raise CorpusError(f"{where}: {kind} {src_id!r} has no image")
        if len(hits) > 1:
            raise CorpusError(
                f"{where}: {kind} {src_id!r} has ambiguous images {hits}"
            )
        return hits[0]

    vmap = {v: image_of(v, cod.vertices, "vertex") for v in dom.vertices}
    emap = {e: image_of(e, cod.edges, "edge") for e in dom.edges}
    morphism = GraphMorphism(dom, cod, vmap, emap)
    try:
        morphism.validate()
    except GraphError as exc:
        raise CorpusError(f"{where}: implicit morphism invalid: {exc}") from exc
    return morphism


def parse_rule(name: str, body: str) -> PbpoRule:
    sections: dict[str, LabeledGraph] = {}
    for match in _SECTION_RE.finditer(body):
        key = match.group(1)
        if key in sections:
            raise CorpusError(f"rule {name}: duplicate section {key}")
        sections[key] = parse_graph_literal(
            match.group(2), where=f"rule {name}, section {key}"
        )
    leftovers = _SECTION_RE.sub(" ", body).strip()
    if leftovers:
        raise CorpusError(f"rule {name}: unexpected text {leftovers.split()[0]!r}")
    missing = {"L", "L'", "K", "K'", "R"} - set(sections)
    if missing:
        raise CorpusError(f"rule {name}: missing sections {sorted(missing)}")

    l_graph, lp_graph = sections["L"], sections["L'"]
    k_graph, kp_graph = sections["K"], sections["K'"]
    r_graph = sections["R"]
    rule = complete_rule(
        name=name,
        l=implicit_morphism(k_graph, l_graph, where=f"rule {name}: K -> L"),
        tL=implicit_morphism(l_graph, lp_graph, where=f"rule {name}: L -> L'"),
        tK=implicit_morphism(k_graph, kp_graph, where=f"rule {name}: K -> K'"),
        lp=implicit_morphism(kp_graph, lp_graph, where=f"rule {name}: K' -> L'"),
        r=implicit_morphism(k_graph, r_graph, where=f"rule {name}: K -> R"),
    )
    violations = validate_rule(rule)
    if violations:
        raise CorpusError(f"rule {name}: " + "; ".join(violations))
    return rule


def parse_system(text: str, name: str) -> RuleSystem:
    body = strip_comments(text)
    headers = list(_RULE_HEADER_RE.finditer(body))
    if not headers:
        raise CorpusError(f"system {name}: no rule blocks found")
    preamble = body[: headers[0].start()].strip()
    if preamble:
        raise CorpusError(
            f"system {name}: unexpected text before first rule: {preamble.split()[0]!r}"
        )
    rules = []
    seen: set[str] = set()
    for i, header in enumerate(headers):
        rule_name = header.group(1)
        if rule_name in seen:
            raise CorpusError(f"system {name}: duplicate rule {rule_name!r}")
        seen.add(rule_name)
        end = headers[i + 1].start() if i + 1 < len(headers) else len(body)
        rules.append(parse_rule(rule_name, body[header.end() : end]))
    return RuleSystem(name=name, rules=rules, source_text=text)


def parse_tile(text: str, name: str) -> Tile:
    graph = parse_graph_literal(strip_comments(text), where=f"tile {name}")
    return Tile(name=name, graph=graph, source=text.strip("\n"))


def _serialization_names(graph: LabeledGraph) -> tuple[dict[str, str], dict[str, str]]:
    """Format-safe names for carriers, keeping ids that already fit."""
    vnames: dict[str, str] = {}
    taken: set[str] = set()
    fresh = 0
    for v in graph.vertex_ids:
        if _SAFE_ID_RE.match(v) and v not in taken:
            vnames[v] = v
            taken.add(v)
    for v in graph.vertex_ids:
        if v not in vnames:
            while f"v{fresh}" in taken:
                fresh += 1
            vnames[v] = f"v{fresh}"
            taken.add(f"v{fresh}")
    enames: dict[str, str] = {}
    taken = set()
    fresh = 0
    for e in graph.edge_ids:
        if _SAFE_ID_RE.match(e) and e not in taken:
            enames[e] = e
            taken.add(e)
    for e in graph.edge_ids:
        if e not in enames:
            while f"e{fresh}" in taken:
                fresh += 1
            enames[e] = f"e{fresh}"
            taken.add(f"e{fresh}")
    return vnames, enames


def serialize_graph(graph: LabeledGraph) -> str:
    """Render a graph as literal lines; parse(serialize(g)) is isomorphic to g.

    Ids that do not fit the format are deterministically renamed, so the
    round trip is only up to isomorphism in that case.
    """
    for label in set(graph.vertices.values()) | {
        e.label for e in graph.edges.values()
    }:
        if not _SAFE_LABEL_RE.match(label):
            raise CorpusError(f"label {label!r} cannot be serialized")
    vnames, enames = _serialization_names(graph)
    lines = []
    for v in graph.vertex_ids:
        if graph.is_isolated(v):
            lines.append(f"{vnames[v]}:{graph.vertices[v]}")
    for e in graph.edge_ids:
        edge = graph.edges[e]
        lines.append(
            f"{vnames[edge.src]}:{graph.vertices[edge.src]}"
            f" -{enames[e]}:{edge.label}->"
            f" {vnames[edge.tgt]}:{graph.vertices[edge.tgt]}"
        )
    return "\n".join(lines)


def _braced(graph: LabeledGraph) -> str:
    body = serialize_graph(graph)
    if not body:
        return "{ }"
    lines = body.split("\n")
    if len(lines) == 1:
        return "{ " + lines[0] + " }"
    return "{ " + "\n     ".join(lines) + " }"


def serialize_system(system: RuleSystem) -> str:
    """Render a system; re-parsing must reconstruct the same rules.

    Raises when the system's morphisms do not follow the id conventions the
    format encodes implicitly.
    """
    parts = []
    for rule in system.rules:
        parts.append(
            f"=== {rule.name} ===\n"
            f"L  {_braced(rule.L)}\n"
            f"L' {_braced(rule.Lp)}\n"
            f"K  {_braced(rule.K)}\n"
            f"K' {_braced(rule.Kp)}\n"
            f"R  {_braced(rule.R)}\n"
        )
    text = "\n".join(parts)
    reparsed = parse_system(text, system.name)
    for original, parsed in zip(system.rules, reparsed.rules):
        for attr in ("l", "tL", "tK", "lp", "r"):
            a, b = getattr(original, attr), getattr(parsed, attr)
            if a.vmap != b.vmap or a.emap != b.emap:
                raise CorpusError(
                    f"system {system.name}: rule {original.name} does not follow "
                    f"the implicit-morphism id conventions ({attr} differs)"
                )
    return text


def display_name(path: Path) -> str:
    """File stem with any ordering prefix like ``0_`` stripped."""
    return re.sub(r"^\d+_", "", path.stem)


@dataclass
class Workspace:
    """A loaded corpus: indexed systems and tiles plus load warnings."""

    root: Path
    systems: list[RuleSystem] = field(default_factory=list)
    tiles: list[Tile] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def load_workspace(root: Path | str) -> Workspace:
    """Load ``<root>/systems/*.pbpop`` and ``<root>/tiles/*``.

    Indexing is stable: files are taken in sorted filename order. Malformed
    files produce a warning and are skipped; the rest of the workspace still
    loads.
    """
    root = Path(root)
    systems_dir = root / "systems"
    tiles_dir = root / "tiles"
    if not root.is_dir():
        raise CorpusError(f"workspace root {root} does not exist")
    if not systems_dir.is_dir():
        raise CorpusError(f"workspace {root} has no systems/ directory")
    if not tiles_dir.is_dir():
        raise CorpusError(f"workspace {root} has no tiles/ directory")
    ws = Workspace(root=root)
    for path in sorted(systems_dir.glob("*.pbpop")):
        try:
            ws.systems.append(parse_system(path.read_text(), display_name(path)))
        except (CorpusError, GraphError, OSError) as exc:
            ws.warnings.append(f"skipping system file {path.name}: {exc}")
    for path in sorted(tiles_dir.iterdir()):
        if path.name.startswith(".") or path.is_dir():
            continue
        try:
            ws.tiles.append(parse_tile(path.read_text(), display_name(path)))
        except (CorpusError, GraphError, OSError) as exc:
            ws.warnings.append(f"skipping tile file {path.name}: {exc}")
    return ws


def write_workspace(root: Path | str, systems: list[RuleSystem], tiles: list[Tile]) -> None:
    """Write systems and tiles out as a loadable workspace (test helper)."""
    root = Path(root)
    (root / "systems").mkdir(parents=True, exist_ok=True)
    (root / "tiles").mkdir(parents=True, exist_ok=True)
    for i, system in enumerate(systems):
        path = root / "systems" / f"{i}_{system.name}.pbpop"
        path.write_text(serialize_system(system) + "\n")
    for i, tile in enumerate(tiles):
        path = root / "tiles" / f"{i}_{tile.name}.tile"
        path.write_text(serialize_graph(tile.graph) + "\n")
