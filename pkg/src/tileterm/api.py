"""HTTP/JSON facade over workspaces, analysis and proof sessions.

The app serves three read-only catalogue endpoints (systems, one system,
tiles) and a small session API through which a client drives a relative
termination proof stage by stage.  All analysis numbers come from the same
analyzer and DTO builder the terminal report uses, so the two surfaces can
never disagree.

System and tile ids are the 0-based workspace positions, identical to the
indices the interactive shell prints.  A transcript exported from a session
therefore replays verbatim as a batch script.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field

from .corpus import Workspace, load_workspace
from .graphs import GraphMorphism, LabeledGraph, MorphismClass
from .kernel import BudgetExceeded
from .rewriting import PbpoRule, RuleSystem
from .shell import report_dto, system_text, tile_text
from .termination import (
    AnalysisError,
    ProofState,
    TileConfig,
    TileEntry,
    analyze_system,
)

DEFAULT_SESSION_TTL = 86_400.0


def graph_dto(graph: LabeledGraph) -> dict[str, Any]:
    """JSON payload for one graph: vertices and edges with labels."""
    return {
        "vertices": [
            {"id": vid, "label": label} for vid, label in sorted(graph.vertices.items())
        ],
        "edges": [
            {"id": eid, "src": edge.src, "tgt": edge.tgt, "label": edge.label}
            for eid, edge in sorted(graph.edges.items())
        ],
    }


def morphism_dto(hom: GraphMorphism) -> dict[str, Any]:
    return {
        "vertices": dict(sorted(hom.vmap.items())),
        "edges": dict(sorted(hom.emap.items())),
    }


def rule_dto(rule: PbpoRule) -> dict[str, Any]:
    """Full serialization of one rule: all six graphs plus the wiring.

    Clients style context elements (those of L' outside the image of tL)
    differently, so the morphism maps are part of the payload.
    """
    return {
        "name": rule.name,
        "graphs": {
            "L": graph_dto(rule.L),
            "K": graph_dto(rule.K),
            "R": graph_dto(rule.R),
            "LPrime": graph_dto(rule.Lp),
            "KPrime": graph_dto(rule.Kp),
            "RPrime": graph_dto(rule.Rp),
        },
        "morphisms": {
            "l": morphism_dto(rule.l),
            "r": morphism_dto(rule.r),
            "tL": morphism_dto(rule.tL),
            "tK": morphism_dto(rule.tK),
            "tR": morphism_dto(rule.tR),
            "lPrime": morphism_dto(rule.lp),
            "rPrime": morphism_dto(rule.rp),
        },
    }


def report_payload(report) -> dict[str, Any]:
    """The shell DTO plus a rendered graph per tile entry."""
    dto = report_dto(report)
    for entry, tile_report in zip(dto["tiles"], report.tiles):
        entry["graph"] = graph_dto(tile_report.tile.graph)
    return dto


class EntryIn(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    tile_id: int = Field(alias="tileId")
    weight: int
    klass: str = Field(alias="class")


class AnalyzeIn(BaseModel):
    entries: list[EntryIn]


class SessionIn(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    system_id: int = Field(alias="systemId")


@dataclass
class SessionRecord:
    """One proof session: its state plus the JSON transcript shown to
    clients.  The lock serializes mutations; readers go lock-free."""

    session_id: str
    system_id: int
    state: ProofState
    transcript: list[dict[str, Any]] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _deadline(seconds: float):
    """A budget callback that trips once the wall-clock allowance is spent."""
    limit = time.monotonic() + seconds

    def check() -> None:
        if time.monotonic() > limit:
            raise BudgetExceeded(f"analysis exceeded the {seconds:g} s budget")

    return check


class SessionStore:
    """In-memory session map with idle expiry and optional JSON snapshots."""

    def __init__(
        self,
        workspace: Workspace,
        *,
        ttl_seconds: float = DEFAULT_SESSION_TTL,
        persist_dir: Path | None = None,
    ) -> None:
        self.workspace = workspace
        self.ttl = ttl_seconds
        self.persist_dir = persist_dir
        self._sessions: dict[str, SessionRecord] = {}
        self._guard = threading.Lock()
        if persist_dir is not None:
            persist_dir.mkdir(parents=True, exist_ok=True)
            self._restore()

    def create(self, system_id: int, system: RuleSystem) -> SessionRecord:
        record = SessionRecord(
            session_id=uuid.uuid4().hex,
            system_id=system_id,
            state=ProofState.initial(system),
        )
        with self._guard:
            self._sessions[record.session_id] = record
        self._snapshot(record)
        return record

    def get(self, session_id: str) -> SessionRecord:
        with self._guard:
            self._sweep()
            record = self._sessions.get(session_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id}")
        return record

    def touch(self, record: SessionRecord) -> None:
        record.updated = time.time()
        self._snapshot(record)

    def _sweep(self) -> None:
        cutoff = time.time() - self.ttl
        for sid in [s for s, r in self._sessions.items() if r.updated < cutoff]:
            del self._sessions[sid]
            if self.persist_dir is not None:
                (self.persist_dir / f"{sid}.json").unlink(missing_ok=True)

    def _snapshot(self, record: SessionRecord) -> None:
        if self.persist_dir is None:
            return
        doc = {
            "sessionId": record.session_id,
            "systemId": record.system_id,
            "system": record.state.system.name,
            "created": record.created,
            "updated": record.updated,
            "transcript": record.transcript,
        }
        path = self.persist_dir / f"{record.session_id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc, indent=2))
        tmp.replace(path)

    def _restore(self) -> None:
        assert self.persist_dir is not None
        for path in sorted(self.persist_dir.glob("*.json")):
            try:
                doc = json.loads(path.read_text())
                record = self._rehydrate(doc)
            except (ValueError, KeyError, IndexError):
                continue
            if record is not None:
                self._sessions[record.session_id] = record

    def _rehydrate(self, doc: dict[str, Any]) -> SessionRecord | None:
        system_id = int(doc["systemId"])
        if not 0 <= system_id < len(self.workspace.systems):
            return None
        system = self.workspace.systems[system_id]
        if system.name != doc["system"]:
            return None
        transcript = list(doc["transcript"])
        record = SessionRecord(
            session_id=str(doc["sessionId"]),
            system_id=system_id,
            state=_state_from_transcript(system, transcript),
            transcript=transcript,
            created=float(doc["created"]),
            updated=float(doc["updated"]),
        )
        return record


def _state_from_transcript(
    system: RuleSystem, transcript: list[dict[str, Any]]
) -> ProofState:
    """Remaining rules are whatever the recorded stages did not prune."""
    pruned = {name for stage in transcript for name in stage.get("pruned", [])}
    remaining = [rule.name for rule in system.rules if rule.name not in pruned]
    return ProofState(system=system, remaining=remaining)


def _session_summary(record: SessionRecord) -> dict[str, Any]:
    return {
        "sessionId": record.session_id,
        "systemId": record.system_id,
        "system": record.state.system.name,
        "remaining": list(record.state.remaining),
        "terminated": record.state.terminated,
        "stageCount": len(record.transcript),
    }


def create_app(
    workspace_root: Path | str,
    *,
    persist_dir: str | Path | None = None,
    budget_seconds: float = 30.0,
    static_dir: str | Path | None = None,
    ttl_seconds: float = DEFAULT_SESSION_TTL,
) -> FastAPI:
    workspace = load_workspace(workspace_root)
    store = SessionStore(
        workspace,
        ttl_seconds=ttl_seconds,
        persist_dir=Path(persist_dir) if persist_dir is not None else None,
    )
    app = FastAPI(title="tileterm", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.workspace = workspace
    app.state.sessions = store

    def _system(system_id: int) -> RuleSystem:
        if not 0 <= system_id < len(workspace.systems):
            raise HTTPException(status_code=404, detail=f"no system {system_id}")
        return workspace.systems[system_id]

    @app.get("/api/systems")
    def list_systems() -> list[dict[str, Any]]:
        return [
            {"id": index, "name": system.name, "ruleCount": len(system.rules)}
            for index, system in enumerate(workspace.systems)
        ]

    @app.get("/api/systems/{system_id}")
    def get_system(system_id: int) -> dict[str, Any]:
        system = _system(system_id)
        return {
            "id": system_id,
            "name": system.name,
            "source": system_text(system),
            "rules": [rule_dto(rule) for rule in system.rules],
        }

    @app.get("/api/tiles")
    def list_tiles() -> list[dict[str, Any]]:
        return [
            {
                "id": index,
                "name": tile.name,
                "source": tile_text(tile),
                "graph": graph_dto(tile.graph),
            }
            for index, tile in enumerate(workspace.tiles)
        ]

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionIn) -> dict[str, Any]:
        system = _system(body.system_id)
        record = store.create(body.system_id, system)
        return _session_summary(record)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        record = store.get(session_id)
        doc = _session_summary(record)
        doc["created"] = record.created
        doc["updated"] = record.updated
        doc["stages"] = list(record.transcript)
        return doc

    def _parse_entries(body: AnalyzeIn) -> TileConfig:
        if not body.entries:
            raise HTTPException(status_code=422, detail="entries must be non-empty")
        parsed: list[TileEntry] = []
        for entry in body.entries:
            if not 0 <= entry.tile_id < len(workspace.tiles):
                raise HTTPException(
                    status_code=422, detail=f"no tile with id {entry.tile_id}"
                )
            if entry.weight < 1:
                raise HTTPException(
                    status_code=422, detail="weights must be positive integers"
                )
            try:
                counting = MorphismClass.from_letter(entry.klass)
            except ValueError:
                raise HTTPException(
                    status_code=422,
                    detail=f"unknown morphism class {entry.klass!r} (use h, m or r)",
                )
            parsed.append(
                TileEntry(
                    tile=workspace.tiles[entry.tile_id],
                    weight=entry.weight,
                    counting=counting,
                )
            )
        return TileConfig(entries=parsed)

    @app.post("/api/sessions/{session_id}/analyze")
    def analyze(session_id: str, body: AnalyzeIn) -> dict[str, Any]:
        record = store.get(session_id)
        config = _parse_entries(body)
        if not record.lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409, detail="session is being mutated by another request"
            )
        try:
            if record.state.terminated:
                raise HTTPException(
                    status_code=409, detail="proof is already complete; undo to revisit"
                )
            try:
                reports, next_state = analyze_system(
                    record.state, config, budget=_deadline(budget_seconds)
                )
            except BudgetExceeded as exc:
                raise HTTPException(status_code=503, detail=f"analysis timeout: {exc}")
            except AnalysisError as exc:
                raise HTTPException(status_code=503, detail=str(exc))
            applied = len(next_state.stages) > len(record.state.stages)
            pruned = next_state.stages[-1].pruned if applied else []
            stage = {
                "entries": [
                    {
                        "tileId": entry.tile_id,
                        "tile": workspace.tiles[entry.tile_id].name,
                        "weight": entry.weight,
                        "class": entry.klass,
                    }
                    for entry in body.entries
                ],
                "reports": [report_payload(r) for r in reports],
                "pruneApplied": applied,
                "pruned": list(pruned),
                "remaining": list(next_state.remaining),
                "terminated": next_state.terminated,
            }
            record.state = next_state
            record.transcript.append(stage)
            store.touch(record)
            return stage
        finally:
            record.lock.release()

    @app.post("/api/sessions/{session_id}/undo")
    def undo(session_id: str) -> dict[str, Any]:
        record = store.get(session_id)
        if not record.lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409, detail="session is being mutated by another request"
            )
        try:
            if not record.transcript:
                raise HTTPException(status_code=409, detail="nothing to undo")
            record.transcript.pop()
            record.state = _state_from_transcript(
                record.state.system, record.transcript
            )
            store.touch(record)
            return _session_summary(record)
        finally:
            record.lock.release()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="explorer")
    else:

        @app.get("/")
        def index() -> dict[str, Any]:
            return {
                "name": "tileterm",
                "systems": len(workspace.systems),
                "tiles": len(workspace.tiles),
            }

    return app
