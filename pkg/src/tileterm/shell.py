"""Terminal front end: interactive proof prompt and batch script runner.

The prompt starts in system selection mode; selecting a system enters
proof mode, where ``use`` runs one analysis round and prints the
termination report. Batch mode replays the same commands from a file and
turns ``expect terminating`` lines into assertions on the proof outcome.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CorpusError, Workspace, load_workspace, serialize_graph, serialize_system
from .graphs import GraphError, MorphismClass
from .kernel import BudgetExceeded
from .rewriting import RuleSystem
from .termination import (
    AnalysisError,
    ProofState,
    RuleReport,
    RuleVerdict,
    Tile,
    TileConfig,
    TileEntry,
    analyze_system,
)

PROMPT = "tileterm> "

_SELECTION_HELP = (
    ">> Available commands:\n"
    "select [n]  : select system n for termination proving\n"
    "inspect [n] : inspect option (system/tile) n in detail\n"
    "systems     : list the available systems\n"
    "help        : print all available commands\n"
    "exit        : exit the program"
)

# The two lines ending in a space are deliberate; the help text is golden.
_PROOF_HELP = (
    ">> Available commands:\n"
    "use [i w c]+ :\n"
    "use tile i with weight w, and count morphisms of class c, where:\n"
    "- i and w are integers (and w is positive), and \n"
    "- c is a character (r: regular monos, m: monos, h: homomorphisms)\n"
    "multiple tiles can be specified. \n"
    "for example, 'use 3 4 h 5 9 r' uses:\n"
    "- tile 3 with weight 4 (counting homomorphisms), and\n"
    "- tile 5 with weight 9 (counting regular monos)\n"
    "inspect [n] : inspect option (system/tile) n in detail\n"
    "back : return to system selection mode\n"
    "help : print all available commands\n"
    "tiles : list the available tiles\n"
    "exit : exit the program"
)

_USE_USAGE = (
    ">> Usage: use [i w c]+ where i is a tile index, w is a positive "
    "integer weight, and c is one of r/m/h. Type 'help' for details."
)


def tile_text(tile: Tile) -> str:
    return tile.source if tile.source is not None else serialize_graph(tile.graph)


def system_text(system: RuleSystem) -> str:
    if system.source_text is not None:
        return system.source_text.strip("\n")
    return serialize_system(system)


def _names(names: list[str]) -> str:
    return ", ".join(names)


def _sized(label: str, value: object) -> str:
    return f"{label:<40}{value}"


def _stat(label: str, value: object) -> str:
    return f"{label:<31}{value}"


def render_report(reports: list[RuleReport], state: ProofState) -> list[str]:
    """The termination report for one analysis round, as output lines.

    ``state`` is the proof state after pruning; its remaining rules fill
    the pruned-system line.
    """
    out = [""]
    out.append("=" * 15 + " SYSTEM TERMINATION REPORT " + "=" * 15)
    out.append("-" * 15 + "          SUMMARY          " + "-" * 15)
    out.append("")
    names = [r.rule_name for r in reports]
    out.append(f"The system has {len(names)} rules, named: {_names(names)}")
    all_ok = all(r.slide_successful for r in reports)
    out.append(
        f"Was the sliding successful for every rule? {'yes' if all_ok else 'no'}"
    )
    by = {
        RuleVerdict.DECREASING: [],
        RuleVerdict.NONINCREASING: [],
        RuleVerdict.UNKNOWN: [],
    }
    for r in reports:
        by[r.verdict].append(r.rule_name)
    out.append(f"Provably decreasing rules: {_names(by[RuleVerdict.DECREASING])}")
    out.append(
        "Provably nonincreasing (but not provably decreasing) rules: "
        + _names(by[RuleVerdict.NONINCREASING])
    )
    out.append(f"Possibly increasing rules: {_names(by[RuleVerdict.UNKNOWN])}")
    out.append(f"The pruned system contains rules: {_names(state.remaining)}")
    if not state.remaining:
        out.append("")
        out.append("The pruned system is empty, so the system is TERMINATING.")
    out.append("")
    out.append("-" * 15 + "   DETAILED RULE REPORTS   " + "-" * 15)
    for rep in reports:
        out.append("")
        out.append(">" * 15 + f" rule {rep.rule_name} " + "<" * 15)
        out.append("Summary:")
        if rep.slide_successful:
            out.append("- The sliding is SUCCESSFUL.")
        else:
            out.append(f"- The sliding FAILED ({rep.slide_failure}).")
        out.append(f"- The weight of Delta is {rep.delta_weight}.")
        out.append(f"- The weight of R is {rep.r_weight}.")
        out.append(f"- Conclusion: the rule is {rep.verdict.display}.")
        for note in rep.notes:
            out.append(f"- Note: {note}.")
        out.append("")
        out.append("The details per tile for this rule now follow.")
        for t in rep.tiles:
            out.append("")
            out.append(
                f"~~~ Tile {t.tile.name} with weight {t.weight}, "
                f"counting {t.counting.display_name}"
            )
            out.extend(tile_text(t.tile).split("\n"))
            out.append("")
            out.append(_sized("- The tiling of R has size:", t.iso_in_r))
            out.append(
                _sized(
                    "- Giving a weight of:",
                    f"{t.iso_in_r} * {t.weight} = {t.iso_in_r * t.weight}",
                )
            )
            out.append(_sized("- A largest valid tiling of L has size:", t.delta_size))
            out.append(
                _sized(
                    "- Giving a weight of:",
                    f"{t.delta_size} * {t.weight} = {t.delta_size * t.weight}",
                )
            )
            out.append("")
            out.append("Slide data:")
            out.append("")
            out.append(_stat("# morphisms into R':", t.hom_into_r1))
            out.append(_stat("# of which valid:", t.valid))
            out.append(_stat("# iso in R:", t.iso_in_r))
            out.append(_stat("# noniso in R:", t.noniso_in_r))
            out.append(_stat("# number of ways to slide:", t.ways_to_slide))
    return out


def report_dto(report: RuleReport) -> dict:
    """JSON-friendly mirror of one rule report (shared with the HTTP API)."""
    status = {
        RuleVerdict.DECREASING: "Decreasing",
        RuleVerdict.NONINCREASING: "NonIncreasing",
        RuleVerdict.UNKNOWN: "Unknown",
    }[report.verdict]
    return {
        "rule": report.rule_name,
        "status": status,
        "slideSuccessful": report.slide_successful,
        "slideFailure": report.slide_failure,
        "deltaWeight": report.delta_weight,
        "rWeight": report.r_weight,
        "notes": list(report.notes),
        "tiles": [
            {
                "tile": t.tile.name,
                "weight": t.weight,
                "class": t.counting.value,
                "homIntoR1": t.hom_into_r1,
                "valid": t.valid,
                "isoInR": t.iso_in_r,
                "nonisoInR": t.noniso_in_r,
                "waysToSlide": t.ways_to_slide,
                "deltaSize": t.delta_size,
            }
            for t in report.tiles
        ],
    }


@dataclass
class CommandResult:
    lines: list[str] = field(default_factory=list)
    exited: bool = False
    error: bool = False


class ProofShell:
    """Mode-tracking command interpreter shared by the prompt and batch."""

    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self.state: ProofState | None = None
        self.last_proof_terminated = False
        self.last_reports: list[RuleReport] = []

    @property
    def in_proof_mode(self) -> bool:
        return self.state is not None

    def banner(self) -> list[str]:
        lines = [
            "=== TileTerm REPL ===",
            ">> You are in system selection mode.",
            ">> Type 'help' to view the available commands.",
        ]
        for warning in self.workspace.warnings:
            lines.append(f">> Warning: {warning}")
        return lines

    def execute(self, line: str) -> CommandResult:
        words = line.split()
        if not words:
            return CommandResult()
        command, args = words[0], words[1:]
        if command == "exit":
            return CommandResult(exited=True)
        if command == "help":
            text = _PROOF_HELP if self.in_proof_mode else _SELECTION_HELP
            return CommandResult(text.split("\n"))
        if command == "inspect":
            return self._inspect(args)
        if self.in_proof_mode:
            if command == "use":
                return self._use(args)
            if command == "tiles":
                return self._tiles()
            if command == "back":
                self.state = None
                return CommandResult([">> Returning to system selection mode."])
        else:
            if command == "select":
                return self._select(args)
            if command == "systems":
                return self._systems()
        return CommandResult(
            [f">> Unknown command: {command!r}. Type 'help' to view the available commands."],
            error=True,
        )

    def _systems(self) -> CommandResult:
        lines = [">> The following systems were loaded:"]
        lines += [f"({i}) {s.name}" for i, s in enumerate(self.workspace.systems)]
        return CommandResult(lines)

    def _tiles(self) -> CommandResult:
        lines = [">> The following tiles were loaded:"]
        lines += [f"({i}) {t.name}" for i, t in enumerate(self.workspace.tiles)]
        return CommandResult(lines)

    def _index(self, args: list[str], what: str, count: int) -> int | CommandResult:
        if len(args) != 1 or not args[0].isdigit():
            return CommandResult(
                [f">> Usage: {what} [n] where n is an index."], error=True
            )
        idx = int(args[0])
        kind = "tile" if what == "inspect" and self.in_proof_mode else "system"
        if idx >= count:
            return CommandResult(
                [f">> There is no {kind} with index {idx}."], error=True
            )
        return idx

    def _select(self, args: list[str]) -> CommandResult:
        idx = self._index(args, "select", len(self.workspace.systems))
        if isinstance(idx, CommandResult):
            return idx
        system = self.workspace.systems[idx]
        self.state = ProofState.initial(system)
        self.last_proof_terminated = False
        n = len(system.rules)
        lines = [
            f">> Entering proof mode for system {system.name}.",
            f">> The system consists of {n} rule{'' if n == 1 else 's'}.",
            ">> The system is as follows:",
            "",
        ]
        lines += system_text(system).split("\n")
        return CommandResult(lines)

    def _inspect(self, args: list[str]) -> CommandResult:
        if self.in_proof_mode:
            idx = self._index(args, "inspect", len(self.workspace.tiles))
            if isinstance(idx, CommandResult):
                return idx
            tile = self.workspace.tiles[idx]
            return CommandResult([f"TILE: {tile.name}"] + tile_text(tile).split("\n"))
        idx = self._index(args, "inspect", len(self.workspace.systems))
        if isinstance(idx, CommandResult):
            return idx
        system = self.workspace.systems[idx]
        return CommandResult([f"SYSTEM: {system.name}"] + system_text(system).split("\n"))

    def parse_entries(self, args: list[str]) -> list[TileEntry] | CommandResult:
        if not args or len(args) % 3 != 0:
            return CommandResult([_USE_USAGE], error=True)
        entries = []
        for i in range(0, len(args), 3):
            s_idx, s_weight, s_class = args[i : i + 3]
            if not s_idx.isdigit():
                return CommandResult([_USE_USAGE], error=True)
            try:
                weight = int(s_weight)
            except ValueError:
                return CommandResult([_USE_USAGE], error=True)
            if weight < 1 or s_class not in ("r", "m", "h"):
                return CommandResult([_USE_USAGE], error=True)
            idx = int(s_idx)
            if idx >= len(self.workspace.tiles):
                return CommandResult(
                    [f">> There is no tile with index {idx}."], error=True
                )
            entries.append(
                TileEntry(
                    self.workspace.tiles[idx],
                    weight,
                    MorphismClass.from_letter(s_class),
                )
            )
        return entries

    def _use(self, args: list[str]) -> CommandResult:
        entries = self.parse_entries(args)
        if isinstance(entries, CommandResult):
            return entries
        assert self.state is not None
        try:
            reports, new_state = analyze_system(self.state, TileConfig.of(*entries))
        except (AnalysisError, BudgetExceeded, GraphError) as exc:
            return CommandResult([f">> Analysis failed: {exc}"], error=True)
        lines = render_report(reports, new_state)
        self.state = new_state
        self.last_proof_terminated = new_state.terminated
        self.last_reports = reports
        if new_state.terminated:
            lines += [
                "",
                ">> The pruned system is empty!",
                f">> You have proven system {new_state.system.name} terminating.",
                ">> Returning to system selection mode.",
            ]
            self.state = None
        return CommandResult(lines)


def run_repl(workspace_root: str | Path, *, stdin=None, stdout=None) -> int:
    """Interactive loop; echoes commands when input is not a terminal so
    piped sessions read like transcripts."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    try:
        workspace = load_workspace(workspace_root)
    except CorpusError as exc:
        stdout.write(f"error: {exc}\n")
        return 2
    shell = ProofShell(workspace)
    echo = not getattr(stdin, "isatty", lambda: False)()
    for line in shell.banner():
        stdout.write(line + "\n")
    while True:
        stdout.write(PROMPT)
        stdout.flush()
        raw = stdin.readline()
        if raw == "":
            stdout.write("\n")
            return 0
        command = raw.rstrip("\n")
        if echo:
            stdout.write(command + "\n")
        result = shell.execute(command)
        for line in result.lines:
            stdout.write(line + "\n")
        if result.exited:
            return 0


def run_batch(
    script_path: str | Path,
    workspace_root: str | Path,
    *,
    json_output: bool = False,
    stdout=None,
) -> int:
    """Replay a command script; exit 0 only if every expectation holds.

    Exit codes: 0 all expectations met, 1 an ``expect terminating`` failed,
    2 script or workspace error.
    """
    stdout = stdout if stdout is not None else sys.stdout
    stages: list[dict] = []
    expectations: list[dict] = []

    def finish(code: int, error: str | None = None) -> int:
        if json_output:
            doc = {
                "workspace": str(workspace_root),
                "stages": stages,
                "expectations": expectations,
                "ok": code == 0,
            }
            if error is not None:
                doc["error"] = error
            stdout.write(json.dumps(doc, indent=2) + "\n")
        elif error is not None:
            stdout.write(f"error: {error}\n")
        return code

    try:
        script = Path(script_path).read_text()
    except OSError as exc:
        return finish(2, f"cannot read script: {exc}")
    try:
        workspace = load_workspace(workspace_root)
    except CorpusError as exc:
        return finish(2, str(exc))
    shell = ProofShell(workspace)
    failed_expectation = False
    for lineno, raw in enumerate(script.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "expect terminating":
            ok = shell.last_proof_terminated
            expectations.append({"expect": "terminating", "ok": ok})
            if not json_output:
                verdict = "met" if ok else "FAILED"
                stdout.write(f">> expectation 'terminating': {verdict}\n")
            if not ok:
                failed_expectation = True
            continue
        was_proof = shell.in_proof_mode
        system_name = shell.state.system.name if shell.state else None
        before = list(shell.state.remaining) if shell.state else []
        result = shell.execute(line)
        if not json_output:
            stdout.write(PROMPT + line + "\n")
            for out_line in result.lines:
                stdout.write(out_line + "\n")
        if result.error:
            return finish(2, f"script line {lineno}: {line!r} failed")
        if was_proof and line.split()[0] == "use":
            after = list(shell.state.remaining) if shell.state else []
            stages.append(
                {
                    "system": system_name,
                    "command": line,
                    "reports": [report_dto(r) for r in shell.last_reports],
                    "pruned": [name for name in before if name not in after],
                    "remaining": after,
                    "terminated": shell.last_proof_terminated,
                }
            )
        if result.exited:
            break
    return finish(1 if failed_expectation else 0)
