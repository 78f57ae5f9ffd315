"""Command line entry point: repl, batch and serve subcommands."""

from __future__ import annotations

import argparse
import sys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tileterm",
        description="Prove graph rewrite systems terminating by weighted tile counting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    repl = sub.add_parser("repl", help="interactive proof prompt")
    repl.add_argument("--workspace", default="./corpus", help="workspace root directory")

    batch = sub.add_parser("batch", help="replay a command script")
    batch.add_argument("script", help="script file with one command per line")
    batch.add_argument("--workspace", default="./corpus", help="workspace root directory")
    batch.add_argument("--json", action="store_true", help="emit a JSON report")

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--workspace", default="./corpus", help="workspace root directory")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument(
        "--persist", default=None, metavar="DIR", help="directory for session snapshots"
    )
    serve.add_argument(
        "--budget-seconds",
        type=float,
        default=30.0,
        help="per-request analysis time budget",
    )
    serve.add_argument(
        "--static", default=None, metavar="DIR", help="built explorer to serve at /"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "repl":
        from .shell import run_repl

        return run_repl(args.workspace)
    if args.command == "batch":
        from .shell import run_batch

        return run_batch(args.script, args.workspace, json_output=args.json)
    if args.command == "serve":
        import uvicorn

        from .api import create_app

        app = create_app(
            args.workspace,
            persist_dir=args.persist,
            budget_seconds=args.budget_seconds,
            static_dir=args.static,
        )
        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
