"""Command-line front end.

The CLI is a thin client of the HTTP service: every subcommand builds a
request and posts it, by default to an in-process instance of the app over
ASGI (no socket involved), or to a running server given with --server.
Answers are printed, never encoded in the exit status; both YES and NO
answers exit 0.

Exit status: 0 computed, 2 usage error, 3 input/validation error,
4 cap exceeded.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .errors import InputValidationError, SolvGroupError
from .magnus import GroupSpec
from .oracles import S3_TABLE, MulTable

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_CAP = 4


def _post(server: str | None, path: str, payload: dict) -> tuple[int, dict]:
    async def go():
        if server is None:
            from .service.app import create_app

            transport = httpx.ASGITransport(app=create_app())
            base_url = "http://solvgroup.internal"
        else:
            transport = None
            base_url = server
        async with httpx.AsyncClient(
            transport=transport, base_url=base_url, timeout=600.0
        ) as client:
            response = await client.post(path, json=payload)
            try:
                body = response.json()
            except ValueError:
                body = {"detail": {"code": "invalid-input", "message": response.text}}
            return response.status_code, body

    return asyncio.run(go())


def _load_table(path: str) -> MulTable:
    if path == "s3":
        return S3_TABLE
    try:
        with open(path) as handle:
            return MulTable.from_dict(json.load(handle))
    except OSError as exc:
        raise InputValidationError(f"cannot read table file: {exc}")
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"table file is not valid JSON: {exc}")


def _group_payload(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    table = None
    if args.table is not None:
        if args.table == "s3":
            table = {"builtin": "s3"}
        else:
            table = _load_table(args.table).to_dict()
    payload = {
        "kind": args.group,
        "rank": args.rank,
        "degree": args.degree,
        "table": table,
    }
    # Validate the flag combination locally; a bad combination is user error.
    try:
        spec_table = None
        if table is not None:
            spec_table = S3_TABLE if table.get("builtin") == "s3" else MulTable.from_dict(table)
        GroupSpec(kind=args.group, rank=args.rank, degree=args.degree, table=spec_table)
    except InputValidationError as exc:
        parser.error(str(exc))
    return payload


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise InputValidationError(f"cannot read file: {exc}")
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"file is not valid JSON: {exc}")


def _finish(args, status: int, body: dict, render) -> int:
    if status == 200:
        if args.json:
            print(json.dumps(body, sort_keys=True))
        else:
            render(body)
        return EXIT_OK
    detail = body.get("detail")
    if isinstance(detail, dict):
        message = detail.get("message", str(detail))
        code = detail.get("code", "invalid-input")
    else:
        message, code = str(detail), "invalid-input"
    print(f"error: {message}", file=sys.stderr)
    return EXIT_CAP if code == "cap-exceeded" else EXIT_INPUT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solvgroup",
        description="Decision procedures for derived quotients and free solvable groups.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--server", default=None, help="URL of a running service")

    group_flags = argparse.ArgumentParser(add_help=False)
    group_flags.add_argument(
        "--group",
        required=True,
        choices=["free-solvable", "free-abelian", "finite", "free", "derived-of-finite"],
    )
    group_flags.add_argument("--rank", type=int, default=None)
    group_flags.add_argument("--degree", type=int, default=None)
    group_flags.add_argument(
        "--table", default=None, help="JSON table file, or 's3' for the builtin"
    )

    commands = parser.add_subparsers(dest="command", required=True)

    wp = commands.add_parser("wp", parents=[common, group_flags])
    wp.add_argument("word")

    pp = commands.add_parser("pp", parents=[common, group_flags])
    pp.add_argument("u")
    pp.add_argument("v")

    cp = commands.add_parser("cp", parents=[common, group_flags])
    cp.add_argument("u")
    cp.add_argument("v")

    magnus = commands.add_parser("magnus", parents=[common, group_flags])
    magnus.add_argument("word")

    support = commands.add_parser("support", parents=[common, group_flags])
    support.add_argument("--dot", action="store_true", help="print Graphviz DOT")
    support.add_argument("word")

    ssp = commands.add_parser("ssp")
    ssp_commands = ssp.add_subparsers(dest="ssp_command", required=True)
    ssp_solve = ssp_commands.add_parser("solve", parents=[common])
    ssp_solve.add_argument("file")
    ssp_solve.add_argument("--cap", type=int, default=20)
    ssp_zoe = ssp_commands.add_parser("from-zoe", parents=[common])
    ssp_zoe.add_argument("file")
    ssp_zoe.add_argument("--rank", type=int, default=2)
    ssp_zoe.add_argument("--cap", type=int, default=20)

    agp = commands.add_parser("agp")
    agp_commands = agp.add_subparsers(dest="agp_command", required=True)
    agp_solve = agp_commands.add_parser("solve", parents=[common])
    agp_solve.add_argument("file")
    agp_solve.add_argument("--cap", type=int, default=100_000)

    return parser


def _render_solution(body: dict) -> None:
    solution = body.get("solution")
    if solution is None:
        print("none")
    else:
        print("epsilon=" + ",".join(str(x) for x in solution))


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        if args.command == "wp":
            payload = {"group": _group_payload(args, parser), "word": args.word}
            status, body = _post(args.server, "/wp", payload)
            return _finish(
                args, status, body,
                lambda b: print("trivial" if b["trivial"] else "nontrivial"),
            )

        if args.command == "pp":
            payload = {"group": _group_payload(args, parser), "u": args.u, "v": args.v}
            status, body = _post(args.server, "/pp", payload)
            return _finish(
                args, status, body,
                lambda b: print("none" if b["k"] is None else f"k={b['k']}"),
            )

        if args.command == "cp":
            payload = {"group": _group_payload(args, parser), "u": args.u, "v": args.v}
            status, body = _post(args.server, "/cp", payload)

            def render_cp(b):
                if b["conjugate"]:
                    print(f"conjugate c={b['conjugator']}")
                else:
                    print("not-conjugate")

            return _finish(args, status, body, render_cp)

        if args.command == "magnus":
            payload = {"group": _group_payload(args, parser), "word": args.word}
            status, body = _post(args.server, "/magnus", payload)

            def render_magnus(b):
                print(f"image: {b['image']!r}")
                if not b["flow"]:
                    print("flow: empty")
                else:
                    print("flow:")
                    for record in b["flow"]:
                        print(
                            f"  tail={record['tail']!r} "
                            f"generator=x{record['generator']} value={record['value']}"
                        )

            return _finish(args, status, body, render_magnus)

        if args.command == "support":
            payload = {
                "group": _group_payload(args, parser),
                "word": args.word,
                "dot": args.dot,
            }
            status, body = _post(args.server, "/support", payload)

            def render_support(b):
                if args.dot:
                    print(b["dot"])
                    return
                print(f"vertices: {len(b['vertices'])}")
                print(f"edges: {len(b['edges'])}")
                for edge in b["edges"]:
                    print(f"  {edge['tail']!r} -x{edge['generator']}-> {edge['head']!r}")

            return _finish(args, status, body, render_support)

        if args.command == "ssp" and args.ssp_command == "solve":
            instance = _load_json_file(args.file)
            status, body = _post(
                args.server, "/ssp/solve", {"instance": instance, "cap": args.cap}
            )
            return _finish(args, status, body, _render_solution)

        if args.command == "ssp" and args.ssp_command == "from-zoe":
            data = _load_json_file(args.file)
            payload = {
                "matrix": data.get("matrix"),
                "rank": args.rank,
                "cap": args.cap,
            }
            status, body = _post(args.server, "/ssp/from-zoe", payload)
            return _finish(args, status, body, _render_solution)

        if args.command == "agp" and args.agp_command == "solve":
            instance = _load_json_file(args.file)
            status, body = _post(
                args.server, "/agp/solve", {"instance": instance, "cap": args.cap}
            )

            def render_agp(b):
                if b["path"] is None:
                    print("none")
                else:
                    path = ",".join(str(x) for x in b["path"])
                    print(f"path={path} word={b['word']!r}")

            return _finish(args, status, body, render_agp)

    except SystemExit as exc:  # parser.error on a bad flag combination
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except SolvGroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except httpx.HTTPError as exc:
        print(f"error: cannot reach the service: {exc}", file=sys.stderr)
        return EXIT_INPUT
    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
