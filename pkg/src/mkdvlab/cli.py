"""Thin command-line client for the experiment service.

Each subcommand parses one TOML config file and posts it to the service. With
``--url`` requests go to a running server; otherwise the service app is
mounted in-process so single-machine batch use needs no separate daemon.

Exit codes: 0 success, 2 config error, 3 numerical blowup, 4 inconclusive.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from . import __version__
from .config import EXPERIMENT_CONFIGS, load_config
from .errors import ConfigurationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_INCONCLUSIVE = 4

EXPERIMENTS = ("simulate", "diagnose", "slope", "trilinear", "strichartz",
               "counterexample", "attractor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mkdvlab",
        description="Damped/forced mKdV simulation and estimate laboratory",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="start the experiment service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8717)
    serve.add_argument("--output-root", default=None)

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("config", help="TOML config file")
        p.add_argument("--url", default=None,
                       help="base URL of a running service (default: in-process)")
        p.add_argument("--output-root", default=None,
                       help="output directory root for in-process runs")
    return parser


async def _post(url: str | None, output_root: str | None, path: str, payload: dict):
    if url:
        async with httpx.AsyncClient(base_url=url, timeout=None) as client:
            return await client.post(path, json=payload)
    from .service import create_app

    transport = httpx.ASGITransport(app=create_app(output_root))
    async with httpx.AsyncClient(transport=transport, timeout=None,
                                 base_url="http://mkdvlab.local") as client:
        return await client.post(path, json=payload)


def _run_experiment(args) -> int:
    try:
        cfg = load_config(args.config, EXPERIMENT_CONFIGS[args.command])
    except FileNotFoundError:
        print(f"config file not found: {args.config}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    payload = json.loads(cfg.model_dump_json())
    response = asyncio.run(
        _post(args.url, args.output_root, f"/experiments/{args.command}", payload)
    )
    try:
        body = response.json()
    except ValueError:
        body = {"detail": response.text}
    if response.status_code == 422:
        print(f"config error: {json.dumps(body, indent=2)}", file=sys.stderr)
        return EXIT_CONFIG
    if response.status_code == 409:
        print(f"numerical blowup: {json.dumps(body, indent=2)}", file=sys.stderr)
        return EXIT_BLOWUP
    if response.status_code != 200:
        print(f"service error {response.status_code}: {response.text}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps(body, indent=2))
    if body.get("status") == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(args.output_root), host=args.host, port=args.port)
        return EXIT_OK
    return _run_experiment(args)


if __name__ == "__main__":
    sys.exit(main())
