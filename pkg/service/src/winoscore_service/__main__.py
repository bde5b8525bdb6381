"""Run the scoring service under uvicorn."""
from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .settings import ServiceSettings


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="winoscore-service")
    parser.add_argument("--model", help='"tiny" (default) or a model name/path')
    parser.add_argument("--host")
    parser.add_argument("--port", type=int)
    parser.add_argument("--max-batch", type=int, dest="max_batch")
    parser.add_argument("--device")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--debug", action="store_const", const=True, default=None)
    args = parser.parse_args(argv)

    settings = ServiceSettings.from_env(
        model=args.model,
        host=args.host,
        port=args.port,
        max_batch=args.max_batch,
        device=args.device,
        seed=args.seed,
        debug=args.debug,
    )
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)


if __name__ == "__main__":
    main()
