"""Run the service: `python -m fill_service` or the `fill-service` script."""

import argparse

import uvicorn

from .app import Settings, create_app


def main(argv=None) -> int:
    settings = Settings()
    parser = argparse.ArgumentParser(prog="fill-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=settings.port)
    parser.add_argument("--checkpoint", default=settings.checkpoint)
    parser.add_argument("--sample", action="store_true", default=settings.sample)
    parser.add_argument("--temperature", type=float, default=settings.temperature)
    args = parser.parse_args(argv)

    settings.checkpoint = args.checkpoint
    settings.sample = args.sample
    settings.temperature = args.temperature
    uvicorn.run(create_app(settings), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
