"""Run the service: ``annotator-service --stub --fixture responses.json``."""

import argparse

import uvicorn

from .app import create_app
from .backends import (
    DEFAULT_DEPRESSION_MODEL,
    DEFAULT_EMOTION_MODEL,
    StubBackend,
    TransformerBackend,
)


def main() -> None:
    parser = argparse.ArgumentParser(prog="annotator-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8750)
    parser.add_argument("--stub", action="store_true", help="serve scripted fixture responses")
    parser.add_argument("--fixture", default=None, help="stub fixture JSON path")
    parser.add_argument("--emotion-model", default=DEFAULT_EMOTION_MODEL)
    parser.add_argument("--depression-model", default=DEFAULT_DEPRESSION_MODEL)
    args = parser.parse_args()

    if args.stub:
        backend = StubBackend.from_file(args.fixture) if args.fixture else StubBackend()
    else:
        backend = TransformerBackend(args.emotion_model, args.depression_model)
    uvicorn.run(create_app(backend), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()
