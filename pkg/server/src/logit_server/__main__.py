"""CLI entry point: logit-server --model tiny:7 --host 127.0.0.1 --port 7070."""

from __future__ import annotations

import argparse
import logging
import sys

from .models import ModelLoadError, load_backend
from .server import LogitServer


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="logit-server",
        description="Serve deterministic quantized next-token distributions "
                    "from a causal language model over a local socket.",
    )
    parser.add_argument("--model", default="tiny:7",
                        help="backend: tiny[:SEED] or hf:NAME (default tiny:7)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=7070,
                        help="TCP port (0 picks a free one)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        backend = load_backend(args.model)
    except (ModelLoadError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    server = LogitServer((args.host, args.port), backend)
    print(f"serving {backend.model_id} (vocab {backend.vocab_size}, "
          f"window {backend.context_window}) on {server.endpoint}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


if __name__ == "__main__":
    sys.exit(main())
