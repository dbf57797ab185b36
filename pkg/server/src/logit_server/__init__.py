"""Deterministic next-token distribution server.

Wraps a causal language model behind a local length-prefixed binary socket
protocol: clients open a session, stream observed tokens, and receive the
model's next-token distribution already quantized to 16-bit integer
frequencies (sum 65536, floor 1).  All floating point stays on this side of
the wire, so any client that consumes the integer tables verbatim decodes
in exact lockstep with the encoder that produced them.
"""

from .models import HFCausalModel, TinyByteModel, load_backend
from .server import LogitServer, serve

__all__ = ["HFCausalModel", "TinyByteModel", "load_backend", "LogitServer", "serve"]
