"""Server-side framing for the logit wire protocol.

Frame: u32 little-endian length (bytes that follow), u8 opcode, payload.
Success replies echo the request opcode; error replies set bit 0x80 and
carry a u16 status code.  The layout is pinned by the shared
``conformance/wire_vectors.json`` file, which the client toolkit checks
against its own implementation.
"""

from __future__ import annotations

import socket
import struct

OP_OPEN = 1
OP_CLOSE = 2
OP_RESET = 3
OP_TOKENIZE = 4
OP_DETOKENIZE = 5
OP_PREDICT = 6

ERROR_FLAG = 0x80

STATUS_MALFORMED = 1
STATUS_SESSION_UNKNOWN = 2
STATUS_UNKNOWN_MODEL = 3
STATUS_CONTEXT_OVERFLOW = 4
STATUS_NOT_INVERTIBLE = 5
STATUS_MODEL_NOT_LOADED = 6
STATUS_UNSUPPORTED = 7

CAP_CROSS_HOST = 0x01

FINGERPRINT_LEN = 32
MAX_FRAME = 64 << 20


class ProtocolError(Exception):
    """Malformed bytes from a client; the connection is dropped."""


def pack_frame(opcode: int, payload: bytes = b"") -> bytes:
    return struct.pack("<IB", 1 + len(payload), opcode) + payload


def pack_error(opcode: int, status: int) -> bytes:
    return pack_frame(opcode | ERROR_FLAG, struct.pack("<H", status))


def recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        chunk = sock.recv(remaining)
        if not chunk:
            raise ConnectionError("peer closed mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket) -> tuple[int, bytes]:
    (length,) = struct.unpack("<I", recv_exact(sock, 4))
    if length < 1 or length > MAX_FRAME:
        raise ProtocolError(f"implausible frame length {length}")
    body = recv_exact(sock, length)
    return body[0], body[1:]


class Cursor:
    """Bounds-checked reader for request payloads."""

    def __init__(self, payload: bytes):
        self.payload = payload
        self.pos = 0

    def unpack(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.payload):
            raise ProtocolError("request payload truncated")
        out = struct.unpack_from(fmt, self.payload, self.pos)
        self.pos += size
        return out

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.payload):
            raise ProtocolError("request payload truncated")
        out = self.payload[self.pos : self.pos + n]
        self.pos += n
        return out

    def done(self) -> None:
        if self.pos != len(self.payload):
            raise ProtocolError("trailing bytes in request payload")
