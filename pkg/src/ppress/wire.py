"""Client-side framing for the logit-server wire protocol.

This module is the normative description of the protocol on the client
side; the server ships its own independent implementation and both are
pinned by ``conformance/wire_vectors.json``.

Frame layout (all integers little-endian):

    u32 length   -- number of bytes that follow (opcode + payload)
    u8  opcode
    ... payload

Opcodes: OPEN=1, CLOSE=2, RESET=3, TOKENIZE=4, DETOKENIZE=5, PREDICT=6.
A success reply echoes the request opcode.  An error reply carries
``opcode | 0x80`` and a u16 status code as its payload.

Payloads:

    OPEN  req: u16 n, n bytes of UTF-8 model id
    OPEN  rep: u32 session_id, u32 vocab_size, u32 context_window,
               u8 capability flags (bit0: cross-host deterministic),
               32-byte tokenizer fingerprint
    CLOSE/RESET req: u32 session_id;  rep: empty
    TOKENIZE  req: u32 session_id, u32 n, n bytes of UTF-8 text
    TOKENIZE  rep: u32 count, count x u32 token ids
    DETOKENIZE req: u32 session_id, u32 count, count x u32 token ids
    DETOKENIZE rep: u32 n, n bytes of UTF-8 text
    PREDICT req: u32 session_id, u8 has_committed, [u32 committed token]
    PREDICT rep: u32 vocab_size_plus_one, that many u16 frequencies
                 (must sum to 65536 with minimum 1)
"""

from __future__ import annotations

import socket
import struct

from .errors import RemoteProtocolViolation, RemoteUnavailable

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

STATUS_NAMES = {
    STATUS_MALFORMED: "malformed request",
    STATUS_SESSION_UNKNOWN: "session unknown",
    STATUS_UNKNOWN_MODEL: "unknown model",
    STATUS_CONTEXT_OVERFLOW: "context overflow",
    STATUS_NOT_INVERTIBLE: "tokenization not invertible",
    STATUS_MODEL_NOT_LOADED: "model not loaded",
    STATUS_UNSUPPORTED: "unsupported operation",
}

#: capability bit: identical replies guaranteed across hosts
CAP_CROSS_HOST = 0x01

FINGERPRINT_LEN = 32
MAX_FRAME = 64 << 20  # sanity bound on incoming frames


class RemoteStatusError(RemoteProtocolViolation):
    """Server answered with an error status."""

    def __init__(self, opcode: int, status: int):
        self.opcode = opcode
        self.status = status
        name = STATUS_NAMES.get(status, f"status {status}")
        super().__init__(f"server refused opcode {opcode}: {name}")


def pack_frame(opcode: int, payload: bytes = b"") -> bytes:
    return struct.pack("<IB", 1 + len(payload), opcode) + payload


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        try:
            chunk = sock.recv(remaining)
        except (socket.timeout, OSError) as exc:
            raise RemoteUnavailable(f"socket error while reading: {exc}") from exc
        if not chunk:
            raise RemoteUnavailable("server closed the connection mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket) -> tuple[int, bytes]:
    header = _recv_exact(sock, 4)
    (length,) = struct.unpack("<I", header)
    if length < 1 or length > MAX_FRAME:
        raise RemoteProtocolViolation(f"implausible frame length {length}")
    body = _recv_exact(sock, length)
    return body[0], body[1:]


def call(sock: socket.socket, opcode: int, payload: bytes = b"") -> bytes:
    """One request/reply exchange; raises on error replies."""
    try:
        sock.sendall(pack_frame(opcode, payload))
    except (socket.timeout, OSError) as exc:
        raise RemoteUnavailable(f"socket error while sending: {exc}") from exc
    reply_op, reply_payload = read_frame(sock)
    if reply_op == (opcode | ERROR_FLAG):
        if len(reply_payload) != 2:
            raise RemoteProtocolViolation("error reply payload must be a u16 status")
        (status,) = struct.unpack("<H", reply_payload)
        raise RemoteStatusError(opcode, status)
    if reply_op != opcode:
        raise RemoteProtocolViolation(f"reply opcode {reply_op} for request {opcode}")
    return reply_payload


def pack_str(text: str) -> bytes:
    raw = text.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError("string too long for u16 length prefix")
    return struct.pack("<H", len(raw)) + raw
