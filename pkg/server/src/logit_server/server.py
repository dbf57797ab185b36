"""Threaded socket server exposing one model backend over the wire protocol.

Sessions are server-global (a decoder may reconnect and keep decoding) and
each session's requests are serialized by its own lock; model evaluation is
funneled through one global lock so the backend never sees concurrent
calls.  Replies are a pure function of (model, session context): a
one-entry cache per session makes the repeated predict-without-commit case
cheap and is semantically invisible.
"""

from __future__ import annotations

import logging
import socketserver
import struct
import threading

import numpy as np

from . import protocol as p
from .models import NotInvertible
from .quantize import TOTAL, quantize_probs

log = logging.getLogger("logit_server")


class Session:
    def __init__(self, session_id: int):
        self.id = session_id
        self.context: list[int] = []
        self.lock = threading.Lock()
        self.cached_key: tuple[int, ...] | None = None
        self.cached_reply: bytes | None = None


class LogitServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, backend):
        super().__init__(address, _Handler)
        self.backend = backend
        self.sessions: dict[int, Session] = {}
        self.sessions_lock = threading.Lock()
        self.model_lock = threading.Lock()
        self._next_id = 1

    @property
    def endpoint(self) -> str:
        host, port = self.server_address[:2]
        return f"{host}:{port}"

    def open_session(self) -> Session:
        with self.sessions_lock:
            session = Session(self._next_id)
            self._next_id += 1
            self.sessions[session.id] = session
            return session

    def close_session(self, session_id: int) -> bool:
        with self.sessions_lock:
            return self.sessions.pop(session_id, None) is not None

    def get_session(self, session_id: int) -> Session | None:
        with self.sessions_lock:
            return self.sessions.get(session_id)

    def predict_reply(self, session: Session) -> bytes:
        """Quantized next-token table for the session's current context."""
        key = tuple(session.context)
        if session.cached_key == key and session.cached_reply is not None:
            return session.cached_reply
        with self.model_lock:
            probs = self.backend.next_probs(key)
        full = np.append(probs, 0.0)  # EOS slot carries no model mass
        freqs = quantize_probs(full)
        payload = struct.pack("<I", len(freqs)) + freqs.astype("<u2").tobytes()
        reply = p.pack_frame(p.OP_PREDICT, payload)
        session.cached_key = key
        session.cached_reply = reply
        return reply


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        sock = self.request
        server: LogitServer = self.server
        while True:
            try:
                opcode, payload = p.read_frame(sock)
            except (ConnectionError, OSError):
                return
            except p.ProtocolError as exc:
                log.warning("dropping connection: %s", exc)
                return
            try:
                reply = self.dispatch(server, opcode, payload)
            except p.ProtocolError:
                reply = p.pack_error(opcode, p.STATUS_MALFORMED)
            except Exception:
                log.exception("handler failure for opcode %d", opcode)
                reply = p.pack_error(opcode, p.STATUS_UNSUPPORTED)
            try:
                sock.sendall(reply)
            except OSError:
                return

    def dispatch(self, server: LogitServer, opcode: int, payload: bytes) -> bytes:
        cur = p.Cursor(payload)
        backend = server.backend

        if opcode == p.OP_OPEN:
            (n,) = cur.unpack("<H")
            model_id = cur.take(n).decode("utf-8")
            cur.done()
            if model_id != backend.model_id:
                return p.pack_error(opcode, p.STATUS_UNKNOWN_MODEL)
            session = server.open_session()
            reply = struct.pack(
                "<IIIB", session.id, backend.vocab_size,
                backend.context_window, backend.capabilities,
            ) + backend.tokenizer_fingerprint
            return p.pack_frame(opcode, reply)

        if opcode == p.OP_CLOSE:
            (sid,) = cur.unpack("<I")
            cur.done()
            if not server.close_session(sid):
                return p.pack_error(opcode, p.STATUS_SESSION_UNKNOWN)
            return p.pack_frame(opcode, b"")

        # everything below addresses a live session
        (sid,) = cur.unpack("<I")
        session = server.get_session(sid)
        if session is None:
            return p.pack_error(opcode, p.STATUS_SESSION_UNKNOWN)

        with session.lock:
            if opcode == p.OP_RESET:
                cur.done()
                session.context.clear()
                session.cached_key = None
                session.cached_reply = None
                return p.pack_frame(opcode, b"")

            if opcode == p.OP_TOKENIZE:
                (n,) = cur.unpack("<I")
                text = cur.take(n)
                cur.done()
                try:
                    ids = backend.tokenize(text)
                except NotInvertible:
                    return p.pack_error(opcode, p.STATUS_NOT_INVERTIBLE)
                reply = struct.pack("<I", len(ids))
                if ids:
                    reply += struct.pack(f"<{len(ids)}I", *ids)
                return p.pack_frame(opcode, reply)

            if opcode == p.OP_DETOKENIZE:
                (n,) = cur.unpack("<I")
                ids = list(cur.unpack(f"<{n}I")) if n else []
                cur.done()
                if any(i >= backend.vocab_size for i in ids):
                    return p.pack_error(opcode, p.STATUS_MALFORMED)
                text = backend.detokenize(ids)
                return p.pack_frame(opcode, struct.pack("<I", len(text)) + text)

            if opcode == p.OP_PREDICT:
                (has_committed,) = cur.unpack("<B")
                if has_committed:
                    (token,) = cur.unpack("<I")
                    cur.done()
                    if token >= backend.vocab_size:
                        return p.pack_error(opcode, p.STATUS_MALFORMED)
                    if len(session.context) + 1 > backend.context_window:
                        return p.pack_error(opcode, p.STATUS_CONTEXT_OVERFLOW)
                    session.context.append(token)
                else:
                    cur.done()
                if len(session.context) + 1 > backend.context_window:
                    return p.pack_error(opcode, p.STATUS_CONTEXT_OVERFLOW)
                return server.predict_reply(session)

        return p.pack_error(opcode, p.STATUS_UNSUPPORTED)


def serve(backend, host: str = "127.0.0.1", port: int = 0) -> LogitServer:
    """Start a server in a background thread; caller owns shutdown()."""
    server = LogitServer((host, port), backend)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
