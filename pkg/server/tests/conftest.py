import socket
import struct

import pytest

from logit_server import TinyByteModel
from logit_server.server import LogitServer
from logit_server import protocol as p


@pytest.fixture(scope="session")
def server():
    srv = LogitServer(("127.0.0.1", 0), TinyByteModel(seed=7))
    import threading

    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()


class Client:
    """Minimal raw-socket client used only by this test suite."""

    def __init__(self, endpoint: str):
        host, _, port = endpoint.rpartition(":")
        self.sock = socket.create_connection((host, int(port)), timeout=10)

    def call(self, opcode: int, payload: bytes = b""):
        self.sock.sendall(p.pack_frame(opcode, payload))
        (length,) = struct.unpack("<I", self._recv(4))
        body = self._recv(length)
        return body[0], body[1:]

    def _recv(self, n: int) -> bytes:
        out = b""
        while len(out) < n:
            chunk = self.sock.recv(n - len(out))
            if not chunk:
                raise ConnectionError("closed")
            out += chunk
        return out

    def open(self, model_id: str) -> dict:
        op, payload = self.call(p.OP_OPEN, struct.pack("<H", len(model_id))
                                + model_id.encode())
        assert op == p.OP_OPEN, payload
        sid, vocab, window, caps = struct.unpack("<IIIB", payload[:13])
        return {"session": sid, "vocab": vocab, "window": window,
                "caps": caps, "fingerprint": payload[13:]}

    def predict(self, session: int, committed: int | None = None):
        if committed is None:
            payload = struct.pack("<IB", session, 0)
        else:
            payload = struct.pack("<IBI", session, 1, committed)
        return self.call(p.OP_PREDICT, payload)

    def close(self):
        self.sock.close()


@pytest.fixture
def client(server):
    c = Client(server.endpoint)
    yield c
    c.close()
