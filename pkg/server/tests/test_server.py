import struct

import numpy as np
import pytest

from logit_server import protocol as p
from logit_server.quantize import TOTAL

from conftest import Client


def freqs_of(reply_payload: bytes) -> np.ndarray:
    (count,) = struct.unpack("<I", reply_payload[:4])
    freqs = np.frombuffer(reply_payload[4:], dtype="<u2")
    assert len(freqs) == count
    return freqs.astype(np.int64)


class TestLifecycle:
    def test_open_reply_shape(self, client):
        info = client.open("tiny:7")
        assert info["vocab"] == 256
        assert info["window"] >= 16
        assert len(info["fingerprint"]) == p.FINGERPRINT_LEN
        assert info["fingerprint"] != bytes(32)

    def test_open_unknown_model(self, client):
        op, payload = client.call(
            p.OP_OPEN, struct.pack("<H", 8) + b"hf:nopes"
        )
        assert op == (p.OP_OPEN | p.ERROR_FLAG)
        assert struct.unpack("<H", payload)[0] == p.STATUS_UNKNOWN_MODEL

    def test_close_then_predict_session_unknown(self, client):
        sid = client.open("tiny:7")["session"]
        op, _ = client.call(p.OP_CLOSE, struct.pack("<I", sid))
        assert op == p.OP_CLOSE
        op, payload = client.predict(sid)
        assert op == (p.OP_PREDICT | p.ERROR_FLAG)
        assert struct.unpack("<H", payload)[0] == p.STATUS_SESSION_UNKNOWN

    def test_close_unknown_session(self, client):
        op, payload = client.call(p.OP_CLOSE, struct.pack("<I", 99999))
        assert op == (p.OP_CLOSE | p.ERROR_FLAG)


class TestTokenize:
    def test_empty_text(self, client):
        sid = client.open("tiny:7")["session"]
        op, payload = client.call(p.OP_TOKENIZE, struct.pack("<II", sid, 0))
        assert op == p.OP_TOKENIZE
        assert struct.unpack("<I", payload[:4])[0] == 0

    def test_round_trip(self, client):
        sid = client.open("tiny:7")["session"]
        text = "hello world".encode()
        op, payload = client.call(
            p.OP_TOKENIZE, struct.pack("<II", sid, len(text)) + text
        )
        assert op == p.OP_TOKENIZE
        (count,) = struct.unpack("<I", payload[:4])
        ids = struct.unpack(f"<{count}I", payload[4:])
        op, payload = client.call(
            p.OP_DETOKENIZE,
            struct.pack("<II", sid, count) + struct.pack(f"<{count}I", *ids),
        )
        assert op == p.OP_DETOKENIZE
        assert payload[4:] == text

    def test_detokenize_bad_ids(self, client):
        sid = client.open("tiny:7")["session"]
        op, payload = client.call(
            p.OP_DETOKENIZE, struct.pack("<III", sid, 1, 400)
        )
        assert op == (p.OP_DETOKENIZE | p.ERROR_FLAG)
        assert struct.unpack("<H", payload)[0] == p.STATUS_MALFORMED


class TestPredict:
    def test_protocol_invariants(self, client):
        sid = client.open("tiny:7")["session"]
        op, payload = client.predict(sid)
        assert op == p.OP_PREDICT
        freqs = freqs_of(payload)
        assert len(freqs) == 257  # vocab + EOS
        assert int(freqs.sum()) == TOTAL
        assert int(freqs.min()) >= 1

    def test_purity_two_predicts_identical(self, client):
        sid = client.open("tiny:7")["session"]
        _, a = client.predict(sid)
        _, b = client.predict(sid)
        assert a == b

    def test_commit_changes_distribution(self, client):
        sid = client.open("tiny:7")["session"]
        _, before = client.predict(sid)
        _, after = client.predict(sid, committed=104)
        assert before != after

    def test_replay_stepwise_vs_bulk(self, client, server):
        tokens = [104, 101, 108, 108, 111, 32, 119]
        sid1 = client.open("tiny:7")["session"]
        for t in tokens:
            client.predict(sid1, committed=t)
        _, stepwise = client.predict(sid1)

        c2 = Client(server.endpoint)
        try:
            sid2 = c2.open("tiny:7")["session"]
            for t in tokens:
                c2.predict(sid2, committed=t)
            _, bulk = c2.predict(sid2)
        finally:
            c2.close()
        assert stepwise == bulk

    def test_reset_equals_fresh_session(self, client, server):
        sid = client.open("tiny:7")["session"]
        for t in (5, 6, 7):
            client.predict(sid, committed=t)
        op, _ = client.call(p.OP_RESET, struct.pack("<I", sid))
        assert op == p.OP_RESET
        _, after_reset = client.predict(sid)

        c2 = Client(server.endpoint)
        try:
            sid2 = c2.open("tiny:7")["session"]
            _, fresh = c2.predict(sid2)
        finally:
            c2.close()
        assert after_reset == fresh

    def test_bad_token_malformed(self, client):
        sid = client.open("tiny:7")["session"]
        op, payload = client.predict(sid, committed=4096)
        assert op == (p.OP_PREDICT | p.ERROR_FLAG)
        assert struct.unpack("<H", payload)[0] == p.STATUS_MALFORMED

    def test_context_overflow(self, server):
        from logit_server import TinyByteModel
        from logit_server.server import LogitServer
        import threading

        small = LogitServer(("127.0.0.1", 0), TinyByteModel(seed=1, context_window=8))
        threading.Thread(target=small.serve_forever, daemon=True).start()
        try:
            c = Client(small.endpoint)
            sid = c.open("tiny:1")["session"]
            status = None
            for i in range(12):
                op, payload = c.predict(sid, committed=i)
                if op & p.ERROR_FLAG:
                    status = struct.unpack("<H", payload)[0]
                    break
            c.close()
            assert status == p.STATUS_CONTEXT_OVERFLOW
        finally:
            small.shutdown()

    def test_unknown_opcode(self, client):
        op, payload = client.call(0x55, b"")
        assert op == (0x55 | p.ERROR_FLAG)


class TestPredictFuzz:
    def test_1000_calls_all_sum_and_floor(self, client):
        rng = np.random.default_rng(3)
        sid = client.open("tiny:7")["session"]
        for i in range(1000):
            if i % 50 == 0:
                client.call(p.OP_RESET, struct.pack("<I", sid))
            committed = int(rng.integers(0, 256)) if i % 3 else None
            op, payload = client.predict(sid, committed=committed)
            assert op == p.OP_PREDICT
            freqs = freqs_of(payload)
            assert int(freqs.sum()) == TOTAL
            assert int(freqs.min()) >= 1
