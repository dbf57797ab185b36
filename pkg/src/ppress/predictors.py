"""Concrete predictor models: uniform, adaptive order-k byte context, remote.

The order-k model is the desk-scale stand-in for a served language model:
it conditions on up to k previous symbols via occurrence counts and blends
each order with the next shorter one using count-proportional interpolation
(weight = count_total / (count_total + alphabet.size)), bottoming out at
uniform.  Adaptivity is fine because the decoder replays the identical
(predict, update) sequence and stays in lockstep.
"""

from __future__ import annotations

import socket
import struct
from typing import Optional, Sequence

import numpy as np

from . import wire
from ._kernels import blend_quantize
from .errors import RemoteProtocolViolation, RemoteUnavailable
from .model import (
    Alphabet,
    PredictorModel,
    QUANT_TOTAL,
    QuantizedDistribution,
    quantize,
)

MAX_ORDER = 8

_EMPTY_SYMS = np.empty(0, dtype=np.int64)
_EMPTY_CNTS = np.empty(0, dtype=np.float64)
_EMPTY_TOTALS = np.empty(0, dtype=np.float64)
_ZERO_OFFSETS = np.zeros(1, dtype=np.int64)


def _fast_dist(freqs: np.ndarray, cum: np.ndarray) -> QuantizedDistribution:
    dist = QuantizedDistribution.__new__(QuantizedDistribution)
    dist.freqs = freqs
    dist.cum = cum
    dist.total = QUANT_TOTAL
    return dist


class UniformPredictor(PredictorModel):
    """Flat distribution over all symbols; coding under it costs log2(size+1)."""

    id = "uniform"
    context_window = 0

    def __init__(self, alphabet: Alphabet):
        self._alphabet = alphabet
        m = alphabet.dist_len
        self._dist = quantize(np.full(m, 1.0 / m), alphabet=alphabet)

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def predict(self, context: Optional[Sequence[int]] = None) -> QuantizedDistribution:
        return self._dist

    def update(self, observed: int) -> None:
        pass

    def reset_context(self) -> None:
        pass


class OrderKPredictor(PredictorModel):
    """Adaptive order-k context model over the alphabet plus EOS.

    Counts only ever grow through update(); predict() is pure.  EOS is never
    counted (it carries no context), so its probability comes from the
    uniform base of the blend plus the quantization floor.  reset_context()
    clears the sliding window but keeps learned counts, mirroring how a
    served model keeps its weights across chunk boundaries.
    """

    id = "orderk"
    context_window = 0  # learned counts are unbounded; the window is k

    def __init__(self, alphabet: Alphabet, k: int):
        if not 0 <= k <= MAX_ORDER:
            raise ValueError(f"order k must be in 0..{MAX_ORDER}, got {k}")
        self._alphabet = alphabet
        self.k = k
        m = alphabet.dist_len
        self._m = m
        self._size = alphabet.size
        self._counts0 = np.zeros(m, dtype=np.int64)
        self._total0 = 0
        # order 1 dense for the byte alphabet, sparse otherwise; orders above
        # the dense cutoff live in {context-key: {symbol: count}} maps
        self._dense1 = alphabet.kind == Alphabet.BYTES256_KIND and k >= 1
        if self._dense1:
            self._counts1 = np.zeros((alphabet.size, m), dtype=np.int64)
            self._totals1 = np.zeros(alphabet.size, dtype=np.int64)
            first_sparse = 2
        else:
            self._counts1 = np.zeros((1, m), dtype=np.int64)
            self._totals1 = np.zeros(1, dtype=np.int64)
            first_sparse = 1
        self._first_sparse = first_sparse
        self._sparse: dict[tuple, dict[int, int]] = {}
        self._sparse_totals: dict[tuple, int] = {}
        self._window: list[int] = []

    @property
    def alphabet(self) -> Alphabet:
        return self._alphabet

    def params(self) -> dict[str, str]:
        return {"k": str(self.k)}

    def predict(self, context: Optional[Sequence[int]] = None) -> QuantizedDistribution:
        window = self._window if context is None else list(context)[-self.k:]
        depth = min(self.k, len(window))
        if self._dense1 and depth >= 1:
            c1 = window[-1]
            row1 = self._counts1[c1]
            total1 = int(self._totals1[c1])
        else:
            row1 = self._counts1[0]
            total1 = 0

        levels = []
        for j in range(self._first_sparse, depth + 1):
            key = tuple(window[-j:])
            total = self._sparse_totals.get(key)
            if total:
                levels.append((self._sparse[key], total))
        if levels:
            nnz = sum(len(d) for d, _ in levels)
            sp_syms = np.empty(nnz, dtype=np.int64)
            sp_cnts = np.empty(nnz, dtype=np.float64)
            sp_offsets = np.empty(len(levels) + 1, dtype=np.int64)
            sp_totals = np.empty(len(levels), dtype=np.float64)
            pos = 0
            for i, (ctx_counts, total) in enumerate(levels):
                sp_offsets[i] = pos
                sp_totals[i] = float(total)
                for sym, c in ctx_counts.items():
                    sp_syms[pos] = sym
                    sp_cnts[pos] = c
                    pos += 1
            sp_offsets[len(levels)] = pos
        else:
            sp_syms, sp_cnts = _EMPTY_SYMS, _EMPTY_CNTS
            sp_offsets, sp_totals = _ZERO_OFFSETS, _EMPTY_TOTALS

        m = self._m
        freqs = np.empty(m, dtype=np.int64)
        cum = np.empty(m + 1, dtype=np.int64)
        blend_quantize(
            m, self._size, self._counts0, self._total0, row1, total1,
            sp_syms, sp_cnts, sp_offsets, sp_totals, QUANT_TOTAL, freqs, cum,
        )
        return _fast_dist(freqs, cum)

    def update(self, observed: int) -> None:
        if observed == self._alphabet.eos_id:
            self._window.clear()
            return
        self._counts0[observed] += 1
        self._total0 += 1
        window = self._window
        depth = min(self.k, len(window))
        if self._dense1 and depth >= 1:
            c1 = window[-1]
            self._counts1[c1, observed] += 1
            self._totals1[c1] += 1
        for j in range(self._first_sparse, depth + 1):
            key = tuple(window[-j:])
            ctx_counts = self._sparse.get(key)
            if ctx_counts is None:
                self._sparse[key] = {observed: 1}
                self._sparse_totals[key] = 1
            else:
                ctx_counts[observed] = ctx_counts.get(observed, 0) + 1
                self._sparse_totals[key] += 1
        window.append(observed)
        if len(window) > self.k:
            del window[0]

    def reset_context(self) -> None:
        self._window.clear()


class RemotePredictor(PredictorModel):
    """Client for the logit-server wire protocol.

    The server quantizes before replying, so only integer frequencies cross
    the wire; the client validates the protocol invariants (length, sum,
    floor) on every reply and refuses anything else.
    """

    id = "remote"

    def __init__(self, endpoint: str, model_id: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.model_id = model_id
        self.timeout = timeout
        self._sock: Optional[socket.socket] = None
        self._session: Optional[int] = None
        self._pending: Optional[int] = None
        self.vocab_size = 0
        self.context_window = 0
        self.capabilities = 0
        self.tokenizer_fingerprint = b"\x00" * wire.FINGERPRINT_LEN
        self._alphabet: Optional[Alphabet] = None
        self._connect()

    def _connect(self) -> None:
        host, _, port = self.endpoint.rpartition(":")
        if not host or not port.isdigit():
            raise RemoteUnavailable(f"bad endpoint {self.endpoint!r}, expected host:port")
        try:
            sock = socket.create_connection((host, int(port)), timeout=self.timeout)
        except OSError as exc:
            raise RemoteUnavailable(f"cannot reach logit server at {self.endpoint}: {exc}") from exc
        self._sock = sock
        reply = wire.call(sock, wire.OP_OPEN, wire.pack_str(self.model_id))
        if len(reply) != 13 + wire.FINGERPRINT_LEN:
            raise RemoteProtocolViolation(f"OPEN reply has {len(reply)} bytes")
        session, vocab, window, caps = struct.unpack("<IIIB", reply[:13])
        self._session = session
        self.vocab_size = vocab
        self.context_window = window
        self.capabilities = caps
        self.tokenizer_fingerprint = reply[13:]
        self._alphabet = Alphabet.external(vocab)

    @property
    def alphabet(self) -> Alphabet:
        assert self._alphabet is not None
        return self._alphabet

    def params(self) -> dict[str, str]:
        return {"model_id": self.model_id, "vocab_size": str(self.vocab_size)}

    def _require_session(self) -> tuple[socket.socket, int]:
        if self._sock is None or self._session is None:
            raise RemoteUnavailable("remote session is closed")
        return self._sock, self._session

    def predict(self, context: Optional[Sequence[int]] = None) -> QuantizedDistribution:
        if context is not None:
            raise RemoteProtocolViolation("remote predictor cannot query ad-hoc contexts")
        sock, session = self._require_session()
        if self._pending is None:
            payload = struct.pack("<IB", session, 0)
        else:
            payload = struct.pack("<IBI", session, 1, self._pending)
        reply = wire.call(sock, wire.OP_PREDICT, payload)
        self._pending = None
        if len(reply) < 4:
            raise RemoteProtocolViolation("PREDICT reply too short")
        (count,) = struct.unpack("<I", reply[:4])
        if count != self.vocab_size + 1 or len(reply) != 4 + 2 * count:
            raise RemoteProtocolViolation(
                f"PREDICT reply claims {count} entries with {len(reply) - 4} payload bytes"
            )
        dist = QuantizedDistribution.from_wire(reply[4:])
        if int(dist.freqs.min()) < 1 or int(dist.cum[-1]) != QUANT_TOTAL:
            raise RemoteProtocolViolation("PREDICT reply breaks sum/floor invariants")
        return dist

    def update(self, observed: int) -> None:
        if observed == self.alphabet.eos_id:
            self.reset_context()
            return
        if self._pending is not None:
            # two updates without an intervening predict: flush the first
            sock, session = self._require_session()
            wire.call(sock, wire.OP_PREDICT, struct.pack("<IBI", session, 1, self._pending))
        self._pending = observed

    def reset_context(self) -> None:
        sock, session = self._require_session()
        self._pending = None
        wire.call(sock, wire.OP_RESET, struct.pack("<I", session))

    def tokenize(self, text: bytes) -> list[int]:
        sock, session = self._require_session()
        reply = wire.call(
            sock, wire.OP_TOKENIZE, struct.pack("<II", session, len(text)) + text
        )
        (count,) = struct.unpack("<I", reply[:4])
        if len(reply) != 4 + 4 * count:
            raise RemoteProtocolViolation("TOKENIZE reply length mismatch")
        return list(struct.unpack(f"<{count}I", reply[4:])) if count else []

    def detokenize(self, ids: Sequence[int]) -> bytes:
        sock, session = self._require_session()
        payload = struct.pack("<II", session, len(ids)) + struct.pack(
            f"<{len(ids)}I", *ids
        ) if ids else struct.pack("<II", session, 0)
        reply = wire.call(sock, wire.OP_DETOKENIZE, payload)
        (nbytes,) = struct.unpack("<I", reply[:4])
        if len(reply) != 4 + nbytes:
            raise RemoteProtocolViolation("DETOKENIZE reply length mismatch")
        return reply[4:]

    def close(self) -> None:
        if self._sock is not None and self._session is not None:
            try:
                wire.call(self._sock, wire.OP_CLOSE, struct.pack("<I", self._session))
            except (RemoteUnavailable, RemoteProtocolViolation):
                pass
            self._sock.close()
        self._sock = None
        self._session = None

    def __enter__(self) -> "RemotePredictor":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def parse_predictor_spec(spec: str, endpoint_fallback: Optional[str] = None,
                         timeout: float = 30.0) -> PredictorModel:
    """Build a predictor from CLI syntax: uniform | orderk:K | remote:endpoint,model.

    ``remote:MODEL`` (no endpoint) uses ``endpoint_fallback``.
    """
    if spec == "uniform":
        return UniformPredictor(Alphabet.bytes256())
    if spec.startswith("orderk:"):
        try:
            k = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad order in predictor spec {spec!r}")
        return OrderKPredictor(Alphabet.bytes256(), k)
    if spec.startswith("remote:"):
        rest = spec.split(":", 1)[1]
        if "," in rest:
            endpoint, model_id = rest.rsplit(",", 1)
        else:
            endpoint, model_id = endpoint_fallback or "", rest
        if not endpoint:
            raise RemoteUnavailable(
                "remote predictor needs an endpoint (remote:HOST:PORT,MODEL "
                "or the PPRESS_ENDPOINT environment variable)"
            )
        return RemotePredictor(endpoint, model_id, timeout=timeout)
    raise ValueError(f"unknown predictor spec {spec!r}")
