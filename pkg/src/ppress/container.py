"""Compress/decompress pipeline and the on-disk container format.

Container layout (all integers little-endian):

    8   magic "PPRESS01"
    u8  alphabet kind (0 = bytes256, 1 = external vocab)
    u32 alphabet size (count of real symbols, EOS excluded)
    u8  flags (bit0: tokenization fell back to byte-level coding)
    u16 predictor id length, UTF-8 id
    u16 param count, then per param (sorted by key):
        u16 key length, key, u16 value length, value
    u32 chunk size in symbols (0 = unchunked)
    u64 original byte length
    32  tokenizer fingerprint (all zero for bytes256)
    32  SHA-256 of the original text
    u32 chunk count
    per chunk: u32 token count, u32 payload byte length, payload

Chunks are independently coded runs: each starts with a fresh coder and a
reset predictor context (learned counts persist), and ends with the EOS
symbol inside the payload, so no out-of-band length is needed to decode.
Chunk processing is sequential because adaptive predictors thread learned
state across chunks; the decoder replays the identical sequence.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .coder import ArithmeticDecoder, ArithmeticEncoder, BitSink, BitSource
from .errors import (
    BadContainer,
    DigestMismatch,
    SourceExhausted,
    TokenizationNotInvertible,
    UnknownPredictor,
)
from .model import Alphabet, PredictorModel, TokenSequence
from .predictors import MAX_ORDER, OrderKPredictor, RemotePredictor, UniformPredictor

MAGIC = b"PPRESS01"
FLAG_TOKENIZATION_FALLBACK = 0x01
FALLBACK_ORDER = 4  # order used when token-level coding is not invertible

_KIND_CODES = {Alphabet.BYTES256_KIND: 0, Alphabet.EXTERNAL_KIND: 1}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}

ZERO_FINGERPRINT = b"\x00" * 32


@dataclass(frozen=True)
class ContainerHeader:
    alphabet_kind: str
    alphabet_size: int
    flags: int
    predictor_id: str
    predictor_params: dict[str, str]
    chunk_size: int
    original_byte_length: int
    tokenizer_fingerprint: bytes
    payload_digest: bytes

    def alphabet(self) -> Alphabet:
        return Alphabet(self.alphabet_kind, self.alphabet_size)

    def to_bytes(self, chunk_count: int) -> bytes:
        out = bytearray()
        out += MAGIC
        out += struct.pack("<BIB", _KIND_CODES[self.alphabet_kind], self.alphabet_size, self.flags)
        pid = self.predictor_id.encode("utf-8")
        out += struct.pack("<H", len(pid)) + pid
        items = sorted(self.predictor_params.items())
        out += struct.pack("<H", len(items))
        for key, value in items:
            k = key.encode("utf-8")
            v = value.encode("utf-8")
            out += struct.pack("<H", len(k)) + k + struct.pack("<H", len(v)) + v
        out += struct.pack("<IQ", self.chunk_size, self.original_byte_length)
        out += self.tokenizer_fingerprint
        out += self.payload_digest
        out += struct.pack("<I", chunk_count)
        return bytes(out)


@dataclass(frozen=True)
class ChunkRecord:
    token_count: int
    payload: bytes


@dataclass(frozen=True)
class Container:
    header: ContainerHeader
    chunks: tuple[ChunkRecord, ...]

    def to_bytes(self) -> bytes:
        out = bytearray(self.header.to_bytes(len(self.chunks)))
        for chunk in self.chunks:
            out += struct.pack("<II", chunk.token_count, len(chunk.payload))
            out += chunk.payload
        return bytes(out)

    @property
    def byte_length(self) -> int:
        return len(self.to_bytes())

    @property
    def payload_bytes(self) -> int:
        """Coded payload size without header or chunk framing."""
        return sum(len(c.payload) for c in self.chunks)


class _Cursor:
    """Byte reader that turns every premature end into SourceExhausted."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise SourceExhausted(
                f"container truncated: wanted {n} bytes at offset {self.pos}, "
                f"only {len(self.data) - self.pos} remain"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def parse_container(data: bytes) -> Container:
    cur = _Cursor(data)
    if cur.take(len(MAGIC)) != MAGIC:
        raise BadContainer("bad magic: not a ppress container")
    kind_code, size, flags = cur.unpack("<BIB")
    if kind_code not in _KIND_NAMES:
        raise BadContainer(f"unknown alphabet kind code {kind_code}")
    (id_len,) = cur.unpack("<H")
    predictor_id = cur.take(id_len).decode("utf-8")
    (n_params,) = cur.unpack("<H")
    params = {}
    for _ in range(n_params):
        (klen,) = cur.unpack("<H")
        key = cur.take(klen).decode("utf-8")
        (vlen,) = cur.unpack("<H")
        params[key] = cur.take(vlen).decode("utf-8")
    chunk_size, original_len = cur.unpack("<IQ")
    fingerprint = cur.take(32)
    digest = cur.take(32)
    (chunk_count,) = cur.unpack("<I")
    header = ContainerHeader(
        alphabet_kind=_KIND_NAMES[kind_code],
        alphabet_size=size,
        flags=flags,
        predictor_id=predictor_id,
        predictor_params=params,
        chunk_size=chunk_size,
        original_byte_length=original_len,
        tokenizer_fingerprint=fingerprint,
        payload_digest=digest,
    )
    chunks = []
    for _ in range(chunk_count):
        token_count, payload_len = cur.unpack("<II")
        payload = cur.take(payload_len)
        chunks.append(ChunkRecord(token_count, payload))
    if cur.pos != len(data):
        raise BadContainer(f"{len(data) - cur.pos} trailing bytes after last chunk")
    return Container(header, tuple(chunks))


def _encode_chunk(symbols: Sequence[int], predictor: PredictorModel) -> ChunkRecord:
    eos = predictor.alphabet.eos_id
    predictor.reset_context()
    sink = BitSink()
    enc = ArithmeticEncoder()
    for sym in symbols:
        enc.encode_symbol(predictor.predict(), sym, sink)
        predictor.update(sym)
    enc.encode_symbol(predictor.predict(), eos, sink)
    predictor.update(eos)
    enc.finalize(sink)
    return ChunkRecord(len(symbols), sink.to_bytes())


def _decode_chunk(chunk: ChunkRecord, predictor: PredictorModel) -> list[int]:
    eos = predictor.alphabet.eos_id
    predictor.reset_context()
    dec = ArithmeticDecoder(BitSource(chunk.payload))
    out: list[int] = []
    while True:
        sym = dec.decode_symbol(predictor.predict())
        if sym == eos:
            predictor.update(sym)
            break
        predictor.update(sym)
        out.append(sym)
    if len(out) != chunk.token_count:
        raise BadContainer(
            f"chunk decoded {len(out)} tokens but records {chunk.token_count}"
        )
    return out


def tokenize_bind(text: bytes, remote: RemotePredictor) -> TokenSequence:
    """Token ids for text, validated invertible before any coding starts."""
    tokens = remote.tokenize(text)
    if remote.detokenize(tokens) != text:
        raise TokenizationNotInvertible(
            "tokenizer round-trip failed; byte-level fallback required"
        )
    return TokenSequence(remote.alphabet, tuple(tokens))


def compress(
    text: bytes,
    predictor: PredictorModel,
    chunk_size: int = 0,
    on_fallback: Optional[Callable[[str], None]] = None,
    on_chunk: Optional[Callable[[int, int], None]] = None,
) -> Container:
    """Compress text into a container whose decompression is byte-exact.

    A remote predictor whose tokenizer cannot round-trip the text is
    transparently replaced by the byte-level order-4 model; the fallback is
    recorded in the header flags (and reported through ``on_fallback``).
    """
    flags = 0
    fingerprint = ZERO_FINGERPRINT
    if isinstance(predictor, RemotePredictor):
        try:
            symbols: Sequence[int] = tokenize_bind(text, predictor).symbols
            fingerprint = predictor.tokenizer_fingerprint
        except TokenizationNotInvertible:
            if on_fallback is not None:
                on_fallback(
                    "tokenization not invertible; falling back to byte-level "
                    f"orderk:{FALLBACK_ORDER}"
                )
            predictor = OrderKPredictor(Alphabet.bytes256(), FALLBACK_ORDER)
            flags |= FLAG_TOKENIZATION_FALLBACK
            symbols = text
    else:
        symbols = text
    window = predictor.context_window
    if window and len(symbols) > window and not 0 < chunk_size <= window:
        raise ValueError(
            f"predictor context window is {window} symbols: pick a chunk "
            f"size in 1..{window} for inputs longer than the window"
        )

    chunks = []
    if chunk_size <= 0:
        pieces = [symbols] if len(symbols) else []
    else:
        pieces = [symbols[i : i + chunk_size] for i in range(0, len(symbols), chunk_size)]
    for i, piece in enumerate(pieces):
        chunks.append(_encode_chunk(piece, predictor))
        if on_chunk is not None:
            on_chunk(i + 1, len(pieces))

    header = ContainerHeader(
        alphabet_kind=predictor.alphabet.kind,
        alphabet_size=predictor.alphabet.size,
        flags=flags,
        predictor_id=predictor.id,
        predictor_params=predictor.params(),
        chunk_size=max(chunk_size, 0),
        original_byte_length=len(text),
        tokenizer_fingerprint=fingerprint,
        payload_digest=hashlib.sha256(text).digest(),
    )
    return Container(header, tuple(chunks))


class PredictorRegistry:
    """Maps header predictor ids onto factories that rebuild the predictor."""

    def __init__(self) -> None:
        self._factories: dict[str, Callable[[ContainerHeader], PredictorModel]] = {}

    def register(self, predictor_id: str,
                 factory: Callable[[ContainerHeader], PredictorModel]) -> None:
        self._factories[predictor_id] = factory

    def instantiate(self, header: ContainerHeader) -> PredictorModel:
        factory = self._factories.get(header.predictor_id)
        if factory is None:
            raise UnknownPredictor(
                f"no predictor registered for id {header.predictor_id!r}"
            )
        return factory(header)

    @classmethod
    def default(cls, endpoint: Optional[str] = None, timeout: float = 30.0) -> "PredictorRegistry":
        reg = cls()
        reg.register("uniform", lambda h: UniformPredictor(h.alphabet()))

        def make_orderk(header: ContainerHeader) -> PredictorModel:
            try:
                k = int(header.predictor_params["k"])
            except (KeyError, ValueError) as exc:
                raise UnknownPredictor(f"orderk header params invalid: {exc}") from exc
            if not 0 <= k <= MAX_ORDER:
                raise UnknownPredictor(f"orderk order {k} outside supported 0..{MAX_ORDER}")
            return OrderKPredictor(header.alphabet(), k)

        reg.register("orderk", make_orderk)

        def make_remote(header: ContainerHeader) -> PredictorModel:
            if endpoint is None:
                raise UnknownPredictor(
                    "container needs the remote predictor but no endpoint is configured"
                )
            model_id = header.predictor_params.get("model_id", "")
            remote = RemotePredictor(endpoint, model_id, timeout=timeout)
            if remote.vocab_size != header.alphabet_size:
                remote.close()
                raise UnknownPredictor(
                    f"server vocab {remote.vocab_size} != container vocab {header.alphabet_size}"
                )
            if remote.tokenizer_fingerprint != header.tokenizer_fingerprint:
                remote.close()
                raise UnknownPredictor(
                    "tokenizer fingerprint mismatch: decoding with a different "
                    "model/tokenizer would silently diverge"
                )
            return remote

        reg.register("remote", make_remote)
        return reg


def _determinism_probe(registry: PredictorRegistry, header: ContainerHeader) -> bool:
    """True when two fresh predictors agree bit-exactly on a probe context."""
    try:
        a = registry.instantiate(header)
        b = registry.instantiate(header)
    except UnknownPredictor:
        return True
    probe = [(i * 131 + 17) % header.alphabet_size for i in range(64)]
    try:
        for sym in probe:
            if a.predict().to_bytes() != b.predict().to_bytes():
                return False
            a.update(sym)
            b.update(sym)
        return a.predict().to_bytes() == b.predict().to_bytes()
    finally:
        for model in (a, b):
            close = getattr(model, "close", None)
            if close:
                close()


def decompress(container: Container | bytes, registry: PredictorRegistry) -> bytes:
    """Reconstruct the exact original bytes, verifying the recorded digest."""
    if isinstance(container, (bytes, bytearray, memoryview)):
        container = parse_container(bytes(container))
    header = container.header
    if (header.alphabet_kind == Alphabet.BYTES256_KIND
            and header.tokenizer_fingerprint != ZERO_FINGERPRINT):
        raise BadContainer(
            "byte-level container carries a non-zero tokenizer fingerprint"
        )
    predictor = registry.instantiate(header)
    try:
        symbols: list[int] = []
        for chunk in container.chunks:
            if header.chunk_size and chunk.token_count > header.chunk_size:
                raise BadContainer(
                    f"chunk holds {chunk.token_count} tokens, limit {header.chunk_size}"
                )
            symbols.extend(_decode_chunk(chunk, predictor))
        if header.alphabet_kind == Alphabet.BYTES256_KIND:
            text = bytes(symbols)
        else:
            assert isinstance(predictor, RemotePredictor)
            text = predictor.detokenize(symbols)
    finally:
        close = getattr(predictor, "close", None)
        if close:
            close()

    if hashlib.sha256(text).digest() != header.payload_digest:
        if _determinism_probe(registry, header):
            raise DigestMismatch(
                "reconstructed text does not match the recorded digest; the "
                "predictor replays deterministically, so the container bytes "
                "are corrupt"
            )
        raise DigestMismatch(
            "reconstructed text does not match the recorded digest; the "
            "predictor itself is NOT deterministic (two fresh instances "
            "disagree on a probe context), which breaks decoding"
        )
    if len(text) != header.original_byte_length:
        raise DigestMismatch("digest matched but recorded length differs (corrupt header)")
    return text
