import hashlib
from pathlib import Path

import numpy as np
import pytest

from ppress.container import (
    Container,
    FLAG_TOKENIZATION_FALLBACK,
    MAGIC,
    PredictorRegistry,
    compress,
    decompress,
    parse_container,
)
from ppress.errors import (
    BadContainer,
    DigestMismatch,
    SourceExhausted,
    UnknownPredictor,
)
from ppress.model import Alphabet, QuantizedDistribution
from ppress.predictors import OrderKPredictor, UniformPredictor

CORPORA = Path(__file__).resolve().parent.parent / "corpora"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


def registry():
    return PredictorRegistry.default()


def orderk(k):
    return OrderKPredictor(Alphabet.bytes256(), k)


class TestRoundTrip:
    def test_empty_input_zero_chunks(self):
        c = compress(b"", orderk(2), chunk_size=64)
        assert len(c.chunks) == 0
        assert decompress(c.to_bytes(), registry()) == b""

    @pytest.mark.parametrize("chunk", [0, 16, 64])
    @pytest.mark.parametrize("k", [0, 2])
    def test_small_inputs(self, chunk, k):
        for data in (b"x", b"hello world", bytes(range(256)), b"\x00" * 500):
            c = compress(data, orderk(k), chunk_size=chunk)
            assert decompress(c.to_bytes(), registry()) == data

    def test_all_sample_corpora_byte_exact(self):
        for path in sorted(CORPORA.glob("*.txt")):
            data = path.read_bytes()[:20_000]
            c = compress(data, orderk(3), chunk_size=256)
            assert decompress(c.to_bytes(), registry()) == data, path.name

    def test_unicode_and_binary(self):
        data = "héllo wörld ∀x∈ℝ 😀".encode("utf-8") + bytes([0, 255, 254, 1])
        c = compress(data, orderk(1), chunk_size=4)
        assert decompress(c.to_bytes(), registry()) == data

    def test_repetitive_input_high_ratio(self):
        data = b"abababab" * 1000
        c = compress(data, orderk(2), chunk_size=256)
        assert len(data) / c.byte_length > 10
        assert decompress(c.to_bytes(), registry()) == data

    def test_incompressible_input_bounded_expansion(self):
        rng = np.random.default_rng(0)
        data = rng.bytes(1 << 20)
        c = compress(data, UniformPredictor(Alphabet.bytes256()), chunk_size=0)
        ratio = len(data) / c.byte_length
        assert ratio <= 1.01
        # expansion is only quantization slack plus framing
        assert c.byte_length <= len(data) * 1.01 + 256
        data = rng.bytes(1 << 16)
        c = compress(data, orderk(2), chunk_size=0)
        assert len(data) / c.byte_length <= 1.01

    def test_chunked_ratio_monotone_16_vs_256(self):
        data = (CORPORA / "clinical.txt").read_bytes()[:30_000]
        r = {}
        for chunk in (16, 256):
            c = compress(data, orderk(3), chunk_size=chunk)
            r[chunk] = len(data) / c.byte_length
        assert r[256] >= r[16]


class TestContainerFormat:
    def test_header_fields_round_trip(self):
        data = b"some text for the header test"
        c = compress(data, orderk(5), chunk_size=7)
        parsed = parse_container(c.to_bytes())
        h = parsed.header
        assert h.predictor_id == "orderk"
        assert h.predictor_params == {"k": "5"}
        assert h.chunk_size == 7
        assert h.original_byte_length == len(data)
        assert h.payload_digest == hashlib.sha256(data).digest()
        assert h.tokenizer_fingerprint == b"\x00" * 32
        assert parsed.chunks == c.chunks

    def test_token_counts_respect_chunk_size(self):
        data = bytes(100)
        c = compress(data, orderk(0), chunk_size=16)
        assert [ch.token_count for ch in c.chunks] == [16] * 6 + [4]

    def test_overhead_budget(self):
        # header <= 128 bytes, framing 8 bytes per chunk
        data = b"z" * 4096
        for pred, chunk in ((orderk(4), 64), (UniformPredictor(Alphabet.bytes256()), 0)):
            c = compress(data, pred, chunk_size=chunk)
            framing = len(c.to_bytes()) - c.payload_bytes
            assert framing <= 128 + 8 * len(c.chunks)

    def test_bad_magic(self):
        with pytest.raises(BadContainer):
            parse_container(b"NOTMAGIC" + bytes(64))

    def test_truncation_raises_source_exhausted(self):
        blob = compress(b"hello" * 200, orderk(1), chunk_size=64).to_bytes()
        for cut in (len(blob) - 3, len(blob) // 2, 40, 9):
            with pytest.raises(SourceExhausted):
                decompress(blob[:cut], registry())

    def test_trailing_garbage_rejected(self):
        blob = compress(b"hello", orderk(1)).to_bytes()
        with pytest.raises(BadContainer):
            parse_container(blob + b"\x00")

    def test_corruption_detected(self):
        data = bytes(CORPORA.joinpath("web.txt").read_bytes()[:5000])
        blob = bytearray(compress(data, orderk(2), chunk_size=0).to_bytes())
        hits = 0
        rng = np.random.default_rng(5)
        for _ in range(12):
            pos = int(rng.integers(len(MAGIC), len(blob)))
            orig = blob[pos]
            blob[pos] ^= 0x40
            try:
                decompress(bytes(blob), registry())
            except (DigestMismatch, BadContainer, SourceExhausted, UnknownPredictor,
                    ValueError):
                hits += 1
            finally:
                blob[pos] = orig
        assert hits == 12  # no silent corruption, ever

    def test_digest_mismatch_message_blames_corruption(self):
        data = b"payload digest check " * 40
        c = compress(data, orderk(1), chunk_size=0)
        bad_header = c.header.__class__(
            **{**c.header.__dict__, "payload_digest": bytes(32)}
        )
        blob = Container(bad_header, c.chunks).to_bytes()
        with pytest.raises(DigestMismatch, match="corrupt"):
            decompress(blob, registry())


class TestRegistry:
    def test_unknown_predictor_id(self):
        blob = compress(b"abc", orderk(1)).to_bytes()
        reg = PredictorRegistry()
        with pytest.raises(UnknownPredictor):
            decompress(blob, reg)

    def test_param_mismatch(self):
        # container written with k=3, registry only accepts k=2
        blob = compress(b"abcabcabc", orderk(3)).to_bytes()
        reg = PredictorRegistry()

        def only_k2(header):
            if header.predictor_params.get("k") != "2":
                raise UnknownPredictor("this registry only offers orderk k=2")
            return OrderKPredictor(header.alphabet(), 2)

        reg.register("orderk", only_k2)
        with pytest.raises(UnknownPredictor):
            decompress(blob, reg)

    def test_remote_without_endpoint(self):
        header = compress(b"x", orderk(1)).header.__class__(
            alphabet_kind="external", alphabet_size=100, flags=0,
            predictor_id="remote", predictor_params={"model_id": "m"},
            chunk_size=0, original_byte_length=0,
            tokenizer_fingerprint=bytes(32), payload_digest=bytes(32),
        )
        with pytest.raises(UnknownPredictor, match="endpoint"):
            PredictorRegistry.default().instantiate(header)


class TestLockstep:
    def test_distribution_sequences_identical_both_directions(self):
        """The load-bearing invariant: encode-side and decode-side predictors
        emit bit-identical distribution sequences."""

        class Recording(OrderKPredictor):
            def __init__(self, k, log):
                super().__init__(Alphabet.bytes256(), k)
                self.log = log

            def predict(self, context=None):
                dist = super().predict(context)
                self.log.append(dist.to_bytes())
                return dist

        data = (CORPORA / "novel.txt").read_bytes()[:4000]
        enc_log, dec_log = [], []
        c = compress(data, Recording(3, enc_log), chunk_size=128)
        reg = PredictorRegistry()
        reg.register("orderk", lambda h: Recording(3, dec_log))
        assert decompress(c.to_bytes(), reg) == data
        assert enc_log == dec_log


class TestGoldenFixtures:
    """Container bytes are a stable on-disk contract."""

    def test_golden_files_decode(self):
        reg = registry()
        for gold in sorted(FIXTURES.glob("golden_*.pp")):
            expected = FIXTURES.joinpath(gold.stem + ".txt").read_bytes()
            assert decompress(gold.read_bytes(), reg) == expected, gold.name

    def test_golden_files_reproduce(self):
        cases = {
            "golden_orderk2_chunk64": (OrderKPredictor(Alphabet.bytes256(), 2), 64),
            "golden_uniform_unchunked": (UniformPredictor(Alphabet.bytes256()), 0),
        }
        for stem, (pred, chunk) in cases.items():
            data = FIXTURES.joinpath(stem + ".txt").read_bytes()
            fresh = compress(data, pred, chunk_size=chunk).to_bytes()
            assert fresh == FIXTURES.joinpath(stem + ".pp").read_bytes(), stem
