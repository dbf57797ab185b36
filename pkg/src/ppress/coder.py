"""Integer arithmetic (range) coder driven by QuantizedDistribution values.

The live interval is kept in 32 active bits with the inclusive-high
convention: width = high - low + 1, so the full interval has width 2^32 and
never collapses to an empty range.  Products low + width * cum reach 48 bits
and stay comfortably inside machine integers.  Renormalization emits settled
leading bits most-significant-bit-first; straddles of the midpoint are
deferred through a pending-bit counter and emitted as complements once the
straddle resolves (standard carry handling).

Termination: finalize() emits one disambiguating bit plus the outstanding
pending bits, chosen so the emitted prefix extended with infinite zero bits
lands strictly inside the final interval.  The decoder therefore reads
phantom zero bits past the end of a valid stream, but never more than the
32-bit register preload; reading beyond that budget means the stream was
truncated and raises SourceExhausted.
"""

from __future__ import annotations

import numpy as np

from .errors import DoubleFinalize, IntervalUnderflow, SourceExhausted
from .model import QuantizedDistribution

STATE_BITS = 32
FULL = 1 << STATE_BITS
MASK = FULL - 1
HALF = FULL >> 1
QUARTER = FULL >> 2
THREE_QUARTER = HALF + QUARTER

#: phantom zero bits a decoder may consume beyond the stream end
PHANTOM_LIMIT = STATE_BITS


class BitSink:
    """Accumulates bits MSB-first into a byte buffer."""

    __slots__ = ("_buf", "_acc", "_nacc", "bit_count")

    def __init__(self) -> None:
        self._buf = bytearray()
        self._acc = 0
        self._nacc = 0
        self.bit_count = 0

    def write_bit(self, bit: int) -> None:
        self._acc = (self._acc << 1) | bit
        self._nacc += 1
        self.bit_count += 1
        if self._nacc == 8:
            self._buf.append(self._acc)
            self._acc = 0
            self._nacc = 0

    def write_run(self, bit: int, count: int) -> None:
        self.write_bits(((1 << count) - 1) if bit else 0, count)

    def write_bits(self, value: int, count: int) -> None:
        """Append ``count`` bits, most significant first."""
        if count <= 0:
            return
        nacc = self._nacc + count
        acc = (self._acc << count) | value
        self.bit_count += count
        buf = self._buf
        while nacc >= 8:
            nacc -= 8
            buf.append((acc >> nacc) & 0xFF)
        self._acc = acc & ((1 << nacc) - 1)
        self._nacc = nacc

    def to_bytes(self) -> bytes:
        """Byte image of the stream; the last partial byte is zero-padded."""
        out = bytes(self._buf)
        if self._nacc:
            out += bytes([self._acc << (8 - self._nacc)])
        return out


class BitSource:
    """Serves bits MSB-first from a byte buffer, tracking phantom reads.

    Reads past the end yield zero bits; ``phantom_count`` records how many.
    The decoder enforces the PHANTOM_LIMIT budget.
    """

    __slots__ = ("_bits", "_n", "_pos", "phantom_count")

    def __init__(self, data: bytes) -> None:
        # one byte per bit: indexing a bytes object is the fastest per-bit
        # read available without dropping into compiled code
        self._bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8)).tobytes()
        self._n = len(self._bits)
        self._pos = 0
        self.phantom_count = 0

    def read_bit(self) -> int:
        pos = self._pos
        if pos >= self._n:
            self.phantom_count += 1
            return 0
        self._pos = pos + 1
        return self._bits[pos]


class ArithmeticEncoder:
    """Encoding half of the coder; one instance per chunk."""

    __slots__ = ("low", "high", "pending_bits", "_finalized")

    def __init__(self) -> None:
        self.low = 0
        self.high = MASK
        self.pending_bits = 0
        self._finalized = False

    def encode_symbol(self, dist: QuantizedDistribution, symbol: int, sink: BitSink) -> None:
        if self._finalized:
            raise DoubleFinalize("encoder already finalized")
        total = dist.total
        cum = dist.cum
        width = self.high - self.low + 1
        cl = cum.item(symbol)
        ch = cum.item(symbol + 1)
        if cl == ch:
            raise IntervalUnderflow(f"symbol {symbol} has zero coding frequency")
        low = self.low
        high = low + width * ch // total - 1
        low = low + width * cl // total

        pending = self.pending_bits
        out_val = 0
        out_n = 0
        while True:
            if high < HALF:
                out_val <<= 1
                out_n += 1
                if pending:
                    out_val = (out_val << pending) | ((1 << pending) - 1)
                    out_n += pending
                    pending = 0
            elif low >= HALF:
                out_val = (out_val << 1) | 1
                out_n += 1
                if pending:
                    out_val <<= pending
                    out_n += pending
                    pending = 0
                low -= HALF
                high -= HALF
            elif low >= QUARTER and high < THREE_QUARTER:
                pending += 1
                low -= QUARTER
                high -= QUARTER
            else:
                break
            low = (low << 1) & MASK
            high = ((high << 1) | 1) & MASK
        if out_n:
            sink.write_bits(out_val, out_n)
        self.low = low
        self.high = high
        self.pending_bits = pending
        if high - low + 1 <= 2 * total:
            raise IntervalUnderflow("interval narrower than 2 * total after renorm")

    def finalize(self, sink: BitSink) -> None:
        """Emit the disambiguating tail; the stream then decodes uniquely."""
        if self._finalized:
            raise DoubleFinalize("finalize called twice")
        self._finalized = True
        self.pending_bits += 1
        if self.low < QUARTER:
            sink.write_bit(0)
            sink.write_run(1, self.pending_bits)
        else:
            sink.write_bit(1)
            sink.write_run(0, self.pending_bits)


class ArithmeticDecoder:
    """Decoding half; mirrors the encoder's interval transitions exactly."""

    __slots__ = ("low", "high", "code", "_source")

    def __init__(self, source: BitSource) -> None:
        self.low = 0
        self.high = MASK
        self._source = source
        code = 0
        for _ in range(STATE_BITS):
            code = (code << 1) | source.read_bit()
        self.code = code

    def decode_symbol(self, dist: QuantizedDistribution) -> int:
        total = dist.total
        cum = dist.cum
        low = self.low
        width = self.high - low + 1
        code = self.code
        value = ((code - low + 1) * total - 1) // width
        symbol = int(np.searchsorted(cum, value, side="right")) - 1
        cl = cum.item(symbol)
        ch = cum.item(symbol + 1)
        high = low + width * ch // total - 1
        low = low + width * cl // total
        source = self._source
        while True:
            if high < HALF:
                pass
            elif low >= HALF:
                low -= HALF
                high -= HALF
                code -= HALF
            elif low >= QUARTER and high < THREE_QUARTER:
                low -= QUARTER
                high -= QUARTER
                code -= QUARTER
            else:
                break
            low = (low << 1) & MASK
            high = ((high << 1) | 1) & MASK
            code = (code << 1) | source.read_bit()
        self.low = low
        self.high = high
        self.code = code
        if source.phantom_count > PHANTOM_LIMIT:
            raise SourceExhausted("bit stream ended before the interval resolved")
        if high - low + 1 <= 2 * total:
            raise IntervalUnderflow("interval narrower than 2 * total after renorm")
        return symbol


def encode_stream(symbols, dists, sink: BitSink) -> None:
    """Encode a whole symbol run under per-position distributions (test helper)."""
    enc = ArithmeticEncoder()
    for sym, dist in zip(symbols, dists):
        enc.encode_symbol(dist, sym, sink)
    enc.finalize(sink)
