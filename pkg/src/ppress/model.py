"""Core symbol, distribution, and predictor abstractions.

All coding probabilities live on a fixed integer grid: a distribution over
``alphabet.size + 1`` symbols (the real symbols plus one reserved
end-of-stream terminator) is a vector of integer frequencies that sums to
exactly ``QUANT_TOTAL`` with every entry at least 1.  The floor keeps every
symbol decodable; the fixed denominator keeps encoder and decoder in exact
integer lockstep on any host.

Determinism note: quantize() uses only elementwise float64 arithmetic plus
numpy reductions over arrays of fixed shape, so identical inputs produce
bit-identical outputs across runs and hosts.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import LengthMismatch, NonFiniteProbability

#: Fixed quantization denominator (2^16).
QUANT_TOTAL = 1 << 16


@dataclass(frozen=True)
class Alphabet:
    """Symbol space for a token stream.

    ``size`` counts the real symbols; the reserved end-of-stream terminator
    sits at index ``size`` and is never stored in a TokenSequence.
    """

    kind: str  # "bytes256" | "external"
    size: int

    BYTES256_KIND = "bytes256"
    EXTERNAL_KIND = "external"

    def __post_init__(self) -> None:
        if self.kind not in (self.BYTES256_KIND, self.EXTERNAL_KIND):
            raise ValueError(f"unknown alphabet kind {self.kind!r}")
        if self.size < 2:
            raise ValueError("alphabet must have at least 2 symbols")
        if self.kind == self.BYTES256_KIND and self.size != 256:
            raise ValueError("bytes256 alphabet must have size 256")

    @property
    def eos_id(self) -> int:
        return self.size

    @property
    def dist_len(self) -> int:
        """Length of any distribution over this alphabet (symbols + EOS)."""
        return self.size + 1

    @classmethod
    def bytes256(cls) -> "Alphabet":
        return cls(cls.BYTES256_KIND, 256)

    @classmethod
    def external(cls, size: int) -> "Alphabet":
        return cls(cls.EXTERNAL_KIND, size)


@dataclass(frozen=True)
class TokenSequence:
    """An ordered run of symbol indices over a declared alphabet."""

    alphabet: Alphabet
    symbols: tuple[int, ...]

    def __post_init__(self) -> None:
        eos = self.alphabet.eos_id
        for s in self.symbols:
            if not 0 <= s < self.alphabet.size:
                if s == eos:
                    raise ValueError("EOS must never be stored in a sequence")
                raise ValueError(f"symbol {s} outside alphabet of size {self.alphabet.size}")

    def __len__(self) -> int:
        return len(self.symbols)

    @classmethod
    def from_bytes(cls, data: bytes) -> "TokenSequence":
        return cls(Alphabet.bytes256(), tuple(data))


class QuantizedDistribution:
    """Integer frequency table summing to QUANT_TOTAL with a floor of 1.

    ``cum`` holds the prefix sums (cum[0] == 0, cum[-1] == total); the coder
    addresses symbol ``s`` through the half-open count range
    [cum[s], cum[s+1]).
    """

    __slots__ = ("freqs", "cum", "total")

    def __init__(self, freqs: np.ndarray, total: int = QUANT_TOTAL, _validate: bool = True):
        freqs = np.ascontiguousarray(freqs, dtype=np.int64)
        self.freqs = freqs
        self.total = total
        cum = np.empty(len(freqs) + 1, dtype=np.int64)
        cum[0] = 0
        np.cumsum(freqs, out=cum[1:])
        self.cum = cum
        if _validate:
            self.validate()

    def validate(self) -> None:
        if len(self.freqs) < 2:
            raise LengthMismatch("distribution needs at least 2 entries")
        if int(self.freqs.min()) < 1:
            raise ValueError("frequency floor violated: some entry < 1")
        if int(self.cum[-1]) != self.total:
            raise ValueError(
                f"frequencies sum to {int(self.cum[-1])}, expected {self.total}"
            )

    def __len__(self) -> int:
        return len(self.freqs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantizedDistribution):
            return NotImplemented
        return self.total == other.total and np.array_equal(self.freqs, other.freqs)

    def __hash__(self) -> int:  # immutable by convention
        return hash((self.total, self.freqs.tobytes()))

    def to_bytes(self) -> bytes:
        """Frequencies as little-endian u16 words (the wire representation)."""
        return self.freqs.astype("<u2").tobytes()

    @classmethod
    def from_wire(cls, payload: bytes, total: int = QUANT_TOTAL) -> "QuantizedDistribution":
        freqs = np.frombuffer(payload, dtype="<u2").astype(np.int64)
        return cls(freqs, total)


def quantize(
    probabilities: Sequence[float] | np.ndarray,
    total: int = QUANT_TOTAL,
    alphabet: Optional[Alphabet] = None,
) -> QuantizedDistribution:
    """Map a real probability vector onto the integer coding grid.

    Largest-remainder rounding distributes the leftover units after flooring
    the scaled ideals, ties broken by lowest index.  Entries that would round
    to zero are raised to the floor of 1, and the (signed) residual created
    by flooring is charged to the highest-probability entry, again tie-broken
    by lowest index.
    """
    probs = np.ascontiguousarray(probabilities, dtype=np.float64)
    m = len(probs)
    if alphabet is not None and m != alphabet.dist_len:
        raise LengthMismatch(f"expected {alphabet.dist_len} probabilities, got {m}")
    if m < 2:
        raise LengthMismatch("need at least 2 probabilities")
    if not np.isfinite(probs).all():
        raise NonFiniteProbability("probability vector contains NaN or inf")
    if (probs < 0).any():
        raise NonFiniteProbability("probability vector contains negative entries")
    # left-to-right sum (cumsum is sequential, .sum() is pairwise) so that the
    # jitted predictor kernel reproduces the normalization bit-for-bit
    s = float(np.cumsum(probs)[-1])
    if s <= 0.0 or not math.isfinite(s):
        raise NonFiniteProbability("probability vector sums to zero or overflows")

    # divide first: every entry is <= the sum, so probs / s stays in [0, 1]
    # even for subnormal sums where total / s would overflow
    ideal = (probs / s) * total
    freqs = ideal.astype(np.int64)  # trunc == floor for non-negative input
    rem = ideal - freqs
    leftover = total - int(freqs.sum())
    if leftover > 0:
        # Pick the `leftover` largest remainders; on the threshold value,
        # lowest indices win.  Equivalent to a stable (-rem, index) sort.
        take = min(leftover, m)
        kth = np.partition(rem, m - take)[m - take]
        above = rem > kth
        np.add(freqs, 1, where=above, out=freqs)
        need = take - int(np.count_nonzero(above))
        if need > 0:
            at_kth = np.flatnonzero(rem == kth)
            freqs[at_kth[:need]] += 1

    zero = freqs < 1
    if zero.any():
        freqs[zero] = 1
    residual = int(freqs.sum()) - total
    if residual:
        # Charge the flooring residual to the highest-probability entries,
        # lowest index first.  In practice the single argmax absorbs it; the
        # cascade only exists so adversarial near-uniform giant vocabularies
        # cannot drive an entry below the floor.
        order = np.argsort(-probs, kind="stable")
        if residual < 0:
            freqs[order[0]] += -residual
        else:
            outstanding = residual
            for idx in order:
                if outstanding == 0:
                    break
                give_back = min(outstanding, int(freqs[idx]) - 1)
                if give_back > 0:
                    freqs[idx] -= give_back
                    outstanding -= give_back
            if outstanding:
                raise NonFiniteProbability("cannot satisfy frequency floor")

    return QuantizedDistribution(freqs, total, _validate=False)


def self_information_bits(dist: QuantizedDistribution, symbol: int) -> float:
    """Ideal code length -log2(p) of one symbol under the quantized grid."""
    if not 0 <= symbol < len(dist.freqs):
        raise LengthMismatch(f"symbol {symbol} out of range for {len(dist.freqs)} entries")
    return -math.log2(int(dist.freqs[symbol]) / dist.total)


def entropy_bits(dist: QuantizedDistribution) -> float:
    """Shannon entropy of the quantized distribution, in bits/symbol."""
    p = dist.freqs / dist.total
    return float(-(p * np.log2(p)).sum())


def cross_entropy_bits(p: QuantizedDistribution, q: QuantizedDistribution) -> float:
    """Expected code length when coding p-distributed symbols with q."""
    _check_same_shape(p, q)
    pp = p.freqs / p.total
    qq = q.freqs / q.total
    return float(-(pp * np.log2(qq)).sum())


def kl_divergence_bits(p: QuantizedDistribution, q: QuantizedDistribution) -> float:
    """KL(p || q) in bits: the extra cost of coding p with q. Non-negative."""
    _check_same_shape(p, q)
    pf = p.freqs / p.total
    qf = q.freqs / q.total
    return float((pf * np.log2(pf / qf)).sum())


def _check_same_shape(p: QuantizedDistribution, q: QuantizedDistribution) -> None:
    if len(p.freqs) != len(q.freqs):
        raise LengthMismatch(f"distribution lengths differ: {len(p.freqs)} vs {len(q.freqs)}")
    if p.total != q.total:
        raise LengthMismatch(f"distribution totals differ: {p.total} vs {q.total}")


class PredictorModel(ABC):
    """Deterministic context -> distribution function shared by both coder ends.

    Contract: predict() never mutates state; update() advances the context by
    exactly one observed symbol (EOS resets the context window).  Identical
    (predict, update) call sequences must yield bit-identical distributions
    on every host, or decoding diverges.
    """

    #: stable identifier serialized into container headers
    id: str = ""
    #: max context length in symbols (0 = unbounded)
    context_window: int = 0

    @property
    @abstractmethod
    def alphabet(self) -> Alphabet: ...

    @abstractmethod
    def predict(self, context: Optional[Sequence[int]] = None) -> QuantizedDistribution:
        """Distribution over alphabet.size + 1 symbols for the next position.

        With ``context=None`` the model conditions on its internal window
        (the path the pipeline uses); an explicit context queries the same
        learned state as a pure function.
        """

    @abstractmethod
    def update(self, observed: int) -> None:
        """Advance state by one observed symbol (EOS allowed: resets context)."""

    @abstractmethod
    def reset_context(self) -> None:
        """Clear the conditioning window; learned statistics are retained."""

    def params(self) -> dict[str, str]:
        """Key/value pairs serialized into container headers."""
        return {}
