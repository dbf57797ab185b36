"""Quantization of probability vectors onto the 16-bit coding grid.

This must produce byte-identical tables to the client toolkit's own
quantizer for the same float inputs; the shared vector file
``conformance/quantize_vectors.json`` pins both implementations to the
rule:

- scale to a total of 65536 using a left-to-right normalization sum,
- floor the scaled ideals, hand the leftover units to the largest
  fractional remainders (ties: lowest index),
- raise zero entries to 1 and charge the signed residual to the
  highest-probability entries (ties: lowest index), never below 1.
"""

from __future__ import annotations

import numpy as np

TOTAL = 1 << 16


def quantize_probs(probs: np.ndarray, total: int = TOTAL) -> np.ndarray:
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    m = len(probs)
    if m < 2:
        raise ValueError("need at least 2 probabilities")
    if not np.isfinite(probs).all() or (probs < 0).any():
        raise ValueError("probabilities must be finite and non-negative")
    s = float(np.cumsum(probs)[-1])
    if s <= 0.0 or not np.isfinite(s):
        raise ValueError("probabilities sum to zero or overflow")

    ideal = (probs / s) * total
    freqs = ideal.astype(np.int64)
    rem = ideal - freqs
    leftover = total - int(freqs.sum())
    if leftover > 0:
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
                raise ValueError("cannot satisfy frequency floor")
    return freqs
