"""Jitted hot path for the order-k predictor.

One fused kernel turns (dense order-0 counts, dense order-1 row, packed
sparse higher-order levels) into the quantized frequency table and its
prefix sums.  The arithmetic is a statement-for-statement mirror of the
blend described in predictors.OrderKPredictor and of model.quantize: plain
IEEE float64 ops in fixed order, no fastmath, so results are bit-identical
to the numpy path (tests assert this on random cases).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def blend_quantize(
    m,                # distribution length (alphabet size + 1)
    size,             # alphabet size used in the interpolation weight
    counts0,          # int64[m] dense order-0 counts
    total0,
    row1,             # int64[m] dense order-1 row (all zero when unused)
    total1,
    sp_syms,          # int64[:] packed sparse symbols, levels concatenated
    sp_cnts,          # float64[:] packed sparse counts
    sp_offsets,       # int64[levels+1] boundaries into sp_syms/sp_cnts
    sp_totals,        # float64[levels] per-level context totals
    total,            # quantization denominator
    freqs,            # int64[m] output frequencies
    cum,              # int64[m+1] output prefix sums
):
    p = np.empty(m, dtype=np.float64)
    base = 1.0 / m
    for i in range(m):
        p[i] = base

    if total0 > 0:
        t = float(total0)
        w = t / (t + size)
        keep = 1.0 - w
        scale = w / t
        for i in range(m):
            p[i] = p[i] * keep + scale * counts0[i]
    if total1 > 0:
        t = float(total1)
        w = t / (t + size)
        keep = 1.0 - w
        scale = w / t
        for i in range(m):
            p[i] = p[i] * keep + scale * row1[i]
    for lvl in range(len(sp_totals)):
        t = sp_totals[lvl]
        w = t / (t + size)
        keep = 1.0 - w
        scale = w / t
        for i in range(m):
            p[i] *= keep
        for j in range(sp_offsets[lvl], sp_offsets[lvl + 1]):
            p[sp_syms[j]] += scale * sp_cnts[j]

    # --- quantize: largest-remainder with floor 1, identical to model.quantize ---
    s = 0.0
    for i in range(m):
        s += p[i]
    rem = np.empty(m, dtype=np.float64)
    acc = 0
    for i in range(m):
        ideal = (p[i] / s) * total
        f = np.int64(ideal)
        freqs[i] = f
        rem[i] = ideal - f
        acc += f
    leftover = total - acc
    if leftover > 0:
        srt = np.sort(rem)
        kth = srt[m - leftover]
        given = 0
        for i in range(m):
            if rem[i] > kth:
                freqs[i] += 1
                given += 1
        need = leftover - given
        if need > 0:
            for i in range(m):
                if rem[i] == kth:
                    freqs[i] += 1
                    need -= 1
                    if need == 0:
                        break

    acc = 0
    for i in range(m):
        if freqs[i] < 1:
            freqs[i] = 1
        acc += freqs[i]
    residual = acc - total
    if residual < 0:
        # give the shortfall to the highest-probability entry, lowest index
        best = 0
        for i in range(1, m):
            if p[i] > p[best]:
                best = i
        freqs[best] += -residual
    elif residual > 0:
        # take back from strongest entries without breaking the floor
        taken = np.zeros(m, dtype=np.uint8)
        while residual > 0:
            best = -1
            for i in range(m):
                if taken[i] == 0 and (best < 0 or p[i] > p[best]):
                    best = i
            if best < 0:
                break
            give_back = freqs[best] - 1
            if give_back > residual:
                give_back = residual
            freqs[best] -= give_back
            residual -= give_back
            taken[best] = 1

    cum[0] = 0
    for i in range(m):
        cum[i + 1] = cum[i] + freqs[i]
