"""Pure numpy/Python versions of the compiled kernels, same signatures and results."""

from __future__ import annotations

from bisect import bisect_right

import numpy as np

_LOW_SPLIT = 12


def fwht_int64(a: np.ndarray) -> None:
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = lo - v[:, 1, :]
        h *= 2


def mobius_u8(a: np.ndarray) -> None:
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        v[:, 1, :] ^= v[:, 0, :]
        h *= 2


def _span_table(gens: np.ndarray) -> np.ndarray:
    """All 2^g combinations of the generator rows, row index = combination mask."""
    g, w = gens.shape
    table = np.zeros((1 << g, w), dtype=np.uint64)
    for r in range(g):
        size = 1 << r
        table[size:2 * size] = table[:size] ^ gens[r]
    return table


def gray_min_distance(target: np.ndarray, gens: np.ndarray):
    g = gens.shape[0]
    if g >= 63:
        raise ValueError("too many generators")
    lo = min(g, _LOW_SPLIT)
    low = _span_table(gens[:lo]) ^ target
    high = _span_table(gens[lo:])
    best, best_mask = None, 0
    for h in range(high.shape[0]):
        dist = np.bitwise_count(low ^ high[h]).sum(axis=1, dtype=np.int64)
        i = int(np.argmin(dist))
        if best is None or dist[i] < best:
            best, best_mask = int(dist[i]), (h << lo) | i
    # the compiled kernel reports a Gray index; convert the mask to match
    j, m = 0, best_mask
    while m:
        j ^= m
        m >>= 1
    return best, j


def residual_update(R: np.ndarray, b: np.ndarray, word: int, bit) -> list:
    idx = np.flatnonzero(R[:, word] & np.uint64(bit))
    if idx.size == 0:
        return []
    R[idx] ^= b
    return idx[~R[idx].any(axis=1)].tolist()


def lnds_length(v: np.ndarray) -> int:
    tails: list = []
    for x in v.tolist():
        i = bisect_right(tails, x)
        if i == len(tails):
            tails.append(x)
        else:
            tails[i] = x
    return len(tails)


def lipschitz_keep(v: np.ndarray) -> int:
    n = v.shape[0]
    if n == 0:
        return 0
    best = np.ones(n, dtype=np.int64)
    pos = np.arange(n)
    for j in range(1, n):
        ok = np.abs(v[j] - v[:j]) <= (j - pos[:j])
        if ok.any():
            best[j] = best[:j][ok].max() + 1
    return int(best.max())
