"""Brute-force reference implementations.

Everything here trades speed for obviousness and shares no machinery with
the production builders: level layouts come from Python's comparison sort
over prefix strings rather than any counting sort, and queries are plain
linear scans.  Tests compare the fast paths against these.
"""

from __future__ import annotations

import numpy as np

from .bitperm import code_width
from .bitvec import AbsentOccurrenceError, BitVector

MAX_ORACLE_N = 10**6
MAX_ORACLE_SIGMA = 2**20


def _checked(text, sigma: int) -> np.ndarray:
    arr = np.asarray(text)
    if arr.ndim != 1:
        raise ValueError("text must be one-dimensional")
    if sigma == 0:
        if arr.size:
            raise ValueError("alphabet size 0 admits only the empty text")
        sigma = 1
    if sigma < 1:
        raise ValueError("alphabet size must be at least 1")
    if arr.size > MAX_ORACLE_N:
        raise ValueError("text too long for the brute-force oracle")
    if sigma > MAX_ORACLE_SIGMA:
        raise ValueError("alphabet too large for the brute-force oracle")
    if arr.size:
        if int(arr.min()) < 0 or int(arr.max()) >= sigma:
            raise ValueError(f"symbols must lie in [0, {sigma})")
    return arr


def _level_order(text, width: int, level: int, reverse: bool) -> list:
    """Text positions sorted stably by level-bit prefix.

    Keys are the prefixes written out as bit strings, compared as strings,
    so the ordering is produced by Timsort rather than by any counting.
    `reverse` flips each key string end-to-end, which ranks prefixes by
    their bit-reversed value.
    """
    n = len(text)
    if level == 0:
        return list(range(n))
    keys = []
    for v in text:
        s = format(int(v) >> (width - level), f"0{level}b")
        keys.append(s[::-1] if reverse else s)
    return sorted(range(n), key=keys.__getitem__)


def _level_bits(text, width: int, level: int, reverse: bool) -> list[int]:
    order = _level_order(text, width, level, reverse)
    shift = width - 1 - level
    return [(int(text[i]) >> shift) & 1 for i in order]


def naive_wt_levels(text, sigma: int) -> list[BitVector]:
    """Wavelet tree level bit vectors, prefix groups in numeric order."""
    arr = _checked(text, sigma)
    width = code_width(max(sigma, 1))
    return [
        BitVector.from_bits(_level_bits(arr, width, ell, reverse=False))
        for ell in range(width)
    ]


def naive_wm_levels(text, sigma: int) -> tuple[list[BitVector], list[int]]:
    """Wavelet matrix level bit vectors plus the per-level zero counts."""
    arr = _checked(text, sigma)
    width = code_width(max(sigma, 1))
    levels = []
    zeros = []
    for ell in range(width):
        bits = _level_bits(arr, width, ell, reverse=True)
        levels.append(BitVector.from_bits(bits))
        zeros.append(len(bits) - sum(bits))
    return levels, zeros


def naive_structure(text, sigma: int, kind: str = "wt"):
    """Assemble a queryable structure entirely from the oracle layouts."""
    from .structures import LevelWiseWaveletTree, WaveletMatrix

    arr = _checked(text, sigma)
    if kind == "wt":
        return LevelWiseWaveletTree(arr.size, max(sigma, 1), naive_wt_levels(arr, sigma))
    if kind == "wm":
        levels, zeros = naive_wm_levels(arr, sigma)
        return WaveletMatrix(arr.size, max(sigma, 1), levels, zeros)
    raise ValueError(f"unknown structure kind {kind!r}")


def naive_access(text, i: int) -> int:
    arr = np.asarray(text)
    if not 0 <= i < arr.size:
        raise IndexError("position out of range")
    return int(arr[i])


def naive_rank(text, c: int, i: int) -> int:
    """Occurrences of c in text[0:i]."""
    arr = np.asarray(text)
    if not 0 <= i <= arr.size:
        raise IndexError("rank prefix length out of range")
    return int(np.count_nonzero(arr[:i] == c))


def naive_select(text, c: int, j: int) -> int:
    """Position of the j-th occurrence of c (1-based j)."""
    arr = np.asarray(text)
    if j < 1:
        raise ValueError("occurrence ordinals are 1-based")
    hits = np.flatnonzero(arr == c)
    if j > hits.size:
        raise AbsentOccurrenceError(f"symbol {c} occurs only {hits.size} times")
    return int(hits[j - 1])
