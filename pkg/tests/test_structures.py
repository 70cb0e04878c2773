import numpy as np
import pytest

from conftest import EXAMPLE_SIGMA, EXAMPLE_TEXT, random_text
from wvlt.bitvec import AbsentOccurrenceError, BitVector
from wvlt.construct import build_structure
from wvlt.oracle import naive_structure
from wvlt.structures import (
    LevelWiseWaveletTree,
    WaveletMatrix,
    dump_structure,
    load_structure,
    zeros_from_histogram,
)

# the running example packed LSB-first: one word per level
WT_LEVEL_WORDS = (0x16C, 0x278, 0x136)
WM_LEVEL_WORDS = (0x16C, 0x278, 0x14E)


def test_example_golden_words():
    wt = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wt")
    wm = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wm")
    assert tuple(int(v.words[0]) for v in wt.levels) == WT_LEVEL_WORDS
    assert tuple(int(v.words[0]) for v in wm.levels) == WM_LEVEL_WORDS
    assert wm.zeros == [5, 5, 5]


def test_zeros_from_histogram_example():
    assert zeros_from_histogram([1, 2, 1, 1, 1, 1, 2, 1]) == 5
    assert zeros_from_histogram([3, 2, 2, 3]) == 5
    assert zeros_from_histogram([5, 5]) == 5


def test_zeros_from_histogram_counts_even_prefixes(rng):
    h = rng.integers(0, 100, 64)
    assert zeros_from_histogram(h) == int(h[0::2].sum())


@pytest.mark.parametrize("kind", ["wt", "wm"])
def test_queries_match_text_scans(rng, kind):
    for sigma in (2, 5, 16, 200):
        n = int(rng.integers(1, 400))
        text = random_text(rng, n, sigma)
        st = build_structure(text, sigma, kind)
        for i in range(0, n, max(n // 40, 1)):
            assert st.access(i) == int(text[i])
        for _ in range(60):
            c = int(rng.integers(0, sigma))
            i = int(rng.integers(0, n + 1))
            assert st.rank(c, i) == int(np.count_nonzero(text[:i] == c))
            hits = np.flatnonzero(text == c)
            if hits.size:
                j = int(rng.integers(1, hits.size + 1))
                assert st.select(c, j) == int(hits[j - 1])
            with pytest.raises(AbsentOccurrenceError):
                st.select(c, hits.size + 1)


@pytest.mark.parametrize("kind", ["wt", "wm"])
def test_degenerate_single_symbol_alphabet(kind):
    st = build_structure([0, 0, 0, 0], 1, kind)
    assert st.width == 0 and st.levels == []
    assert st.access(2) == 0
    assert st.rank(0, 3) == 3
    assert st.select(0, 4) == 3
    with pytest.raises(AbsentOccurrenceError):
        st.select(0, 5)
    with pytest.raises(IndexError):
        st.access(4)


@pytest.mark.parametrize("kind", ["wt", "wm"])
def test_empty_text(kind):
    st = build_structure([], 0, kind)
    assert st.n == 0 and st.sigma == 1 and st.width == 0
    assert st.rank(0, 0) == 0
    with pytest.raises(AbsentOccurrenceError):
        st.select(0, 1)
    with pytest.raises(IndexError):
        st.access(0)


def test_query_argument_validation():
    st = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wt")
    with pytest.raises(ValueError):
        st.rank(8, 0)
    with pytest.raises(ValueError):
        st.rank(-1, 0)
    with pytest.raises(IndexError):
        st.rank(0, 11)
    with pytest.raises(ValueError):
        st.select(0, 0)
    with pytest.raises(IndexError):
        st.access(-1)


def test_constructor_validation():
    with pytest.raises(ValueError):
        LevelWiseWaveletTree(4, 4, [BitVector(4)])
    with pytest.raises(ValueError):
        LevelWiseWaveletTree(4, 4, [BitVector(4), BitVector(3)])
    with pytest.raises(ValueError):
        LevelWiseWaveletTree(-1, 1, [])
    with pytest.raises(ValueError):
        LevelWiseWaveletTree(0, 0, [])
    with pytest.raises(ValueError):
        WaveletMatrix(4, 4, [BitVector(4), BitVector(4)], [1])
    with pytest.raises(ValueError):
        WaveletMatrix(4, 4, [BitVector(4), BitVector(4)], [1, 5])


def test_equality_semantics():
    wt = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wt")
    wm = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wm")
    assert wt == build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wt")
    assert not (wt == wm)
    other = WaveletMatrix(wm.n, wm.sigma, wm.levels, [0, 5, 5])
    assert wm != other


def test_support_is_cached():
    st = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wt")
    assert st.level_support(1) is st.level_support(1)


@pytest.mark.parametrize("kind", ["wt", "wm"])
def test_serialization_round_trip(rng, kind):
    for sigma in (1, 2, 5, 200, 70000):
        text = random_text(rng, int(rng.integers(0, 500)), sigma)
        st = build_structure(text, sigma, kind)
        blob = dump_structure(st)
        back = load_structure(blob)
        assert back == st
        assert dump_structure(back) == blob


def test_wire_format_layout():
    wm = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wm")
    blob = dump_structure(wm)
    assert blob[:4] == b"WVLT"
    assert blob[4] == 1 and blob[5] == 1
    assert int.from_bytes(blob[6:14], "little") == 10
    assert int.from_bytes(blob[14:22], "little") == 8
    assert int.from_bytes(blob[22:24], "little") == 3
    zeros = [int.from_bytes(blob[24 + 8 * k : 32 + 8 * k], "little") for k in range(3)]
    assert zeros == [5, 5, 5]
    # first level record: u64 bit length then one word
    assert int.from_bytes(blob[48:56], "little") == 10
    assert int.from_bytes(blob[56:64], "little") == WM_LEVEL_WORDS[0]


def test_load_rejects_malformed():
    wt = build_structure(EXAMPLE_TEXT, EXAMPLE_SIGMA, "wt")
    blob = dump_structure(wt)
    with pytest.raises(ValueError):
        load_structure(b"NOPE" + blob[4:])
    with pytest.raises(ValueError):
        load_structure(blob[:4] + bytes([9]) + blob[5:])
    with pytest.raises(ValueError):
        load_structure(blob[:5] + bytes([7]) + blob[6:])
    with pytest.raises(ValueError):
        load_structure(blob[:-4])
    with pytest.raises(ValueError):
        load_structure(blob + b"\x00")
    with pytest.raises(ValueError):
        load_structure(b"WVLT")
