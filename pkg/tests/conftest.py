"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from pcmenc.codecs import StateBatch
from pcmenc.lines import CELLS_PER_LINE, WORDS_PER_LINE, words_to_symbols


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def compressible_words(rng, n, k):
    """Random lines whose every word passes the k-MSB test."""
    mag = rng.integers(0, 1 << (62 - k), size=(n, WORDS_PER_LINE), dtype=np.uint64)
    neg = rng.random((n, WORDS_PER_LINE)) < 0.5
    return np.where(neg, np.uint64(0) - mag, mag)


def random_symbols(rng, n):
    return rng.integers(0, 4, size=(n, CELLS_PER_LINE), dtype=np.uint8)


def random_state(rng, codec, n):
    """Uniformly random stored cell states of the codec's shape."""
    flag = None
    if codec.has_flag:
        flag = rng.integers(0, 2, size=n, dtype=np.uint8)
    return StateBatch(
        rng.integers(0, 4, size=(n, CELLS_PER_LINE), dtype=np.uint8),
        rng.integers(0, 4, size=(n, codec.aux_cells), dtype=np.uint8),
        flag,
    )


def mixed_lines(rng, n, k):
    """Half uniform-random, half compressible lines, shuffled."""
    words = np.empty((n, WORDS_PER_LINE), dtype=np.uint64)
    half = n // 2
    words[:half] = rng.integers(0, 1 << 64, size=(half, WORDS_PER_LINE), dtype=np.uint64)
    words[half:] = compressible_words(rng, n - half, k)
    rng.shuffle(words, axis=0)
    return words_to_symbols(words)


def diff_cost(model, old_cells, new_cells):
    return model.cost_flat[np.asarray(old_cells).astype(np.int64) * 4 + new_cells]
