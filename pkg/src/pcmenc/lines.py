"""Conversions between 512-bit memory lines, 64-bit words, and 2-bit symbols.

A line is eight 64-bit words, word 0 most significant.  Each word splits
big-endian into 32 consecutive 2-bit symbols: symbol ``j`` of a word holds
bits ``(b[63-2j], b[62-2j])``.  Batched layouts put the line axis first:
words are ``(..., 8)`` uint64, symbols ``(..., 256)`` uint8.
"""

from __future__ import annotations

import numpy as np

LINE_BITS = 512
LINE_BYTES = 64
WORDS_PER_LINE = 8
CELLS_PER_WORD = 32
CELLS_PER_LINE = 256

_SYM_SHIFTS = (62 - 2 * np.arange(CELLS_PER_WORD, dtype=np.uint64)).astype(np.uint64)
_WORD_MASK = (1 << 64) - 1


def words_to_symbols(words) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint64)
    syms = (words[..., :, None] >> _SYM_SHIFTS) & np.uint64(3)
    return syms.astype(np.uint8).reshape(*words.shape[:-1], CELLS_PER_LINE)

def symbols_to_words(syms) -> np.ndarray:
    syms = np.asarray(syms, dtype=np.uint64)
    parts = syms.reshape(*syms.shape[:-1], WORDS_PER_LINE, CELLS_PER_WORD)
    return np.bitwise_or.reduce(parts << _SYM_SHIFTS, axis=-1)


def int_to_words(value: int) -> np.ndarray:
    if not 0 <= value < (1 << LINE_BITS):
        raise ValueError("memory line value must fit in 512 bits")
    return np.array(
        [(value >> (64 * (WORDS_PER_LINE - 1 - i))) & _WORD_MASK
         for i in range(WORDS_PER_LINE)],
        dtype=np.uint64,
    )


def words_to_int(words) -> int:
    value = 0
    for w in np.asarray(words, dtype=np.uint64):
        value = (value << 64) | int(w)
    return value


def int_to_symbols(value: int) -> np.ndarray:
    return words_to_symbols(int_to_words(value))


def symbols_to_int(syms) -> int:
    return words_to_int(symbols_to_words(syms))


def hex_to_int(text: str) -> int:
    text = text.strip()
    if len(text) != LINE_BYTES * 2:
        raise ValueError(f"expected {LINE_BYTES * 2} hex chars, got {len(text)}")
    return int(text, 16)


def int_to_hex(value: int) -> str:
    return f"{value:0{LINE_BYTES * 2}x}"


def bytes_to_words(data: bytes) -> np.ndarray:
    if len(data) != LINE_BYTES:
        raise ValueError(f"expected {LINE_BYTES} bytes, got {len(data)}")
    return np.frombuffer(data, dtype=">u8").astype(np.uint64)


def words_to_bytes(words) -> bytes:
    return np.asarray(words, dtype=np.uint64).astype(">u8").tobytes()


def random_words(rng: np.random.Generator, n: int) -> np.ndarray:
    """n uniformly random lines as a (n, 8) word array."""
    return rng.integers(0, 1 << 64, size=(n, WORDS_PER_LINE), dtype=np.uint64)
