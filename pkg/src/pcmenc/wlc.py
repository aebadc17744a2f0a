"""Word-level compression: collapse the k uniform top bits of a word to one bit.

A 64-bit word is compressible when its k most significant bits are all 0 or
all 1.  Compression keeps the low ``65 - k`` bits (the "payload", whose top
bit doubles as the sign) and frees ``k - 1`` reclaimed bit positions at the
top of the word; decompression extends the payload's top bit back over the
reclaimed positions, like sign extension.  WLC never touches the payload
bits, so their positions (and cell values) survive compression unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

K_MIN = 2
K_MAX = 17


@dataclass(frozen=True)
class WlcConfig:
    k: int = 6

    def __post_init__(self):
        if not K_MIN <= self.k <= K_MAX:
            raise ValueError(f"k must be in [{K_MIN}, {K_MAX}], got {self.k}")

    @property
    def reclaimed_bits(self) -> int:
        return self.k - 1

    @property
    def payload_bits(self) -> int:
        return 65 - self.k


@dataclass(frozen=True)
class CompressedWord:
    """Payload plus the caller-owned reclaimed field (zero until assigned)."""

    payload: int
    reclaimed: int = 0


def words_compressible(words, k: int) -> np.ndarray:
    """Vectorized compressibility test over a (..., ) uint64 word array."""
    words = np.asarray(words, dtype=np.uint64)
    top = words >> np.uint64(64 - k)
    full = np.uint64((1 << k) - 1)
    return (top == 0) | (top == full)


def word_compressible(word: int, cfg: WlcConfig) -> bool:
    top = word >> (64 - cfg.k)
    return top == 0 or top == (1 << cfg.k) - 1


def line_compressible(words, cfg: WlcConfig) -> bool:
    """True when all eight words of a line pass the k-MSB test."""
    return bool(np.all(words_compressible(words, cfg.k)))


def compress_word(word: int, cfg: WlcConfig) -> CompressedWord:
    if not word_compressible(word, cfg):
        raise ValueError(f"word 0x{word:016x} is not compressible at k={cfg.k}")
    return CompressedWord(payload=word & ((1 << cfg.payload_bits) - 1))


def decompress_word(cw: CompressedWord, cfg: WlcConfig) -> int:
    sign = (cw.payload >> (cfg.payload_bits - 1)) & 1
    word = cw.payload & ((1 << cfg.payload_bits) - 1)
    if sign:
        word |= ((1 << cfg.reclaimed_bits) - 1) << cfg.payload_bits
    return word


def sign_extend_words(words, k: int) -> np.ndarray:
    """Vectorized decompression: rewrite the top k bits from the sign bit."""
    words = np.asarray(words, dtype=np.uint64)
    payload_mask = np.uint64((1 << (65 - k)) - 1)
    top_mask = np.uint64(((1 << (k - 1)) - 1) << (65 - k))
    sign = (words >> np.uint64(64 - k)) & np.uint64(1)
    return (words & payload_mask) | (top_mask * sign)
