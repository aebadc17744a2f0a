"""Whole-line reference schemes: plain differential write, FNW, XOR cosets."""

from __future__ import annotations

import numpy as np

from ..lines import CELLS_PER_LINE, WORDS_PER_LINE, random_words, words_to_symbols
from ..model import EnergyModel
from .base import INV_C1, LUT_C1, LineCodec, StateBatch

# Four 128-bit invertible blocks -> 64 cells each, flip bits two per aux cell.
_FNW_BLOCKS = 4
_FNW_CELLS = CELLS_PER_LINE // _FNW_BLOCKS

XOR_MASK_COUNT = 16
DEFAULT_MASK_SEED = 0x9E3779B9


class Baseline(LineCodec):
    """Differential write of the default symbol-to-state mapping; no aux."""

    name = "baseline"
    granularity = 512

    def encode_batch(self, syms, old):
        n = len(syms)
        return StateBatch(LUT_C1[syms], np.zeros((n, 0), dtype=np.uint8), None)

    def decode_batch(self, state):
        return INV_C1[state.data]


class FlipNWrite(LineCodec):
    """Per-128-bit-block complement-or-not, whichever writes cheaper.

    The four flip bits live two per aux cell, so the exact objective couples
    blocks sharing a cell; each pair of blocks is optimized jointly over its
    four flip combinations (data energy plus the shared flip cell).  Ties
    keep the previous orientation, the earlier block taking precedence.
    """

    name = "fnw"
    granularity = 128
    aux_cells = 2

    def encode_batch(self, syms, old):
        n = len(syms)
        states_orig = LUT_C1[syms]
        states_comp = LUT_C1[syms ^ 3]
        cost_orig = self._diff_cost(old.data, states_orig).reshape(n, _FNW_BLOCKS, -1).sum(2)
        cost_comp = self._diff_cost(old.data, states_comp).reshape(n, _FNW_BLOCKS, -1).sum(2)
        block_cost = np.stack([cost_orig, cost_comp], axis=2)  # (n, 4, 2)

        prev_syms = INV_C1[old.aux]  # (n, 2), two flip bits per symbol
        prev_hi = prev_syms >> 1
        prev_lo = prev_syms & 1

        flips = np.zeros((n, _FNW_BLOCKS), dtype=np.uint8)
        aux = np.empty((n, 2), dtype=np.uint8)
        rows = np.arange(n)
        for p in range(2):
            ba, bb = 2 * p, 2 * p + 1
            keys = np.empty((n, 4), dtype=np.int64)
            for combo in range(4):
                a, b = combo >> 1, combo & 1
                aux_state = LUT_C1[(a << 1) | b]
                cell = self.model.cost_flat[old.aux[:, p].astype(np.int64) * 4 + aux_state]
                cost = block_cost[:, ba, a] + block_cost[:, bb, b] + cell
                rank = ((a ^ prev_hi[:, p]).astype(np.int64) << 1) | (b ^ prev_lo[:, p])
                keys[:, combo] = cost * 4 + rank
            best = np.argmin(keys, axis=1)
            flips[:, ba] = best >> 1
            flips[:, bb] = best & 1
            aux[:, p] = LUT_C1[(flips[:, ba] << 1) | flips[:, bb]]

        flip_cells = np.repeat(flips, _FNW_CELLS, axis=1).astype(bool)
        data = np.where(flip_cells, states_comp, states_orig)
        return StateBatch(data, aux, None)

    def decode_batch(self, state):
        prev = INV_C1[state.aux]
        flips = np.stack([prev[:, 0] >> 1, prev[:, 0] & 1, prev[:, 1] >> 1, prev[:, 1] & 1], axis=1)
        flip_cells = np.repeat(flips, _FNW_CELLS, axis=1).astype(bool)
        syms = INV_C1[state.data]
        return np.where(flip_cells, syms ^ 3, syms)


def default_masks(seed: int = DEFAULT_MASK_SEED) -> np.ndarray:
    """16 pluggable XOR masks; mask 0 is forced to zero so the scheme never
    loses to plain differential write on the data cells."""
    rng = np.random.default_rng(seed)
    while True:
        masks = random_words(rng, XOR_MASK_COUNT)
        masks[0] = 0
        if len({tuple(int(w) for w in m) for m in masks}) == XOR_MASK_COUNT:
            return masks


class XorCoset(LineCodec):
    """Whole-line XOR against the cheapest of 16 mask candidates.

    The chosen index is stored in two aux cells (four bits); selection
    minimizes data plus aux differential energy, smallest index on ties.
    """

    name = "flipmin"
    granularity = 512
    aux_cells = 2

    def __init__(self, model: EnergyModel, masks: np.ndarray | None = None):
        super().__init__(model)
        masks = default_masks() if masks is None else np.asarray(masks, dtype=np.uint64)
        if masks.shape != (XOR_MASK_COUNT, WORDS_PER_LINE):
            raise ValueError(f"need {XOR_MASK_COUNT} masks of 8 words each")
        if len({tuple(int(w) for w in m) for m in masks}) != XOR_MASK_COUNT:
            raise ValueError("mask candidates must be distinct")
        self.masks = masks
        self.mask_syms = words_to_symbols(masks)  # (16, 256)
        self.aux_syms = np.stack(
            [np.array([i >> 2, i & 3], dtype=np.uint8) for i in range(XOR_MASK_COUNT)]
        )
        self.aux_states = LUT_C1[self.aux_syms]  # (16, 2)

    def encode_batch(self, syms, old):
        n = len(syms)
        best_cost = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        best_idx = np.zeros(n, dtype=np.int64)
        for i in range(XOR_MASK_COUNT):
            states = LUT_C1[syms ^ self.mask_syms[i]]
            cost = self._diff_cost(old.data, states).sum(1)
            cost += self._diff_cost(old.aux, np.broadcast_to(self.aux_states[i], (n, 2))).sum(1)
            better = cost < best_cost
            best_cost[better] = cost[better]
            best_idx[better] = i
        data = LUT_C1[syms ^ self.mask_syms[best_idx]]
        return StateBatch(data, self.aux_states[best_idx], None)

    def decode_batch(self, state):
        aux_syms = INV_C1[state.aux]
        idx = (aux_syms[:, 0].astype(np.int64) << 2) | aux_syms[:, 1]
        return INV_C1[state.data] ^ self.mask_syms[idx]
