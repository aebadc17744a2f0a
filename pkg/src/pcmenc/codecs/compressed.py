"""Compression-integrated codecs: restricted and unrestricted cosets inside
word-level-compressed lines.

When a line passes the k-MSB test, every word's reclaimed top bits carry the
coset bookkeeping for that word's payload blocks and a single extra flag
cell marks the line "compressed" (S1).  Lines that fail the test are stored
raw under the default mapping with the flag at S2, so the format costs one
cell per line (257 total, < 0.4% overhead).

Cells that carry reclaimed bits (including a cell shared between the last
reclaimed bit and the payload's top bit, when k-1 is odd) are always written
under the default mapping so the decoder can read the bookkeeping first;
they are excluded from selection costs and attributed to the aux region in
reports.  Payload blocks are delimited at absolute multiples of the
granularity, leaving a short most-significant block.
"""

from __future__ import annotations

import numpy as np

from ..lines import CELLS_PER_LINE, CELLS_PER_WORD, WORDS_PER_LINE, symbols_to_words, words_to_symbols
from ..model import CandidateTable, EnergyModel, TABLE_3COSETS, _as_fraction
from ..wlc import sign_extend_words, words_compressible
from .base import (
    BlockMap,
    DecodeError,
    FLAG_COMPRESSED,
    FLAG_RAW,
    INV_C1,
    LUT_C1,
    LineCodec,
    REGION_AUX,
    REGION_DATA,
    REGION_FLAG,
    StateBatch,
)

# Reclaimed-bit budget per word for each scheme family at each granularity.
WLCRC_K = {8: 9, 16: 6, 32: 4, 64: 3}
WLC_TABLE_K = {8: 17, 16: 9, 32: 5, 64: 3}

_WORD_STARTS = CELLS_PER_WORD * np.arange(WORDS_PER_LINE)


class _WlcLayout:
    """Cell/bit geometry of one compressed word at a given (k, granularity)."""

    def __init__(self, k: int, granularity: int, sel_bits_per_block: int, restricted: bool):
        if granularity not in (8, 16, 32, 64):
            raise ValueError(f"compressed codecs support g in 8/16/32/64, got {granularity}")
        self.k = k
        self.g = granularity
        payload_bits = 65 - k
        self.n_blocks = -(-payload_bits // granularity)
        need = 1 + self.n_blocks if restricted else sel_bits_per_block * self.n_blocks
        if need > k - 1:
            raise ValueError(
                f"k={k} reclaims {k - 1} bits/word but g={granularity} needs {need}"
            )
        self.aux_bits_used = need

        # Cells holding any reclaimed bit; when k-1 is odd the last one is
        # shared with the payload's top bit.
        self.aux_cells_word = list(range(-(-(k - 1) // 2)))
        self.shared_cell = self.aux_cells_word[-1] if (k - 1) % 2 else None

        # Payload blocks, most-significant first, bounded at g-bit multiples.
        self.block_cells_word = []
        for j in range(self.n_blocks):
            lo = granularity * (self.n_blocks - 1 - j)
            hi = min(64 - k, granularity * (self.n_blocks - j) - 1)
            cells = [c for c in range(CELLS_PER_WORD) if lo <= 62 - 2 * c and 63 - 2 * c <= hi]
            self.block_cells_word.append(cells)

        blocks_abs = [
            np.array(cells, dtype=np.int64) + start
            for start in _WORD_STARTS
            for cells in self.block_cells_word
        ]
        self.blockmap = BlockMap(blocks_abs)
        self.aux_cols = {c: _WORD_STARTS + c for c in self.aux_cells_word}
        self.aux_cols_flat = np.concatenate(
            [self.aux_cols[c] for c in self.aux_cells_word]
        )


class _WlcCodecBase(LineCodec):
    has_flag = True

    def __init__(self, model: EnergyModel, table: CandidateTable, k: int, granularity: int,
                 sel_bits: int, restricted: bool):
        super().__init__(model)
        self.table = table
        self.k = k
        self.granularity = granularity
        self.layout = _WlcLayout(k, granularity, sel_bits, restricted)

    def describe(self) -> dict:
        return {"scheme": self.name, "granularity": self.granularity, "k": self.k}

    # -- framework ----------------------------------------------------------

    def encode_batch(self, syms, old):
        syms = np.asarray(syms, dtype=np.uint8)
        n = len(syms)
        data = np.empty((n, CELLS_PER_LINE), dtype=np.uint8)
        flag = np.empty(n, dtype=np.uint8)
        words = symbols_to_words(syms)
        comp = words_compressible(words, self.k).all(axis=1)
        raw = ~comp
        if raw.any():
            data[raw] = LUT_C1[syms[raw]]
            flag[raw] = FLAG_RAW
        if comp.any():
            data[comp] = self._encode_compressed(syms[comp], old.data[comp])
            flag[comp] = FLAG_COMPRESSED
        return StateBatch(data, np.zeros((n, 0), dtype=np.uint8), flag)

    def decode_batch(self, state):
        bad = (state.flag != FLAG_COMPRESSED) & (state.flag != FLAG_RAW)
        if bad.any():
            i = int(np.argmax(bad))
            raise DecodeError(f"line {i}: flag cell holds state {state.flag[i] + 1}, not S1/S2")
        n = len(state)
        syms = np.empty((n, CELLS_PER_LINE), dtype=np.uint8)
        raw = state.flag == FLAG_RAW
        comp = ~raw
        if raw.any():
            syms[raw] = INV_C1[state.data[raw]]
        if comp.any():
            syms[comp] = self._decode_compressed(state.data[comp])
        return syms

    def region_labels(self, state):
        labels = np.full((len(state), self.total_cells), REGION_DATA, dtype=np.uint8)
        comp_rows = np.flatnonzero(state.flag == FLAG_COMPRESSED)
        labels[np.ix_(comp_rows, self.layout.aux_cols_flat)] = REGION_AUX
        labels[:, -1] = REGION_FLAG
        return labels

    # -- shared pieces -------------------------------------------------------

    def _block_costs(self, syms, old_data):
        """(n_cand, n, 8, nb) differential energy over selection cells only."""
        nb = self.layout.n_blocks
        n = len(syms)
        return np.stack(
            [
                self.layout.blockmap.block_sums(self._diff_cost(old_data, lut[syms]))
                .reshape(n, WORDS_PER_LINE, nb)
                for lut in self.table.luts
            ]
        )

    def _aux_symbols(self, aux_bits, syms):
        """Symbols of the reclaimed-bit cells; dict cell -> (n, 8) values.

        aux_bits is (n, 8, k-1), most significant reclaimed position first.
        The shared cell keeps the original payload bit in its low half.
        """
        out = {}
        for c in self.layout.aux_cells_word:
            hi = aux_bits[..., 2 * c]
            if c == self.layout.shared_cell:
                lo = syms[:, self.layout.aux_cols[c]] & 1
            else:
                lo = aux_bits[..., 2 * c + 1]
            out[c] = (hi << 1) | lo
        return out

    def _aux_bit_planes(self, data):
        """Inverse of _aux_symbols: (n, 8, k-1) reclaimed bits from stored cells."""
        n = len(data)
        bits = np.zeros((n, WORDS_PER_LINE, self.k - 1), dtype=np.uint8)
        for c in self.layout.aux_cells_word:
            sym = INV_C1[data[:, self.layout.aux_cols[c]]]
            bits[..., 2 * c] = sym >> 1
            if c != self.layout.shared_cell:
                bits[..., 2 * c + 1] = sym & 1
        return bits

    def _assemble(self, syms, aux_bits, cand):
        """Write-out: aux cells under C1, block cells under their candidate."""
        syms_out = syms.copy()
        aux_syms = self._aux_symbols(aux_bits, syms)
        for c, vals in aux_syms.items():
            syms_out[:, self.layout.aux_cols[c]] = vals
        nb = self.layout.n_blocks
        cand_cells = self.layout.blockmap.expand(
            cand.reshape(len(syms), WORDS_PER_LINE * nb), 0
        )
        return self.table.luts[cand_cells, syms_out], aux_syms

    def _disassemble(self, data, cand):
        nb = self.layout.n_blocks
        cand_cells = self.layout.blockmap.expand(
            cand.reshape(len(data), WORDS_PER_LINE * nb), 0
        )
        syms = self.table.inv_luts[cand_cells, data]
        words = sign_extend_words(symbols_to_words(syms), self.k)
        return words_to_symbols(words)


class Wlcrc(_WlcCodecBase):
    """Restricted cosets in compressed words; per word one group bit selects
    {C1,C2} or {C1,C3} and one bit per payload block picks within the group.

    With a threshold t > 0, words whose group costs differ by less than
    t * max(cost) are decided by updated-cell count instead of energy
    (energy second, then {C1,C2}); t = 0 reproduces the pure energy choice.
    """

    name = "wlcrc"

    def __init__(self, model: EnergyModel, granularity: int = 16, k: int | None = None,
                 threshold=0):
        k = WLCRC_K[granularity] if k is None else k
        super().__init__(model, TABLE_3COSETS, k, granularity, 1, restricted=True)
        t = _as_fraction(threshold)
        if t < 0:
            raise ValueError("threshold must be nonnegative")
        self.threshold = t
        if t:
            self.name = "wlcrc-mo"

    def describe(self) -> dict:
        d = super().describe()
        if self.threshold:
            d["threshold_t"] = float(self.threshold)
        return d

    def _pick_groups(self, syms, old_data, bc):
        """Per-word group choice -> (grp, sel12, sel13), grp True = {C1,C3}."""
        sel12 = bc[1] < bc[0]
        sel13 = bc[2] < bc[0]
        c12 = np.minimum(bc[0], bc[1]).sum(2)
        c13 = np.minimum(bc[0], bc[2]).sum(2)
        grp = c13 < c12
        if not self.threshold:
            return grp, sel12, sel13

        # Updated-cell counts for each group hypothesis: committed payload
        # blocks plus this word's reclaimed cells.
        ub = np.stack(
            [
                self.layout.blockmap.block_sums(
                    (lut[syms] != old_data).astype(np.int64)
                ).reshape(len(syms), WORDS_PER_LINE, self.layout.n_blocks)
                for lut in self.table.luts
            ]
        )
        u12 = np.where(sel12, ub[1], ub[0]).sum(2)
        u13 = np.where(sel13, ub[2], ub[0]).sum(2)
        for hyp, (sel, u) in enumerate(((sel12, u12), (sel13, u13))):
            bits = self._group_bits(np.full(sel.shape[:2], hyp, dtype=np.uint8), sel)
            for c, vals in self._aux_symbols(bits, syms).items():
                cols = self.layout.aux_cols[c]
                u += (LUT_C1[vals] != old_data[:, cols]).astype(np.int64)

        tnum, tden = self.threshold.numerator, self.threshold.denominator
        near = np.abs(c12 - c13) * tden < tnum * np.maximum(c12, c13)
        by_cells = (u13 < u12) | ((u13 == u12) & (c13 < c12))
        return np.where(near, by_cells, grp), sel12, sel13

    def _group_bits(self, grp, sel):
        """(n, 8, k-1) reclaimed bits: group bit then one selection per block."""
        bits = np.zeros((*grp.shape, self.k - 1), dtype=np.uint8)
        bits[..., 0] = grp
        bits[..., 1 : 1 + self.layout.n_blocks] = sel
        return bits

    def _encode_compressed(self, syms, old_data):
        bc = self._block_costs(syms, old_data)
        grp, sel12, sel13 = self._pick_groups(syms, old_data, bc)
        sel = np.where(grp[..., None], sel13, sel12)
        cand = sel.astype(np.int64) * (1 + grp[..., None].astype(np.int64))
        bits = self._group_bits(grp.astype(np.uint8), sel.astype(np.uint8))
        data, _ = self._assemble(syms, bits, cand)
        return data

    def _decode_compressed(self, data):
        bits = self._aux_bit_planes(data)
        grp = bits[..., 0].astype(np.int64)
        sel = bits[..., 1 : 1 + self.layout.n_blocks].astype(np.int64)
        cand = sel * (1 + grp[..., None])
        return self._disassemble(data, cand)


class WlcTable(_WlcCodecBase):
    """Unrestricted table cosets in compressed words; each payload block
    stores its candidate id as two reclaimed bits."""

    def __init__(self, model: EnergyModel, table: CandidateTable = None,
                 granularity: int = 32, k: int | None = None):
        table = TABLE_3COSETS if table is None else table
        k = WLC_TABLE_K[granularity] if k is None else k
        super().__init__(model, table, k, granularity, table.sel_bits, restricted=False)
        self.name = f"wlc-{table.name}"
        if table.sel_bits != 2:
            raise ValueError("WlcTable packs two selection bits per block")

    def _encode_compressed(self, syms, old_data):
        cand = np.argmin(self._block_costs(syms, old_data), axis=0)
        bits = np.zeros((*cand.shape[:2], self.k - 1), dtype=np.uint8)
        nb = self.layout.n_blocks
        bits[..., 0 : 2 * nb : 2] = cand >> 1
        bits[..., 1 : 2 * nb + 1 : 2] = cand & 1
        data, _ = self._assemble(syms, bits, cand)
        return data

    def _decode_compressed(self, data):
        bits = self._aux_bit_planes(data)
        nb = self.layout.n_blocks
        cand = (bits[..., 0 : 2 * nb : 2].astype(np.int64) << 1) | bits[..., 1 : 2 * nb + 1 : 2]
        if (cand >= len(self.table)).any():
            i = int(np.argmax((cand >= len(self.table)).any(axis=(1, 2))))
            raise DecodeError(
                f"line {i}: selection bits name candidate outside the "
                f"{self.table.name} table"
            )
        return self._disassemble(data, cand)
