"""Block-granular coset codecs over uncompressed lines.

Each g-bit data block is independently remapped by the candidate that
minimizes its differential data-cell energy; aux cells record the choice.
Aux-cell transitions are accounted in metrics but excluded from selection.
Ties always take the smallest candidate id, which makes re-encoding an
unchanged value a strict no-op.
"""

from __future__ import annotations

import math

import numpy as np

from ..model import CandidateTable, EnergyModel, TABLE_3COSETS, TABLE_6COSETS
from .base import (
    BlockMap,
    DecodeError,
    INV_C1,
    LUT_C1,
    LineCodec,
    StateBatch,
    contiguous_blocks,
)


class _BlockCosetCodec(LineCodec):
    """Common candidate-selection loop for table-driven block codecs."""

    def __init__(self, model: EnergyModel, table: CandidateTable, granularity: int):
        super().__init__(model)
        self.table = table
        self.granularity = granularity
        self.blockmap = BlockMap(contiguous_blocks(granularity))
        self.n_blocks = self.blockmap.n_blocks

    def _block_costs(self, syms, old_data):
        """(n_cand, n, n_blocks) differential data energy per candidate."""
        return np.stack(
            [
                self.blockmap.block_sums(self._diff_cost(old_data, lut[syms]))
                for lut in self.table.luts
            ]
        )

    def _assemble(self, syms, cand):
        cand_cells = self.blockmap.expand(cand, 0)
        return self.table.luts[cand_cells, syms]

    def _disassemble(self, data, cand):
        cand_cells = self.blockmap.expand(cand, 0)
        return self.table.inv_luts[cand_cells, data]


class SixCosets(_BlockCosetCodec):
    """Six pair-to-cheap-states candidates, two aux cells per block."""

    name = "6cosets"

    def __init__(self, model: EnergyModel, granularity: int = 512):
        super().__init__(model, TABLE_6COSETS, granularity)
        self.aux_cells = 2 * self.n_blocks
        lookup = np.full(16, -1, dtype=np.int64)
        for i, (a, b) in enumerate(self.table.aux_luts):
            lookup[int(a) * 4 + int(b)] = i
        self._combo_lookup = lookup

    def encode_batch(self, syms, old):
        cand = np.argmin(self._block_costs(syms, old.data), axis=0)
        aux = self.table.aux_luts[cand].reshape(len(syms), self.aux_cells)
        return StateBatch(self._assemble(syms, cand), aux, None)

    def decode_batch(self, state):
        pairs = state.aux.reshape(len(state), self.n_blocks, 2).astype(np.int64)
        cand = self._combo_lookup[pairs[..., 0] * 4 + pairs[..., 1]]
        if (cand < 0).any():
            line, block = np.argwhere(cand < 0)[0]
            raise DecodeError(
                f"line {line}: aux pair of block {block} is not a valid candidate code"
            )
        return self._disassemble(state.data, cand)


class TableCosets(_BlockCosetCodec):
    """Unrestricted 4cosets/3cosets: one aux cell per block, state = candidate."""

    def __init__(self, model: EnergyModel, table: CandidateTable, granularity: int = 16):
        if table.aux_width != 1:
            raise ValueError("TableCosets needs a single-aux-cell candidate table")
        super().__init__(model, table, granularity)
        self.name = table.name
        self.aux_cells = self.n_blocks
        lookup = np.full(4, -1, dtype=np.int64)
        for i, (state,) in enumerate(self.table.aux_luts):
            lookup[int(state)] = i
        self._state_lookup = lookup

    def encode_batch(self, syms, old):
        cand = np.argmin(self._block_costs(syms, old.data), axis=0)
        aux = self.table.aux_luts[cand, 0]
        return StateBatch(self._assemble(syms, cand), aux, None)

    def decode_batch(self, state):
        cand = self._state_lookup[state.aux.astype(np.int64)]
        if (cand < 0).any():
            line, block = np.argwhere(cand < 0)[0]
            raise DecodeError(
                f"line {line}: aux state of block {block} is outside the "
                f"{self.table.name} aux alphabet"
            )
        return self._disassemble(state.data, cand)


class RestrictedLine(_BlockCosetCodec):
    """Line-level restricted cosets: every block picks within one shared group.

    The whole line is costed under group {C1,C2} and under {C1,C3}; the
    cheaper group wins (tie: {C1,C2}).  Aux data shrinks to one global group
    bit plus one bit per block, packed two bits per cell under the default
    mapping.
    """

    name = "3rcosets"

    def __init__(self, model: EnergyModel, granularity: int = 16):
        super().__init__(model, TABLE_3COSETS, granularity)
        self.aux_bits = 1 + self.n_blocks
        self.aux_cells = math.ceil(self.aux_bits / 2)

    def encode_batch(self, syms, old):
        n = len(syms)
        bc = self._block_costs(syms, old.data)
        sel12 = bc[1] < bc[0]
        sel13 = bc[2] < bc[0]
        c12 = np.minimum(bc[0], bc[1]).sum(1)
        c13 = np.minimum(bc[0], bc[2]).sum(1)
        grp = c13 < c12
        sel = np.where(grp[:, None], sel13, sel12)
        cand = sel.astype(np.int64) * (1 + grp[:, None].astype(np.int64))

        bits = np.zeros((n, 2 * self.aux_cells), dtype=np.uint8)
        bits[:, 0] = grp
        bits[:, 1 : 1 + self.n_blocks] = sel
        aux = LUT_C1[(bits[:, 0::2] << 1) | bits[:, 1::2]]
        return StateBatch(self._assemble(syms, cand), aux, None)

    def decode_batch(self, state):
        aux_syms = INV_C1[state.aux]
        bits = np.empty((len(state), 2 * self.aux_cells), dtype=np.uint8)
        bits[:, 0::2] = aux_syms >> 1
        bits[:, 1::2] = aux_syms & 1
        grp = bits[:, 0].astype(np.int64)
        sel = bits[:, 1 : 1 + self.n_blocks].astype(np.int64)
        cand = sel * (1 + grp[:, None])
        return self._disassemble(state.data, cand)
