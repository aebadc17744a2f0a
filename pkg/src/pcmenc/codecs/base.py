"""Shared codec machinery: encoded-line state, block maps, the codec base class.

All encoders are pure functions of (new line, stored cell states, config).
They run batch-first: symbol arrays are ``(n, 256)`` and cell-state arrays
``(n, cells)``, so a test or sweep can push 10^5 lines through one call.
Single-line convenience wrappers operate on 512-bit ints.

The physical cell order of a line is ``data ++ aux ++ flag``; metrics and
the disturbance model rely on that ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lines import CELLS_PER_LINE, int_to_symbols, symbols_to_int
from ..model import C1, CellState, EnergyModel

REGION_DATA = 0
REGION_AUX = 1
REGION_FLAG = 2

FLAG_COMPRESSED = int(CellState.S1)
FLAG_RAW = int(CellState.S2)

LUT_C1 = np.array(C1.states, dtype=np.uint8)
INV_C1 = np.array(C1.symbols, dtype=np.uint8)


class DecodeError(ValueError):
    """Stored cells are not a well-formed encoding for the scheme."""


@dataclass
class EncodedLine:
    """Cell states of one stored line: 256 data cells, scheme aux cells, flag."""

    data: np.ndarray
    aux: np.ndarray
    flag: int | None = None

    def cells(self) -> np.ndarray:
        parts = [self.data, self.aux]
        if self.flag is not None:
            parts.append(np.array([self.flag], dtype=np.uint8))
        return np.concatenate(parts)

    @property
    def n_cells(self) -> int:
        return len(self.data) + len(self.aux) + (self.flag is not None)


@dataclass
class StateBatch:
    """Column-wise stored state for a batch of lines."""

    data: np.ndarray            # (n, 256) uint8
    aux: np.ndarray             # (n, A) uint8
    flag: np.ndarray | None     # (n,) uint8

    def __len__(self) -> int:
        return len(self.data)

    def cells(self) -> np.ndarray:
        parts = [self.data, self.aux]
        if self.flag is not None:
            parts.append(self.flag[:, None])
        return np.concatenate(parts, axis=1)

    def line(self, i: int) -> EncodedLine:
        flag = None if self.flag is None else int(self.flag[i])
        return EncodedLine(self.data[i].copy(), self.aux[i].copy(), flag)

    @classmethod
    def from_lines(cls, lines, has_flag: bool) -> "StateBatch":
        data = np.stack([l.data for l in lines])
        aux = np.stack([l.aux for l in lines])
        flag = np.array([l.flag for l in lines], dtype=np.uint8) if has_flag else None
        return cls(data, aux, flag)


class BlockMap:
    """A fixed partition of some line cells into per-block cost groups.

    Cells outside every block (aux-carrying cells of compressed layouts) get
    block id -1 and never contribute to selection costs.
    """

    def __init__(self, blocks, n_cells: int = CELLS_PER_LINE):
        self.n_cells = n_cells
        self.n_blocks = len(blocks)
        width = max(len(b) for b in blocks)
        # Gather matrix padded with a dummy index; costs get a zero column
        # appended so padding sums to nothing.
        gather = np.full((self.n_blocks, width), n_cells, dtype=np.int64)
        cell_block = np.full(n_cells, -1, dtype=np.int64)
        for j, cells in enumerate(blocks):
            gather[j, : len(cells)] = cells
            cell_block[np.asarray(cells, dtype=np.int64)] = j
        self.gather = gather
        self.cell_block = cell_block
        self.block_sizes = np.array([len(b) for b in blocks], dtype=np.int64)

    def block_sums(self, per_cell: np.ndarray) -> np.ndarray:
        """Sum an (n, cells) int array per block -> (n, n_blocks)."""
        ext = np.concatenate(
            [per_cell, np.zeros((per_cell.shape[0], 1), dtype=per_cell.dtype)], axis=1
        )
        return ext[:, self.gather].sum(axis=2)

    def expand(self, per_block: np.ndarray, fill) -> np.ndarray:
        """Broadcast (n, n_blocks) values back onto cells; `fill` elsewhere."""
        safe = np.maximum(self.cell_block, 0)
        vals = per_block[:, safe]
        return np.where(self.cell_block[None, :] >= 0, vals, fill)


def contiguous_blocks(granularity_bits: int, n_cells: int = CELLS_PER_LINE):
    """Equal contiguous cell blocks for a plain g-bit partition of the line."""
    cells_per_block = granularity_bits // 2
    if granularity_bits % 2 or n_cells * 2 % granularity_bits:
        raise ValueError(f"granularity {granularity_bits} does not divide the line")
    n_blocks = n_cells * 2 // granularity_bits
    return [
        np.arange(j * cells_per_block, (j + 1) * cells_per_block)
        for j in range(n_blocks)
    ]


class LineCodec:
    """Base class: shape bookkeeping plus single-line wrappers."""

    name = "?"
    granularity = 512
    aux_cells = 0
    has_flag = False

    def __init__(self, model: EnergyModel):
        self.model = model

    @property
    def total_cells(self) -> int:
        return CELLS_PER_LINE + self.aux_cells + (1 if self.has_flag else 0)

    def describe(self) -> dict:
        return {"scheme": self.name, "granularity": self.granularity}

    # -- batch API ---------------------------------------------------------

    def initial_batch(self, n: int) -> StateBatch:
        """The never-written state: every cell in S1 (decodes to all-zero)."""
        data = np.zeros((n, CELLS_PER_LINE), dtype=np.uint8)
        aux = np.zeros((n, self.aux_cells), dtype=np.uint8)
        flag = np.zeros(n, dtype=np.uint8) if self.has_flag else None
        return StateBatch(data, aux, flag)

    def encode_batch(self, syms: np.ndarray, old: StateBatch) -> StateBatch:
        raise NotImplementedError

    def decode_batch(self, state: StateBatch) -> np.ndarray:
        raise NotImplementedError

    def region_labels(self, state: StateBatch) -> np.ndarray:
        """(n, cells) region of every physical cell for metric attribution."""
        n = len(state)
        labels = np.full((n, self.total_cells), REGION_DATA, dtype=np.uint8)
        if self.aux_cells:
            labels[:, CELLS_PER_LINE : CELLS_PER_LINE + self.aux_cells] = REGION_AUX
        if self.has_flag:
            labels[:, -1] = REGION_FLAG
        return labels

    # -- single-line API ---------------------------------------------------

    def initial_line(self) -> EncodedLine:
        return self.initial_batch(1).line(0)

    def encode(self, new: int, old: EncodedLine | None = None) -> EncodedLine:
        olds = (
            self.initial_batch(1)
            if old is None
            else StateBatch.from_lines([old], self.has_flag)
        )
        return self.encode_batch(int_to_symbols(new)[None, :], olds).line(0)

    def decode(self, enc: EncodedLine) -> int:
        syms = self.decode_batch(StateBatch.from_lines([enc], self.has_flag))
        return symbols_to_int(syms[0])

    # -- helpers -----------------------------------------------------------

    def _diff_cost(self, old_cells: np.ndarray, new_cells: np.ndarray) -> np.ndarray:
        """Per-cell differential write cost in integer energy units."""
        idx = old_cells.astype(np.int64) * 4 + new_cells
        return self.model.cost_flat[idx]
