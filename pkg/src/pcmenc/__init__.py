"""Write-energy-reducing codecs and a trace-driven write simulator for
4-level-cell phase-change memory."""

from .codecs import (
    DecodeError,
    EncodedLine,
    StateBatch,
    brute_force_best,
    make_codec,
    scheme_names,
)
from .memsim import MemoryArray, WriteRecord
from .model import (
    CandidateTable,
    CellState,
    CosetCandidate,
    DisturbanceModel,
    EnergyModel,
    TABLE_3COSETS,
    TABLE_4COSETS,
    TABLE_6COSETS,
    apply_coset,
    cell_write_energy,
    default_map,
    invert_coset,
    load_models,
)
from .wlc import WlcConfig, compress_word, decompress_word, line_compressible, word_compressible
from .workloads import GeneratorSpec, generate, read_trace, write_trace

__version__ = "0.1.0"

__all__ = [
    "CandidateTable",
    "CellState",
    "CosetCandidate",
    "DecodeError",
    "DisturbanceModel",
    "EncodedLine",
    "EnergyModel",
    "GeneratorSpec",
    "MemoryArray",
    "StateBatch",
    "TABLE_3COSETS",
    "TABLE_4COSETS",
    "TABLE_6COSETS",
    "WlcConfig",
    "WriteRecord",
    "apply_coset",
    "brute_force_best",
    "cell_write_energy",
    "compress_word",
    "decompress_word",
    "default_map",
    "generate",
    "invert_coset",
    "line_compressible",
    "load_models",
    "make_codec",
    "read_trace",
    "scheme_names",
    "word_compressible",
    "write_trace",
]
