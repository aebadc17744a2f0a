"""Trace file formats and synthetic workload generators.

Binary trace format (all integers little-endian):

    header:  magic "PCMT" | version u16 | flags u16 (bit0 = has_old) | count u64
    record:  address u64 | new value 64 bytes | [old value 64 bytes]

Line values are stored big-endian (most significant byte first, matching the
hex form).  A one-record-per-line text format ("addr_hex new_hex [old_hex]")
is also supported for hand-written vectors.

Generators are deterministic for a fixed seed.  The biased generator emits,
with probability p per 64-bit word, a value whose top k bits are uniform
(an all-zero word or a sign-extended small integer); the remaining words are
uniform random, re-drawn so they never pass the k-MSB test.  That makes p
exactly the per-word compressibility at the generator's k, so eight-word
line compressibility is p**8.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lines import LINE_BYTES, WORDS_PER_LINE, words_to_int
from .memsim import WriteRecord
from .wlc import words_compressible

TRACE_MAGIC = b"PCMT"
TRACE_VERSION = 1
_HEADER = struct.Struct("<4sHHQ")
_RECENT_WINDOW = 64


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TraceInfo:
    version: int
    count: int
    has_old: bool


def _read_header(f, path) -> TraceInfo:
    raw = f.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise TraceFormatError(f"{path}: truncated header")
    magic, version, flags, count = _HEADER.unpack(raw)
    if magic != TRACE_MAGIC:
        raise TraceFormatError(f"{path}: bad magic {magic!r}")
    if version != TRACE_VERSION:
        raise TraceFormatError(f"{path}: unsupported version {version}")
    return TraceInfo(version, count, bool(flags & 1))


def trace_info(path) -> TraceInfo:
    with open(path, "rb") as f:
        return _read_header(f, path)


def read_trace(path):
    """Stream WriteRecords from a binary trace file."""
    with open(path, "rb") as f:
        info = _read_header(f, path)
        rec_size = 8 + LINE_BYTES * (2 if info.has_old else 1)
        for i in range(info.count):
            raw = f.read(rec_size)
            if len(raw) < rec_size:
                raise TraceFormatError(f"{path}: truncated record {i}")
            (addr,) = struct.unpack_from("<Q", raw)
            new = int.from_bytes(raw[8 : 8 + LINE_BYTES], "big")
            old = None
            if info.has_old:
                old = int.from_bytes(raw[8 + LINE_BYTES :], "big")
            yield WriteRecord(addr, new, old)


def write_trace(path, records, has_old: bool = False) -> int:
    """Write records to a binary trace; returns the record count.

    Streams in constant memory: the count is patched into the header after
    the records are written.
    """
    with open(path, "wb") as f:
        f.write(_HEADER.pack(TRACE_MAGIC, TRACE_VERSION, int(has_old), 0))
        count = 0
        for rec in records:
            f.write(struct.pack("<Q", rec.address))
            f.write(rec.new.to_bytes(LINE_BYTES, "big"))
            if has_old:
                if rec.old is None:
                    raise ValueError(f"record {count}: has_old trace but record.old is None")
                f.write(rec.old.to_bytes(LINE_BYTES, "big"))
            count += 1
        f.seek(8)
        f.write(struct.pack("<Q", count))
    return count


def read_text_trace(path):
    """Stream WriteRecords from the one-record-per-line hex format."""
    with open(path, "r") as f:
        for i, line in enumerate(f):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise TraceFormatError(f"{path}:{i + 1}: expected 2 or 3 fields")
            try:
                addr = int(parts[0], 16)
                new = int(parts[1], 16)
                old = int(parts[2], 16) if len(parts) == 3 else None
            except ValueError as exc:
                raise TraceFormatError(f"{path}:{i + 1}: {exc}") from None
            yield WriteRecord(addr, new, old)


def write_text_trace(path, records) -> int:
    count = 0
    with open(path, "w") as f:
        for rec in records:
            fields = [f"{rec.address:x}", f"{rec.new:0{LINE_BYTES * 2}x}"]
            if rec.old is not None:
                fields.append(f"{rec.old:0{LINE_BYTES * 2}x}")
            f.write(" ".join(fields) + "\n")
            count += 1
    return count


def open_trace(path):
    """Pick the reader from the file suffix (.txt/.text -> text format)."""
    if str(path).endswith((".txt", ".text")):
        return read_text_trace(path)
    return read_trace(path)


@dataclass(frozen=True)
class GeneratorSpec:
    """Synthetic workload parameters.

    p is the exact probability that a generated word passes the k-MSB test;
    zero_run is the share of those biased words that are all-zero (the rest
    are sign-extended integers below magnitude_bound); locality is the
    probability a write reuses one of the last 64 addresses.
    """

    kind: str = "biased"
    length: int = 10_000
    seed: int = 0
    p: float = 0.9883
    zero_run: float = 0.3
    magnitude_bound: int = 1 << 50
    locality: float = 0.4
    k: int = 6

    def __post_init__(self):
        if self.kind not in ("biased", "uniform_random"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        for name in ("p", "zero_run", "locality"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be a probability")
        if not 1 <= self.magnitude_bound <= 1 << (64 - self.k):
            raise ValueError("magnitude_bound must leave the top k bits uniform")

    def describe(self) -> str:
        if self.kind == "uniform_random":
            return f"uniform_random(n={self.length},seed={self.seed})"
        return f"biased(n={self.length},p={self.p},seed={self.seed})"


def _biased_words(rng, shape, spec: GeneratorSpec) -> np.ndarray:
    """Sign-extended small integers / zero words, compressible at spec.k."""
    words = np.zeros(shape, dtype=np.uint64)
    small = rng.random(shape) >= spec.zero_run
    n_small = int(small.sum())
    if n_small:
        max_bits = (spec.magnitude_bound - 1).bit_length()
        nbits = rng.integers(1, max_bits + 1, size=n_small)
        low = np.uint64(1) << (nbits - 1).astype(np.uint64)
        high = np.uint64(1) << nbits.astype(np.uint64)
        mag = low + (rng.random(n_small) * (high - low).astype(np.float64)).astype(np.uint64)
        mag = np.minimum(mag, high - np.uint64(1))
        negative = rng.random(n_small) < 0.5
        vals = np.where(negative, np.uint64(0) - mag, mag)
        words[small] = vals
    return words


def _uniform_noncompressible(rng, shape, k: int) -> np.ndarray:
    """Uniform words, re-drawn until none passes the k-MSB test."""
    words = rng.integers(0, 1 << 64, size=shape, dtype=np.uint64)
    while True:
        redo = words_compressible(words, k)
        if not redo.any():
            return words
        words[redo] = rng.integers(0, 1 << 64, size=int(redo.sum()), dtype=np.uint64)


def generate(spec: GeneratorSpec, chunk: int = 4096):
    """Stream WriteRecords for a synthetic workload."""
    rng = np.random.default_rng(spec.seed)
    recent: list[int] = []
    next_addr = 0
    remaining = spec.length
    while remaining > 0:
        m = min(chunk, remaining)
        remaining -= m
        shape = (m, WORDS_PER_LINE)
        if spec.kind == "uniform_random":
            words = rng.integers(0, 1 << 64, size=shape, dtype=np.uint64)
        else:
            words = _uniform_noncompressible(rng, shape, spec.k)
            biased = rng.random(shape) < spec.p
            if biased.any():
                words[biased] = _biased_words(rng, int(biased.sum()), spec)
        reuse = rng.random(m) < spec.locality
        pick = rng.integers(0, _RECENT_WINDOW, size=m)
        for i in range(m):
            if reuse[i] and recent:
                addr = recent[pick[i] % len(recent)]
            else:
                addr = next_addr
                next_addr += 1
                recent.append(addr)
                if len(recent) > _RECENT_WINDOW:
                    recent.pop(0)
            yield WriteRecord(addr, words_to_int(words[i]))
