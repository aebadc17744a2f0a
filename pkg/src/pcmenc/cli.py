"""Command-line front end: encode/decode single lines, generate traces, run
one scheme over a trace, drive sweeps, and inspect trace compressibility.

Data goes to stdout, diagnostics to stderr; exit code 0 means no error.
Configuration precedence is flags > config file > built-in defaults, and the
effective model configuration is echoed into run and sweep reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import codecs
from .harness import SweepSpec, emit_report, run_sweep
from .lines import hex_to_int, int_to_hex
from .memsim import MemoryArray
from .model import DisturbanceModel, EnergyModel, load_models
from .wlc import K_MAX, K_MIN, words_compressible
from .workloads import (
    GeneratorSpec,
    generate,
    open_trace,
    trace_info,
    write_text_trace,
    write_trace,
)


def _add_model_args(p):
    p.add_argument("--config", help="JSON file with reset_pj/set_pj/disturb_rate/scale_high")
    p.add_argument("--energy-scale", default=None,
                   help="scale factor for S3/S4 SET energy (number or p/q)")


def _add_scheme_args(p):
    p.add_argument("--scheme", default="wlcrc", help="scheme name, e.g. wlcrc or 4cosets-16")
    p.add_argument("--granularity", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="override the compression width")
    p.add_argument("--threshold-t", default=None,
                   help="multi-objective threshold for wlcrc (0 disables)")


def _add_gen_args(p):
    p.add_argument("--kind", choices=["biased", "uniform_random"], default="biased")
    p.add_argument("--lines", type=int, default=10_000)
    p.add_argument("--p", type=float, default=0.9883)
    p.add_argument("--zero-run", type=float, default=0.3)
    p.add_argument("--magnitude-bits", type=int, default=50)
    p.add_argument("--locality", type=float, default=0.4)


def _models(args):
    energy, disturb = (EnergyModel(), DisturbanceModel())
    if args.config:
        energy, disturb = load_models(args.config)
    if getattr(args, "energy_scale", None) is not None:
        energy = replace(energy, scale_high=args.energy_scale)
    return energy, disturb


def _codec(args, energy):
    return codecs.make_codec(
        args.scheme, energy, granularity=args.granularity,
        k=args.k, threshold=args.threshold_t,
    )


def _generator_spec(args) -> GeneratorSpec:
    return GeneratorSpec(
        kind=args.kind,
        length=args.lines,
        seed=args.seed,
        p=args.p,
        zero_run=args.zero_run,
        magnitude_bound=1 << args.magnitude_bits,
        locality=args.locality,
    )


def _read_value(value: str) -> str:
    return sys.stdin.readline() if value == "-" else value


_STATE_DIGITS = "1234"


def _states_to_digits(cells) -> str:
    return "".join(_STATE_DIGITS[int(s)] for s in cells)


def _digits_to_states(text: str) -> np.ndarray:
    text = text.strip()
    if not set(text) <= set(_STATE_DIGITS):
        raise ValueError("cell states must be digits 1-4")
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("1")


def _parse_encoded(text: str, codec) -> codecs.EncodedLine:
    cells = _digits_to_states(text)
    if len(cells) != codec.total_cells:
        raise ValueError(
            f"{codec.name} lines have {codec.total_cells} cells, got {len(cells)}"
        )
    n_data = 256
    n_aux = codec.aux_cells
    flag = int(cells[-1]) if codec.has_flag else None
    return codecs.EncodedLine(cells[:n_data], cells[n_data : n_data + n_aux], flag)


def cmd_encode(args) -> int:
    energy, _ = _models(args)
    codec = _codec(args, energy)
    old = None
    if args.old_state:
        old = _parse_encoded(_read_value(args.old_state), codec)
    enc = codec.encode(hex_to_int(_read_value(args.line)), old)
    print(_states_to_digits(enc.cells()))
    return 0


def cmd_decode(args) -> int:
    energy, _ = _models(args)
    codec = _codec(args, energy)
    enc = _parse_encoded(_read_value(args.cells), codec)
    print(int_to_hex(codec.decode(enc)))
    return 0


def cmd_gen(args) -> int:
    spec = _generator_spec(args)
    records = generate(spec)
    if args.format == "text":
        count = write_text_trace(args.out, records)
    else:
        count = write_trace(args.out, records)
    print(f"wrote {count} records to {args.out}", file=sys.stderr)
    return 0


def cmd_run(args) -> int:
    energy, disturb = _models(args)
    codec = _codec(args, energy)
    arr = MemoryArray(codec, disturb, seed=args.seed,
                      sample_disturbance=not args.no_sample)
    if args.trace:
        records = open_trace(args.trace)
        workload = str(args.trace)
    else:
        spec = _generator_spec(args)
        records = generate(spec)
        workload = spec.describe()
    agg = arr.run_trace(records)
    payload = {
        "config": {**codec.describe(), **energy.describe(), **disturb.describe(),
                   "workload": workload, "seed": args.seed},
        "aggregate": agg.as_dict(),
    }
    json.dump(payload, sys.stdout, indent=2)
    print()
    return 0


def _split(text, cast):
    return [cast(x) for x in text.split(",") if x]


def cmd_sweep(args) -> int:
    energy, disturb = _models(args)
    spec = SweepSpec(
        schemes=_split(args.schemes, str),
        granularities=_split(args.granularities, int) or None,
        k_sweep=_split(args.k_sweep, int),
        energy_scales=_split(args.energy_scales, str) or [1],
        workload=args.trace if args.trace else _generator_spec(args),
        seed=args.seed,
        sample_disturbance=not args.no_sample,
        energy=energy,
        disturb=disturb,
    )
    report = run_sweep(spec)
    emit_report(report, args.out, args.format)
    print(f"wrote {len(report.rows)} rows to {args.out}", file=sys.stderr)
    print(json.dumps(report.meta), file=sys.stderr)
    return 0


def cmd_inspect(args) -> int:
    info = trace_info(args.trace) if not str(args.trace).endswith(".txt") else None
    total = 0
    counts = {k: 0 for k in range(K_MIN, K_MAX + 1)}
    from .lines import int_to_words

    for rec in open_trace(args.trace):
        total += 1
        words = int_to_words(rec.new)
        for k in counts:
            if bool(words_compressible(words, k).all()):
                counts[k] += 1
    if info is not None:
        print(f"version={info.version} records={info.count} has_old={info.has_old}")
    print(f"lines={total}")
    print("k,compressible_fraction")
    for k, c in counts.items():
        frac = c / total if total else 0.0
        print(f"{k},{frac}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcmenc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode one 512-bit line (128 hex chars)")
    p.add_argument("line", help="hex value or - for stdin")
    p.add_argument("--old-state", default=None, help="previous cell digits (1-4)")
    _add_scheme_args(p)
    _add_model_args(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode a cell-state digit string")
    p.add_argument("cells", help="cell digits or - for stdin")
    _add_scheme_args(p)
    _add_model_args(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("gen", help="generate a synthetic trace file")
    _add_gen_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["bin", "text"], default="bin")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run one scheme over a trace or generator")
    p.add_argument("--trace", default=None)
    _add_gen_args(p)
    _add_scheme_args(p)
    _add_model_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-sample", action="store_true",
                   help="skip sampled disturbance (expected value still reported)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a scheme/granularity/scale grid")
    p.add_argument("--schemes", default="baseline,wlcrc-16")
    p.add_argument("--granularities", default="")
    p.add_argument("--k-sweep", default="")
    p.add_argument("--energy-scales", default="1")
    p.add_argument("--trace", default=None)
    _add_gen_args(p)
    _add_model_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-sample", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("inspect", help="trace header and compressibility histogram")
    p.add_argument("--trace", required=True)
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"pcmenc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
