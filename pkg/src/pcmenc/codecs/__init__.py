"""Encoder/decoder family and the scheme registry.

Scheme names accept an optional ``-<granularity>`` suffix ("wlcrc-16"),
otherwise the scheme's default granularity applies.
"""

from __future__ import annotations

from ..model import EnergyModel, TABLE_3COSETS, TABLE_4COSETS
from .base import (
    DecodeError,
    EncodedLine,
    FLAG_COMPRESSED,
    FLAG_RAW,
    LineCodec,
    REGION_AUX,
    REGION_DATA,
    REGION_FLAG,
    StateBatch,
)
from .compressed import WLC_TABLE_K, WLCRC_K, Wlcrc, WlcTable
from .cosets import RestrictedLine, SixCosets, TableCosets
from .oracle import brute_force_best
from .simple import Baseline, FlipNWrite, XorCoset, default_masks

_LINE_DIVISORS = (8, 16, 32, 64, 128, 256, 512)
_WLC_GRANULARITIES = (8, 16, 32, 64)

# name -> (factory, allowed granularities or None when fixed, default granularity)
_SCHEMES = {
    "baseline": (lambda model, g, k, t: Baseline(model), None, 512),
    "fnw": (lambda model, g, k, t: FlipNWrite(model), None, 128),
    "flipmin": (lambda model, g, k, t: XorCoset(model), None, 512),
    "6cosets": (lambda model, g, k, t: SixCosets(model, g), _LINE_DIVISORS, 512),
    "4cosets": (
        lambda model, g, k, t: TableCosets(model, TABLE_4COSETS, g),
        _LINE_DIVISORS,
        16,
    ),
    "3cosets": (
        lambda model, g, k, t: TableCosets(model, TABLE_3COSETS, g),
        _LINE_DIVISORS,
        16,
    ),
    "3rcosets": (lambda model, g, k, t: RestrictedLine(model, g), _LINE_DIVISORS, 16),
    "wlcrc": (
        lambda model, g, k, t: Wlcrc(model, g, k, threshold=t or 0),
        _WLC_GRANULARITIES,
        16,
    ),
    "wlc-4cosets": (
        lambda model, g, k, t: WlcTable(model, TABLE_4COSETS, g, k),
        _WLC_GRANULARITIES,
        32,
    ),
    "wlc-3cosets": (
        lambda model, g, k, t: WlcTable(model, TABLE_3COSETS, g, k),
        _WLC_GRANULARITIES,
        32,
    ),
}


def scheme_names() -> list:
    return sorted(_SCHEMES)


def parse_scheme(name: str):
    """Split "wlcrc-16" style names into (scheme, granularity or None)."""
    base, sep, suffix = name.rpartition("-")
    if sep and base in _SCHEMES and suffix.isdigit():
        return base, int(suffix)
    return name, None


def make_codec(
    scheme: str,
    model: EnergyModel,
    granularity: int | None = None,
    k: int | None = None,
    threshold=None,
) -> LineCodec:
    name, inline_g = parse_scheme(scheme)
    if name not in _SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; known: {', '.join(scheme_names())}")
    factory, allowed, default_g = _SCHEMES[name]
    g = granularity if granularity is not None else (inline_g or default_g)
    if allowed is None:
        if granularity not in (None, default_g) or inline_g not in (None, default_g):
            raise ValueError(f"scheme {name!r} runs at fixed granularity {default_g}")
        g = default_g
    elif g not in allowed:
        raise ValueError(f"scheme {name!r} does not support granularity {g}")
    if threshold and name != "wlcrc":
        raise ValueError("threshold-t only applies to wlcrc")
    if k is not None and name not in ("wlcrc", "wlc-4cosets", "wlc-3cosets"):
        raise ValueError(f"scheme {name!r} does not take a k parameter")
    return factory(model, g, k, threshold)


__all__ = [
    "Baseline",
    "DecodeError",
    "EncodedLine",
    "FLAG_COMPRESSED",
    "FLAG_RAW",
    "FlipNWrite",
    "LineCodec",
    "REGION_AUX",
    "REGION_DATA",
    "REGION_FLAG",
    "RestrictedLine",
    "SixCosets",
    "StateBatch",
    "TableCosets",
    "WLCRC_K",
    "WLC_TABLE_K",
    "Wlcrc",
    "WlcTable",
    "XorCoset",
    "brute_force_best",
    "default_masks",
    "make_codec",
    "parse_scheme",
    "scheme_names",
]
