"""Dictionary and compression distances.

``fcd`` scores the fraction of one dictionary's phrases missing from another.
``ncd`` is the classic compressed-size distance over any object that exposes
``compressed_size``.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from fastcd import _kernels
from fastcd.lzw import Dictionary, lzw_parse

MEASURES = ("fcd", "fcd-sym", "ncd")


def fcd(x: Dictionary, y: Dictionary, filter_pairs: bool = False) -> float:
    """Fast Compression Distance of ``x`` against ``y``; not symmetric.

    An empty probe dictionary scores 0 against an empty target and 1 otherwise.
    """
    if x.alphabet_width != y.alphabet_width:
        raise ValueError(f"alphabet width mismatch: {x.alphabet_width} vs {y.alphabet_width}")
    matched, _, size = _kernels.intersect_sorted(
        x.symbols, x.offsets, y.symbols, y.offsets, y.first_index, bool(filter_pairs)
    )
    target_size = _kernels.effective_size(y.offsets, bool(filter_pairs))
    return float(_kernels.fcd_value(matched, size, target_size))


def fcd_symmetric(x: Dictionary, y: Dictionary, filter_pairs: bool = False) -> float:
    return max(fcd(x, y, filter_pairs), fcd(y, x, filter_pairs))


class Compressor(Protocol):
    def compressed_size(self, data) -> int: ...


def _concat(x, y):
    if isinstance(x, (bytes, bytearray)) and isinstance(y, (bytes, bytearray)):
        return bytes(x) + bytes(y)
    return np.concatenate([np.asarray(x).ravel(), np.asarray(y).ravel()])


def lzw_size(x, alphabet_size: int = 256) -> int:
    """Bytes needed to write the LZW code stream of ``x`` with growing code width.

    Each code is written with ``ceil(log2(table size))`` bits, where the table
    holds the base alphabet plus every phrase learned so far.
    """
    codes, _, _, _ = lzw_parse(x, alphabet_size)
    bits = 0
    for k in range(len(codes)):
        bits += max(1, math.ceil(math.log2(alphabet_size + k)))
    return (bits + 7) // 8


@dataclass(frozen=True)
class LzwSizeCompressor:
    alphabet_size: int = 256

    def compressed_size(self, data) -> int:
        return lzw_size(data, self.alphabet_size)


@dataclass(frozen=True)
class ZlibCompressor:
    level: int = 9

    def compressed_size(self, data) -> int:
        if not isinstance(data, (bytes, bytearray)):
            data = np.asarray(data, dtype="<u2").tobytes()
        return len(zlib.compress(bytes(data), self.level))


def ncd(x, y, compressor: Compressor | None = None) -> float:
    """Normalized Compression Distance.

    ``x`` and ``y`` are bytes or integer symbol sequences; they are concatenated
    for the joint term.
    """
    if len(x) == 0 or len(y) == 0:
        raise ValueError("ncd needs non-empty inputs")
    if compressor is None:
        compressor = LzwSizeCompressor()
    cx = compressor.compressed_size(x)
    cy = compressor.compressed_size(y)
    cxy = compressor.compressed_size(_concat(x, y))
    return (cxy - min(cx, cy)) / max(cx, cy)


def joint_lzw_steps(x: Sequence[int], y: Sequence[int], alphabet_size: int = 512) -> int:
    """Table lookups performed while LZW-compressing the concatenation of x and y."""
    _, _, _, lookups = lzw_parse(_concat(x, y), alphabet_size)
    return lookups


@dataclass(frozen=True)
class CostModelInput:
    n_x: int
    n_y: int
    m_x: int
    m_y: int

    def __post_init__(self):
        if min(self.n_x, self.n_y, self.m_x, self.m_y) < 1:
            raise ValueError("cost model inputs must all be >= 1")


def cost_model(inp: CostModelInput) -> tuple[float, float]:
    """Operation counts ``(fcd_ops, ncd_ops)`` for one distance evaluation."""
    fcd_ops = inp.m_x * math.log2(inp.m_y)
    ncd_ops = (inp.n_x + inp.n_y) * math.log2(inp.m_x + inp.m_y)
    return fcd_ops, ncd_ops
