"""LZW parsing and sorted pattern dictionaries.

A :class:`Dictionary` holds every multi-symbol phrase learned while LZW-parsing
one string, sorted lexicographically so that membership is a binary search and
all extensions of a pattern sit directly after it.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from fastcd import _kernels

DEFAULT_ALPHABET_WIDTH = 9


def _as_symbols(s) -> Sequence[int]:
    symbols = getattr(s, "symbols", s)
    if isinstance(symbols, np.ndarray):
        return symbols.tolist()
    if isinstance(symbols, (bytes, bytearray)):
        return list(symbols)
    return list(symbols)


def _check_alphabet(symbols: Sequence[int], alphabet_size: int) -> None:
    lo, hi = min(symbols), max(symbols)
    if lo < 0 or hi >= alphabet_size:
        raise ValueError(
            f"symbol out of range for alphabet of size {alphabet_size}: "
            f"min={lo}, max={hi}"
        )


def lzw_parse(s, alphabet_size: int = 1 << DEFAULT_ALPHABET_WIDTH):
    """Run a plain LZW parse with an unbounded table.

    Returns ``(codes, parents, lasts, lookups)``: the emitted code stream, and
    for every learned phrase (code ``alphabet_size + k``) its prefix code and
    final symbol. ``lookups`` counts table probes, one per consumed symbol
    after the first.
    """
    symbols = _as_symbols(s)
    if not symbols:
        raise ValueError("cannot LZW-parse an empty string")
    _check_alphabet(symbols, alphabet_size)

    table: dict[tuple[int, int], int] = {}
    codes: list[int] = []
    parents: list[int] = []
    lasts: list[int] = []
    next_code = alphabet_size
    lookups = 0
    w = symbols[0]
    for c in symbols[1:]:
        lookups += 1
        code = table.get((w, c))
        if code is None:
            codes.append(w)
            table[(w, c)] = next_code
            parents.append(w)
            lasts.append(c)
            next_code += 1
            w = c
        else:
            w = code
    codes.append(w)
    return codes, parents, lasts, lookups


def lzw_code_stream(s, alphabet_size: int = 1 << DEFAULT_ALPHABET_WIDTH):
    """Return ``(codes, code_count)`` for ``s``."""
    codes, _, _, _ = lzw_parse(s, alphabet_size)
    return codes, len(codes)


def lzw_decode(codes: Sequence[int], alphabet_size: int = 1 << DEFAULT_ALPHABET_WIDTH) -> list[int]:
    """Invert :func:`lzw_code_stream`."""
    if not codes:
        raise ValueError("cannot decode an empty code stream")
    table: dict[int, tuple[int, ...]] = {}

    def phrase(code):
        if code < alphabet_size:
            return (code,)
        return table[code]

    prev = phrase(codes[0])
    out = list(prev)
    next_code = alphabet_size
    for code in codes[1:]:
        if code < alphabet_size or code in table:
            cur = phrase(code)
        elif code == next_code:
            # the cScSc case: code refers to the phrase being defined
            cur = prev + (prev[0],)
        else:
            raise ValueError(f"invalid LZW code {code} at table size {next_code}")
        table[next_code] = prev + (cur[0],)
        next_code += 1
        out.extend(cur)
        prev = cur
    return out


@dataclass(frozen=True)
class IntersectionStats:
    matched: int
    comparisons: int


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Sorted, prefix-closed set of LZW phrases (length >= 2).

    ``symbols`` and ``offsets`` are a CSR layout: entry ``k`` is
    ``symbols[offsets[k]:offsets[k + 1]]``.
    """

    symbols: np.ndarray
    offsets: np.ndarray
    alphabet_width: int = DEFAULT_ALPHABET_WIDTH
    source_id: str = ""
    _entries: list = field(default=None, init=False, repr=False, compare=False)
    _index: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    @classmethod
    def from_entries(
        cls,
        entries: Iterable[Sequence[int]],
        alphabet_width: int = DEFAULT_ALPHABET_WIDTH,
        source_id: str = "",
    ) -> "Dictionary":
        pats = sorted({tuple(int(x) for x in e) for e in entries})
        for p in pats:
            if len(p) < 2:
                raise ValueError(f"patterns must have length >= 2, got {p!r}")
        lengths = np.fromiter((len(p) for p in pats), dtype=np.int64, count=len(pats))
        offsets = np.zeros(len(pats) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        flat = np.fromiter(
            (x for p in pats for x in p), dtype=np.uint16, count=int(offsets[-1])
        )
        if flat.size and int(flat.max()) >= 1 << alphabet_width:
            raise ValueError("pattern symbol exceeds alphabet width")
        d = cls(flat, offsets, alphabet_width, source_id)
        object.__setattr__(d, "_entries", pats)
        return d

    @property
    def entries(self) -> list[tuple[int, ...]]:
        if self._entries is None:
            flat = self.symbols.tolist()
            offs = self.offsets.tolist()
            object.__setattr__(
                self, "_entries", [tuple(flat[a:b]) for a, b in zip(offs[:-1], offs[1:])]
            )
        return self._entries

    @property
    def first_index(self) -> np.ndarray:
        """Entry range per leading symbol, see ``_kernels.first_symbol_index``."""
        if self._index is None:
            object.__setattr__(
                self,
                "_index",
                _kernels.first_symbol_index(self.symbols, self.offsets, 1 << self.alphabet_width),
            )
        return self._index

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, p) -> bool:
        return contains(self, p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dictionary):
            return NotImplemented
        return (
            self.alphabet_width == other.alphabet_width
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.symbols, other.symbols)
        )

    __hash__ = None

    def pair_count(self) -> int:
        """Number of length-2 entries."""
        return int(np.count_nonzero(np.diff(self.offsets) == 2))


def extract_dictionary(s, alphabet_width: int = DEFAULT_ALPHABET_WIDTH, source_id: str | None = None) -> Dictionary:
    """LZW-parse ``s`` and collect every learned phrase into a sorted dictionary."""
    if source_id is None:
        source_id = getattr(s, "source_id", "")
    alphabet_size = 1 << alphabet_width
    _, parents, lasts, _ = lzw_parse(s, alphabet_size)
    pats: list[tuple[int, ...]] = []
    for parent, last in zip(parents, lasts):
        head = (parent,) if parent < alphabet_size else pats[parent - alphabet_size]
        pats.append(head + (last,))
    return Dictionary.from_entries(pats, alphabet_width, source_id)


def contains(d: Dictionary, p: Sequence[int]) -> bool:
    p = tuple(int(x) for x in p)
    entries = d.entries
    k = bisect_left(entries, p)
    return k < len(entries) and entries[k] == p


def intersect(probe: Dictionary, target: Dictionary, filter_pairs: bool = False) -> IntersectionStats:
    """Count probe entries present in ``target``.

    With ``filter_pairs`` length-2 entries are ignored on both sides.
    """
    if probe.alphabet_width != target.alphabet_width:
        raise ValueError(
            f"alphabet width mismatch: {probe.alphabet_width} vs {target.alphabet_width}"
        )
    matched, lookups, _ = _kernels.intersect_sorted(
        probe.symbols, probe.offsets, target.symbols, target.offsets, target.first_index,
        bool(filter_pairs),
    )
    return IntersectionStats(int(matched), int(lookups))


def naive_intersection_count(probe: Dictionary, target: Dictionary, filter_pairs: bool = False) -> int:
    """Hash-set intersection, the reference for :func:`intersect`."""
    a = set(probe.entries)
    b = set(target.entries)
    if filter_pairs:
        a = {p for p in a if len(p) != 2}
    return len(a & b)


def is_prefix_closed(d: Dictionary) -> bool:
    present = set(d.entries)
    return all(len(p) == 2 or p[:-1] in present for p in d.entries)


def is_strictly_sorted(d: Dictionary) -> bool:
    e = d.entries
    return all(a < b for a, b in zip(e, e[1:]))


def width_for(alphabet_size: int) -> int:
    return max(1, math.ceil(math.log2(alphabet_size)))
