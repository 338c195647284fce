"""Compiled inner loops for dictionary intersection.

Dictionaries are passed as CSR-style pairs: a flat ``symbols`` array and an
``offsets`` array of length ``m + 1`` delimiting the ``m`` sorted entries.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _compare(a, a0, a1, b, b0, b1):
    la = a1 - a0
    lb = b1 - b0
    n = la if la < lb else lb
    for k in range(n):
        x = a[a0 + k]
        y = b[b0 + k]
        if x < y:
            return -1
        if x > y:
            return 1
    if la < lb:
        return -1
    if la > lb:
        return 1
    return 0


@njit(cache=True, nogil=True)
def _has_prefix(a, a0, a1, b, b0, length):
    if a1 - a0 <= length:
        return False
    for k in range(length):
        if a[a0 + k] != b[b0 + k]:
            return False
    return True


@njit(cache=True, nogil=True)
def first_symbol_index(symbols, offsets, alphabet_size):
    """``idx[s]:idx[s + 1]`` is the run of entries starting with symbol ``s``."""
    m = offsets.shape[0] - 1
    idx = np.empty(alphabet_size + 1, dtype=np.int64)
    k = 0
    for s in range(alphabet_size + 1):
        while k < m and symbols[offsets[k]] < s:
            k += 1
        idx[s] = k
    return idx


@njit(cache=True, nogil=True)
def intersect_sorted(ps, po, ts, to, tidx, filter_pairs):
    """Return ``(matched, lookups, effective_probe_size)``.

    Each lookup is a binary search over the target entries sharing the probe
    entry's first symbol (``tidx`` from :func:`first_symbol_index`). Probe
    entries are visited in ascending order, so the lower bound never moves
    left and is carried over between lookups. A missed entry lets every
    following probe entry that extends it be skipped.
    """
    m = po.shape[0] - 1
    matched = 0
    lookups = 0
    size = 0
    lo = 0
    i = 0
    while i < m:
        a0 = po[i]
        a1 = po[i + 1]
        length = a1 - a0
        if filter_pairs and length == 2:
            i += 1
            continue
        size += 1
        lookups += 1
        first = ps[a0]
        left = tidx[first]
        if lo > left:
            left = lo
        end = tidx[first + 1]
        right = end
        while left < right:
            mid = (left + right) >> 1
            if _compare(ts, to[mid], to[mid + 1], ps, a0, a1) < 0:
                left = mid + 1
            else:
                right = mid
        lo = left
        if left < end and _compare(ts, to[left], to[left + 1], ps, a0, a1) == 0:
            matched += 1
            i += 1
            continue
        j = i + 1
        while j < m and _has_prefix(ps, po[j], po[j + 1], ps, a0, length):
            if not (filter_pairs and po[j + 1] - po[j] == 2):
                size += 1
            j += 1
        i = j
    return matched, lookups, size


@njit(cache=True, nogil=True)
def fcd_value(matched, size, target_size):
    if size == 0:
        return 0.0 if target_size == 0 else 1.0
    return (size - matched) / size


@njit(cache=True, nogil=True)
def effective_size(offsets, filter_pairs):
    m = offsets.shape[0] - 1
    if not filter_pairs:
        return m
    n = 0
    for i in range(m):
        if offsets[i + 1] - offsets[i] != 2:
            n += 1
    return n


@njit(cache=True, nogil=True)
def fcd_rows(symbols, offsets, starts, index, row_lo, row_hi, filter_pairs, out):
    """Fill ``out[row_lo:row_hi]`` with FCD scores over a packed corpus.

    ``starts[k]:starts[k + 1] + 1`` slices the global ``offsets`` array for
    dictionary ``k``; offsets index directly into ``symbols``. ``index[k]`` is
    the first-symbol index of dictionary ``k``.
    """
    n = starts.shape[0] - 1
    sizes = np.empty(n, dtype=np.int64)
    for k in range(n):
        sizes[k] = effective_size(offsets[starts[k]:starts[k + 1] + 1], filter_pairs)
    for r in range(row_lo, row_hi):
        po = offsets[starts[r]:starts[r + 1] + 1]
        for c in range(n):
            if c == r:
                out[r, c] = 0.0
                continue
            to = offsets[starts[c]:starts[c + 1] + 1]
            matched, _, size = intersect_sorted(symbols, po, symbols, to, index[c], filter_pairs)
            out[r, c] = fcd_value(matched, size, sizes[c])
