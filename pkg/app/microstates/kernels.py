"""
Microstate encoding straight from the packed recurrence rows.

Block bit (r, c) maps to code bit r * n + c, so bit 0 is the top-left
cell. Each block row is an n-bit field lifted out of at most two words.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _row_field(words, row, col, n):
    word = col >> 6
    shift = col & 63
    field = words[row, word] >> np.uint64(shift)
    if shift + n > 64:
        field |= words[row, word + 1] << np.uint64(64 - shift)
    return field & np.uint64((1 << n) - 1)


@njit(cache=True, nogil=True)
def block_code(words, i, j, n):
    code = np.uint64(0)
    for r in range(n):
        code |= _row_field(words, i + r, j, n) << np.uint64(r * n)
    return code


@njit(cache=True, nogil=True)
def encode_corners(words, rows, cols, n):
    codes = np.empty(rows.shape[0], dtype=np.uint64)
    for s in range(rows.shape[0]):
        codes[s] = block_code(words, rows[s], cols[s], n)
    return codes


@njit(cache=True, nogil=True)
def encode_all(words, size, n):
    """Codes of every placement, row-major over the (size - n + 1)^2 corners."""
    span = size - n + 1
    codes = np.empty(span * span, dtype=np.uint64)
    s = 0
    for i in range(span):
        for j in range(span):
            codes[s] = block_code(words, i, j, n)
            s += 1
    return codes
