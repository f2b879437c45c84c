"""
Packing helpers for row-major bit matrices of 64-bit words.
"""
import numpy as np

WORD_BITS = 64
_WORD_BYTES = WORD_BITS // 8


def words_per_row(size: int) -> int:
    return -(-size // WORD_BITS)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D boolean array into little-endian uint64 words, one row at a time."""
    rows, cols = dense.shape
    packed = np.packbits(dense, axis=1, bitorder="little")
    n_bytes = words_per_row(cols) * _WORD_BYTES
    if packed.shape[1] < n_bytes:
        packed = np.pad(packed, ((0, 0), (0, n_bytes - packed.shape[1])))
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_rows(words: np.ndarray, size: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words).astype("<u8", copy=False).view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, count=size, bitorder="little").astype(bool)


def popcount_total(words: np.ndarray) -> int:
    """Number of set bits; ``np.bitwise_count`` maps to the hardware popcount."""
    return int(np.bitwise_count(words).sum(dtype=np.int64))
