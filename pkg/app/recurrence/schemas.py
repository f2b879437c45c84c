from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.recurrence.kernels import WORD_BITS, popcount_total, unpack_rows

Norm = Literal["max", "euclidean", "manhattan"]


class RecurrencePlot(BaseModel):
    """
    K x K binary recurrence matrix stored as 64-bit words per row.

    Bit (i, j) lives in ``words[i, j // 64]`` at bit position ``j % 64``.
    Padding bits past column K are zero.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    size: int = Field(ge=1)
    words: np.ndarray
    epsilon: float = Field(gt=0, le=1)
    norm: Norm = "max"
    dim: int = Field(default=1, ge=1)
    delay: int = Field(default=1, ge=1)
    normalized_input: bool = False

    @field_validator("words")
    @classmethod
    def _freeze_words(cls, v: np.ndarray):
        if v.dtype != np.uint64 or v.ndim != 2:
            raise ValueError("words must be a 2-D uint64 array")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        return v

    @model_validator(mode="after")
    def _check_shape(self):
        expected = (self.size, -(-self.size // WORD_BITS))
        if self.words.shape != expected:
            raise ValueError(f"words shape {self.words.shape} does not match size {self.size}")
        return self

    def bit(self, i: int, j: int) -> bool:
        word = int(self.words[i, j // WORD_BITS])
        return bool((word >> (j % WORD_BITS)) & 1)

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.words, self.size)

    def popcount(self) -> int:
        return popcount_total(self.words)


class WindowSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_size: int = Field(ge=2)
    stride: int = Field(default=1, ge=1)
