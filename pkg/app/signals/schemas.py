from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class TimeSeries(BaseModel):
    """Ordered scalar samples plus where they came from."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    seed: Optional[int] = None
    normalized: bool = False
    source: str = "unknown"

    @field_validator("values", mode="before")
    @classmethod
    def _as_float_array(cls, v):
        arr = np.array(v, dtype=np.float64).reshape(-1)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_invariants(self):
        if self.values.size < 2:
            raise ValueError(f"time series needs at least 2 samples, got {self.values.size}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("time series contains non-finite samples")
        if self.normalized:
            lo, hi = float(self.values.min()), float(self.values.max())
            constant = bool(np.all(self.values == self.values[0]))
            if not constant and (abs(lo) > 1e-12 or abs(hi - 1.0) > 1e-12):
                raise ValueError(f"series flagged normalized spans [{lo}, {hi}]")
        return self

    @property
    def length(self) -> int:
        return int(self.values.size)


class LorenzParams(BaseModel):
    """Lorenz system parameters and the integration schedule.

    ``keep_steps`` counts raw integration steps after the transient; the
    returned series holds every ``stride``-th of them.
    """
    model_config = ConfigDict(frozen=True)

    r: float = 28.0
    sigma: float = 10.0
    b: float = 8.0 / 3.0
    h: float = Field(default=1e-3, gt=0)
    transient_steps: int = Field(default=200_000, ge=0)
    keep_steps: int = Field(default=100_000, ge=2)
    stride: int = Field(default=100, ge=1)
    component: Literal["x", "y", "z"] = "x"

    @model_validator(mode="after")
    def _check_output_length(self):
        if self.keep_steps // self.stride < 2:
            raise ValueError(
                f"keep_steps={self.keep_steps} with stride={self.stride} leaves fewer than 2 samples"
            )
        return self

    @property
    def output_length(self) -> int:
        return self.keep_steps // self.stride
