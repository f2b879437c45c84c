from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

MIN_SIDE = 2
MAX_SIDE = 5


class MicrostateHistogram(BaseModel):
    """Sparse counts over the 2^(n*n) microstate codes."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=MIN_SIDE, le=MAX_SIDE)
    counts: Dict[int, int]
    samples: int = Field(ge=1)
    seed: Optional[int] = None
    partitions: Optional[int] = None
    exhaustive: bool = False

    @model_validator(mode="after")
    def _check_counts(self):
        limit = 1 << (self.n * self.n)
        for code, count in self.counts.items():
            if not 0 <= code < limit:
                raise ValueError(f"code {code} outside [0, 2^{self.n * self.n})")
            if count <= 0:
                raise ValueError(f"non-positive count {count} for code {code}")
        total = sum(self.counts.values())
        if total != self.samples:
            raise ValueError(f"counts sum to {total}, expected {self.samples}")
        return self

    @property
    def codes(self) -> int:
        return 1 << (self.n * self.n)

    def probabilities(self) -> Dict[int, float]:
        return {code: count / self.samples for code, count in sorted(self.counts.items())}

    def count_array(self) -> np.ndarray:
        return np.array([self.counts[code] for code in sorted(self.counts)], dtype=np.float64)


class ClassBreakdown(BaseModel):
    """Probability mass per occupation class (number of recurrent cells)."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=MIN_SIDE, le=MAX_SIDE)
    mass: List[float]

    @model_validator(mode="after")
    def _check_mass(self):
        if len(self.mass) != self.n * self.n + 1:
            raise ValueError(f"expected {self.n * self.n + 1} classes, got {len(self.mass)}")
        if abs(sum(self.mass) - 1.0) > 1e-12:
            raise ValueError(f"class masses sum to {sum(self.mass)}")
        return self


class EntropySummary(BaseModel):
    n: int
    n_bar: int
    entropy: float
    s_max: float
    class_mass: List[float]
