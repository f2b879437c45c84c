from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    param: float
    values: Dict[str, float]


class Provenance(BaseModel):
    """Everything needed to rerun a sweep. Only this part carries a timestamp."""
    experiment: str
    seed: int
    length: int
    samples: int
    epsilon: Optional[float] = None
    partitions: int
    threads: int = 1
    replicates: int = 1
    point_seeds: List[int] = []
    parameters: Dict[str, Any] = {}
    created_at: datetime = Field(default_factory=datetime.now)


class SweepResult(BaseModel):
    experiment: str
    parameter: str
    columns: List[str]
    rows: List[SweepRow]
    provenance: Provenance

    @model_validator(mode="after")
    def _check_rows(self):
        params = [row.param for row in self.rows]
        if params != sorted(params):
            raise ValueError("sweep rows must be sorted by parameter value")
        expected = set(self.columns)
        for row in self.rows:
            if set(row.values) != expected:
                raise ValueError(f"row {row.param} has columns {sorted(row.values)}, expected {sorted(expected)}")
        return self

    def column(self, name: str) -> List[float]:
        if name == self.parameter:
            return [row.param for row in self.rows]
        return [row.values[name] for row in self.rows]

    def row(self, param: float, tolerance: float = 1e-9) -> SweepRow:
        for row in self.rows:
            if abs(row.param - param) <= tolerance:
                return row
        raise KeyError(f"no row with {self.parameter}={param}")


class BifurcationSample(BaseModel):
    param: float
    orbit: List[float]
