from typing import ClassVar, Dict, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class LineDistribution(BaseModel):
    """Histogram of line length -> number of lines."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["diagonal", "vertical"]
    counts: Dict[int, int] = {}
    size: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_counts(self):
        for length, count in self.counts.items():
            if not 1 <= length <= self.size:
                raise ValueError(f"line length {length} outside [1, {self.size}]")
            if count < 0:
                raise ValueError(f"negative count for length {length}")
        return self

    def lengths(self, minimum: int = 1) -> List[int]:
        return sorted(length for length, count in self.counts.items() if length >= minimum and count > 0)

    def points(self, minimum: int = 1) -> int:
        """Recurrent points covered by lines of length >= minimum."""
        return sum(length * count for length, count in self.counts.items() if length >= minimum)

    def lines(self, minimum: int = 1) -> int:
        return sum(count for length, count in self.counts.items() if length >= minimum)

    def max_length(self) -> int:
        present = self.lengths()
        return present[-1] if present else 0


class RqaSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    epsilon: float
    rr: float = Field(ge=0, le=1)
    det: float = Field(ge=0, le=1)
    lam: float = Field(ge=0, le=1)
    entr: float = Field(ge=0)
    div: float = Field(ge=0)
    l_min: int = Field(ge=1)
    v_min: int = Field(ge=1)
    l_max: int = Field(default=0, ge=0)
    v_max: int = Field(default=0, ge=0)
    avg_diag: float = Field(default=0.0, ge=0)

    CSV_COLUMNS: ClassVar[Tuple[str, ...]] = ("epsilon", "rr", "det", "lam", "entr", "div", "l_min", "v_min")

    def csv_header(self) -> str:
        return ",".join(self.CSV_COLUMNS)

    def csv_row(self) -> str:
        return ",".join(_format_cell(getattr(self, column)) for column in self.CSV_COLUMNS)


def _format_cell(value) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
