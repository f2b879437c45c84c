"""
Time series ingestion from delimited text files.
"""
import logging
import math
import re
from pathlib import Path
from typing import List, Union

from app.errors import InvalidLengthError, InvalidParameterError, ParseError
from app.signals.schemas import TimeSeries

logger = logging.getLogger(__name__)

_FIELD_SEPARATOR = re.compile(r"[,;\t ]+")


def parse_record(line: str, column: int, line_number: int) -> float:
    """Parse the numeric field at ``column`` of one record."""
    fields = _FIELD_SEPARATOR.split(line.strip())
    if column >= len(fields):
        raise ParseError(f"no column {column} in record with {len(fields)} fields", line_number)
    try:
        value = float(fields[column])
    except ValueError:
        raise ParseError(f"cannot parse {fields[column]!r} as a number", line_number)
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {fields[column]!r}", line_number)
    return value


def ingest_csv(path: Union[str, Path], column: int = 0) -> TimeSeries:
    """
    Read one numeric column from a text file, one record per line.

    Fields may be separated by commas, semicolons, tabs or spaces. Blank
    lines are skipped; anything else that does not parse is an error.
    """
    if column < 0:
        raise InvalidParameterError(f"column index must be >= 0, got {column}")
    path = Path(path)
    values: List[float] = []
    with path.open("rb") as handle:
        for line_number, raw in enumerate(handle, 1):
            try:
                line = raw.decode("utf-8-sig")
            except UnicodeDecodeError as exc:
                raise ParseError(f"invalid UTF-8 at byte {exc.start}", line_number)
            if not line.strip():
                continue
            values.append(parse_record(line, column, line_number))

    if len(values) < 2:
        raise InvalidLengthError(f"{path} holds {len(values)} record(s), at least 2 are required")

    logger.info(f"Ingested {len(values)} samples from {path} (column {column})")
    return TimeSeries(values=values, normalized=False, source=str(path))
