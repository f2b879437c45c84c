"""
Recurrence plot construction.

R_ij = 1 iff dist(x_i, x_j) <= epsilon on the normalized series. Distances
are evaluated in row blocks and packed straight into 64-bit words, so the
dense K x K matrix is never held in memory at once.
"""
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from scipy.spatial.distance import cdist

from app.errors import InvalidLengthError, InvalidParameterError, InvalidThresholdError, InvalidWindowError
from app.recurrence.kernels import pack_rows
from app.recurrence.schemas import Norm, RecurrencePlot, WindowSpec
from app.signals.schemas import TimeSeries
from app.signals.services import normalize

logger = logging.getLogger(__name__)

ROW_BLOCK = 512

_CDIST_METRIC = {
    "max": "chebyshev",
    "euclidean": "euclidean",
    "manhattan": "cityblock",
}


def embed(values: np.ndarray, dim: int = 1, delay: int = 1) -> np.ndarray:
    """Time-delay embedding; row t is (x_t, x_{t+delay}, ..., x_{t+(dim-1)delay})."""
    if dim < 1 or delay < 1:
        raise InvalidParameterError(f"embedding needs dim >= 1 and delay >= 1, got ({dim}, {delay})")
    values = np.asarray(values, dtype=np.float64)
    count = values.size - (dim - 1) * delay
    if count < 2:
        raise InvalidLengthError(f"series of length {values.size} is too short for embedding ({dim}, {delay})")
    return np.stack([values[k * delay: k * delay + count] for k in range(dim)], axis=1)


def build_rp(
    series: TimeSeries,
    epsilon: float,
    norm: Norm = "max",
    dim: int = 1,
    delay: int = 1,
) -> RecurrencePlot:
    """Thresholded recurrence plot of ``series`` (normalized first if needed)."""
    if not 0 < epsilon <= 1:
        raise InvalidThresholdError(f"epsilon must lie in (0, 1], got {epsilon}")
    if norm not in _CDIST_METRIC:
        raise InvalidParameterError(f"unknown norm {norm!r}, expected one of {sorted(_CDIST_METRIC)}")

    normalized_input = not series.normalized
    if normalized_input:
        logger.debug(f"Normalizing '{series.source}' before recurrence plot construction")
        series = normalize(series)

    points = embed(series.values, dim, delay)
    size = points.shape[0]
    metric = _CDIST_METRIC[norm]
    blocks = []
    for start in range(0, size, ROW_BLOCK):
        distances = cdist(points[start: start + ROW_BLOCK], points, metric=metric)
        blocks.append(pack_rows(distances <= epsilon))
    words = np.concatenate(blocks, axis=0)

    return RecurrencePlot(
        size=size,
        words=words,
        epsilon=epsilon,
        norm=norm,
        dim=dim,
        delay=delay,
        normalized_input=normalized_input,
    )


def recurrence_rate(rp: RecurrencePlot) -> float:
    """Fraction of recurrent cells, line of identity included."""
    return rp.popcount() / float(rp.size * rp.size)


def windows(series: TimeSeries, spec: WindowSpec) -> List[TimeSeries]:
    """Consecutive sub-series of length K every ``stride`` samples; a partial tail is dropped."""
    total = series.length
    if spec.window_size > total:
        raise InvalidWindowError(f"window size {spec.window_size} exceeds series length {total}")
    result = []
    for start in range(0, total - spec.window_size + 1, spec.stride):
        end = start + spec.window_size
        result.append(
            TimeSeries(
                values=series.values[start:end],
                seed=series.seed,
                normalized=False,
                source=f"{series.source}[{start}:{end}]",
            )
        )
    return result


def export_pbm(rp: RecurrencePlot, path: Union[str, Path]) -> Path:
    """Write the plot as a plain PBM (P1) bitmap, recurrent cells as 1."""
    path = Path(path)
    dense = rp.to_dense()
    lines = [f"P1\n{rp.size} {rp.size}\n"]
    for row in dense:
        lines.append("".join("1" if cell else "0" for cell in row) + "\n")
    path.write_text("".join(lines), encoding="ascii")
    logger.info(f"Exported {rp.size}x{rp.size} recurrence plot to {path}")
    return path
