"""
Line-based recurrence quantifiers: P(l), P(v), DET, LAM, ENTR, DIV.

Diagonal statistics skip the line of identity and count both triangles;
vertical statistics and RR include it.
"""
import logging
import sys
from typing import Dict, Optional

import numpy as np
from scipy.stats import entropy

from app.config import get_settings
from app.errors import InvalidParameterError
from app.recurrence.schemas import RecurrencePlot
from app.recurrence.services import recurrence_rate
from app.rqa.schemas import LineDistribution, RqaSummary

logger = logging.getLogger(__name__)

# DIV has no finite value when the plot holds no diagonal line off the identity.
DIV_UNDEFINED = sys.float_info.max


def _run_lengths(flat: np.ndarray) -> np.ndarray:
    """Lengths of the maximal runs of True in a 1-D boolean array."""
    edges = np.diff(np.concatenate(([0], flat.view(np.int8), [0])))
    return np.flatnonzero(edges == -1) - np.flatnonzero(edges == 1)


def _column_run_histogram(matrix: np.ndarray) -> Dict[int, int]:
    rows, cols = matrix.shape
    # one False separator after every column keeps runs from joining
    separated = np.zeros((cols, rows + 1), dtype=bool)
    separated[:, :rows] = matrix.T
    lengths = _run_lengths(separated.ravel())
    if lengths.size == 0:
        return {}
    values, counts = np.unique(lengths, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def _sheared(dense: np.ndarray) -> np.ndarray:
    """View with column k holding diagonal k of ``dense`` (zero past the edge)."""
    size = dense.shape[0]
    padded = np.zeros((size, 2 * size), dtype=bool)
    padded[:, :size] = dense
    row_stride, col_stride = padded.strides
    return np.lib.stride_tricks.as_strided(
        padded, shape=(size, size), strides=(row_stride + col_stride, col_stride), writeable=False
    )


def diagonal_dist(rp: RecurrencePlot) -> LineDistribution:
    """P(l) over the diagonals off the line of identity, both triangles."""
    upper = _column_run_histogram(_sheared(rp.to_dense())[:, 1:])
    # the plot is symmetric, so the lower triangle mirrors the upper one
    return LineDistribution(kind="diagonal", counts={k: 2 * v for k, v in upper.items()}, size=rp.size)


def vertical_dist(rp: RecurrencePlot) -> LineDistribution:
    """P(v) over all columns, line of identity cells included."""
    return LineDistribution(kind="vertical", counts=_column_run_histogram(rp.to_dense()), size=rp.size)


def _require(dist: LineDistribution, kind: str) -> None:
    if dist.kind != kind:
        raise InvalidParameterError(f"expected a {kind} line distribution, got {dist.kind}")


def _require_min(value: int, name: str) -> None:
    if value < 1:
        raise InvalidParameterError(f"{name} must be >= 1, got {value}")


def det(dist: LineDistribution, rp: RecurrencePlot, l_min: int = 2) -> float:
    """Fraction of off-identity recurrent points on diagonals of length >= l_min."""
    _require(dist, "diagonal")
    _require_min(l_min, "l_min")
    off_identity = rp.popcount() - rp.size
    if off_identity <= 0:
        logger.warning("Empty plot: no recurrent points off the line of identity, DET set to 0")
        return 0.0
    return dist.points(l_min) / float(off_identity)


def lam(dist: LineDistribution, rp: RecurrencePlot, v_min: int = 2) -> float:
    """Fraction of recurrent points on vertical lines of length >= v_min."""
    _require(dist, "vertical")
    _require_min(v_min, "v_min")
    total = rp.popcount()
    if total <= 0:
        logger.warning("Empty plot: no recurrent points, LAM set to 0")
        return 0.0
    return dist.points(v_min) / float(total)


def entr_diag(dist: LineDistribution, l_min: int = 2) -> float:
    """Shannon entropy (natural log) of the diagonal length distribution over l >= l_min."""
    _require(dist, "diagonal")
    _require_min(l_min, "l_min")
    counts = np.array([dist.counts[length] for length in dist.lengths(l_min)], dtype=np.float64)
    if counts.size == 0:
        return 0.0
    return float(entropy(counts))


def div(dist: LineDistribution) -> float:
    """1 / l_max, or DIV_UNDEFINED when no diagonal line exists."""
    _require(dist, "diagonal")
    longest = dist.max_length()
    if longest == 0:
        return DIV_UNDEFINED
    return 1.0 / longest


def avg_diag(dist: LineDistribution, l_min: int = 2) -> float:
    lines = dist.lines(l_min)
    return dist.points(l_min) / float(lines) if lines else 0.0


def rqa_summary(rp: RecurrencePlot, l_min: Optional[int] = None, v_min: Optional[int] = None) -> RqaSummary:
    settings = get_settings()
    l_min = settings.DEFAULT_L_MIN if l_min is None else l_min
    v_min = settings.DEFAULT_V_MIN if v_min is None else v_min

    diagonal = diagonal_dist(rp)
    vertical = vertical_dist(rp)
    return RqaSummary(
        epsilon=rp.epsilon,
        rr=recurrence_rate(rp),
        det=det(diagonal, rp, l_min),
        lam=lam(vertical, rp, v_min),
        entr=entr_diag(diagonal, l_min),
        div=div(diagonal),
        l_min=l_min,
        v_min=v_min,
        l_max=diagonal.max_length(),
        v_max=vertical.max_length(),
        avg_diag=avg_diag(diagonal, l_min),
    )
