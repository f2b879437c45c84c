"""
Microstate entropy of a recurrence plot.

n x n blocks are sampled from the plot, binned by code, and the Shannon
entropy of the code frequencies is reported in nats. Sampling is split into
a fixed number of partitions, each with its own Philox stream, and the
partial histograms are summed; the result depends on (seed, partitions)
and never on how many threads ran them.
"""
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from scipy.stats import entropy

from app.config import get_settings
from app.errors import (
    InvalidParameterError,
    MatrixTooSmallError,
    MicrostateIndexError,
    PlacementLimitError,
)
from app.microstates.kernels import block_code, encode_all, encode_corners
from app.microstates.schemas import MAX_SIDE, MIN_SIDE, ClassBreakdown, EntropySummary, MicrostateHistogram
from app.recurrence.schemas import Norm, RecurrencePlot, WindowSpec
from app.recurrence.services import build_rp, windows
from app.rng import STREAM_MICROSTATES, derive_seed, make_rng
from app.signals.schemas import TimeSeries

logger = logging.getLogger(__name__)

# Two-by-two structural groups, codes under the r * 2 + c bit convention.
DIAGONAL_CODES = (9, 6)      # [[1,0],[0,1]] and [[0,1],[1,0]]
HORIZONTAL_CODES = (3, 12)   # one full row
VERTICAL_CODES = (5, 10)     # one full column


def _check_side(n: int) -> None:
    if not MIN_SIDE <= n <= MAX_SIDE:
        raise InvalidParameterError(f"microstate side must lie in [{MIN_SIDE}, {MAX_SIDE}], got {n}")


def _histogram(codes: np.ndarray) -> Dict[int, int]:
    values, counts = np.unique(codes, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def encode_microstate(rp: RecurrencePlot, i: int, j: int, n: int) -> int:
    """Code of the n x n block whose top-left corner is (i, j)."""
    _check_side(n)
    last = rp.size - n
    if not (0 <= i <= last and 0 <= j <= last):
        raise MicrostateIndexError(f"corner ({i}, {j}) outside [0, {last}]^2 for a {n}x{n} block")
    return int(block_code(rp.words, i, j, n))


def _sample_partition(rp: RecurrencePlot, n: int, count: int, seed: int, partition: int) -> Dict[int, int]:
    rng = make_rng(seed, STREAM_MICROSTATES, partition)
    corners = rng.integers(0, rp.size - n + 1, size=(2, count), dtype=np.int64)
    return _histogram(encode_corners(rp.words, corners[0], corners[1], n))


def sample_microstates(
    rp: RecurrencePlot,
    n: int,
    samples: int,
    seed: int,
    partitions: Optional[int] = None,
    threads: int = 1,
) -> MicrostateHistogram:
    """Histogram of ``samples`` blocks drawn uniformly with replacement."""
    _check_side(n)
    if samples < 1:
        raise InvalidParameterError(f"sample count must be >= 1, got {samples}")
    if rp.size < n:
        raise MatrixTooSmallError(f"{rp.size}x{rp.size} plot cannot hold a {n}x{n} microstate")
    partitions = partitions or get_settings().MICROSTATE_PARTITIONS
    partitions = max(1, min(partitions, samples))

    base, extra = divmod(samples, partitions)
    sizes = [base + (1 if p < extra else 0) for p in range(partitions)]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(lambda p: _sample_partition(rp, n, sizes[p], seed, p), range(partitions)))
    else:
        parts = [_sample_partition(rp, n, sizes[p], seed, p) for p in range(partitions)]

    merged: Counter = Counter()
    for part in parts:
        merged.update(part)
    return MicrostateHistogram(
        n=n, counts=dict(sorted(merged.items())), samples=samples, seed=seed, partitions=partitions
    )


def exhaustive_microstates(rp: RecurrencePlot, n: int, limit: Optional[int] = None) -> MicrostateHistogram:
    """Histogram over every placement of an n x n block."""
    _check_side(n)
    if rp.size < n:
        raise MatrixTooSmallError(f"{rp.size}x{rp.size} plot cannot hold a {n}x{n} microstate")
    limit = get_settings().EXHAUSTIVE_LIMIT if limit is None else limit
    placements = (rp.size - n + 1) ** 2
    if placements > limit:
        raise PlacementLimitError(f"{placements} placements exceed the exhaustive limit of {limit}")
    return MicrostateHistogram(
        n=n, counts=_histogram(encode_all(rp.words, rp.size, n)), samples=placements, exhaustive=True
    )


def microstate_entropy(hist: MicrostateHistogram) -> float:
    """S = -sum P_i ln P_i over the observed codes."""
    return float(entropy(hist.count_array()))


def max_entropy(n: int) -> float:
    """ln 2^(n*n), reached when every microstate is equally likely."""
    _check_side(n)
    return n * n * math.log(2.0)


def class_breakdown(hist: MicrostateHistogram) -> ClassBreakdown:
    class_counts = [0] * (hist.n * hist.n + 1)
    for code, count in hist.counts.items():
        class_counts[code.bit_count()] += count
    return ClassBreakdown(n=hist.n, mass=[c / hist.samples for c in class_counts])


def structural_breakdown(hist: MicrostateHistogram) -> Dict[str, float]:
    """Mass of the diagonal, horizontal and vertical 2x2 microstates."""
    if hist.n != 2:
        raise InvalidParameterError(f"structural groups are defined for n=2, got n={hist.n}")
    probabilities = hist.probabilities()
    groups = {
        "diagonal": sum(probabilities.get(c, 0.0) for c in DIAGONAL_CODES),
        "horizontal": sum(probabilities.get(c, 0.0) for c in HORIZONTAL_CODES),
        "vertical": sum(probabilities.get(c, 0.0) for c in VERTICAL_CODES),
    }
    groups["other"] = max(0.0, 1.0 - sum(groups.values()))
    return groups


def code_pattern(code: int, n: int) -> str:
    """Row-major 0/1 string of a block, e.g. 9 -> "1001" for n=2."""
    _check_side(n)
    return "".join("1" if (code >> k) & 1 else "0" for k in range(n * n))


def rr_oracle(epsilon: float) -> float:
    """Expected recurrence rate of uniform white noise: 2 eps - eps^2."""
    if not 0 <= epsilon <= 1:
        raise InvalidParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    return 2.0 * epsilon - epsilon * epsilon


def threshold_for_rate(rate: float) -> float:
    """Inverse of rr_oracle on [0, 1]."""
    if not 0 <= rate <= 1:
        raise InvalidParameterError(f"recurrence rate must lie in [0, 1], got {rate}")
    return 1.0 - math.sqrt(1.0 - rate)


def total_variation(first: MicrostateHistogram, second: MicrostateHistogram) -> float:
    if first.n != second.n:
        raise InvalidParameterError(f"histograms have different sides ({first.n} vs {second.n})")
    p, q = first.probabilities(), second.probabilities()
    return 0.5 * sum(abs(p.get(code, 0.0) - q.get(code, 0.0)) for code in set(p) | set(q))


def entropy_summary(hist: MicrostateHistogram) -> EntropySummary:
    return EntropySummary(
        n=hist.n,
        n_bar=hist.samples,
        entropy=microstate_entropy(hist),
        s_max=max_entropy(hist.n),
        class_mass=class_breakdown(hist).mass,
    )


def windowed_entropy(
    series: TimeSeries,
    spec: WindowSpec,
    epsilon: float,
    n: int,
    samples: int,
    seed: int,
    norm: Norm = "max",
    dim: int = 1,
    delay: int = 1,
) -> List[float]:
    """Microstate entropy of each window, every window with its own derived seed."""
    result = []
    for index, window in enumerate(windows(series, spec)):
        rp = build_rp(window, epsilon, norm, dim, delay)
        hist = sample_microstates(rp, n, samples, derive_seed(seed, STREAM_MICROSTATES, index))
        result.append(microstate_entropy(hist))
    logger.info(f"Computed microstate entropy over {len(result)} windows of size {spec.window_size}")
    return result


def write_histogram_csv(hist: MicrostateHistogram, path: Union[str, Path]) -> Path:
    """(code, count) pairs sorted by code."""
    path = Path(path)
    lines = ["code,count"] + [f"{code},{count}" for code, count in sorted(hist.counts.items())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
