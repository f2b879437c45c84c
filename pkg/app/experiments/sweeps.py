"""
Parameter sweeps over the test signals.

Each grid point (and replicate) is an independent task whose seeds are
derived from (master seed, replicate, point index). Tasks are plain module
level functions bound with functools.partial so the process pool can
pickle them.
"""
import logging
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.signal import find_peaks
from scipy.stats import spearmanr

from app.config import get_settings
from app.errors import InvalidParameterError
from app.experiments.lyapunov import logistic_lyapunov
from app.experiments.pool import run_tasks
from app.experiments.schemas import BifurcationSample, Provenance, SweepResult, SweepRow
from app.microstates.services import microstate_entropy, rr_oracle, sample_microstates
from app.recurrence.services import build_rp, recurrence_rate
from app.rng import STREAM_MICROSTATES, STREAM_SWEEP, derive_seed
from app.rqa.services import rqa_summary
from app.signals.schemas import LorenzParams
from app.signals.services import gen_logistic, gen_sine_noise, gen_white_noise, integrate_lorenz, lorenz_component

logger = logging.getLogger(__name__)

DEFAULT_N_LIST = (2, 3, 4)
WHITE_NOISE_SIDES = (2, 3, 4)
DEFAULT_BIFURCATION_POINTS = 50


def frange(start: float, stop: float, step: float) -> List[float]:
    """Inclusive grid start, start + step, ..., stop without accumulated drift."""
    if step <= 0:
        raise InvalidParameterError(f"grid step must be > 0, got {step}")
    count = int(round((stop - start) / step)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def default_grid(experiment: str) -> List[float]:
    grids = {
        "white_noise": (0.02, 0.60, 0.02),
        "sine": (0.0, 2.0, 0.05),
        "logistic": (2.5, 4.0, 0.002),
        "lorenz": (15.0, 50.0, 0.5),
    }
    if experiment not in grids:
        raise InvalidParameterError(f"unknown experiment {experiment!r}, expected one of {sorted(grids)}")
    return frange(*grids[experiment])


class PointConfig(BaseModel):
    """Shared settings for every grid point of one sweep."""
    model_config = ConfigDict(frozen=True)

    n_list: Tuple[int, ...]
    length: int
    samples: int
    epsilon: float
    seed: int
    partitions: int
    l_min: int = 2
    v_min: int = 2
    omega: float = 0.033
    noise_frac: float = 0.0
    transient: int = 1_000
    with_lyapunov: bool = False
    lyapunov_iterations: int = 10_000
    bifurcation_points: int = DEFAULT_BIFURCATION_POINTS
    lorenz: Optional[LorenzParams] = None


# A task is (point index, parameter value, replicate).
Task = Tuple[int, float, int]


def _point_seed(config: PointConfig, index: int, replicate: int) -> int:
    return derive_seed(config.seed, STREAM_SWEEP, replicate, index)


def _entropies(rp, config: PointConfig, seed: int) -> Dict[str, float]:
    values = {}
    for n in config.n_list:
        hist = sample_microstates(rp, n, config.samples, derive_seed(seed, STREAM_MICROSTATES, n), config.partitions)
        values[f"s{n}"] = microstate_entropy(hist)
    return values


def _white_noise_point(config: PointConfig, task: Task) -> Tuple[Dict[str, float], None]:
    index, epsilon, replicate = task
    # one series per replicate, shared by every epsilon
    series = gen_white_noise(config.length, derive_seed(config.seed, STREAM_SWEEP, replicate))
    rp = build_rp(series, epsilon)
    values = {"rr": recurrence_rate(rp), "rr_oracle": rr_oracle(epsilon)}
    values.update(_entropies(rp, config, _point_seed(config, index, replicate)))
    return values, None


def _sine_point(config: PointConfig, task: Task) -> Tuple[Dict[str, float], None]:
    index, p, replicate = task
    seed = _point_seed(config, index, replicate)
    rp = build_rp(gen_sine_noise(config.length, config.omega, p, seed), config.epsilon)
    values = {"rr": recurrence_rate(rp)}
    values.update(_entropies(rp, config, seed))
    return values, None


def _logistic_point(config: PointConfig, task: Task) -> Tuple[Dict[str, float], List[float]]:
    index, r, replicate = task
    seed = _point_seed(config, index, replicate)
    series = gen_logistic(r, config.length, config.transient, config.noise_frac, seed)
    rp = build_rp(series, config.epsilon)
    summary = rqa_summary(rp, config.l_min, config.v_min)
    values = {
        "rr": summary.rr,
        "det": summary.det,
        "lam": summary.lam,
        "entr": summary.entr,
        "div": summary.div,
    }
    values.update(_entropies(rp, config, seed))
    if config.with_lyapunov:
        values["lyapunov"] = logistic_lyapunov(r, config.lyapunov_iterations, config.transient, seed)
    return values, series.values[-config.bifurcation_points:].tolist()


def lorenz_maxima(z: np.ndarray, count: int) -> List[float]:
    """Last ``count`` local maxima of z(t); the final value when there are none."""
    peaks, _ = find_peaks(z)
    if peaks.size == 0:
        return [float(z[-1])]
    return z[peaks[-count:]].tolist()


def _lorenz_point(config: PointConfig, task: Task) -> Tuple[Dict[str, float], List[float]]:
    index, r, replicate = task
    seed = _point_seed(config, index, replicate)
    template = config.lorenz or LorenzParams()
    params = LorenzParams(**{**template.model_dump(), "r": r, "keep_steps": config.length * template.stride})
    trajectory = integrate_lorenz(params, seed)
    series = lorenz_component(trajectory, params, seed)
    rp = build_rp(series, config.epsilon)
    values = {"rr": recurrence_rate(rp)}
    values.update(_entropies(rp, config, seed))
    return values, lorenz_maxima(trajectory[:, 2], config.bifurcation_points)


def _aggregate(per_replicate: List[Dict[str, float]]) -> Dict[str, float]:
    if len(per_replicate) == 1:
        return dict(per_replicate[0])
    result = {}
    for key in per_replicate[0]:
        samples = np.array([values[key] for values in per_replicate], dtype=np.float64)
        result[key] = float(samples.mean())
        result[f"{key}_std"] = float(samples.std(ddof=1))
    return result


def _run_sweep(
    experiment: str,
    parameter: str,
    grid: Sequence[float],
    point_fn: Callable,
    config: PointConfig,
    replicates: int,
    threads: Optional[int],
    extra: Dict,
) -> Tuple[SweepResult, List[BifurcationSample]]:
    if not grid:
        raise InvalidParameterError(f"{experiment} sweep needs a non-empty {parameter} grid")
    if replicates < 1:
        raise InvalidParameterError(f"replicates must be >= 1, got {replicates}")
    threads = get_settings().THREADS if threads is None else threads

    grid = sorted(float(v) for v in grid)
    tasks = [(index, value, replicate) for replicate in range(replicates) for index, value in enumerate(grid)]
    logger.info(f"Sweep '{experiment}': {len(grid)} points x {replicates} replicate(s), {threads} worker(s)")
    outputs = run_tasks(partial(point_fn, config), tasks, threads)

    by_point: Dict[int, List[Dict[str, float]]] = {}
    bifurcation = []
    for (index, value, replicate), (values, orbit) in zip(tasks, outputs):
        by_point.setdefault(index, []).append(values)
        if replicate == 0 and orbit is not None:
            bifurcation.append(BifurcationSample(param=value, orbit=orbit))

    rows = [SweepRow(param=value, values=_aggregate(by_point[index])) for index, value in enumerate(grid)]
    provenance = Provenance(
        experiment=experiment,
        seed=config.seed,
        length=config.length,
        samples=config.samples,
        epsilon=config.epsilon if experiment != "white_noise" else None,
        partitions=config.partitions,
        threads=threads,
        replicates=replicates,
        point_seeds=[_point_seed(config, index, 0) for index in range(len(grid))],
        parameters={"n_list": list(config.n_list), **extra},
    )
    result = SweepResult(
        experiment=experiment,
        parameter=parameter,
        columns=list(rows[0].values),
        rows=rows,
        provenance=provenance,
    )
    return result, bifurcation


def _point_config(n_list, length, samples, epsilon, seed, partitions, **kwargs) -> PointConfig:
    if length < 2:
        raise InvalidParameterError(f"series length must be >= 2, got {length}")
    return PointConfig(
        n_list=tuple(n_list),
        length=length,
        samples=samples,
        epsilon=epsilon,
        seed=seed,
        partitions=partitions or get_settings().MICROSTATE_PARTITIONS,
        **kwargs,
    )


def sweep_epsilon_white_noise(
    eps_grid: Sequence[float],
    n_list: Sequence[int] = (2, 3),
    length: int = 1000,
    samples: Optional[int] = None,
    seed: int = 0,
    replicates: int = 1,
    threads: Optional[int] = None,
    partitions: Optional[int] = None,
) -> SweepResult:
    """RR, the white-noise RR oracle and S(n) as the threshold varies."""
    if any(not 0 < eps <= 1 for eps in eps_grid):
        raise InvalidParameterError("every epsilon in the grid must lie in (0, 1]")
    if any(n not in WHITE_NOISE_SIDES for n in n_list):
        raise InvalidParameterError(f"white-noise sweep supports n in {list(WHITE_NOISE_SIDES)}, got {list(n_list)}")
    samples = samples or get_settings().DEFAULT_SAMPLES
    config = _point_config(n_list, length, samples, 1.0, seed, partitions)
    result, _ = _run_sweep(
        "white_noise", "epsilon", eps_grid, _white_noise_point, config, replicates, threads, {}
    )
    return result


def sweep_sine_noise(
    p_grid: Sequence[float],
    n_list: Sequence[int] = DEFAULT_N_LIST,
    omega: float = 0.033,
    length: int = 1000,
    samples: Optional[int] = None,
    epsilon: Optional[float] = None,
    seed: int = 0,
    replicates: int = 1,
    threads: Optional[int] = None,
    partitions: Optional[int] = None,
) -> SweepResult:
    """S(n) of sin(omega t) + p u(t) as the noise amplitude p grows."""
    if any(p < 0 for p in p_grid):
        raise InvalidParameterError("noise amplitudes must be >= 0")
    settings = get_settings()
    config = _point_config(
        n_list,
        length,
        samples or settings.DEFAULT_SAMPLES,
        epsilon or settings.DEFAULT_EPSILON,
        seed,
        partitions,
        omega=omega,
    )
    result, _ = _run_sweep("sine", "p", p_grid, _sine_point, config, replicates, threads, {"omega": omega})
    return result


def sweep_logistic(
    r_grid: Sequence[float],
    n_list: Sequence[int] = DEFAULT_N_LIST,
    noise_frac: float = 0.0,
    length: int = 1000,
    transient: int = 1000,
    samples: Optional[int] = None,
    epsilon: Optional[float] = None,
    seed: int = 0,
    replicates: int = 1,
    threads: Optional[int] = None,
    partitions: Optional[int] = None,
    with_lyapunov: bool = False,
    bifurcation_points: int = DEFAULT_BIFURCATION_POINTS,
) -> Tuple[SweepResult, List[BifurcationSample]]:
    """Classic quantifiers and S(n) along r, plus the orbit for the bifurcation diagram."""
    if any(not 0 < r <= 4 for r in r_grid):
        raise InvalidParameterError("every r in the grid must lie in (0, 4]")
    settings = get_settings()
    config = _point_config(
        n_list,
        length,
        samples or settings.DEFAULT_SAMPLES,
        epsilon or settings.DEFAULT_EPSILON,
        seed,
        partitions,
        l_min=settings.DEFAULT_L_MIN,
        v_min=settings.DEFAULT_V_MIN,
        noise_frac=noise_frac,
        transient=transient,
        with_lyapunov=with_lyapunov,
        bifurcation_points=bifurcation_points,
    )
    return _run_sweep(
        "logistic",
        "r",
        r_grid,
        _logistic_point,
        config,
        replicates,
        threads,
        {"noise_frac": noise_frac, "transient": transient},
    )


def sweep_lorenz(
    r_grid: Sequence[float],
    template: Optional[LorenzParams] = None,
    n: int = 4,
    length: int = 1000,
    samples: Optional[int] = None,
    epsilon: Optional[float] = None,
    seed: int = 0,
    replicates: int = 1,
    threads: Optional[int] = None,
    partitions: Optional[int] = None,
    bifurcation_points: int = DEFAULT_BIFURCATION_POINTS,
) -> Tuple[SweepResult, List[BifurcationSample]]:
    """S(n) of one Lorenz component along r, plus local maxima of z."""
    settings = get_settings()
    template = template or LorenzParams()
    config = _point_config(
        (n,),
        length,
        samples or settings.LORENZ_SAMPLES,
        epsilon or settings.DEFAULT_EPSILON,
        seed,
        partitions,
        lorenz=template,
        bifurcation_points=bifurcation_points,
    )
    return _run_sweep(
        "lorenz", "r", r_grid, _lorenz_point, config, replicates, threads, {"lorenz": template.model_dump()}
    )


def spearman(
    result: SweepResult,
    x: str,
    y: str,
    where: Optional[Callable[[SweepRow], bool]] = None,
) -> float:
    """Spearman rank correlation between two columns over the selected rows."""
    rows = [row for row in result.rows if where is None or where(row)]
    if len(rows) < 3:
        raise InvalidParameterError(f"need at least 3 rows for a rank correlation, got {len(rows)}")

    def pick(row: SweepRow, name: str) -> float:
        return row.param if name == result.parameter else row.values[name]

    return float(spearmanr([pick(r, x) for r in rows], [pick(r, y) for r in rows]).statistic)
