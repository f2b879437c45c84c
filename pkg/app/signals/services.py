"""
Seedable generators for the test signals and min-max normalization.

Every generator is a pure function of its parameters and seed.
"""
import logging
from typing import Optional

import numpy as np

from app.config import get_settings
from app.errors import InvalidLengthError, InvalidParameterError, NumericDomainError, NumericOverflowError
from app.rng import STREAM_LOGISTIC, STREAM_LORENZ, STREAM_SINE_NOISE, STREAM_WHITE_NOISE, make_rng
from app.signals.kernels import DIVERGENCE_LIMIT, rk4_lorenz
from app.signals.schemas import LorenzParams, TimeSeries

logger = logging.getLogger(__name__)

LORENZ_ORIGIN = (1.0, 1.0, 1.0)
LORENZ_JITTER = 1e-3
LORENZ_REST = 1e-9
LOGISTIC_ESCAPE_TOLERANCE = 1e-12
_COMPONENTS = {"x": 0, "y": 1, "z": 2}


def _check_length(n: int) -> None:
    if n < 2:
        raise InvalidLengthError(f"series length must be at least 2, got {n}")


def gen_white_noise(n: int, seed: int) -> TimeSeries:
    """Uniform white noise in [0, 1)."""
    _check_length(n)
    rng = make_rng(seed, STREAM_WHITE_NOISE)
    return TimeSeries(values=rng.random(n), seed=seed, source="white_noise")


def gen_sine_noise(n: int, omega: float, p: float, seed: int) -> TimeSeries:
    """y(t) = sin(omega t) + p * u(t), t = 0..n-1, with u uniform in [0, 1) drawn per t."""
    _check_length(n)
    if omega == 0:
        raise InvalidParameterError("omega must be non-zero")
    if p < 0:
        raise InvalidParameterError(f"noise amplitude p must be >= 0, got {p}")
    t = np.arange(n, dtype=np.float64)
    values = np.sin(omega * t)
    if p > 0:
        rng = make_rng(seed, STREAM_SINE_NOISE)
        values = values + p * rng.random(n)
    return TimeSeries(values=values, seed=seed, source=f"sine(omega={omega},p={p})")


def draw_x0(seed: int) -> float:
    """Seeded initial condition strictly inside (0, 1)."""
    rng = make_rng(seed, STREAM_LOGISTIC, 0)
    x0 = 0.0
    while not 0.0 < x0 < 1.0:
        x0 = float(rng.random())
    return x0


def gen_logistic(
    r: float,
    n: int,
    transient: int,
    noise_frac: float,
    seed: int,
    x0: Optional[float] = None,
) -> TimeSeries:
    """
    Iterate x_{k+1} = r x_k (1 - x_k) + noise_frac * (2u - 1), clamped to [0, 1].

    The first ``transient`` iterates are discarded; the series starts at the
    state reached after them (x0 itself when transient is 0).
    """
    _check_length(n)
    if not 0 < r <= 4:
        raise InvalidParameterError(f"logistic parameter r must lie in (0, 4], got {r}")
    if transient < 0:
        raise InvalidParameterError(f"transient must be >= 0, got {transient}")
    if noise_frac < 0:
        raise InvalidParameterError(f"noise_frac must be >= 0, got {noise_frac}")

    if x0 is None:
        x0 = draw_x0(seed)
    elif not 0.0 <= x0 <= 1.0:
        raise InvalidParameterError(f"x0 must lie in [0, 1], got {x0}")

    total = transient + n
    noise = None
    if noise_frac > 0:
        rng = make_rng(seed, STREAM_LOGISTIC, 1)
        noise = noise_frac * (2.0 * rng.random(total - 1) - 1.0)

    values = np.empty(n, dtype=np.float64)
    x = float(x0)
    for k in range(total):
        if k >= transient:
            values[k - transient] = x
        if k == total - 1:
            break
        x = r * x * (1.0 - x)
        if noise is not None:
            x = min(1.0, max(0.0, x + noise[k]))
        elif not -LOGISTIC_ESCAPE_TOLERANCE <= x <= 1.0 + LOGISTIC_ESCAPE_TOLERANCE:
            raise NumericDomainError(f"logistic orbit left [0, 1] at iteration {k + 1} (x={x})")
        else:
            x = min(1.0, max(0.0, x))

    return TimeSeries(values=values, seed=seed, source=f"logistic(r={r},noise={noise_frac})")


def integrate_lorenz(params: LorenzParams, seed: int) -> np.ndarray:
    """RK4 trajectory of the Lorenz system, shape (keep_steps, 3), after the transient."""
    rng = make_rng(seed, STREAM_LORENZ)
    state0 = np.asarray(LORENZ_ORIGIN) + rng.uniform(-LORENZ_JITTER, LORENZ_JITTER, size=3)
    trajectory, failed_step = rk4_lorenz(
        state0, params.sigma, params.r, params.b, params.h, params.transient_steps, params.keep_steps
    )
    if failed_step >= 0:
        raise NumericOverflowError(
            f"Lorenz integration diverged past {DIVERGENCE_LIMIT:g} at step {failed_step} (r={params.r}, h={params.h})"
        )
    return trajectory


def lorenz_component(trajectory: np.ndarray, params: LorenzParams, seed: int) -> TimeSeries:
    """
    One component of an integrated trajectory, decimated by ``params.stride``.

    A component that stays within LORENZ_REST of zero is the stable origin
    (r < 1) and is returned as exact zeros.
    """
    column = trajectory[:: params.stride, _COMPONENTS[params.component]][: params.output_length]
    if float(np.abs(column).max()) < LORENZ_REST:
        logger.debug(f"Lorenz {params.component} at rest on the origin (r={params.r})")
        column = np.zeros_like(column)
    return TimeSeries(values=column, seed=seed, source=f"lorenz(r={params.r},{params.component})")


def gen_lorenz(params: LorenzParams, seed: int) -> TimeSeries:
    """One Lorenz component, decimated by ``params.stride``."""
    return lorenz_component(integrate_lorenz(params, seed), params, seed)


def normalize(series: TimeSeries) -> TimeSeries:
    """Affine rescale to [0, 1]. Constant series map to 0.5 with a warning."""
    if series.normalized:
        return series
    values = series.values
    lo, hi = float(values.min()), float(values.max())
    scale = float(np.abs(values).max())
    if hi == lo or hi - lo <= get_settings().DEGENERATE_SPAN * scale:
        logger.warning(f"Degenerate input: series '{series.source}' is constant (span {hi - lo:.3g}), normalizing to 0.5")
        rescaled = np.full_like(values, 0.5)
    else:
        rescaled = (values - lo) / (hi - lo)
    return TimeSeries(values=rescaled, seed=series.seed, normalized=True, source=series.source)
