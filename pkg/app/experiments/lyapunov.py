import logging
import math
import sys
from typing import Optional

from app.errors import InvalidParameterError
from app.signals.services import draw_x0

logger = logging.getLogger(__name__)

# Returned when every derivative term vanished (orbit parked on x = 0.5).
LYAPUNOV_FLOOR = math.log(sys.float_info.min)


def logistic_lyapunov(
    r: float,
    iterations: int = 10_000,
    transient: int = 1_000,
    seed: int = 0,
    x0: Optional[float] = None,
) -> float:
    """
    Lyapunov exponent of the logistic map, (1/T) sum ln|r (1 - 2 x_t)|.

    Terms with x_t exactly 0.5 have a zero derivative and are skipped.
    """
    if not 0 < r <= 4:
        raise InvalidParameterError(f"logistic parameter r must lie in (0, 4], got {r}")
    if iterations < 1 or transient < 0:
        raise InvalidParameterError(f"need iterations >= 1 and transient >= 0, got ({iterations}, {transient})")

    x = draw_x0(seed) if x0 is None else float(x0)
    for _ in range(transient):
        x = r * x * (1.0 - x)

    total = 0.0
    used = 0
    skipped = 0
    for _ in range(iterations):
        if x == 0.5:
            skipped += 1
        else:
            total += math.log(abs(r * (1.0 - 2.0 * x)))
            used += 1
        x = r * x * (1.0 - x)

    if skipped:
        logger.warning(f"Lyapunov estimate at r={r}: skipped {skipped} of {iterations} terms with x=0.5")
    if used == 0:
        return LYAPUNOV_FLOOR
    return total / used
