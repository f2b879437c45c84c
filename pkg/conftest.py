import os

import numpy as np
import pytest

from app.config import get_settings
from app.recurrence.kernels import pack_rows
from app.recurrence.schemas import RecurrencePlot


def plot_from_dense(dense, epsilon: float = 0.5) -> RecurrencePlot:
    dense = np.asarray(dense, dtype=bool)
    return RecurrencePlot(size=dense.shape[0], words=pack_rows(dense), epsilon=epsilon)


def random_symmetric(size: int, density: float, seed: int) -> np.ndarray:
    """Random symmetric boolean matrix with the line of identity set."""
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((size, size)) < density, k=1)
    dense = upper | upper.T
    np.fill_diagonal(dense, True)
    return dense


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees Settings built from its own environment."""
    for key in list(os.environ):
        if key.startswith("RQENTROPY_"):
            monkeypatch.delenv(key)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def make_plot():
    return plot_from_dense


@pytest.fixture
def random_plot():
    def build(size: int, density: float = 0.3, seed: int = 0) -> RecurrencePlot:
        return plot_from_dense(random_symmetric(size, density, seed))
    return build


@pytest.fixture
def data_file(tmp_path):
    """Two-column "t,x" file of a noisy sine."""
    rng = np.random.default_rng(11)
    t = np.arange(300)
    x = np.sin(0.1 * t) + 0.05 * rng.random(t.size)
    path = tmp_path / "data.csv"
    path.write_text("".join(f"{ti},{xi!r}\n" for ti, xi in zip(t, x.tolist())), encoding="utf-8")
    return path
