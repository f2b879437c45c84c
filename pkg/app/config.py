from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="RQENTROPY_", env_file=".env", extra="ignore")

    # Recurrence / quantifiers
    DEFAULT_EPSILON: float = 0.14
    DEFAULT_L_MIN: int = 2
    DEFAULT_V_MIN: int = 2

    # Microstate sampling
    DEFAULT_SAMPLES: int = 10_000
    LORENZ_SAMPLES: int = 100_000
    MICROSTATE_PARTITIONS: int = 8  # part of the determinism contract
    EXHAUSTIVE_LIMIT: int = 10_000_000

    # Signals
    DEGENERATE_SPAN: float = 1e-9  # span relative to max|x| below which a series counts as constant

    # Runs
    THREADS: int = 1
    OUTPUT_DIR: str = "runs"
    LOG_LEVEL: str = "INFO"


@lru_cache()
def get_settings():
    return Settings()
