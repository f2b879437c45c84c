from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config import get_settings
from app.microstates.schemas import MAX_SIDE, MIN_SIDE
from app.recurrence.schemas import Norm
from app.signals.schemas import LorenzParams

Command = Literal["gen", "rp", "rqa", "entropy", "sweep"]
Experiment = Literal["white_noise", "sine", "logistic", "lorenz"]
SignalKind = Literal["white", "sine", "logistic", "lorenz"]

_SEED_LIMIT = 1 << 64


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RunSection(_Section):
    command: Command = Field(default="entropy", description="command to run")
    experiment: Optional[Experiment] = Field(default=None, description="sweep experiment id")
    output_dir: str = Field(default_factory=lambda: get_settings().OUTPUT_DIR, description="root of run directories")
    seed: int = Field(default=0, ge=0, lt=_SEED_LIMIT, description="master seed (64-bit)")
    threads: int = Field(default_factory=lambda: get_settings().THREADS, ge=1, description="worker pool size")
    partitions: int = Field(
        default_factory=lambda: get_settings().MICROSTATE_PARTITIONS, ge=1, description="microstate sampling partitions"
    )
    replicates: int = Field(default=1, ge=1, description="seeds averaged per sweep point")
    force: bool = Field(default=False, description="overwrite an existing run directory or export target")
    plot_script: bool = Field(default=False, description="also write a gnuplot script")
    log_level: str = Field(default_factory=lambda: get_settings().LOG_LEVEL, description="logging level")
    input: Optional[str] = Field(default=None, description="text file to analyze instead of a generated signal")
    column: int = Field(default=0, ge=0, description="column index in the input file")
    export_pbm: Optional[str] = Field(
        default=None, description="write the recurrence plot as PBM (relative paths go in the run directory)"
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v!r}")
        return level


class SignalSection(_Section):
    kind: SignalKind = Field(default="white", description="generated signal")
    length: int = Field(default=1000, ge=2, description="series length M")
    omega: float = Field(default=0.033, description="sine angular frequency")
    p: float = Field(default=0.0, ge=0, description="sine noise amplitude")
    r: Optional[float] = Field(default=None, gt=0, description="logistic or Lorenz r")
    transient: int = Field(default=1000, ge=0, description="logistic transient iterations")
    noise_frac: float = Field(default=0.0, ge=0, description="logistic dynamical noise level")
    sigma: float = Field(default=10.0, description="Lorenz sigma")
    b: float = Field(default=8.0 / 3.0, description="Lorenz b")
    h: float = Field(default=1e-3, gt=0, description="Lorenz RK4 step")
    transient_steps: int = Field(default=200_000, ge=0, description="Lorenz transient steps")
    stride: int = Field(default=100, ge=1, description="Lorenz decimation stride")
    component: Literal["x", "y", "z"] = Field(default="x", description="Lorenz component")

    @field_validator("omega")
    @classmethod
    def _nonzero_omega(cls, v: float) -> float:
        if v == 0:
            raise ValueError("omega must be non-zero")
        return v

    @model_validator(mode="after")
    def _check_r(self):
        if self.kind == "logistic" and self.r is not None and self.r > 4:
            raise ValueError(f"logistic r must lie in (0, 4], got {self.r}")
        return self

    def logistic_r(self) -> float:
        return 4.0 if self.r is None else self.r

    def lorenz_params(self, r: Optional[float] = None) -> LorenzParams:
        return LorenzParams(
            r=r if r is not None else (28.0 if self.r is None else self.r),
            sigma=self.sigma,
            b=self.b,
            h=self.h,
            transient_steps=self.transient_steps,
            keep_steps=self.length * self.stride,
            stride=self.stride,
            component=self.component,
        )


class RecurrenceSection(_Section):
    epsilon: float = Field(default_factory=lambda: get_settings().DEFAULT_EPSILON, gt=0, le=1, description="threshold")
    norm: Norm = Field(default="max", description="distance norm")
    dim: int = Field(default=1, ge=1, description="embedding dimension")
    delay: int = Field(default=1, ge=1, description="embedding delay")
    window: Optional[int] = Field(default=None, ge=2, description="window size K for windowed entropy")
    window_stride: int = Field(default=1, ge=1, description="window stride")


class RqaSection(_Section):
    l_min: int = Field(default_factory=lambda: get_settings().DEFAULT_L_MIN, ge=1, description="minimum diagonal length")
    v_min: int = Field(default_factory=lambda: get_settings().DEFAULT_V_MIN, ge=1, description="minimum vertical length")


class MicrostatesSection(_Section):
    n: int = Field(default=4, ge=MIN_SIDE, le=MAX_SIDE, description="microstate side")
    n_list: List[int] = Field(default=[2, 3, 4], description="microstate sides for sweeps")
    samples: Optional[int] = Field(default=None, ge=1, description="number of sampled microstates")

    @field_validator("n_list", mode="before")
    @classmethod
    def _split(cls, v):
        if isinstance(v, str):
            return [int(part) for part in v.replace(" ", "").split(",") if part]
        return v

    @field_validator("n_list")
    @classmethod
    def _check_sides(cls, v: List[int]) -> List[int]:
        if not v or any(not MIN_SIDE <= n <= MAX_SIDE for n in v):
            raise ValueError(f"every side must lie in [{MIN_SIDE}, {MAX_SIDE}]")
        return v


class SweepSection(_Section):
    grid_start: Optional[float] = Field(default=None, description="first grid value")
    grid_stop: Optional[float] = Field(default=None, description="last grid value")
    grid_step: Optional[float] = Field(default=None, gt=0, description="grid step")
    lyapunov: bool = Field(default=False, description="add a lyapunov column to the logistic sweep")
    bifurcation_points: int = Field(default=50, ge=1, description="orbit samples kept per point")

    @model_validator(mode="after")
    def _complete_grid(self):
        given = [v is not None for v in (self.grid_start, self.grid_stop, self.grid_step)]
        if any(given) and not all(given):
            raise ValueError("grid_start, grid_stop and grid_step must be given together")
        if all(given) and self.grid_stop < self.grid_start:
            raise ValueError("grid_stop must be >= grid_start")
        return self


class RunConfig(_Section):
    run: RunSection = Field(default_factory=RunSection)
    signal: SignalSection = Field(default_factory=SignalSection)
    recurrence: RecurrenceSection = Field(default_factory=RecurrenceSection)
    rqa: RqaSection = Field(default_factory=RqaSection)
    microstates: MicrostatesSection = Field(default_factory=MicrostatesSection)
    sweep: SweepSection = Field(default_factory=SweepSection)


SECTIONS = {
    "run": RunSection,
    "signal": SignalSection,
    "recurrence": RecurrenceSection,
    "rqa": RqaSection,
    "microstates": MicrostatesSection,
    "sweep": SweepSection,
}
