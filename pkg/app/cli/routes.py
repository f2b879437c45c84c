"""
Command handlers. Each handler takes the validated RunConfig and returns
one summary line per artifact it wrote.
"""
import json
import logging
import shutil
from pathlib import Path
from typing import Callable, Dict, List, Optional

from app.cli.schemas import RunConfig
from app.config import get_settings
from app.errors import RunDirectoryExistsError
from app.experiments.export import write_bifurcation, write_csv, write_plot_script, write_provenance
from app.experiments.sweeps import (
    default_grid,
    frange,
    sweep_epsilon_white_noise,
    sweep_logistic,
    sweep_lorenz,
    sweep_sine_noise,
)
from app.microstates.services import entropy_summary, sample_microstates, windowed_entropy, write_histogram_csv
from app.recurrence.schemas import RecurrencePlot, WindowSpec
from app.recurrence.services import build_rp, export_pbm, recurrence_rate
from app.rqa.services import rqa_summary
from app.signals.import_services import ingest_csv
from app.signals.schemas import TimeSeries
from app.signals.services import gen_logistic, gen_lorenz, gen_sine_noise, gen_white_noise

logger = logging.getLogger(__name__)

Handler = Callable[[RunConfig], List[str]]
router: Dict[str, Handler] = {}


def command(name: str):
    def register(handler: Handler) -> Handler:
        router[name] = handler
        return handler
    return register


def run_directory(config: RunConfig, name: str) -> Path:
    """Fresh ``<output_dir>/<name>-seed<seed>``; an existing one needs --force."""
    path = Path(config.run.output_dir) / f"{name}-seed{config.run.seed}"
    if path.exists():
        if not config.run.force:
            raise RunDirectoryExistsError(f"{path} already exists, pass --force to overwrite")
        shutil.rmtree(path)
    path.mkdir(parents=True)
    return path


def external_target(config: RunConfig, requested: str) -> Optional[Path]:
    """An absolute artifact path outside the run directory; an existing file there needs --force."""
    path = Path(requested)
    if not path.is_absolute():
        return None
    if path.exists() and not config.run.force:
        raise RunDirectoryExistsError(f"{path} already exists, pass --force to overwrite")
    return path


def artifact_path(out: Path, requested: str, external: Optional[Path]) -> Path:
    if external is not None:
        return external
    path = out / requested
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def load_series(config: RunConfig) -> TimeSeries:
    if config.run.input:
        return ingest_csv(config.run.input, config.run.column)
    signal, seed = config.signal, config.run.seed
    if signal.kind == "white":
        return gen_white_noise(signal.length, seed)
    if signal.kind == "sine":
        return gen_sine_noise(signal.length, signal.omega, signal.p, seed)
    if signal.kind == "logistic":
        return gen_logistic(signal.logistic_r(), signal.length, signal.transient, signal.noise_frac, seed)
    return gen_lorenz(signal.lorenz_params(), seed)


def load_rp(config: RunConfig) -> RecurrencePlot:
    rec = config.recurrence
    return build_rp(load_series(config), rec.epsilon, rec.norm, rec.dim, rec.delay)


def _series_name(config: RunConfig) -> str:
    return Path(config.run.input).stem if config.run.input else config.signal.kind


@command("gen")
def gen(config: RunConfig) -> List[str]:
    series = load_series(config)
    out = run_directory(config, f"gen-{_series_name(config)}")
    values_path = out / "series.csv"
    values_path.write_text("".join(f"{v!r}\n" for v in series.values.tolist()), encoding="utf-8")
    meta_path = out / "series.json"
    meta = {"source": series.source, "seed": series.seed, "length": series.length, "normalized": series.normalized}
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return [f"{values_path}: {series.length} samples of {series.source}", f"{meta_path}: series metadata"]


@command("rp")
def rp(config: RunConfig) -> List[str]:
    plot = load_rp(config)
    pbm_target = external_target(config, config.run.export_pbm) if config.run.export_pbm else None
    out = run_directory(config, f"rp-{_series_name(config)}")
    summary_path = out / "rp.json"
    summary = {
        "size": plot.size,
        "epsilon": plot.epsilon,
        "norm": plot.norm,
        "dim": plot.dim,
        "delay": plot.delay,
        "normalized_input": plot.normalized_input,
        "rr": recurrence_rate(plot),
    }
    summary_path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    lines = [f"{summary_path}: K={plot.size}, RR={summary['rr']:.6f}"]
    if config.run.export_pbm:
        pbm_path = export_pbm(plot, artifact_path(out, config.run.export_pbm, pbm_target))
        lines.append(f"{pbm_path}: {plot.size}x{plot.size} PBM bitmap")
    return lines


@command("rqa")
def rqa(config: RunConfig) -> List[str]:
    summary = rqa_summary(load_rp(config), config.rqa.l_min, config.rqa.v_min)
    out = run_directory(config, f"rqa-{_series_name(config)}")
    path = out / "rqa.csv"
    path.write_text(f"{summary.csv_header()}\n{summary.csv_row()}\n", encoding="utf-8")
    return [f"{path}: RR={summary.rr:.4f} DET={summary.det:.4f} LAM={summary.lam:.4f} ENTR={summary.entr:.4f}"]


@command("entropy")
def entropy(config: RunConfig) -> List[str]:
    series = load_series(config)
    rec, micro = config.recurrence, config.microstates
    samples = micro.samples or get_settings().DEFAULT_SAMPLES
    plot = build_rp(series, rec.epsilon, rec.norm, rec.dim, rec.delay)
    hist = sample_microstates(plot, micro.n, samples, config.run.seed, config.run.partitions, config.run.threads)
    summary = entropy_summary(hist)

    out = run_directory(config, f"entropy-{_series_name(config)}")
    json_path = out / "entropy.json"
    json_path.write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
    hist_path = out / "histogram.csv"
    write_histogram_csv(hist, hist_path)
    lines = [
        f"{json_path}: S={summary.entropy:.4f} of S_max={summary.s_max:.4f} (n={summary.n}, N={summary.n_bar})",
        f"{hist_path}: {len(hist.counts)} occupied microstates",
    ]
    if rec.window:
        profile = windowed_entropy(
            series, WindowSpec(window_size=rec.window, stride=rec.window_stride), rec.epsilon, micro.n, samples,
            config.run.seed, rec.norm, rec.dim, rec.delay,
        )
        profile_path = out / "windowed_entropy.csv"
        rows = ["window,start,entropy"] + [f"{k},{k * rec.window_stride},{s!r}" for k, s in enumerate(profile)]
        profile_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        lines.append(f"{profile_path}: entropy of {len(profile)} windows")
    return lines


def _grid(config: RunConfig) -> List[float]:
    sweep = config.sweep
    if sweep.grid_start is not None:
        return frange(sweep.grid_start, sweep.grid_stop, sweep.grid_step)
    return default_grid(config.run.experiment)


@command("sweep")
def sweep(config: RunConfig) -> List[str]:
    run, signal, micro = config.run, config.signal, config.microstates
    experiment = run.experiment
    grid = _grid(config)
    common = dict(
        length=signal.length,
        samples=micro.samples,
        seed=run.seed,
        replicates=run.replicates,
        threads=run.threads,
        partitions=run.partitions,
    )
    bifurcation = []
    if experiment == "white_noise":
        result = sweep_epsilon_white_noise(grid, micro.n_list, **common)
    elif experiment == "sine":
        result = sweep_sine_noise(grid, micro.n_list, signal.omega, epsilon=config.recurrence.epsilon, **common)
    elif experiment == "logistic":
        result, bifurcation = sweep_logistic(
            grid,
            micro.n_list,
            signal.noise_frac,
            transient=signal.transient,
            epsilon=config.recurrence.epsilon,
            with_lyapunov=config.sweep.lyapunov,
            bifurcation_points=config.sweep.bifurcation_points,
            **common,
        )
    else:
        result, bifurcation = sweep_lorenz(
            grid,
            signal.lorenz_params(),
            micro.n,
            epsilon=config.recurrence.epsilon,
            bifurcation_points=config.sweep.bifurcation_points,
            **common,
        )

    out = run_directory(config, experiment)
    csv_path = write_csv(result, out / "sweep.csv")
    provenance_path = write_provenance(result, out / "provenance.json")
    lines = [
        f"{csv_path}: {len(result.rows)} rows, columns {result.parameter},{','.join(result.columns)}",
        f"{provenance_path}: provenance",
    ]
    if bifurcation:
        bif_path = write_bifurcation(bifurcation, result.parameter, out / "bifurcation.csv")
        lines.append(f"{bif_path}: bifurcation samples for {len(bifurcation)} points")
    if run.plot_script:
        plot_path = write_plot_script(result, csv_path, out / "plot.gp")
        lines.append(f"{plot_path}: gnuplot script")
    return lines


def dispatch(config: RunConfig) -> List[str]:
    return router[config.run.command](config)
