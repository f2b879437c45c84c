import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import InvalidLengthError, InvalidParameterError, NumericOverflowError, ParseError
from app.signals.import_services import ingest_csv, parse_record
from app.signals.schemas import LorenzParams, TimeSeries
from app.signals.services import (
    draw_x0,
    gen_logistic,
    gen_lorenz,
    gen_sine_noise,
    gen_white_noise,
    integrate_lorenz,
    normalize,
)


def test_white_noise_is_deterministic():
    first = gen_white_noise(4, seed=42)
    second = gen_white_noise(4, seed=42)
    assert np.array_equal(first.values, second.values)
    assert not np.array_equal(first.values, gen_white_noise(4, seed=43).values)


def test_white_noise_range_and_mean():
    series = gen_white_noise(100_000, seed=5)
    assert series.values.min() >= 0.0
    assert series.values.max() < 1.0
    assert series.values.mean() == pytest.approx(0.5, abs=0.01)


def test_white_noise_rejects_short_series():
    with pytest.raises(InvalidLengthError):
        gen_white_noise(1, seed=0)


def test_pure_sine_matches_formula():
    series = gen_sine_noise(500, omega=0.033, p=0.0, seed=3)
    t = np.arange(500)
    assert np.array_equal(series.values, np.sin(0.033 * t))
    assert series.values[0] == 0.0


def test_sine_noise_widens_span():
    series = gen_sine_noise(10_000, omega=0.033, p=2.0, seed=3)
    assert series.values.max() - series.values.min() > 2.0


def test_sine_noise_rejects_negative_amplitude():
    with pytest.raises(InvalidParameterError):
        gen_sine_noise(10, omega=0.033, p=-0.1, seed=0)


def test_logistic_first_step_from_explicit_x0():
    series = gen_logistic(4.0, 3, transient=0, noise_frac=0.0, seed=0, x0=0.3)
    assert series.values[0] == 0.3
    assert series.values[1] == pytest.approx(0.84)


def test_logistic_fixed_point():
    series = gen_logistic(2.0, 50, transient=1000, noise_frac=0.0, seed=1)
    assert np.allclose(series.values, 0.5, atol=1e-12)


def test_logistic_period_two():
    series = gen_logistic(3.2, 200, transient=1000, noise_frac=0.0, seed=1)
    rounded = np.unique(np.round(series.values, 9))
    assert rounded.size == 2


def test_logistic_noise_stays_in_unit_interval():
    series = gen_logistic(4.0, 5000, transient=100, noise_frac=0.05, seed=9)
    assert series.values.min() >= 0.0
    assert series.values.max() <= 1.0


def test_logistic_same_seed_same_x0():
    assert draw_x0(17) == draw_x0(17)
    assert 0.0 < draw_x0(17) < 1.0
    a = gen_logistic(3.9, 100, transient=10, noise_frac=0.0, seed=17)
    b = gen_logistic(3.9, 100, transient=10, noise_frac=0.0, seed=17)
    assert np.array_equal(a.values, b.values)


@pytest.mark.parametrize("r, x0, transient", [(3.9, 0.2, 0), (3.7, None, 100), (4.0, 0.3, 10)])
def test_noiseless_logistic_matches_plain_iteration(r, x0, transient):
    x = draw_x0(6) if x0 is None else x0
    expected = []
    for k in range(transient + 150):
        if k >= transient:
            expected.append(x)
        x = r * x * (1.0 - x)
    series = gen_logistic(r, 150, transient=transient, noise_frac=0.0, seed=6, x0=x0)
    assert series.values.tolist() == expected


@pytest.mark.parametrize("r", [0.0, 4.5])
def test_logistic_rejects_r_outside_range(r):
    with pytest.raises(InvalidParameterError):
        gen_logistic(r, 10, transient=0, noise_frac=0.0, seed=0)


def test_lorenz_decays_to_origin():
    params = LorenzParams(r=0.5, transient_steps=20_000, keep_steps=20_000, stride=100)
    series = gen_lorenz(params, seed=1)
    assert series.length == 200
    assert abs(series.values[-1]) < 1e-3


@pytest.mark.parametrize("component", ["x", "y", "z"])
def test_lorenz_below_one_rests_on_origin(component):
    params = LorenzParams(r=0.5, keep_steps=10_000, stride=100, component=component)
    trajectory = integrate_lorenz(params, seed=4)
    assert np.abs(trajectory).max() < 1e-9
    series = gen_lorenz(params, seed=4)
    assert series.values.tolist() == [0.0] * 100


def test_lorenz_attractor_is_bounded():
    params = LorenzParams(r=28.0, transient_steps=10_000, keep_steps=50_000, stride=10)
    trajectory = integrate_lorenz(params, seed=2)
    assert trajectory.shape == (50_000, 3)
    assert np.abs(trajectory[:, 2]).max() < 60.0


def test_lorenz_settles_on_fixed_point_below_chaos():
    params = LorenzParams(r=15.0, transient_steps=200_000, keep_steps=100_000, stride=100)
    series = gen_lorenz(params, seed=3)
    tail = series.values[-series.length // 10:]
    assert tail.var() < 1e-6


def test_lorenz_divergence_raises():
    params = LorenzParams(r=28.0, h=0.5, transient_steps=1000, keep_steps=1000, stride=1)
    with pytest.raises(NumericOverflowError):
        integrate_lorenz(params, seed=0)


def test_lorenz_params_need_two_samples():
    with pytest.raises(ValidationError):
        LorenzParams(keep_steps=150, stride=100)


def test_normalize_rescales():
    series = normalize(TimeSeries(values=[2.0, 4.0, 6.0]))
    assert series.normalized
    assert series.values.tolist() == [0.0, 0.5, 1.0]


def test_normalize_is_idempotent():
    series = normalize(TimeSeries(values=[3.0, -1.0, 7.0]))
    assert normalize(series) is series


def test_normalize_constant_series_warns(caplog):
    series = normalize(TimeSeries(values=[5.0, 5.0, 5.0]))
    assert series.values.tolist() == [0.5, 0.5, 0.5]
    assert series.normalized
    assert "Degenerate input" in caplog.text


def test_normalize_small_amplitude_keeps_shape():
    series = normalize(TimeSeries(values=[2e-10, 4e-10, 6e-10]))
    assert series.values.tolist() == [0.0, 0.5, 1.0]


def test_normalize_near_constant_relative_to_scale(caplog):
    series = normalize(TimeSeries(values=[1e6, 1e6 + 1e-5, 1e6]))
    assert series.values.tolist() == [0.5, 0.5, 0.5]
    assert "Degenerate input" in caplog.text


@pytest.mark.parametrize("scale", [1e-10, 1.0, 1e8])
def test_normalize_is_scale_invariant(scale):
    base = gen_white_noise(200, seed=8).values
    scaled = normalize(TimeSeries(values=base * scale)).values
    assert np.allclose(scaled, normalize(TimeSeries(values=base)).values, atol=1e-12)


def test_time_series_rejects_bad_values():
    with pytest.raises(ValidationError):
        TimeSeries(values=[1.0])
    with pytest.raises(ValidationError):
        TimeSeries(values=[1.0, float("nan")])
    with pytest.raises(ValidationError):
        TimeSeries(values=[0.0, 2.0], normalized=True)


def test_ingest_single_column(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("0.1\n0.9\n0.5\n", encoding="utf-8")
    series = ingest_csv(path)
    assert series.values.tolist() == [0.1, 0.9, 0.5]
    assert not series.normalized


def test_ingest_second_column(tmp_path):
    path = tmp_path / "tx.csv"
    path.write_text("0,1.5\n1,2.5\n\n2,3.5\n", encoding="utf-8")
    assert ingest_csv(path, column=1).values.tolist() == [1.5, 2.5, 3.5]


def test_ingest_header_is_a_parse_error(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("value\n0.1\n0.2\n", encoding="utf-8")
    with pytest.raises(ParseError) as excinfo:
        ingest_csv(path)
    assert excinfo.value.line == 1
    assert "line 1" in str(excinfo.value)


def test_ingest_needs_two_rows(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("0.1\n", encoding="utf-8")
    with pytest.raises(InvalidLengthError):
        ingest_csv(path)


def test_parse_record_missing_column():
    with pytest.raises(ParseError):
        parse_record("1.0;2.0", column=2, line_number=4)
    assert parse_record("1.0;2.0\t3.0", column=2, line_number=1) == 3.0


def test_ingest_invalid_utf8_is_a_parse_error(tmp_path):
    path = tmp_path / "latin.csv"
    path.write_bytes(b"0.1\n0.2\n\xff\xfe\n0.3\n")
    with pytest.raises(ParseError) as excinfo:
        ingest_csv(path)
    assert excinfo.value.line == 3
    assert "UTF-8" in str(excinfo.value)


def test_ingest_skips_byte_order_mark(tmp_path):
    path = tmp_path / "bom.csv"
    path.write_bytes(b"\xef\xbb\xbf0.1\r\n0.2\r\n")
    assert ingest_csv(path).values.tolist() == [0.1, 0.2]
