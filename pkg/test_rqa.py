import math
from collections import Counter

import numpy as np
import pytest

from app.errors import InvalidParameterError
from app.recurrence.services import build_rp
from app.rqa.schemas import LineDistribution, RqaSummary
from app.rqa.services import (
    DIV_UNDEFINED,
    avg_diag,
    det,
    diagonal_dist,
    div,
    entr_diag,
    lam,
    rqa_summary,
    vertical_dist,
)
from app.signals.services import gen_logistic, gen_sine_noise


def runs(cells):
    """Lengths of the maximal runs of truthy cells."""
    found, current = [], 0
    for cell in cells:
        if cell:
            current += 1
        elif current:
            found.append(current)
            current = 0
    if current:
        found.append(current)
    return found


def naive_diagonal(dense):
    size = dense.shape[0]
    counts = Counter()
    for k in range(1, size):
        counts.update(runs(np.diagonal(dense, offset=k)))
        counts.update(runs(np.diagonal(dense, offset=-k)))
    return dict(counts)


def naive_vertical(dense):
    counts = Counter()
    for column in dense.T:
        counts.update(runs(column))
    return dict(counts)


def naive_quantifiers(dense, l_min=2, v_min=2):
    size = dense.shape[0]
    diagonal = naive_diagonal(dense)
    vertical = naive_vertical(dense)
    total = int(dense.sum())
    det_value = sum(l * c for l, c in diagonal.items() if l >= l_min) / (total - size) if total > size else 0.0
    lam_value = sum(v * c for v, c in vertical.items() if v >= v_min) / total
    kept = [c for l, c in diagonal.items() if l >= l_min]
    entr_value = -sum((c / sum(kept)) * math.log(c / sum(kept)) for c in kept) if kept else 0.0
    div_value = 1.0 / max(diagonal) if diagonal else DIV_UNDEFINED
    return det_value, lam_value, entr_value, div_value


def test_all_ones_distributions(make_plot):
    rp = make_plot(np.ones((4, 4), dtype=bool))
    assert diagonal_dist(rp).counts == {3: 2, 2: 2, 1: 2}
    assert vertical_dist(rp).counts == {4: 4}


def test_all_ones_quantifiers(make_plot):
    rp = make_plot(np.ones((4, 4), dtype=bool))
    diagonal = diagonal_dist(rp)
    assert det(diagonal, rp, 2) == pytest.approx((3 * 2 + 2 * 2) / 12)
    assert lam(vertical_dist(rp), rp, 2) == 1.0
    assert div(diagonal) == pytest.approx(1 / 3)


def test_identity_only(make_plot, caplog):
    rp = make_plot(np.eye(6, dtype=bool))
    diagonal = diagonal_dist(rp)
    vertical = vertical_dist(rp)
    assert diagonal.counts == {}
    assert vertical.counts == {1: 6}
    assert lam(vertical, rp, 2) == 0.0
    assert div(diagonal) == DIV_UNDEFINED
    assert entr_diag(diagonal, 2) == 0.0
    assert det(diagonal, rp, 2) == 0.0
    assert "Empty plot" in caplog.text


def test_isolated_points_have_no_determinism(make_plot):
    dense = np.eye(6, dtype=bool)
    dense[0, 3] = dense[3, 0] = True
    rp = make_plot(dense)
    assert det(diagonal_dist(rp), rp, 2) == 0.0


def test_entropy_of_line_lengths():
    single = LineDistribution(kind="diagonal", counts={3: 4}, size=10)
    assert entr_diag(single, 2) == 0.0
    pair = LineDistribution(kind="diagonal", counts={2: 5, 4: 5}, size=10)
    assert entr_diag(pair, 2) == pytest.approx(math.log(2))
    # lengths below l_min are left out of the normalization
    with_short = LineDistribution(kind="diagonal", counts={1: 100, 2: 5, 4: 5}, size=10)
    assert entr_diag(with_short, 2) == pytest.approx(math.log(2))


def test_wrong_distribution_kind(make_plot):
    rp = make_plot(np.ones((3, 3), dtype=bool))
    with pytest.raises(InvalidParameterError):
        det(vertical_dist(rp), rp, 2)
    with pytest.raises(InvalidParameterError):
        lam(diagonal_dist(rp), rp, 0)


@pytest.mark.parametrize("size", [8, 31, 64, 100, 256])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matches_naive_reference(random_plot, size, seed):
    rp = random_plot(size, density=0.35, seed=seed)
    dense = rp.to_dense()
    diagonal = diagonal_dist(rp)
    vertical = vertical_dist(rp)
    assert diagonal.counts == naive_diagonal(dense)
    assert vertical.counts == naive_vertical(dense)

    det_value, lam_value, entr_value, div_value = naive_quantifiers(dense)
    assert det(diagonal, rp, 2) == pytest.approx(det_value, abs=1e-12)
    assert lam(vertical, rp, 2) == pytest.approx(lam_value, abs=1e-12)
    assert entr_diag(diagonal, 2) == pytest.approx(entr_value, abs=1e-12)
    assert div(diagonal) == pytest.approx(div_value, abs=1e-12)


def test_periodic_sine_is_deterministic():
    rp = build_rp(gen_sine_noise(1000, omega=0.033, p=0.0, seed=0), 0.14)
    assert det(diagonal_dist(rp), rp, 2) > 0.95


def test_period_two_longest_diagonal():
    series = gen_logistic(3.2, 60, transient=1000, noise_frac=0.0, seed=4)
    rp = build_rp(series, 0.1)
    dense = rp.to_dense()
    # even offsets recur end to end; the longest off-identity line has length K - 2
    assert diagonal_dist(rp).max_length() == max(naive_diagonal(dense)) == 58


def test_logistic_chaos_entropy_matches_reference():
    rp = build_rp(gen_logistic(4.0, 400, transient=100, noise_frac=0.0, seed=6), 0.14)
    _, _, entr_value, _ = naive_quantifiers(rp.to_dense())
    assert entr_diag(diagonal_dist(rp), 2) == pytest.approx(entr_value, abs=1e-12)


def test_summary_fields(make_plot):
    rp = make_plot(np.ones((4, 4), dtype=bool))
    summary = rqa_summary(rp)
    assert summary.rr == 1.0
    assert summary.l_min == 2 and summary.v_min == 2
    assert summary.l_max == 3
    assert summary.v_max == 4
    assert summary.avg_diag == pytest.approx(avg_diag(diagonal_dist(rp), 2))
    assert summary.avg_diag == pytest.approx((3 * 2 + 2 * 2) / 4)


def test_summary_csv_row():
    summary = RqaSummary(epsilon=0.14, rr=0.5, det=0.25, lam=0.75, entr=1.0, div=0.5, l_min=2, v_min=3)
    assert summary.csv_header() == "epsilon,rr,det,lam,entr,div,l_min,v_min"
    assert summary.csv_row() == "0.14,0.5,0.25,0.75,1.0,0.5,2,3"


@pytest.mark.parametrize("size, density, seed", [(6, 0.5, 0), (40, 0.1, 1), (64, 0.3, 2), (129, 0.6, 3)])
def test_every_off_identity_point_is_on_a_diagonal(random_plot, size, density, seed):
    rp = random_plot(size, density=density, seed=seed)
    assert rp.popcount() > size
    assert det(diagonal_dist(rp), rp, 1) == 1.0


@pytest.mark.parametrize("size, seed", [(20, 0), (64, 1), (150, 2)])
@pytest.mark.parametrize("l_min", [1, 2, 3])
def test_line_entropy_is_bounded_by_distinct_lengths(random_plot, size, seed, l_min):
    diagonal = diagonal_dist(random_plot(size, density=0.5, seed=seed))
    distinct = len(diagonal.lengths(l_min))
    bound = math.log(distinct) if distinct else 0.0
    assert entr_diag(diagonal, l_min) <= bound + 1e-12
