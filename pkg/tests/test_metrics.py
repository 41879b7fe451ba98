import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from belltest import (
    CountsTable,
    DegeneratePredictionError,
    anomaly_report,
    j_value,
    poisson_sigma,
    significance,
)
from belltest.metrics import J_COEFFS

ZEROS = CountsTable(0, 0, 0, 0, 0, 0)
ONES = CountsTable(1, 1, 1, 1, 1, 1)


def test_j_zero():
    assert j_value(ZEROS) == 0


def test_j_table_rows(exper_table, qm_table):
    # 1523 + 1694 + 69.79 - 1069 - 1153 - 1191 (thousands)
    assert j_value(exper_table) == pytest.approx(-126210, abs=1e-6)
    assert j_value(exper_table) == pytest.approx(-126715, rel=5e-3)
    assert j_value(qm_table) == pytest.approx(-196750, abs=1e-6)


def test_j_matches_coefficient_vector(exper_table):
    assert j_value(exper_table) == pytest.approx(float(J_COEFFS @ exper_table.as_array()))


def test_sigma():
    assert poisson_sigma(ZEROS) == 0
    assert poisson_sigma(ONES) == pytest.approx(math.sqrt(6))


def test_sigma_table(exper_table):
    assert poisson_sigma(exper_table) == pytest.approx(math.sqrt(6_699_790), rel=1e-12)
    assert poisson_sigma(exper_table) == pytest.approx(2588.4, abs=0.05)


def test_significance(exper_table, qm_table):
    res = significance(ZEROS)
    assert (res.j, res.sigma, res.n_sigma) == (0, 0, 0)
    assert significance(exper_table).n_sigma == pytest.approx(-48.8, abs=0.5)
    assert significance(qm_table).n_sigma == pytest.approx(-76, abs=1)
    assert "S(a1) + S(b1) + C(a2,b2)" in significance(exper_table).convention


def test_anomaly_identity(qm_table):
    rep = anomaly_report(qm_table, qm_table)
    assert all(v == 1 for v in rep.ratios.values())
    assert rep.flagged == ()


def test_anomaly_table_rows(exper_table, qm_table):
    rep = anomaly_report(exper_table, qm_table)
    assert rep.ratios["C22"] == pytest.approx(69.79 / 12.25)
    assert rep.ratios["C22"] > 4
    assert rep.flagged == ("C22",)
    for key in ("S_A1", "S_B1", "C11", "C12", "C21"):
        assert 0.98 <= rep.ratios[key] <= 1.01


def test_anomaly_band_is_configurable(exper_table, qm_table):
    rep = anomaly_report(exper_table, qm_table, band=(0.995, 1.005))
    assert set(rep.flagged) == {"S_A1", "S_B1", "C21", "C22", "C12"}


def test_anomaly_degenerate_prediction(exper_table):
    with pytest.raises(DegeneratePredictionError):
        anomaly_report(exper_table, CountsTable(1, 1, 1, 1, 1, 0))


cells = st.lists(st.integers(0, 10**7), min_size=6, max_size=6)


@given(cells=cells, k=st.integers(0, 1000))
def test_j_linear(cells, k):
    t = CountsTable.from_array(cells)
    assert j_value(t.scaled(k)) == k * j_value(t)


@given(cells=cells)
def test_n_sigma_sign_and_product(cells):
    res = significance(CountsTable.from_array(cells))
    assert (res.n_sigma < 0) == (res.j < 0)
    assert res.sigma >= 0
    if res.sigma > 0:
        assert res.n_sigma * res.sigma == pytest.approx(res.j, rel=1e-9, abs=1e-9)


@given(cells=cells, lo=st.floats(0, 2), width=st.floats(0, 2))
def test_flags_exactly_outside_band(cells, lo, width):
    obs = CountsTable.from_array(cells)
    pred = CountsTable.from_array(np.array(cells) + 1)
    rep = anomaly_report(obs, pred, (lo, lo + width))
    for key, q in rep.ratios.items():
        assert q >= 0
        assert (key in rep.flagged) == (not lo <= q <= lo + width)
