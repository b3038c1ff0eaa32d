import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import vacuum_overlap_squared
from sqzwkb.distribution import Method
from sqzwkb.errors import QuadratureOrderError
from sqzwkb.exact import (exact_amplitude, exact_amplitude_recurrence, exact_amplitudes,
                          exact_distribution, quadrature_order, recurrence_column)

# 60-digit references
FROZEN = [
    (5, 5, 2.0, 0.177615561347016132),
    (7, 5, 2.0, -0.162947351414537844),
    (3, 1, 1.0, -0.486615906265307630),
    (2, 0, 0.5, -0.307719176458370449),
]


@pytest.mark.parametrize("n", [0, 1, 5, 20])
def test_zero_squeezing_is_identity(n):
    for method in (Method.EXACT_QUADRATURE, Method.EXACT_RECURRENCE):
        d = exact_distribution(n, 0.0, 2 * n, method=method)
        expected = np.zeros(2 * n + 1)
        expected[n] = 1.0
        np.testing.assert_allclose(d.values, expected, atol=1e-10, rtol=0)


@pytest.mark.parametrize("r,sech", [(0.5, 0.886818883970073909), (1.0, 0.648054273663885400),
                                    (2.0, 0.265802228834079692)])
def test_vacuum_probability_is_sech(r, sech):
    assert exact_amplitude(0, 0, r) ** 2 == pytest.approx(sech, abs=1e-10)
    assert exact_amplitude_recurrence(0, 0, r) ** 2 == pytest.approx(sech, abs=1e-10)
    assert vacuum_overlap_squared(r) == pytest.approx(sech, abs=1e-12)


@pytest.mark.parametrize("m,n,r,w", FROZEN)
def test_frozen_amplitudes(m, n, r, w):
    assert exact_amplitude(m, n, r) == pytest.approx(w, rel=1e-11)
    assert exact_amplitude_recurrence(m, n, r) == pytest.approx(w, rel=1e-11)


@settings(max_examples=50, deadline=None)
@given(m=st.integers(0, 60), n=st.integers(0, 60), r=st.floats(-2.0, 2.0))
def test_odd_difference_vanishes(m, n, r):
    if (m - n) % 2:
        assert exact_amplitude(m, n, r) == 0.0
        assert exact_amplitude_recurrence(m, n, r) == 0.0


def test_odd_difference_without_short_circuit():
    for m in range(0, 40, 2):
        assert abs(exact_amplitude(m + 1, 4, 1.2, short_circuit=False)) < 1e-14


@settings(max_examples=40, deadline=None)
@given(m=st.integers(0, 40), n=st.integers(0, 40), r=st.floats(-2.0, 2.0))
def test_transpose_symmetry(m, n, r):
    a = exact_amplitude(m, n, r)
    b = exact_amplitude(n, m, -r)
    assert abs(abs(a) - abs(b)) <= 1e-10


@pytest.mark.parametrize("m,n,r", [(55, 5, 2.0), (120, 30, 1.5), (10, 3, 0.3)])
def test_order_doubling_is_stable(m, n, r):
    base = exact_amplitude(m, n, r)
    doubled = exact_amplitude(m, n, r, order=2 * quadrature_order(m, n))
    assert doubled == pytest.approx(base, rel=1e-11, abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(m=st.integers(0, 100), n=st.integers(0, 100), r=st.floats(0.0, 2.0))
def test_order_doubling_sampled(m, n, r):
    base = exact_amplitude(m, n, r)
    doubled = exact_amplitude(m, n, r, order=2 * quadrature_order(m, n))
    assert abs(doubled - base) <= 1e-10


def test_order_cap():
    with pytest.raises(QuadratureOrderError):
        quadrature_order(3000, 1000)


@pytest.mark.parametrize("n,r", [(5, 2.0), (10, 1.0), (0, 2.5), (17, -1.5), (40, 0.8)])
def test_recurrence_matches_quadrature_column(n, r):
    m_max = 600
    q = exact_amplitudes(n, r, m_max)
    c = recurrence_column(n, r, m_max)
    np.testing.assert_allclose(c, q, rtol=0, atol=1e-12)


def test_unitarity_n5_r2():
    d = exact_distribution(5, 2.0, 2000)
    assert d.total >= 1 - 1e-6
    assert d.total <= 1 + 1e-10
    assert d.metadata["normalization"] == pytest.approx(d.total)


def test_columns_are_orthonormal():
    r, m_max = 1.1, 400
    cols = {n: exact_amplitudes(n, r, m_max) for n in (0, 2, 3, 7)}
    for a in cols:
        for b in cols:
            expected = 1.0 if a == b else 0.0
            assert float(np.dot(cols[a], cols[b])) == pytest.approx(expected, abs=1e-10)


def test_distribution_validation():
    with pytest.raises(ValueError):
        exact_distribution(3, 1.0, 10, method=Method.WKB)
    with pytest.raises(ValueError):
        exact_distribution(3, 1.0, -1)


def test_tail_underflow_is_flagged_not_negative():
    d = exact_distribution(0, 0.05, 400, method=Method.EXACT_RECURRENCE)
    assert np.all(d.values >= 0.0)
    assert "clamped" in d.flags


def test_small_amplitudes_are_refined():
    # W(41, 15, 0.05) ~ -1.16e-12 is a sum of terms near 0.1
    ref = -1.163350565708708e-12
    assert exact_amplitude(41, 15, 0.05) == pytest.approx(ref, rel=1e-10)
    assert exact_amplitude_recurrence(41, 15, 0.05) == pytest.approx(ref, rel=1e-10)
    rough = exact_amplitude(41, 15, 0.05, refine=False)
    assert abs(rough - ref) > 1e-10 * abs(ref)


def test_refinement_recorded_in_metadata():
    d = exact_distribution(15, 0.05, 60)
    assert d.metadata["refined"] > 0
    assert d.metadata["cancellation_limited"] == 0
    assert d.metadata["working_precision"] in ("long double", "double")
    plain = exact_distribution(5, 2.0, 400)
    assert plain.metadata["refined"] == 0


def test_double_only_platforms_still_agree(monkeypatch):
    import sqzwkb.exact as exact_module
    monkeypatch.setattr(exact_module, "EXTENDED_AVAILABLE", False)
    assert exact_module.working_precision() == "double"
    for n, r in [(50, 0.5), (15, 0.05), (3, 0.25)]:
        q = exact_amplitudes(n, r, 50)
        c = recurrence_column(n, r, 50)
        big = np.abs(q) > 1e-12
        assert np.max(np.abs(q[big] - c[big]) / np.abs(q[big])) <= 1e-9
