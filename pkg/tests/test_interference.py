import math

import numpy as np
import pytest
from scipy import integrate

from oracles import quadrant_intersection_area
from sqzwkb.distribution import FLAG_TANGENCY
from sqzwkb.errors import DegenerateSqueezingError, NoCrossingError, TangencyError
from sqzwkb.interference import (crossing_point, crossing_window, interference_phases, overlap_area,
                                 overlap_geometry, wkb_amplitude, wkb_distribution)
from sqzwkb.wkb import WkbState, action, classical_momentum


def window_ms(n, r):
    lo, hi = crossing_window(n, r)
    return range(max(0, math.ceil(lo)), math.floor(hi) + 1)


def test_crossing_point_reference_value():
    assert crossing_point(5, 5, 2.0) == pytest.approx(0.444801427136882215, rel=1e-13)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_momentum_matching(n, r):
    for m in window_ms(n, r):
        x_c = crossing_point(m, n, r)
        fock, sq = WkbState(m), WkbState(n, r)
        x_c = min(x_c, fock.epsilon, sq.epsilon)
        pm, pn = classical_momentum(fock, x_c), classical_momentum(sq, x_c)
        assert abs(pm - pn) <= 1e-12 * max(1.0, pm)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_phase_relation(n, r):
    # phi + phi' = (m - n) pi
    for m in window_ms(n, r):
        phi, phi_prime = interference_phases(m, n, r)
        assert phi + phi_prime == pytest.approx((m - n) * math.pi, abs=1e-10)


def test_equal_indices_give_opposite_phases():
    phi, phi_prime = interference_phases(5, 5, 2.0)
    assert phi_prime == pytest.approx(-phi, abs=1e-12)


def test_phases_from_actions():
    m, n, r = 9, 5, 2.0
    x_c = crossing_point(m, n, r)
    phi, _ = interference_phases(m, n, r)
    expected = action(WkbState(m), x_c) - action(WkbState(n, r), x_c) - math.pi / 4
    assert phi == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("m", [5, 9])
def test_area_matches_grid_count(m):
    area = overlap_area(m, 5, 2.0)
    grid = quadrant_intersection_area(m, 5, 2.0, nx=2000, npts=2000)
    assert area == pytest.approx(grid / (2 * math.pi), rel=0.02)


def test_area_positive_inside_window():
    for m in window_ms(5, 2.0):
        g = overlap_geometry(m, 5, 2.0)
        if g.flag != FLAG_TANGENCY:
            assert 0 < g.area < math.inf
            assert 0 <= g.x_c <= min(WkbState(m).epsilon, WkbState(5, 2.0).epsilon)


@pytest.mark.parametrize("n,r", [(0, 0.5), (5, 2.0), (10, 1.0), (7, 1.5)])
def test_parity_zeros(n, r):
    d = wkb_distribution(n, r, 500)
    odd = (d.m - n) % 2 == 1
    assert np.all(d.values[odd] == 0.0)


def test_zero_outside_window():
    lo, hi = crossing_window(5, 2.0)
    m_out = math.floor(hi) + 1 + (math.floor(hi) + 1 - 5) % 2
    assert wkb_amplitude(m_out, 5, 2.0) == 0.0
    with pytest.raises(NoCrossingError):
        crossing_point(m_out, 5, 2.0)
    g = overlap_geometry(m_out, 5, 2.0)
    assert not g.allowed


def test_no_crossing_below_window():
    # (2n+1) e^{-2r} = 21 e^{-2} ~ 2.84 > 2m + 1 for m = 0
    with pytest.raises(NoCrossingError):
        crossing_point(0, 10, 1.0)
    assert wkb_amplitude(0, 10, 1.0) == 0.0


def test_tangency_at_band_centre():
    # (2n+1) e^{2r} = 2m+1 with n = 0, e^{2r} = 5, m = 2: X_c = 0
    r = 0.5 * math.log(5.0)
    assert crossing_point(2, 0, r) == 0.0
    with pytest.raises(TangencyError):
        overlap_area(2, 0, r)
    assert math.isnan(wkb_amplitude(2, 0, r))
    d = wkb_distribution(0, r, 6)
    assert d.flags[2] == FLAG_TANGENCY and math.isnan(d.values[2])
    assert d.flags[0] == "" and np.isfinite(d.values[0])


def test_tangency_at_turning_point():
    # (2n+1) e^{-2r} = 2m+1 with n = 4, e^{2r} = 3, m = 1: X_c = epsilon_m
    r = 0.5 * math.log(3.0)
    with pytest.raises(TangencyError):
        overlap_area(1, 4, r)
    assert overlap_geometry(1, 4, r).flag == FLAG_TANGENCY


def test_degenerate_squeezing():
    with pytest.raises(DegenerateSqueezingError):
        crossing_point(5, 5, 0.0)
    with pytest.raises(DegenerateSqueezingError):
        wkb_distribution(5, 0.0, 10)


def test_negative_squeezing_uses_magnitude():
    a, b = wkb_distribution(5, 2.0, 100), wkb_distribution(5, -2.0, 100)
    np.testing.assert_array_equal(a.values, b.values)
    assert "note" in b.metadata


def _brute_force_overlap(m, n, r):
    fock, sq = WkbState(m), WkbState(n, r)
    lim = min(fock.epsilon, sq.epsilon)

    def phi(s, x):
        return 2 * math.cos(action(s, x) - math.pi / 4) / math.sqrt(s.period * classical_momentum(s, x))

    points = None
    try:
        x_c = crossing_point(m, n, r)
        points = [-x_c, x_c]
    except NoCrossingError:
        pass
    return integrate.quad(lambda x: phi(fock, x) * phi(sq, x), -lim, lim,
                          points=points, limit=2000, epsabs=1e-12)[0]


def test_brute_force_overlap_odd_pair_vanishes():
    assert abs(_brute_force_overlap(6, 5, 2.0)) < 1e-10
    assert wkb_amplitude(6, 5, 2.0) == 0.0


@pytest.mark.parametrize("m", [15, 55])
def test_brute_force_overlap_even_pairs(m):
    assert wkb_amplitude(m, 5, 2.0) == pytest.approx(_brute_force_overlap(m, 5, 2.0), rel=0.10)
