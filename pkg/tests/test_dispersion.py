import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from ringsim.dispersion import (
    BVMSW,
    MSSW,
    YIG_DELAY_LINE_1,
    YIG_DELAY_LINE_2,
    OutOfBandError,
    SpinWaveMedium,
    band_limits,
    dispersion_table,
    frequency_at,
    phase_over_length,
    wavenumber_for,
)

FILM = YIG_DELAY_LINE_1
BV = FILM.with_geometry(BVMSW)


def mssw_k_closed_form(m, f):
    a, b = m.f_H + m.f_M / 2, m.f_M / 2
    return -math.log((a * a - f * f) / (b * b)) / (2 * m.d0)


def test_field_frequencies():
    assert FILM.f_H == pytest.approx(0.924)
    assert FILM.f_M == pytest.approx(4.9)


def test_band_edges():
    f0 = math.sqrt(0.924 * (0.924 + 4.9))
    assert frequency_at(FILM, 0.0) == pytest.approx(f0, rel=1e-14)
    assert frequency_at(BV, 0.0) == pytest.approx(f0, rel=1e-14)
    assert band_limits(FILM) == pytest.approx((f0, 0.924 + 2.45))
    assert band_limits(BV) == pytest.approx((0.924, f0))
    assert frequency_at(FILM, 1e9) == pytest.approx(0.924 + 2.45)
    assert frequency_at(BV, 1e9) == pytest.approx(0.924, rel=1e-3)


def test_regression_values():
    # direct evaluation of the closed forms at kd0 = 1
    k = 1 / FILM.d0
    fh, fm = 0.924, 4.9
    assert frequency_at(FILM, k) == pytest.approx(math.sqrt((fh + fm / 2) ** 2 - (fm / 2) ** 2 * math.exp(-2)), rel=1e-13)
    assert frequency_at(BV, k) == pytest.approx(math.sqrt(fh * (fh + fm * (1 - math.exp(-1)))), rel=1e-13)


def test_array_input_and_errors():
    k = np.array([0.0, 1e4, 1e5])
    f = frequency_at(FILM, k)
    assert f.shape == (3,)
    with pytest.raises(ValueError):
        frequency_at(FILM, -1.0)
    with pytest.raises(ValueError):
        SpinWaveMedium(-1e-6, 1750.0)
    with pytest.raises(ValueError):
        SpinWaveMedium(1e-6, 1750.0, geometry="FVMSW")


def test_bv_series_branch_continuous():
    x = 1e-6
    k = x / BV.d0
    lo, hi = frequency_at(BV, k * (1 - 1e-9)), frequency_at(BV, k * (1 + 1e-9))
    assert abs(lo - hi) < 1e-12


@settings(max_examples=80, deadline=None)
@given(st.floats(0.001, 0.999), st.sampled_from([YIG_DELAY_LINE_1, YIG_DELAY_LINE_2]))
def test_mssw_inverse_matches_closed_form(u, medium):
    lo, hi = band_limits(medium)
    f = lo + u * (hi - lo)
    assert wavenumber_for(medium, f) == pytest.approx(mssw_k_closed_form(medium, f), rel=1e-8)


@settings(max_examples=80, deadline=None)
@given(st.floats(0.01, 0.99))
def test_bvmsw_inverse_matches_root_finder(u):
    lo, hi = band_limits(BV)
    f = lo + u * (hi - lo)
    ref = brentq(lambda k: frequency_at(BV, k) - f, 0.0, 1e12, xtol=1e-6, rtol=1e-14)
    assert wavenumber_for(BV, f) == pytest.approx(ref, rel=1e-8)


def test_out_of_band():
    lo, hi = band_limits(FILM)
    for f in (lo, hi, lo - 0.1, hi + 0.1):
        with pytest.raises(OutOfBandError):
            wavenumber_for(FILM, f)


def test_phase_over_length():
    f = 3.0
    k = mssw_k_closed_form(FILM, f)
    assert phase_over_length(FILM, f, 1e-3).distance(k * 1e-3) < 1e-9
    with pytest.raises(ValueError):
        phase_over_length(FILM, f, 0.0)


def test_thicker_film_more_dispersive_at_fixed_k():
    k = 1e4
    assert frequency_at(YIG_DELAY_LINE_2, k) > frequency_at(YIG_DELAY_LINE_1, k)


def test_dispersion_table():
    k, f = dispersion_table(FILM, 1e2, 1e6, 30)
    assert len(k) == len(f) == 30
    assert np.all(np.diff(f) > 0)
    with pytest.raises(ValueError):
        dispersion_table(FILM, 0.0, 1.0)
