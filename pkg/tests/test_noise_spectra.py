import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from waveguide_squeezing import SqueezedBath, ThermalBath, lorentz_weight, squeezed_correlator_mm, thermal_density
from waveguide_squeezing.constants import HBAR, K_B

WM = 2 * math.pi * 25.45e6
GM = WM / 5000


def squeezed(r=1.0, phi=0.0, gamma=1e7):
    m = math.sinh(r) * math.cosh(r) * complex(math.cos(phi), math.sin(phi))
    return SqueezedBath(n_sq=math.sinh(r) ** 2, m_sq=m, big_gamma=gamma, center=WM)


def test_lorentz_weight_values():
    b = squeezed(gamma=3.0)
    assert lorentz_weight(b, 0.0) == 1.0
    assert lorentz_weight(b, 3.0) == 0.5
    assert lorentz_weight(b, 9.0) == pytest.approx(0.1, rel=1e-15)


def test_lorentz_weight_area():
    b = squeezed(gamma=2.5)
    area, _ = quad(lambda v: lorentz_weight(b, v), -np.inf, np.inf, epsrel=1e-10)
    assert area == pytest.approx(math.pi * 2.5, rel=1e-6)


def test_thermal_zero_temperature():
    b = ThermalBath(GM, WM, 0.0)
    assert thermal_density(b, -WM) == 0.0
    assert thermal_density(b, 0.0) == 0.0
    assert thermal_density(b, WM) == pytest.approx(4 * GM)


def test_thermal_zero_frequency_limit():
    b = ThermalBath(GM, WM, 0.01)
    expected = 4 * GM * K_B * 0.01 / (HBAR * WM)
    assert thermal_density(b, 0.0) == pytest.approx(expected, rel=1e-15)
    # continuity with the w -> 0 limit
    assert thermal_density(b, 1e-3) == pytest.approx(expected, rel=1e-9)


def test_thermal_density_one_millikelvin():
    b = ThermalBath(GM, WM, 1e-3)
    x = HBAR * WM / (2 * K_B * 1e-3)
    assert x == pytest.approx(0.6107, abs=1e-4)
    mpmath.mp.dps = 30
    ref = 2 * mpmath.mpf(GM) * (1 + mpmath.coth(mpmath.mpf(HBAR) * WM / (2 * mpmath.mpf(K_B) * mpmath.mpf("1e-3"))))
    assert thermal_density(b, WM) == pytest.approx(float(ref), rel=1e-14)


def test_thermal_density_saturates_without_overflow():
    b = ThermalBath(GM, WM, 1e-6)
    with np.errstate(all="raise"):
        vals = thermal_density(b, np.array([-50 * WM, -WM, WM, 50 * WM]))
    assert vals[0] == 0.0
    assert vals[3] == pytest.approx(4 * GM * 50)


def test_thermal_density_vectorized_matches_scalar():
    b = ThermalBath(GM, WM, 0.02)
    w = np.linspace(-3, 3, 31) * WM
    vec = thermal_density(b, w)
    assert np.array_equal(vec, np.array([thermal_density(b, x) for x in w]))


@given(st.floats(-30, 30), st.floats(0, 0.5))
def test_thermal_antisymmetric_part(w_ratio, temp):
    b = ThermalBath(GM, WM, temp)
    w = w_ratio * WM
    diff = thermal_density(b, w) - thermal_density(b, -w)
    assert diff == pytest.approx(4 * GM * w / WM, rel=1e-9, abs=1e-12 * GM)


@given(st.floats(-30, 30), st.floats(0, 0.5), st.floats(0, 0.5))
def test_thermal_monotone_in_temperature(w_ratio, t1, t2):
    lo, hi = sorted((t1, t2))
    w = w_ratio * WM
    assert thermal_density(ThermalBath(GM, WM, lo), w) <= thermal_density(ThermalBath(GM, WM, hi), w) * (1 + 1e-12)


def test_squeezed_correlator_values():
    assert squeezed_correlator_mm(squeezed(r=0.0), np.linspace(-1e8, 1e8, 11)).tolist() == [0j] * 11
    assert squeezed_correlator_mm(squeezed(r=1.0), 0.0) == pytest.approx(1.8134, abs=1e-4)
    flipped = squeezed_correlator_mm(squeezed(r=1.0, phi=math.pi), 0.0)
    assert flipped.real == pytest.approx(-1.8134, abs=1e-4)
    assert abs(flipped.imag) < 1e-15
