import dataclasses
import math

import numpy as np
import pytest

from waveguide_squeezing import (
    ParameterError,
    QuadratureConfig,
    SteadyState,
    UnstableOperatingPointError,
    baths_from_params,
    derive_params,
    experimental_params,
    momentum_variance,
    position_variance,
    solve_steady_state,
)
from waveguide_squeezing.constants import HBAR, K_B
from waveguide_squeezing.noise_spectra import lorentz_weight, thermal_density
from waveguide_squeezing.linear_response import transfer_functions
from waveguide_squeezing.steady_state import _candidate_positions, cavity_amplitude

from conftest import decoupled

trapezoid = getattr(np, "trapezoid", None) or np.trapz


def _point(**overrides):
    p = experimental_params(**overrides)
    d = derive_params(p)
    return d, solve_steady_state(d, p.detuning), p.detuning


@pytest.mark.parametrize("func", [momentum_variance, position_variance])
@pytest.mark.parametrize("r", [0.0, 1.0])
def test_decoupled_ground_state(derived, func, r):
    d = decoupled(derived, temperature=0.0, squeeze_r=r)
    delta = derived.omega_m
    ss = solve_steady_state(d, delta)
    v = func(d, ss, delta, baths_from_params(d))
    assert v.total == pytest.approx(1.0, abs=0.01)
    assert v.m_term == v.n_term == v.vacuum_term == 0.0


def test_decoupled_thermal_occupation(derived):
    # free oscillator: <dP^2> = coth(hbar w_m / 2 k_B T)
    temperature = 1e-3
    d = decoupled(derived, temperature=temperature)
    ss = solve_steady_state(d, derived.omega_m)
    v = momentum_variance(d, ss, derived.omega_m, baths_from_params(d))
    expected = 1.0 / math.tanh(HBAR * d.omega_m / (2 * K_B * temperature))
    assert v.total == pytest.approx(expected, rel=0.01)


def test_no_squeezing_means_no_squeezing_terms():
    d, ss, delta = _point(squeeze_r=0.0)
    v = momentum_variance(d, ss, delta, baths_from_params(d))
    assert v.m_term == 0.0 and v.n_term == 0.0
    assert v.total > 1.0


@pytest.mark.parametrize("power", [5e-6, 12e-6, 20e-6, 100e-6])
def test_term_signs(power):
    d, ss, delta = _point(pump_power=power)
    # squeezed noise reduces momentum fluctuations and amplifies position ones
    for func, m_sign in ((momentum_variance, -1), (position_variance, 1)):
        v = func(d, ss, delta, baths_from_params(d))
        assert v.thermal_term > 0 and v.n_term > 0 and v.vacuum_term > 0
        assert math.copysign(1, v.m_term) == m_sign
        assert v.total == pytest.approx(v.thermal_term + v.m_term + v.n_term + v.vacuum_term, rel=1e-15)
        assert v.squeezing_percent == pytest.approx(max(0.0, 1 - v.total) * 100)


def test_temperature_monotone():
    totals = []
    for t in (0.0, 1e-3, 10e-3, 50e-3, 100e-3):
        d, ss, delta = _point(temperature=t)
        totals.append(momentum_variance(d, ss, delta, baths_from_params(d)).total)
    assert all(a < b for a, b in zip(totals, totals[1:]))


@pytest.mark.parametrize("power", [12e-6, 20e-6])
def test_cutoff_robust(power):
    d, ss, delta = _point(pump_power=power)
    baths = baths_from_params(d)
    a = momentum_variance(d, ss, delta, baths, QuadratureConfig(cutoff_factor=20))
    b = momentum_variance(d, ss, delta, baths, QuadratureConfig(cutoff_factor=40))
    assert abs(a.total - b.total) < 1e-3


def test_forced_breakpoints_do_not_change_result():
    d, ss, delta = _point()
    baths = baths_from_params(d)
    a = momentum_variance(d, ss, delta, baths)
    b = momentum_variance(d, ss, delta, baths, QuadratureConfig(forced_breakpoints=(-3e8, 1.1e8)))
    assert b.total == pytest.approx(a.total, abs=1e-6)


def _trapezoid_oracle(d, ss, delta, cfg):
    """Same four integrals on a dense uniform grid refined around the resonances."""
    wm = d.omega_m
    thermal, sq = baths_from_params(d)
    w_cut, nu_cut = cfg.cutoff_factor * wm, cfg.nu_cutoff_factor * sq.big_gamma

    def grid(cut, centres):
        parts = [np.linspace(-cut, cut, 2_000_001)]
        parts += [np.linspace(c - 0.1 * wm, c + 0.1 * wm, 200_001) for c in centres]
        return np.unique(np.concatenate(parts))

    w = grid(w_cut, [-wm, wm])
    w = w[w != 0.0]
    p_t, p_s = transfer_functions(d, ss, delta, w)
    p_t_neg, _ = transfer_functions(d, ss, delta, -w)
    thermal_term = trapezoid((p_t * p_t_neg).real * thermal_density(thermal, w), w) / (2 * math.pi)
    vacuum = trapezoid(np.abs(p_s) ** 2, w) / (2 * math.pi)

    v = grid(nu_cut, [-2 * wm, 0.0, 2 * wm])
    _, s_plus = transfer_functions(d, ss, delta, sq.center + v)
    _, s_minus = transfer_functions(d, ss, delta, sq.center - v)
    lor = lorentz_weight(sq, v)
    m_term = 2 * trapezoid((s_plus * s_minus * sq.m_sq).real * lor, v) / (2 * math.pi)
    n_term = 2 * trapezoid(np.abs(s_plus) ** 2 * sq.n_sq * lor, v) / (2 * math.pi)
    return thermal_term, m_term, n_term, vacuum


@pytest.mark.slow
def test_adaptive_matches_dense_trapezoid():
    # near the minimum of the 1 mK power curve
    d, ss, delta = _point(pump_power=8.6e-6)
    cfg = QuadratureConfig()
    v = momentum_variance(d, ss, delta, baths_from_params(d), cfg)
    thermal_term, m_term, n_term, vacuum = _trapezoid_oracle(d, ss, delta, cfg)
    assert v.thermal_term == pytest.approx(thermal_term, abs=1e-4)
    assert v.m_term == pytest.approx(m_term, abs=1e-4)
    assert v.n_term == pytest.approx(n_term, abs=1e-4)
    assert v.vacuum_term == pytest.approx(vacuum, abs=1e-4)
    assert v.total == pytest.approx(thermal_term + m_term + n_term + vacuum, abs=1e-4)


def test_unstable_point_rejected(derived):
    delta = 0.3 * derived.omega_m
    roots = _candidate_positions(derived, delta)
    q = min(roots, key=abs)
    ss = SteadyState(q_s=q, c_s=cavity_amplitude(derived, q, delta))
    with pytest.raises(UnstableOperatingPointError, match="unstable operating point"):
        momentum_variance(derived, ss, delta, baths_from_params(derived))


def test_budget_flag_instead_of_exception():
    d, ss, delta = _point()
    v = momentum_variance(d, ss, delta, baths_from_params(d), QuadratureConfig(max_panels=4))
    assert v.tolerance_met is False
    assert math.isfinite(v.total)


def test_error_estimate_reported():
    d, ss, delta = _point()
    v = momentum_variance(d, ss, delta, baths_from_params(d))
    assert v.tolerance_met
    assert 0 <= v.estimated_quadrature_error < 1e-5


@pytest.mark.parametrize("kwargs", [
    dict(rel_tol=0.0),
    dict(cutoff_factor=2.0),
    dict(nu_cutoff_factor=0.0),
    dict(forced_breakpoints=(2.0, 1.0)),
    dict(max_panels=0),
])
def test_quadrature_config_validation(kwargs):
    with pytest.raises(ParameterError):
        QuadratureConfig(**kwargs)


def test_squeezing_phase_enters_m_term_only():
    d, ss, delta = _point()
    flipped = dataclasses.replace(d, m_sq=-d.m_sq)
    a = momentum_variance(d, ss, delta, baths_from_params(d))
    b = momentum_variance(flipped, ss, delta, baths_from_params(flipped))
    assert b.m_term == pytest.approx(-a.m_term, rel=1e-9)
    assert b.n_term == a.n_term and b.thermal_term == a.thermal_term
