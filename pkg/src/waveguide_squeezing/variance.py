"""Stationary momentum and position variances from the noise spectra.

The variance is the sum of four spectral integrals:

* thermal:  (1/2pi) int P_T(w) P_T(-w) S_xi(w) dw
* M-term:   2 Re[(1/2pi) int P_S(w_m+v) P_S(w_m-v) M L(v) dv]
* N-term:   2 (1/2pi) int |P_S(w_m+v)|^2 N L(v) dv
* vacuum:   (1/2pi) int |P_S(w)|^2 dw

with ``L`` the squeezing Lorentzian. The fast ``exp(-2i w_m t)`` rotation of
the M-term is dropped (interaction picture at ``w_m``). Position variances
use the same template with ``Q_{T,S}(w) = (i w_m / w) P_{T,S}(w)``.
Infinite limits are truncated at ``cutoff_factor * w_m`` and
``nu_cutoff_factor * Gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExhaustedError, ParameterError, UnstableOperatingPointError
from .linear_response import build_drift_matrix, is_stable, transfer_functions
from .noise_spectra import (
    SqueezedBath,
    ThermalBath,
    lorentz_weight,
    thermal_density,
)
from .params import DerivedParams
from .quadrature import integrate_adaptive
from .steady_state import SteadyState

__all__ = [
    "QuadratureConfig",
    "VarianceBreakdown",
    "momentum_variance",
    "position_variance",
    "integrate_adaptive",
]


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-6
    abs_tol: float = 1e-10
    cutoff_factor: float = 20.0
    nu_cutoff_factor: float = 40.0
    forced_breakpoints: tuple = field(default=())
    max_panels: int = 100_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError("quadrature tolerances must be positive")
        if not self.cutoff_factor >= 5:
            raise ParameterError(f"cutoff_factor must be >= 5, got {self.cutoff_factor!r}")
        if not self.nu_cutoff_factor > 0:
            raise ParameterError("nu_cutoff_factor must be positive")
        if list(self.forced_breakpoints) != sorted(self.forced_breakpoints):
            raise ParameterError("forced_breakpoints must be sorted")
        if self.max_panels < 1:
            raise ParameterError("max_panels must be positive")


@dataclass(frozen=True)
class VarianceBreakdown:
    thermal_term: float
    m_term: float
    n_term: float
    vacuum_term: float
    total: float
    squeezing_percent: float
    estimated_quadrature_error: float
    tolerance_met: bool = True

    @classmethod
    def from_terms(cls, thermal, m, n, vacuum, error, tolerance_met=True):
        total = thermal + m + n + vacuum
        return cls(
            thermal_term=thermal,
            m_term=m,
            n_term=n,
            vacuum_term=vacuum,
            total=total,
            squeezing_percent=max(0.0, 1.0 - total) * 100.0,
            estimated_quadrature_error=error,
            tolerance_met=tolerance_met,
        )


class _Integrator:
    """Accumulates errors and the tolerance flag across the four integrals."""

    def __init__(self, cfg: QuadratureConfig):
        self.cfg = cfg
        self.error = 0.0
        self.ok = True

    def __call__(self, f, a, b, breakpoints):
        try:
            value, err = integrate_adaptive(
                f, a, b, breakpoints,
                rel_tol=self.cfg.rel_tol, abs_tol=self.cfg.abs_tol,
                max_panels=self.cfg.max_panels,
            )
        except BudgetExhaustedError as exc:
            value, err = exc.value, exc.error
            self.ok = False
        self.error += err / (2.0 * math.pi)
        return value / (2.0 * math.pi)


def _variance(d, ss, delta, baths, cfg, position):
    thermal, squeezed = baths
    cfg = cfg or QuadratureConfig()
    if not is_stable(build_drift_matrix(d, ss, delta)):
        raise UnstableOperatingPointError(
            f"unstable operating point at detuning {delta!r} rad/s: no stationary variance"
        )
    wm = d.omega_m

    def tf(w):
        p_t, p_s = transfer_functions(d, ss, delta, w)
        if position:
            factor = 1j * wm / w
            return factor * p_t, factor * p_s
        return p_t, p_s

    w_cut = cfg.cutoff_factor * wm
    nu_cut = cfg.nu_cutoff_factor * squeezed.big_gamma
    w_breaks = sorted({-wm, 0.0, wm, *cfg.forced_breakpoints})
    # features of P_S(w_m +- v) sit at v = 0, +-2 w_m; v = +-w_m maps one factor to w = 0
    nu_breaks = [-2.0 * wm, -wm, 0.0, wm, 2.0 * wm]
    integrate = _Integrator(cfg)

    def thermal_integrand(w):
        n = w.size
        t, _ = tf(np.concatenate([w, -w]))
        return (t[:n] * t[n:]).real * thermal_density(thermal, w)

    def vacuum_integrand(w):
        _, s = tf(w)
        return np.abs(s) ** 2

    thermal_term = integrate(thermal_integrand, -w_cut, w_cut, w_breaks)
    vacuum_term = integrate(vacuum_integrand, -w_cut, w_cut, w_breaks)

    m_term = 0.0
    if squeezed.m_sq != 0:
        def m_integrand(v):
            n = v.size
            _, s = tf(np.concatenate([squeezed.center + v, squeezed.center - v]))
            return (s[:n] * s[n:] * squeezed.m_sq).real * lorentz_weight(squeezed, v)

        m_term = 2.0 * integrate(m_integrand, -nu_cut, nu_cut, nu_breaks)

    n_term = 0.0
    if squeezed.n_sq != 0:
        def n_integrand(v):
            _, s = tf(squeezed.center + v)
            return np.abs(s) ** 2 * squeezed.n_sq * lorentz_weight(squeezed, v)

        n_term = 2.0 * integrate(n_integrand, -nu_cut, nu_cut, nu_breaks)

    return VarianceBreakdown.from_terms(
        thermal_term, m_term, n_term, vacuum_term, integrate.error, integrate.ok
    )


def momentum_variance(
    d: DerivedParams,
    ss: SteadyState,
    delta: float,
    baths: tuple[ThermalBath, SqueezedBath],
    cfg: QuadratureConfig | None = None,
) -> VarianceBreakdown:
    """Stationary ``<dP^2>`` (unity for the mechanical ground state)."""
    return _variance(d, ss, delta, baths, cfg, position=False)


def position_variance(
    d: DerivedParams,
    ss: SteadyState,
    delta: float,
    baths: tuple[ThermalBath, SqueezedBath],
    cfg: QuadratureConfig | None = None,
) -> VarianceBreakdown:
    """Stationary ``<dQ^2>``; no quadrature node ever lands on ``w = 0``."""
    return _variance(d, ss, delta, baths, cfg, position=True)
