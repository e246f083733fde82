"""Noise densities as they appear under the frequency integrals of the variance.

The ``2 pi`` and delta-function bookkeeping lives in :mod:`.variance`; the
functions here return bare densities. All accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR, K_B
from .errors import ParameterError
from .params import DerivedParams

__all__ = [
    "SqueezedBath",
    "ThermalBath",
    "lorentz_weight",
    "thermal_density",
    "squeezed_correlator_mm",
    "squeezed_correlator_nn",
    "baths_from_params",
]

# |x| above which coth(x) is replaced by sign(x); the difference is < 1e-26.
COTH_SATURATION = 30.0


@dataclass(frozen=True)
class SqueezedBath:
    """Lorentzian squeezed vacuum of width ``big_gamma`` centred ``center`` above the laser."""

    n_sq: float
    m_sq: complex
    big_gamma: float
    center: float

    def __post_init__(self):
        if self.big_gamma <= 0:
            raise ParameterError("big_gamma must be positive")
        if self.n_sq < 0:
            raise ParameterError("n_sq must be non-negative")


@dataclass(frozen=True)
class ThermalBath:
    gamma_m: float
    omega_m: float
    temperature: float

    def __post_init__(self):
        if self.gamma_m <= 0 or self.omega_m <= 0:
            raise ParameterError("gamma_m and omega_m must be positive")
        if self.temperature < 0:
            raise ParameterError("temperature must be non-negative")


def baths_from_params(d: DerivedParams):
    """Thermal and squeezed baths for a derived parameter set (sideband-resolved lock)."""
    thermal = ThermalBath(gamma_m=d.gamma_m, omega_m=d.omega_m, temperature=d.temperature)
    squeezed = SqueezedBath(n_sq=d.n_sq, m_sq=d.m_sq, big_gamma=d.big_gamma, center=d.omega_m)
    return thermal, squeezed


def lorentz_weight(b: SqueezedBath, nu):
    """``Gamma^2 / (Gamma^2 + nu^2)`` with ``nu`` measured from the squeezing centre."""
    g2 = b.big_gamma * b.big_gamma
    return g2 / (g2 + np.square(nu))


def squeezed_correlator_mm(b: SqueezedBath, nu):
    """Density of the anomalous correlator <c_in c_in>: ``M`` times the Lorentzian."""
    return b.m_sq * lorentz_weight(b, nu)


def squeezed_correlator_nn(b: SqueezedBath, nu):
    """Squeezed part of <c_in c_in^dagger>, without the broadband vacuum ``+1``."""
    return b.n_sq * lorentz_weight(b, nu)


def _one_plus_coth(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = np.abs(x) > COTH_SATURATION
    out[big] = 1.0 + np.sign(x[big])
    small = ~big
    # 1 + coth(x) = -2 / expm1(-2x), free of cancellation for x < 0
    out[small] = -2.0 / np.expm1(-2.0 * x[small])
    return out


def thermal_density(b: ThermalBath, omega):
    """Quantum Brownian force density ``2 gamma_m (w/w_m) [1 + coth(hbar w / 2 k_B T)]``.

    The ``w = 0`` point takes its limit ``4 gamma_m k_B T / (hbar w_m)``; at
    ``T = 0`` the density is ``4 gamma_m w / w_m`` for ``w > 0`` and zero
    otherwise.
    """
    w = np.asarray(omega, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    pref = 2.0 * b.gamma_m / b.omega_m
    out = np.zeros_like(w)
    thermal_rate = 2.0 * K_B * b.temperature / HBAR
    if thermal_rate == 0.0:
        pos = w > 0
        out[pos] = 2.0 * pref * w[pos]
    else:
        with np.errstate(over="ignore", divide="ignore"):
            # overflow to +-inf lands in the saturated branch
            x = w / thermal_rate
        small = np.abs(x) < 1e-4
        # w coth(x) = thermal_rate (1 + x^2/3 + O(x^4)); also covers w = 0
        out[small] = pref * (w[small] + thermal_rate * (1.0 + x[small] ** 2 / 3.0))
        rest = ~small
        out[rest] = pref * w[rest] * _one_plus_coth(x[rest])
    return float(out[0]) if scalar else out
