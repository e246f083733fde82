"""Experimental parameters and their conversion to internal rad/s quantities.

All frequency-like internal quantities are angular frequencies (rad/s). The
mechanical position and momentum are the dimensionless quadratures with
``[Q, P] = 2i``, so the reactive slope is scaled by the zero-point length
``sqrt(hbar / (2 m omega_m))`` to become a rate per unit ``Q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .constants import C_LIGHT, HBAR
from .errors import ParameterError

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "derive_params",
    "experimental_params",
    "zero_point_length_nm",
]


@dataclass(frozen=True)
class PhysicalParams:
    """User-facing device and drive parameters.

    Units: ``wavelength_laser`` nm, ``pump_power`` W, ``mass`` kg,
    ``mech_freq`` rad/s, ``kappa_om_slope`` rad/s per nm, ``detuning`` rad/s,
    ``temperature`` K, ``squeeze_phi`` rad. The remaining fields are
    dimensionless except ``dispersive_g`` (rad/s).
    """

    wavelength_laser: float
    pump_power: float
    mass: float
    mech_freq: float
    quality_factor: float
    kappa_e_ratio: float
    kappa_om_slope: float
    detuning: float
    squeeze_r: float
    temperature: float
    squeeze_phi: float = 0.0
    bandwidth_ratio: float = 5.0
    dispersive_g: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ParameterError(f"{f.name} must be a finite real number, got {value!r}")
        for name in ("mass", "mech_freq", "quality_factor", "wavelength_laser",
                     "kappa_e_ratio", "bandwidth_ratio"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")
        for name in ("pump_power", "temperature", "squeeze_r"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative, got {getattr(self, name)!r}")

    def replace(self, **changes) -> "PhysicalParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        unknown = set(changes) - set(values)
        if unknown:
            raise ParameterError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        values.update(changes)
        return PhysicalParams(**values)


@dataclass(frozen=True)
class DerivedParams:
    """Internal quantities consumed by the equations of motion (rad/s)."""

    omega_l: float
    omega_m: float
    gamma_m: float
    kappa_e: float
    kappa_om: float
    eta: float
    eps_l: float
    eps_tilde: float
    big_gamma: float
    n_sq: float
    m_sq: complex
    temperature: float
    squeeze_r: float
    squeeze_phi: float


def zero_point_length_nm(mass: float, mech_freq: float) -> float:
    """Return ``sqrt(hbar / (2 m omega_m))`` in nanometres."""
    return math.sqrt(HBAR / (2.0 * mass * mech_freq)) * 1e9


def derive_params(p: PhysicalParams) -> DerivedParams:
    if p.dispersive_g != 0:
        raise ParameterError("dispersive coupling unsupported (dispersive_g must be 0)")

    omega_l = 2.0 * math.pi * C_LIGHT / (p.wavelength_laser * 1e-9)
    omega_m = p.mech_freq
    kappa_e = p.kappa_e_ratio * omega_m
    kappa_om = p.kappa_om_slope * zero_point_length_nm(p.mass, omega_m)
    eps_l = math.sqrt(p.pump_power / (HBAR * omega_l))

    sh, ch = math.sinh(p.squeeze_r), math.cosh(p.squeeze_r)
    # sinh*cosh*e^{i phi} keeps |M|^2 = N (N + 1) up to rounding
    m_sq = complex(sh * ch * math.cos(p.squeeze_phi), sh * ch * math.sin(p.squeeze_phi))

    return DerivedParams(
        omega_l=omega_l,
        omega_m=omega_m,
        gamma_m=omega_m / p.quality_factor,
        kappa_e=kappa_e,
        kappa_om=kappa_om,
        eta=kappa_om / kappa_e,
        eps_l=eps_l,
        eps_tilde=math.sqrt(2.0 * kappa_e) * eps_l,
        big_gamma=p.bandwidth_ratio * kappa_e,
        n_sq=sh * sh,
        m_sq=m_sq,
        temperature=p.temperature,
        squeeze_r=p.squeeze_r,
        squeeze_phi=p.squeeze_phi,
    )


def experimental_params(**overrides) -> PhysicalParams:
    """Silicon waveguide / microdisk device used throughout the figures.

    lambda = 1564.25 nm, m = 2 pg, omega_m = 2pi x 25.45 MHz,
    kappa_e = 0.05 omega_m, slope = -2pi x 26.6 MHz/nm, Q_mech = 5000,
    Gamma = 5 kappa_e. Defaults to 20 uW pump, Delta = omega_m, r = 1, T = 1 mK.
    """
    omega_m = 2.0 * math.pi * 25.45e6
    base = PhysicalParams(
        wavelength_laser=1564.25,
        pump_power=20e-6,
        mass=2e-15,
        mech_freq=omega_m,
        quality_factor=5000.0,
        kappa_e_ratio=0.05,
        kappa_om_slope=-2.0 * math.pi * 26.6e6,
        detuning=omega_m,
        squeeze_r=1.0,
        temperature=1e-3,
        squeeze_phi=0.0,
        bandwidth_ratio=5.0,
    )
    return base.replace(**overrides) if overrides else base
