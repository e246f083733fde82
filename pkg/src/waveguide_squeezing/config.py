"""Flat ``key = value`` configuration files with [physical], [quadrature], [sweep] sections.

Physical keys carry their interface unit in the name. Frequencies quoted in
MHz are in units of 2pi x 10^6 rad/s, the convention of the sweep axes::

    [physical]
    pump_power_uw = 20
    detuning_mhz = 25.45
    temperature_mk = 1

    [quadrature]
    cutoff_factor = 20

    [sweep]
    axis = detuning
    start = 0
    stop = 50.9
    points = 400
    quantity = momentum_variance

Unknown sections or keys are errors.
"""

from __future__ import annotations

import configparser
import math

from .errors import ParameterError
from .params import PhysicalParams, experimental_params
from .variance import QuadratureConfig

__all__ = [
    "PHYSICAL_KEYS",
    "QUADRATURE_KEYS",
    "SWEEP_KEYS",
    "load_config",
    "parse_config",
    "physical_overrides",
    "physical_to_config",
]

MHZ = 2.0 * math.pi * 1e6

# config key -> (PhysicalParams field, multiplier to internal units)
PHYSICAL_KEYS = {
    "wavelength_nm": ("wavelength_laser", 1.0),
    "pump_power_uw": ("pump_power", 1e-6),
    "mass_pg": ("mass", 1e-15),
    "mech_freq_mhz": ("mech_freq", MHZ),
    "quality_factor": ("quality_factor", 1.0),
    "kappa_e_ratio": ("kappa_e_ratio", 1.0),
    "kappa_om_slope_mhz_per_nm": ("kappa_om_slope", MHZ),
    "detuning_mhz": ("detuning", MHZ),
    "squeeze_r": ("squeeze_r", 1.0),
    "squeeze_phi": ("squeeze_phi", 1.0),
    "bandwidth_ratio": ("bandwidth_ratio", 1.0),
    "temperature_mk": ("temperature", 1e-3),
    "dispersive_g": ("dispersive_g", 1.0),
}

QUADRATURE_KEYS = {
    "rel_tol": float,
    "abs_tol": float,
    "cutoff_factor": float,
    "nu_cutoff_factor": float,
    "max_panels": int,
    "forced_breakpoints": lambda s: tuple(float(x) for x in s.split(",") if x.strip()),
}

SWEEP_KEYS = {
    "axis": str,
    "start": float,
    "stop": float,
    "points": int,
    "quantity": str,
}


def _convert(section, key, raw, conv):
    try:
        return conv(raw)
    except ValueError as exc:
        raise ParameterError(f"[{section}] {key}: cannot parse {raw!r}") from exc


def physical_overrides(pairs) -> dict:
    """Map ``{config_key: value}`` in interface units to PhysicalParams fields."""
    out = {}
    for key, value in pairs.items():
        if key not in PHYSICAL_KEYS:
            raise ParameterError(f"unknown physical key {key!r}")
        name, scale = PHYSICAL_KEYS[key]
        out[name] = _convert("physical", key, value, float) * scale
    return out


def physical_to_config(p: PhysicalParams) -> dict:
    return {key: getattr(p, name) / scale for key, (name, scale) in PHYSICAL_KEYS.items()}


def parse_config(text: str, base: PhysicalParams | None = None):
    """Parse config text into ``(PhysicalParams, QuadratureConfig, sweep_dict)``."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParameterError(f"malformed configuration: {exc}") from exc

    allowed = {"physical", "quadrature", "sweep"}
    unknown = set(parser.sections()) - allowed
    if unknown:
        raise ParameterError(f"unknown section(s): {', '.join(sorted(unknown))}")

    physical = dict(parser["physical"]) if parser.has_section("physical") else {}
    params = (base or experimental_params()).replace(**physical_overrides(physical))

    quad = {}
    if parser.has_section("quadrature"):
        for key, raw in parser["quadrature"].items():
            if key not in QUADRATURE_KEYS:
                raise ParameterError(f"unknown quadrature key {key!r}")
            quad[key] = _convert("quadrature", key, raw, QUADRATURE_KEYS[key])

    sweep = {}
    if parser.has_section("sweep"):
        for key, raw in parser["sweep"].items():
            if key not in SWEEP_KEYS:
                raise ParameterError(f"unknown sweep key {key!r}")
            sweep[key] = _convert("sweep", key, raw, SWEEP_KEYS[key])

    return params, QuadratureConfig(**quad), sweep


def load_config(path, base: PhysicalParams | None = None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base)
