"""Parameter sweeps, minimum search and tabular output.

Sweep axes use these units: detuning in 2pi x 10^6 rad/s, pump power in
uW, temperature in mK, squeezing parameter dimensionless.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Optional

import numpy as np

from .errors import NoInteriorMinimumError, ParameterError, SimulationError
from .linear_response import build_drift_matrix, is_stable
from .noise_spectra import baths_from_params
from .output_field import output_transfer_at, reconstruct_momentum, y_quadrature
from .params import PhysicalParams, derive_params
from .steady_state import solve_steady_state
from .variance import QuadratureConfig, VarianceBreakdown, momentum_variance, position_variance

__all__ = [
    "AXES",
    "QUANTITIES",
    "SweepSpec",
    "SweepRow",
    "axis_to_internal",
    "evaluate_point",
    "run_sweep",
    "find_minimum",
    "golden_section",
    "rows_to_csv",
    "rows_from_csv",
    "rows_to_json",
]

# axis -> (PhysicalParams field, interface-unit multiplier)
AXES = {
    "detuning": ("detuning", 2.0 * math.pi * 1e6),
    "power": ("pump_power", 1e-6),
    "temperature": ("temperature", 1e-3),
    "squeeze_r": ("squeeze_r", 1.0),
}
QUANTITIES = ("momentum_variance", "position_variance", "steady_state", "output_check")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int
    fixed: PhysicalParams
    quantity: str = "momentum_variance"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ParameterError(f"unknown axis {self.axis!r}; expected one of {sorted(AXES)}")
        if self.quantity not in QUANTITIES:
            raise ParameterError(f"unknown quantity {self.quantity!r}; expected one of {list(QUANTITIES)}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise ParameterError(f"sweep needs start < stop, got {self.start!r}, {self.stop!r}")
        if int(self.points) != self.points or self.points < 2:
            raise ParameterError(f"points must be an integer >= 2, got {self.points!r}")
        if not isinstance(self.fixed, PhysicalParams):
            raise ParameterError("fixed must be a PhysicalParams instance")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.points))

    def params_at(self, value: float) -> PhysicalParams:
        return self.fixed.replace(**{AXES[self.axis][0]: axis_to_internal(self.axis, value)})


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    total: Optional[float] = None
    thermal_term: Optional[float] = None
    m_term: Optional[float] = None
    n_term: Optional[float] = None
    vacuum_term: Optional[float] = None
    squeezing_percent: Optional[float] = None
    q_s: Optional[float] = None
    abs_c_s: Optional[float] = None
    multistable: Optional[bool] = None
    stable: Optional[bool] = None
    linearization_valid: Optional[bool] = None
    quad_error: Optional[float] = None
    tolerance_met: Optional[bool] = None
    roundtrip_error: Optional[float] = None
    message: str = ""

    @property
    def failed(self) -> bool:
        return self.stable is False or self.tolerance_met is False or bool(self.message)


def axis_to_internal(axis: str, value: float) -> float:
    return float(value) * AXES[axis][1]


def _roundtrip_error(d, ss, delta, n_freq=16) -> float:
    """Worst relative error of output-field reconstruction on a fixed grid."""
    worst = 0.0
    for k, w in enumerate(np.linspace(0.1, 3.0, n_freq) * d.omega_m):
        dp = complex(math.cos(k), math.sin(2 * k))
        cin, cin_dag = complex(0.3, -0.7), complex(-0.2, 0.4 + 0.1 * k)
        t, t_neg = output_transfer_at(d, ss, delta, w), output_transfer_at(d, ss, delta, -w)
        y = y_quadrature(t, t_neg, dp, cin, cin_dag)
        worst = max(worst, abs(reconstruct_momentum(t, y, cin, cin_dag) - dp) / abs(dp))
    return worst


def evaluate_point(p: PhysicalParams, cfg: QuadratureConfig | None = None,
                   quantity: str = "momentum_variance", axis_value: float = float("nan")) -> SweepRow:
    """Run the full pipeline at one operating point; failures become row flags."""
    cfg = cfg or QuadratureConfig()
    d = derive_params(p)
    delta = p.detuning
    try:
        ss = solve_steady_state(d, delta)
    except SimulationError as exc:
        return SweepRow(axis_value=axis_value, stable=False, message=str(exc))

    base = dict(
        axis_value=axis_value,
        q_s=ss.q_s,
        abs_c_s=abs(ss.c_s),
        multistable=ss.multistable,
        stable=is_stable(build_drift_matrix(d, ss, delta)),
        linearization_valid=ss.linearization_valid,
    )
    if quantity == "steady_state":
        return SweepRow(**base)
    if quantity == "output_check":
        try:
            return SweepRow(**base, roundtrip_error=_roundtrip_error(d, ss, delta))
        except SimulationError as exc:
            return SweepRow(**base, message=str(exc))

    func = momentum_variance if quantity == "momentum_variance" else position_variance
    try:
        v = func(d, ss, delta, baths_from_params(d), cfg)
    except SimulationError as exc:
        return SweepRow(**base, message=str(exc))
    return SweepRow(
        **base,
        total=v.total,
        thermal_term=v.thermal_term,
        m_term=v.m_term,
        n_term=v.n_term,
        vacuum_term=v.vacuum_term,
        squeezing_percent=v.squeezing_percent,
        quad_error=v.estimated_quadrature_error,
        tolerance_met=v.tolerance_met,
    )


def _evaluate_task(args):
    spec, cfg, value = args
    return evaluate_point(spec.params_at(value), cfg, spec.quantity, float(value))


def run_sweep(spec: SweepSpec, cfg: QuadratureConfig | None = None, workers: int = 1) -> list:
    """Evaluate ``spec.quantity`` on every grid point, in axis order."""
    cfg = cfg or QuadratureConfig()
    tasks = [(spec, cfg, v) for v in spec.grid()]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [_evaluate_task(t) for t in tasks]


def golden_section(f: Callable[[float], float], a: float, b: float, xtol: float):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _score(result) -> float:
    value = result.total if isinstance(result, VarianceBreakdown) else result
    return math.inf if value is None or not math.isfinite(value) else float(value)


def find_minimum(spec: SweepSpec, cfg: QuadratureConfig | None = None,
                 objective: Callable | None = None, xtol_rel: float = 1e-3, workers: int = 1):
    """Coarse grid scan over ``spec`` followed by golden-section refinement.

    ``objective(axis_value)`` defaults to the momentum-variance breakdown at
    that axis value (``inf`` where the point is unstable); it may also return
    a plain float. Returns ``(axis_value, objective(axis_value))``.
    """
    if spec.quantity != "momentum_variance" and objective is None:
        raise ParameterError("find_minimum requires quantity = momentum_variance")
    cfg = cfg or QuadratureConfig()

    if objective is None:
        def objective(value):
            p = spec.params_at(value)
            d = derive_params(p)
            try:
                ss = solve_steady_state(d, p.detuning)
                return momentum_variance(d, ss, p.detuning, baths_from_params(d), cfg)
            except SimulationError:
                return math.inf

        rows = run_sweep(spec, cfg, workers)
        coarse = [math.inf if r.total is None else r.total for r in rows]
    else:
        coarse = [_score(objective(v)) for v in spec.grid()]

    grid = spec.grid()
    i = int(np.argmin(coarse))
    if not math.isfinite(coarse[i]) or i == 0 or i == len(grid) - 1:
        raise NoInteriorMinimumError(
            f"no interior minimum on [{spec.start}, {spec.stop}] (coarse minimum at index {i})"
        )
    cache = {}

    def score(x):
        if x not in cache:
            cache[x] = objective(x)
        return _score(cache[x])

    x, _ = golden_section(score, grid[i - 1], grid[i + 1], xtol_rel * (spec.stop - spec.start))
    # never return something worse than the coarse grid point
    if score(x) > coarse[i]:
        x = float(grid[i])
    return float(x), (cache[x] if x in cache else objective(x))


_ROW_FIELDS = [f.name for f in fields(SweepRow)]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(rows, stream=None) -> str:
    buf = stream if stream is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_ROW_FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in _ROW_FIELDS])
    return buf.getvalue() if stream is None else ""


def _parse(name: str, text: str):
    if name == "message":
        return text
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    return float(text)


def rows_from_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    return [SweepRow(**{k: _parse(k, v) for k, v in rec.items()}) for rec in reader]


def rows_to_json(rows) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1)
