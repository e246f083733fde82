"""Squeezing of a nano waveguide's motion through reactive coupling to a microdisk resonator.

Typical use::

    from waveguide_squeezing import experimental_params, evaluate_point

    row = evaluate_point(experimental_params(pump_power=12e-6))
    row.total  # stationary <dP^2>, unity at the standard quantum limit
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExhaustedError,
    NoInteriorMinimumError,
    NoRealRootError,
    NoStableRootError,
    ParameterError,
    ReconstructionError,
    ResponsePoleError,
    SimulationError,
    UnstableOperatingPointError,
)
from .params import DerivedParams, PhysicalParams, derive_params, experimental_params  # noqa: E402
from .steady_state import SteadyState, solve_steady_state  # noqa: E402
from .linear_response import (  # noqa: E402
    DriftMatrix,
    TransferPoint,
    build_drift_matrix,
    is_stable,
    response_at,
    response_oracle,
)
from .noise_spectra import (  # noqa: E402
    SqueezedBath,
    ThermalBath,
    baths_from_params,
    lorentz_weight,
    squeezed_correlator_mm,
    thermal_density,
)
from .quadrature import integrate_adaptive  # noqa: E402
from .variance import QuadratureConfig, VarianceBreakdown, momentum_variance, position_variance  # noqa: E402
from .output_field import OutputTransfer, output_transfer_at, reconstruct_momentum, y_quadrature  # noqa: E402
from .sweep import SweepRow, SweepSpec, evaluate_point, find_minimum, run_sweep  # noqa: E402
