import dataclasses

import pytest

from waveguide_squeezing import derive_params, experimental_params, solve_steady_state


@pytest.fixture
def nominal_params():
    return experimental_params()


@pytest.fixture
def derived(nominal_params):
    return derive_params(nominal_params)


@pytest.fixture
def operating_point(nominal_params, derived):
    """(DerivedParams, SteadyState, delta) at 20 uW, Delta = omega_m."""
    delta = nominal_params.detuning
    return derived, solve_steady_state(derived, delta), delta


def decoupled(d, **changes):
    """Same parameters with the reactive coupling switched off."""
    return dataclasses.replace(d, kappa_om=0.0, eta=0.0, **changes)
