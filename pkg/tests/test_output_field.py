import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waveguide_squeezing import (
    ReconstructionError,
    build_drift_matrix,
    derive_params,
    experimental_params,
    output_transfer_at,
    reconstruct_momentum,
    solve_steady_state,
    y_quadrature,
)

from conftest import decoupled

finite = st.floats(-1e3, 1e3, allow_nan=False)
cplx = st.builds(complex, finite, finite)


def test_transfer_at_zero_frequency(operating_point):
    d, ss, delta = operating_point
    with pytest.raises(ZeroDivisionError):
        output_transfer_at(d, ss, delta, 0.0)


@pytest.mark.parametrize("factor", [0.5, 1.0, -1.0, 2.3])
def test_composition_against_state_solve(operating_point, factor):
    d, ss, delta = operating_point
    w = factor * d.omega_m
    z = build_drift_matrix(d, ss, delta)
    rng = np.random.default_rng(7)
    sources = rng.normal(size=3) + 1j * rng.normal(size=3)
    state = np.linalg.solve(-1j * w * np.eye(4) - z.z, z.noise_coefficients @ sources)
    j = math.sqrt(2 * d.kappa_e) * (1 + 0.5 * d.eta * ss.q_s)
    # c_out = sqrt(2 kappa_e(Q)) c, linearized
    c_out = j * state[2] + 0.5 * d.eta * math.sqrt(2 * d.kappa_e) * ss.c_s * state[0]
    t = output_transfer_at(d, ss, delta, w)
    predicted = t.c_out_on_p * state[1] + t.c_out_on_cin * sources[1]
    assert predicted == pytest.approx(c_out, rel=1e-9)


def test_round_trip(operating_point):
    d, ss, delta = operating_point
    rng = np.random.default_rng(3)
    for w in rng.uniform(-3, 3, 50) * d.omega_m:
        p, cin, cin_dag = rng.normal(size=3) + 1j * rng.normal(size=3)
        t, t_neg = output_transfer_at(d, ss, delta, w), output_transfer_at(d, ss, delta, -w)
        y = y_quadrature(t, t_neg, p, cin, cin_dag)
        assert reconstruct_momentum(t, y, cin, cin_dag) == pytest.approx(p, rel=1e-9)


def test_zero_inputs(operating_point):
    d, ss, delta = operating_point
    w = 0.9 * d.omega_m
    t, t_neg = output_transfer_at(d, ss, delta, w), output_transfer_at(d, ss, delta, -w)
    y = y_quadrature(t, t_neg, 0j, 0j, 0j)
    assert y == 0
    assert reconstruct_momentum(t, y, 0j, 0j) == 0


def test_mismatched_pair(operating_point):
    d, ss, delta = operating_point
    t = output_transfer_at(d, ss, delta, d.omega_m)
    with pytest.raises(ValueError):
        y_quadrature(t, t, 1, 0, 0)


def test_decoupled_limit(derived):
    d = decoupled(derived)
    delta = derived.omega_m
    ss = solve_steady_state(d, delta)
    w = 0.7 * d.omega_m
    t = output_transfer_at(d, ss, delta, w)
    assert t.c_out_on_p == 0
    assert t.recon_denominator == 0
    assert t.c_out_on_cin == pytest.approx(2 * d.kappa_e / complex(d.kappa_e, delta - w), rel=1e-14)
    t_neg = output_transfer_at(d, ss, delta, -w)
    with pytest.raises(ReconstructionError, match="reconstruction undefined"):
        reconstruct_momentum(t, y_quadrature(t_neg=t_neg, t=t, p=1, cin=0, cin_dag=0), 0, 0)


_D = derive_params(experimental_params())
_SS = solve_steady_state(_D, _D.omega_m)


@settings(max_examples=100, deadline=None)
@given(a=cplx, b=cplx, p1=cplx, p2=cplx, c1=cplx, c2=cplx, w=st.floats(0.05, 4.0))
def test_y_quadrature_linear(a, b, p1, p2, c1, c2, w):
    delta = _D.omega_m
    t = output_transfer_at(_D, _SS, delta, w * _D.omega_m)
    t_neg = output_transfer_at(_D, _SS, delta, -w * _D.omega_m)
    lhs = y_quadrature(t, t_neg, a * p1 + b * p2, a * c1 + b * c2, a * c2 + b * c1)
    rhs = a * y_quadrature(t, t_neg, p1, c1, c2) + b * y_quadrature(t, t_neg, p2, c2, c1)
    coef = max(abs(t.c_out_on_p), abs(t.c_out_on_cin), abs(t_neg.c_out_on_p), abs(t_neg.c_out_on_cin))
    scale = (abs(a) + abs(b)) * (abs(p1) + abs(p2) + abs(c1) + abs(c2)) * coef
    assert abs(lhs - rhs) <= 1e-13 * scale + 1e-300
