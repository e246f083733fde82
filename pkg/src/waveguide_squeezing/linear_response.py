"""Linearized fluctuation dynamics and frequency-domain transfer functions.

The fluctuation vector is ordered ``(dQ, dP, dc, dc^dagger)`` and obeys
``df/dt = Z f + F`` with the noise vector

    F = (0,  xi - i eta sqrt(2 kappa_e) (c_s^* c_in - c_s c_in^dagger),  J c_in,  J c_in^dagger).

With ``f(t) = (1/2pi) int f(w) exp(-i w t) dw`` the solution is
``f(w) = (-i w - Z)^{-1} F(w)``; :func:`response_at` evaluates the closed-form
momentum row of that solution and :func:`response_oracle` the brute-force
matrix inverse used to cross-check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .errors import ResponsePoleError

if TYPE_CHECKING:
    from .params import DerivedParams
    from .steady_state import SteadyState

__all__ = [
    "DriftMatrix",
    "TransferPoint",
    "drift_matrix",
    "build_drift_matrix",
    "is_stable",
    "response_at",
    "transfer_functions",
    "response_oracle",
    "coupling_coefficients",
]

# Relative margin (in units of ||Z||) below which a real part counts as zero.
_MARGINAL_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class DriftMatrix:
    """Drift matrix ``z`` and the noise loading ``noise_coefficients``.

    ``noise_coefficients[i, k]`` multiplies noise source ``k`` in row ``i``,
    with sources ordered ``(xi, c_in, c_in^dagger)``.
    """

    z: np.ndarray
    noise_coefficients: np.ndarray


@dataclass(frozen=True)
class TransferPoint:
    omega: float
    a_plus: complex
    a_minus_conj: complex
    r_mech: complex
    d_det: complex
    j_coef: float
    u_coef: complex
    p_t: complex
    p_s: complex
    q_t: Optional[complex]
    q_s_tf: Optional[complex]


def coupling_coefficients(d: "DerivedParams", q_s: float, c_s: complex):
    """Return ``(J, U)`` at the operating point ``(q_s, c_s)``.

    ``J = sqrt(2 kappa_e) (1 + eta Q_s / 2)`` loads the input field into the
    cavity, ``U = -kappa_om c_s + (eta / 2) eps_tilde`` couples position
    fluctuations into the cavity field.
    """
    j = math.sqrt(2.0 * d.kappa_e) * (1.0 + 0.5 * d.eta * q_s)
    u = -d.kappa_om * c_s + 0.5 * d.eta * d.eps_tilde
    return j, complex(u)


def drift_matrix(d: "DerivedParams", q_s: float, c_s: complex, delta: float) -> DriftMatrix:
    """Linearize the equations of motion around ``(q_s, 0, c_s)``."""
    j, u = coupling_coefficients(d, q_s, c_s)
    decay = d.kappa_e + d.kappa_om * q_s
    ie = 1j * d.eta * d.eps_tilde
    z = np.array(
        [
            [0.0, d.omega_m, 0.0, 0.0],
            [-d.omega_m, -d.gamma_m, ie, -ie],
            [u, 0.0, -(decay + 1j * delta), 0.0],
            [np.conj(u), 0.0, 0.0, -(decay - 1j * delta)],
        ],
        dtype=complex,
    )
    root2k = math.sqrt(2.0 * d.kappa_e)
    noise = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, -1j * d.eta * root2k * np.conj(c_s), 1j * d.eta * root2k * c_s],
            [0.0, j, 0.0],
            [0.0, 0.0, j],
        ],
        dtype=complex,
    )
    return DriftMatrix(z=z, noise_coefficients=noise)


def build_drift_matrix(d: "DerivedParams", ss: "SteadyState", delta: float) -> DriftMatrix:
    return drift_matrix(d, ss.q_s, ss.c_s, delta)


def max_real_eigenvalue(z) -> float:
    mat = z.z if isinstance(z, DriftMatrix) else np.asarray(z)
    return float(np.max(np.linalg.eigvals(mat).real))


def is_stable(z) -> bool:
    """True iff every eigenvalue of the drift matrix has negative real part.

    Real parts within ``1e-12 * ||Z||`` of zero are treated as marginal
    (not stable), since that is below the eigensolver's resolution.
    """
    mat = z.z if isinstance(z, DriftMatrix) else np.asarray(z)
    scale = np.linalg.norm(mat, ord=np.inf)
    return bool(max_real_eigenvalue(mat) < -_MARGINAL_RTOL * scale)


def transfer_functions(d: "DerivedParams", ss: "SteadyState", delta: float, omega):
    """Vectorized closed-form ``(P_T, P_S)`` over an array of frequencies."""
    w = np.asarray(omega, dtype=float)
    j, u = coupling_coefficients(d, ss.q_s, ss.c_s)
    decay = d.kappa_e + d.kappa_om * ss.q_s
    a_plus = decay - 1j * (delta + w)
    # A^*(-w) = conj(A(-w))
    a_minus_conj = decay + 1j * (delta - w)
    r_mech = d.omega_m**2 - w**2 - 1j * d.gamma_m * w
    aa = a_plus * a_minus_conj
    det = aa * r_mech - 1j * d.eta * d.eps_tilde * d.omega_m * (a_plus * u - a_minus_conj * np.conj(u))
    if np.any(det == 0):
        raise ResponsePoleError("response pole: d(omega) vanishes on the requested grid")
    p_t = -1j * w * aa / det
    p_s = d.eta * (w * d.eps_tilde * a_plus * j / det
                   - 1j * math.sqrt(2.0 * d.kappa_e) * np.conj(ss.c_s) * p_t)
    return p_t, p_s


def response_at(d: "DerivedParams", ss: "SteadyState", delta: float, omega: float) -> TransferPoint:
    omega = float(omega)
    j, u = coupling_coefficients(d, ss.q_s, ss.c_s)
    decay = d.kappa_e + d.kappa_om * ss.q_s
    a_plus = complex(decay, -(delta + omega))
    a_minus_conj = complex(decay, delta - omega)
    r_mech = complex(d.omega_m**2 - omega**2, -d.gamma_m * omega)
    det = (a_plus * a_minus_conj * r_mech
           - 1j * d.eta * d.eps_tilde * d.omega_m * (a_plus * u - a_minus_conj * u.conjugate()))
    if det == 0:
        raise ResponsePoleError(f"response pole at omega = {omega!r}")
    p_t, p_s = transfer_functions(d, ss, delta, omega)
    p_t, p_s = complex(p_t), complex(p_s)
    if omega == 0.0:
        q_t = q_s_tf = None
    else:
        q_t = 1j * d.omega_m / omega * p_t
        q_s_tf = 1j * d.omega_m / omega * p_s
    return TransferPoint(
        omega=omega,
        a_plus=a_plus,
        a_minus_conj=a_minus_conj,
        r_mech=r_mech,
        d_det=complex(det),
        j_coef=j,
        u_coef=u,
        p_t=p_t,
        p_s=p_s,
        q_t=q_t,
        q_s_tf=q_s_tf,
    )


def _solve_response(z: DriftMatrix, omega: float) -> np.ndarray:
    """Return ``V @ noise_coefficients`` with ``V = (-i omega - Z)^{-1}``."""
    lhs = -1j * omega * np.eye(4) - z.z
    # scale-aware singularity guard; solve() alone only catches exact zeros
    if np.linalg.cond(lhs) > 1e14:
        raise ResponsePoleError(f"response pole at omega = {omega!r}")
    try:
        return np.linalg.solve(lhs, z.noise_coefficients)
    except np.linalg.LinAlgError as exc:
        raise ResponsePoleError(f"response pole at omega = {omega!r}") from exc


def response_oracle(z: DriftMatrix, omega: float):
    """Momentum-row coefficients from dense numeric inversion.

    Returns ``(P_T(w), P_S(w), K(w))`` where ``K`` multiplies
    ``c_in^dagger(-w)``; for a consistent linearization ``K(w)`` equals
    ``conj(P_S(-w))``.
    """
    row = _solve_response(z, float(omega))[1]
    return complex(row[0]), complex(row[1]), complex(row[2])
