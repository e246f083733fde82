"""Output-field transduction and momentum reconstruction from the y-quadrature.

With ``c_out = sqrt(2 kappa_e(Q)) c`` the output fluctuation is

    dc_out(w) = c_out_on_p(w) dP(w) + c_out_on_cin(w) c_in(w)

and the y-quadrature ``dy_out(w) = i[dc_out^dagger(-w) - dc_out(w)]`` can be
inverted for ``dP(w)`` whenever the reactive coupling is nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ReconstructionError
from .linear_response import coupling_coefficients
from .params import DerivedParams
from .steady_state import SteadyState

__all__ = ["OutputTransfer", "output_transfer_at", "y_quadrature", "reconstruct_momentum"]


@dataclass(frozen=True)
class OutputTransfer:
    omega: float
    c_out_on_p: complex
    c_out_on_cin: complex
    recon_denominator: complex
    a_plus: complex
    a_minus_conj: complex
    j_coef: float
    u_coef: complex
    omega_m: float


def output_transfer_at(d: DerivedParams, ss: SteadyState, delta: float, omega: float) -> OutputTransfer:
    omega = float(omega)
    if omega == 0.0:
        raise ZeroDivisionError("output transfer undefined at omega = 0 (dQ = i w_m dP / w)")
    j, u = coupling_coefficients(d, ss.q_s, ss.c_s)
    decay = d.kappa_e + d.kappa_om * ss.q_s
    a_plus = complex(decay, -(delta + omega))
    a_minus_conj = complex(decay, delta - omega)
    # Re A^*(-w) = kappa_e (1 + eta Q_s) > 0 on any stable branch
    assert a_minus_conj != 0, "A*(-omega) vanished"

    pos_from_p = 1j * d.omega_m / omega
    root2k = math.sqrt(2.0 * d.kappa_e)
    c_out_on_p = j * pos_from_p * u / a_minus_conj + 0.5 * d.eta * root2k * ss.c_s * pos_from_p
    c_out_on_cin = j * j / a_minus_conj
    denom = (0.5 * d.eta * root2k * (ss.c_s.conjugate() - ss.c_s) * a_plus * a_minus_conj
             + j * (a_minus_conj * u.conjugate() - a_plus * u))
    return OutputTransfer(
        omega=omega,
        c_out_on_p=complex(c_out_on_p),
        c_out_on_cin=complex(c_out_on_cin),
        recon_denominator=complex(denom),
        a_plus=a_plus,
        a_minus_conj=a_minus_conj,
        j_coef=j,
        u_coef=u,
        omega_m=d.omega_m,
    )


def y_quadrature(t: OutputTransfer, t_neg: OutputTransfer, p: complex, cin: complex, cin_dag: complex) -> complex:
    """Forward map: y-quadrature of the output for given ``dP(w)``, ``c_in(w)``, ``c_in^dagger(-w)``.

    ``t`` and ``t_neg`` are the transfers at ``w`` and ``-w``; the hermiticity
    of ``P`` gives ``dP^dagger(-w) = dP(w)``.
    """
    if t_neg.omega != -t.omega:
        raise ValueError("t_neg must be evaluated at -omega")
    c_out = t.c_out_on_p * p + t.c_out_on_cin * cin
    c_out_dag = t_neg.c_out_on_p.conjugate() * p + t_neg.c_out_on_cin.conjugate() * cin_dag
    return 1j * (c_out_dag - c_out)


def reconstruct_momentum(t: OutputTransfer, y_out: complex, cin: complex, cin_dag: complex) -> complex:
    """Recover ``dP(w)`` from the output y-quadrature and the known input noise."""
    aa = t.a_plus * t.a_minus_conj
    if abs(t.recon_denominator) <= 1e-12 * abs(t.j_coef * aa):
        raise ReconstructionError("reconstruction undefined (eta = 0 or degenerate operating point)")
    j2 = t.j_coef * t.j_coef
    numer = aa * y_out - 1j * j2 * (t.a_minus_conj * cin_dag - t.a_plus * cin)
    return -(t.omega / t.omega_m) * numer / t.recon_denominator
