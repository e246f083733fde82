"""Mean-field steady state of the driven waveguide/resonator system.

Eliminating ``c_s`` from the steady-state equations and writing ``y = eta Q_s``
leaves the monic cubic

    y^3 + 2 y^2 + (1 + delta^2 - s/2) y - s = 0,
    delta = Delta / kappa_e,   s = 2 eta^2 eps_tilde^2 Delta / (omega_m kappa_e^2),

which is well scaled even though ``eta`` is tiny. Its real roots are found in
closed form and polished with Newton's method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoRealRootError, NoStableRootError
from .linear_response import drift_matrix, is_stable
from .params import DerivedParams

__all__ = [
    "SteadyState",
    "solve_steady_state",
    "real_cubic_roots",
    "steady_state_residuals",
    "cavity_amplitude",
    "LINEARIZATION_THRESHOLD",
]

LINEARIZATION_THRESHOLD = 10.0


@dataclass(frozen=True)
class SteadyState:
    q_s: float
    c_s: complex
    p_s: float = 0.0
    all_real_roots: tuple = field(default=())
    multistable: bool = False
    linearization_valid: bool = False


def _polish(coeffs, x, iterations=6):
    # Newton on a monic cubic, accepting only steps that reduce |f|; near a
    # double root f' -> 0 and an unguarded step can jump to another branch
    b, c, d = coeffs

    def f(t):
        return ((t + b) * t + c) * t + d

    fx = f(x)
    for _ in range(iterations):
        fp = (3.0 * x + 2.0 * b) * x + c
        if fp == 0.0 or fx == 0.0:
            break
        x_new = x - fx / fp
        f_new = f(x_new)
        if not abs(f_new) < abs(fx):
            break
        x, fx = x_new, f_new
    return x


def real_cubic_roots(b: float, c: float, d: float) -> list:
    """Real roots of ``x^3 + b x^2 + c x + d`` in ascending order.

    One real root comes from the closed form (Cardano when the discriminant is
    positive, trigonometric otherwise); the cubic is then deflated and the
    remaining quadratic solved directly. Every root is Newton-polished on the
    original cubic and coincident roots are reported once.
    """
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    if disc > 0 or p >= 0.0:
        sq = math.sqrt(max(disc, 0.0))
        # sign chosen to avoid cancellation
        u = -q / 2.0 - math.copysign(sq, q)
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        t = u - p / (3.0 * u) if u != 0 else 0.0
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        if p * m == 0.0:  # underflow
            t = 0.0
        else:
            arg = 3.0 * q / (p * m)
            t = m * math.cos(math.acos(max(-1.0, min(1.0, arg))) / 3.0)
    x1 = _polish((b, c, d), t - shift)

    # x^3 + b x^2 + c x + d = (x - x1)(x^2 + e x + f)
    e = b + x1
    f = c + x1 * e
    qd = e * e - 4.0 * f
    roots = [x1]
    # rounding in e and f scales with the size of the original coefficients
    if qd >= -1e-12 * max(e * e, abs(f), x1 * x1, b * b, abs(c), 1e-300):
        sq = math.sqrt(max(qd, 0.0))
        r1 = -0.5 * (e + math.copysign(sq, e))
        # f / r1 amplifies rounding in f when r1 is tiny; -e - r1 does not
        cands = [-e - r1] + ([f / r1] if r1 != 0.0 else [])
        r2 = min(cands, key=lambda x: abs(((x + b) * x + c) * x + d))
        roots += [r1, r2]
    roots = sorted(_polish((b, c, d), r) for r in roots)
    unique = []
    for r in roots:
        if not unique or abs(r - unique[-1]) > 1e-12 * max(1.0, abs(r)):
            unique.append(r)
    return unique


def cavity_amplitude(d: DerivedParams, q_s: float, delta: float) -> complex:
    """Intracavity amplitude ``c_s`` from the third steady-state equation."""
    return (1.0 + 0.5 * d.eta * q_s) * d.eps_tilde / complex(d.kappa_e + d.kappa_om * q_s, delta)


def steady_state_residuals(d: DerivedParams, q_s: float, c_s: complex, delta: float, p_s: float = 0.0):
    """Residuals of the three steady-state equations (P, Q, c lines)."""
    r_p = p_s
    r_q = q_s + 2.0 * d.eta / d.omega_m * d.eps_tilde * c_s.imag
    r_c = c_s * complex(d.kappa_e + d.kappa_om * q_s, delta) - (1.0 + 0.5 * d.eta * q_s) * d.eps_tilde
    return r_p, r_q, r_c


def _candidate_positions(d: DerivedParams, delta: float) -> list:
    if d.eta == 0.0 or d.eps_tilde == 0.0:
        # Q_s is proportional to eta * eps_tilde^2; besides Q_s = 0 the only
        # other real solution (delta = 0, y = -1) closes the cavity decay and
        # cannot be stable.
        if d.eta != 0.0 and delta == 0.0:
            return [0.0, -1.0 / d.eta]
        return [0.0]
    dl = delta / d.kappa_e
    s = 2.0 * d.eta**2 * d.eps_tilde**2 * delta / (d.omega_m * d.kappa_e**2)
    ys = real_cubic_roots(2.0, 1.0 + dl * dl - 0.5 * s, -s)
    return [y / d.eta for y in ys]


def solve_steady_state(d: DerivedParams, delta: float) -> SteadyState:
    """Solve for ``(Q_s, P_s, c_s)`` and select the physical branch.

    The selected root is the stable one with the smallest ``|Q_s|``, i.e. the
    branch reached by slowly switching on the pump.
    """
    if not math.isfinite(delta):
        raise ValueError(f"detuning must be finite, got {delta!r}")
    roots = _candidate_positions(d, delta)
    if not roots:
        raise NoRealRootError("no real root of the steady-state polynomial")

    for q in sorted(roots, key=abs):
        decay = d.kappa_e + d.kappa_om * q
        if decay == 0.0 and delta == 0.0:
            continue
        c_s = cavity_amplitude(d, q, delta)
        if not np.isfinite(c_s):
            continue
        if is_stable(drift_matrix(d, q, c_s, delta)):
            return SteadyState(
                q_s=float(q),
                c_s=complex(c_s),
                p_s=0.0,
                all_real_roots=tuple(float(r) for r in roots),
                multistable=len(roots) > 1,
                linearization_valid=abs(c_s) >= LINEARIZATION_THRESHOLD,
            )
    raise NoStableRootError(
        f"no stable root: all {len(roots)} real steady state(s) are dynamically unstable "
        f"at detuning {delta!r} rad/s"
    )
