"""Physical constants (CODATA 2018, SI units).

``C_LIGHT`` and ``K_B`` are exact by definition of the SI. ``HBAR`` is
h / 2pi with h = 6.62607015e-34 J s exact, to full double precision.
"""

C_LIGHT = 299_792_458.0  # m / s
HBAR = 1.0545718176461565e-34  # J s
K_B = 1.380649e-23  # J / K
