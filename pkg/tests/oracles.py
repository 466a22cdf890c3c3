"""Independent numerical oracles used by the test suite.

These deliberately avoid the package's own evaluation routes: special
functions are recomputed by adaptive quadrature (scipy.integrate.quad),
including a genuine principal-value integral for the exponential integral.
"""

import math

from scipy.integrate import quad


def ei_quadrature(x):
    """Ei(x) = -PV integral_{-x}^{inf} e^-t / t dt, by adaptive quadrature."""
    if x == 0:
        raise ValueError("singular")
    if x < 0:
        val, _ = quad(lambda t: math.exp(-t) / t, -x, math.inf, limit=400,
                      epsabs=0.0, epsrel=1e-12)
        return -val
    # Principal value across the pole at 0, plus the smooth tail.
    pv, _ = quad(lambda t: -math.exp(-t), -x, x, weight="cauchy", wvar=0.0,
                 epsabs=1e-13, epsrel=1e-13, limit=400)
    tail, _ = quad(lambda t: math.exp(-t) / t, x, math.inf, limit=400)
    return pv - tail


def _beta_half_piece(a, b):
    # integral_0^{1/2} t^(a-1) (1-t)^(b-1) dt with the endpoint singularity
    # absorbed by u = t^a.
    upper = 0.5 ** a
    val, _ = quad(lambda u: (1.0 - u ** (1.0 / a)) ** (b - 1.0), 0.0, upper,
                  epsabs=1e-14, epsrel=1e-13, limit=400)
    return val / a


def reg_inc_beta_half_quadrature(a, b):
    """P(Beta(a,b) < 1/2) with numerator and denominator both by quadrature."""
    num = _beta_half_piece(a, b)
    den = _beta_half_piece(a, b) + _beta_half_piece(b, a)
    return num / den


def trickle_ft_integral(d, theta):
    """(theta/d) * integral_0^d rho^(2^x) dx, rho = (d-1)/(d-1+theta)."""
    rho = (d - 1) / (d - 1 + theta)
    val, _ = quad(lambda x: rho ** (2.0 ** x), 0.0, d, limit=400)
    return theta / d * val
