"""Infinite-circle limit of the gauged jump kernel (the beads kernel).

J(t, k) = (1/2 pi) int over the arc |phi| < pi rho of exp(-t (zeta - c)) zeta^(1 - k) dphi   (t > 0)
        = -(1/2 pi) int over the complementary arc of the same integrand                  (t <= 0)
with zeta = exp(i phi) and c = cos(pi rho).

For rho < 1/2 the arcs can be straightened: zeta = c + i s phi with
s = sqrt(1 - c^2).  The short arc becomes the segment |phi| <= 1; the long arc
becomes the two vertical rays |phi| >= 1 when k >= 1 and t < 0.  Otherwise
(k <= 0, or t = 0) the rays fail, and the long arc is traded for the segment
minus the residue at zeta = 0.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from ..errors import DomainError, NumericalError

QUAD_EPSREL = 1e-11
QUAD_EPSABS = 1e-13
CHECK_TOL = 1e-9


def _quad(f, a, b, **kw):
    # the Fourier-weighted rule on infinite ranges works with an absolute tolerance only
    epsabs = QUAD_EPSABS if "weight" not in kw else 1e-12
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=QUAD_EPSREL, limit=400, **kw)
        except integrate.IntegrationWarning as exc:
            raise NumericalError(f"quadrature did not converge: {exc}") from None
    if err > CHECK_TOL * max(1.0, abs(val)):
        raise NumericalError(f"quadrature error estimate {err:.3e} too large")
    return val


def _check_rho(rho):
    if not 0 < rho < 1:
        raise DomainError("stone density rho must lie in (0, 1)")


def c_infinity(rho: float) -> float:
    _check_rho(rho)
    return math.cos(math.pi * rho)


def beads_kernel_arc(rho: float, t: float, k: int) -> complex:
    c = c_infinity(rho)

    def f(phi):
        return np.exp(-t * (np.exp(1j * phi) - c)) * np.exp(-1j * phi * (k - 1))

    if t > 0:
        a, b, sign = -math.pi * rho, math.pi * rho, 1.0
    else:
        a, b, sign = math.pi * rho, 2 * math.pi - math.pi * rho, -1.0
    re = _quad(lambda p: f(p).real, a, b)
    im = _quad(lambda p: f(p).imag, a, b)
    return sign * complex(re, im) / (2 * math.pi)


def _segment(rho, t, k):
    # (s / 2 pi) int_{-1}^{1} exp(-i t s phi) (c + i s phi)^(-k) dphi; the integrand at -phi is the
    # conjugate, so the value is real: (s / pi) int_0^1 Re(...)
    c = c_infinity(rho)
    s = math.sqrt(1 - c * c)
    g = lambda p: (np.exp(-1j * t * s * p) * (c + 1j * s * p) ** (-k)).real
    return s / math.pi * _quad(g, 0.0, 1.0)


def _rays(rho, t, k):
    # -(s / 2 pi) int_{|phi|>1} exp(-i w phi) f(phi) dphi with w = t s, f = (c + i s phi)^(-k), k >= 1
    c = c_infinity(rho)
    s = math.sqrt(1 - c * c)
    w = t * s
    u = lambda p: ((c + 1j * s * p) ** (-k)).real
    v = lambda p: ((c + 1j * s * p) ** (-k)).imag
    # Re(exp(-i w p)(u + i v)) = u cos(w p) + v sin(w p); the two rays double the real part
    if w == 0:
        tot = _quad(u, 1.0, np.inf)
    else:
        tot = _quad(u, 1.0, np.inf, weight="cos", wvar=abs(w))
        tot += math.copysign(1.0, w) * _quad(v, 1.0, np.inf, weight="sin", wvar=abs(w))
    return -s / math.pi * tot


def residue_at_zero(rho: float, t: float, k: int) -> float:
    """(1 / 2 pi i) times the full-circle integral: exp(t c) (-t)^(k-1) / (k-1)! for k >= 1, else 0."""
    if k < 1:
        return 0.0
    c = c_infinity(rho)
    return math.exp(t * c) * (-t) ** (k - 1) / math.factorial(k - 1)


def beads_kernel_segment(rho: float, t: float, k: int) -> float:
    """Straight-line representation; only for rho < 1/2."""
    _check_rho(rho)
    if rho >= 0.5:
        raise DomainError("segment representation needs rho < 1/2 (c > 0)")
    if t > 0:
        return _segment(rho, t, k)
    if k >= 1 and t < 0:
        return _rays(rho, t, k)
    # k <= 0, or t = 0 where the arc at infinity no longer vanishes
    return _segment(rho, t, k) - residue_at_zero(rho, t, k)


def beads_kernel_infinite(rho: float, t: float, k: int, method: str = "arc") -> complex:
    if method == "arc":
        return beads_kernel_arc(rho, t, k)
    if method == "segment":
        return complex(beads_kernel_segment(rho, t, k))
    raise DomainError(f"unknown method {method!r}")


def cylinder_jump_kernel(L: int, N: int, t: float, k: int) -> complex:
    """Gauged cylinder kernel at c = cos(pi N / L), shifted so that it tends to J(t, k)."""
    from .kernels import limit_kernel

    return limit_kernel(L, N, t, k - 1, c=math.cos(math.pi * N / L))
