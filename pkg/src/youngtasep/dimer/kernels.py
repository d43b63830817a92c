"""Correlation kernels of the cylinder dimer model and of its frozen limit.

Fourier data: eigenvalues of the rotation are zeta_r = exp(2 pi i r / L) for
odd N and exp(2 pi i (r + 1/2) / L) for even N (the omega twist).  The N
harmonics with the largest Re zeta form the window; the rest form the
complement.

Time convention: correlation points carry forward times of the dynamics, and
the kernel entry for row a, column b is taken at time argument t_b - t_a.
With this orientation the determinants agree with the continuous-time Parry
chain (see ``mtasep.chain_stone_correlation``).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import BoundaryError, DomainError, GaugeError
from .graph import CylinderGraph, Edge, GaugeAssignment, build_kasteleyn_W


def _check(L, N):
    if not 0 < N < L:
        raise DomainError(f"need 0 < N < L, got L={L}, N={N}")


def harmonics(L: int, N: int) -> tuple[list[int], list[int]]:
    """(window, complement) of Fourier indices."""
    _check(L, N)
    m = N // 2
    if N % 2:
        return list(range(-m, m + 1)), list(range(m + 1, L - m))
    return list(range(-m, m)), list(range(m, L - m))


def zeta(L: int, N: int, r) -> np.ndarray:
    shift = 0.0 if N % 2 else 0.5
    return np.exp(2j * np.pi * (np.asarray(r, dtype=float) + shift) / L)


def omega(L: int) -> complex:
    return cmath.exp(1j * math.pi / L)


# ---------------------------------------------------------------- finite epsilon


@dataclass(frozen=True)
class FiniteKernel:
    L: int
    N: int
    epsilon: float
    values: dict = field(repr=False)  # (j, d) -> complex

    def value(self, j: int, d: int) -> complex:
        return self.values[(j, d % self.L)]


def _separation(L, N, eps):
    win, comp = harmonics(L, N)
    lw = np.abs(1 + eps * zeta(L, N, win))
    lc = np.abs(1 + eps * zeta(L, N, comp))
    if not lw.min() > lc.max():
        raise DomainError(f"eigenvalue moduli not separated at epsilon={eps}: {lw.min():.6g} <= {lc.max():.6g}")
    return win, comp, lw.min(), lc.max()


def finite_kernel_closed(L: int, N: int, epsilon: float, j: int, d: int, c_prime: float | None = None) -> complex:
    """Two-branch Fourier sum with lambda'_r = 1 + epsilon zeta_r; j > 0 uses the window.

    With ``c_prime`` strictly between the separated moduli the kernel is
    conjugated by c'^j and decays in both directions.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    win, comp, lo_w, hi_c = _separation(L, N, epsilon)
    scale = 1.0
    if c_prime is not None:
        if not hi_c < c_prime < lo_w:
            raise GaugeError(f"c' = {c_prime} outside ({hi_c}, {lo_w})")
        scale = c_prime
    rs, sign = (win, 1.0) if j > 0 else (comp, -1.0)
    lam = (1 + epsilon * zeta(L, N, rs)) / scale
    return complex(sign * np.sum(lam ** (-float(j)) * np.exp(-2j * np.pi * d * np.array(rs) / L)) / L)


def finite_kernel_table(L, N, epsilon, js) -> FiniteKernel:
    vals = {(j, d): finite_kernel_closed(L, N, epsilon, j, d) for j in js for d in range(L)}
    return FiniteKernel(L, N, epsilon, vals)


@dataclass
class KasteleynSolution:
    """W and its dense inverse (pivoted LU) for one cylinder graph."""
    graph: CylinderGraph
    epsilon: float
    gauge: GaugeAssignment
    W: np.ndarray = field(repr=False)
    K: np.ndarray = field(repr=False)

    def entry(self, white, black) -> complex:
        g = self.graph
        return complex(self.K[g.white_index[white], g.black_index[black]])

    def kernel(self, i: int, kp: int, j: int, k: int) -> complex:
        """W^{-1} between white (level i, hole kp) and black (level j, hole k)."""
        L = self.graph.L
        return self.entry((i, kp % L), (j, k % L))

    def edge_probability(self, e: Edge) -> float:
        g = self.graph
        b, w = g.black_index[e.black], g.white_index[e.white]
        return float((self.W[b, w] * self.K[w, b]).real)

    def edges_probability(self, edges) -> float:
        g = self.graph
        bs = [g.black_index[e.black] for e in edges]
        ws = [g.white_index[e.white] for e in edges]
        pref = np.prod([self.W[b, w] for b, w in zip(bs, ws)])
        sub = self.K[np.ix_(ws, bs)]
        return float((pref * np.linalg.det(sub)).real)


def solve_kasteleyn(g: CylinderGraph, epsilon: float, gauge: GaugeAssignment | None = None) -> KasteleynSolution:
    gauge = gauge or GaugeAssignment.standard(g.L, g.N)
    W = build_kasteleyn_W(g, epsilon, gauge)
    try:
        lu_ok = np.linalg.cond(W) < 1e14
        K = np.linalg.inv(W) if lu_ok else None
    except np.linalg.LinAlgError:
        K = None
    if K is None:
        raise BoundaryError(f"W is singular: {g.boundary_out} is unreachable from {g.boundary_in} in {g.M} steps")
    return KasteleynSolution(g, epsilon, gauge, W, K)


def finite_kernel_exact(g: CylinderGraph, epsilon: float, gauge: GaugeAssignment | None = None,
                        js=range(-3, 4), center: int | None = None, base: int = 0) -> FiniteKernel:
    """K(j, d) read off W^{-1} around the middle level: white (c + j, base + d) vs black (c, base)."""
    sol = solve_kasteleyn(g, epsilon, gauge)
    c = (g.M_minus + g.M_plus) // 2 if center is None else center
    vals = {}
    for j in js:
        if g.M_minus < c + j <= g.M_plus:
            for d in range(g.L):
                vals[(j, d)] = sol.kernel(c + j, base + d, c, base)
    return FiniteKernel(g.L, g.N, epsilon, vals)


# ---------------------------------------------------------------- frozen limit


def gauge_interval(L: int, N: int) -> tuple[float, float]:
    """Open interval of admissible c: between the largest Re zeta off the window and the smallest on it."""
    win, comp = harmonics(L, N)
    return float(zeta(L, N, comp).real.max()), float(zeta(L, N, win).real.min())


def default_gauge(L: int, N: int) -> float:
    lo, hi = gauge_interval(L, N)
    return 0.5 * (lo + hi)


def limit_kernel(L: int, N: int, t: float, d: int, c: float | None = None, zero_branch: str = "+") -> complex:
    """K~(t, d); t > 0 sums the window, t < 0 minus the complement.

    At t = 0 the ``zero_branch`` argument picks the branch ("+" by default,
    which makes equal-time minors those of the projection kernel).  With a
    gauge c the value is multiplied by exp(t c).
    """
    _check(L, N)
    if c is not None:
        lo, hi = gauge_interval(L, N)
        if not lo < c < hi:
            raise GaugeError(f"gauge c = {c} outside the admissible interval ({lo:.6g}, {hi:.6g})")
    if zero_branch not in ("+", "-"):
        raise DomainError("zero_branch must be '+' or '-'")
    win, comp = harmonics(L, N)
    plus = t > 0 or (t == 0 and zero_branch == "+")
    rs, sign = (win, 1.0) if plus else (comp, -1.0)
    rs = np.array(rs)
    cc = 0.0 if c is None else c
    terms = np.exp(-t * (zeta(L, N, rs) - cc)) * np.exp(-2j * np.pi * d * rs / L)
    return complex(sign * terms.sum() / L)


def _kernel_matrix(points, L, N, shift, c):
    pts = [(float(t), int(k)) for t, k in points]
    n = len(pts)
    A = np.empty((n, n), dtype=complex)
    for a, (ta, ka) in enumerate(pts):
        for b, (tb, kb) in enumerate(pts):
            A[a, b] = limit_kernel(L, N, tb - ta, ka - kb - shift, c=c)
    return A


def _distinct(points):
    pts = [(float(t), int(k)) for t, k in points]
    if len(set(pts)) != len(pts):
        raise DomainError("correlation points must be distinct")


def stone_correlation(points, L: int, N: int, c: float | None = None) -> float:
    """P(stones at every (t, k)) for the stationary frozen process, as det K~."""
    _distinct(points)
    c = default_gauge(L, N) if c is None else c
    val = np.linalg.det(_kernel_matrix(points, L, N, 0, c))
    return float(val.real)


def jump_density(points, L: int, N: int, c: float | None = None) -> float:
    """Joint density of jumps from holes k_a at times t_a (omega prefactor for even N)."""
    _distinct(points)
    c = default_gauge(L, N) if c is None else c
    A = _kernel_matrix(points, L, N, 1, c)
    if N % 2 == 0:
        A = omega(L) * A
    return float(np.linalg.det(A).real)


def limit_kernel_table(L, N, ts, c=None):
    """Rows (t, d, re, im)."""
    rows = []
    for t in ts:
        for d in range(L):
            v = limit_kernel(L, N, t, d, c=c)
            rows.append((t, d, v.real, v.imag))
    return rows
