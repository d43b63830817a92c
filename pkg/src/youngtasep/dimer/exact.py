"""Exact rational Kasteleyn computations.

The even-N gauge puts omega = exp(i pi / L) on jump edges.  A diagonal
conjugation by powers of omega (see ``real_frame_potentials``) turns W into a
matrix with entries in {0, +-1, +-eps}; its determinant differs from det W by
a known root of unity, and edge probabilities alpha*w*W^{-1} are unchanged.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import BoundaryError
from ..exactla import fraction_det, fraction_det_scaled, fraction_inverse, integer_det  # noqa: F401
from .graph import CylinderGraph, Edge, GaugeAssignment, edge_weight, real_frame_potentials


@dataclass
class ExactKasteleyn:
    graph: CylinderGraph
    epsilon: Fraction
    gauge: GaugeAssignment
    matrix: list = field(repr=False)  # real-frame W', rows = blacks, cols = whites
    phase_exponent: int  # det W = omega**phase_exponent * det W'
    _inv: list | None = field(default=None, repr=False)

    @property
    def det(self) -> Fraction:
        return fraction_det_scaled(self.matrix)

    def det_W(self) -> complex:
        return cmath.exp(1j * math.pi * self.phase_exponent / self.graph.L) * float(self.det)

    @property
    def inverse(self):
        if self._inv is None:
            try:
                self._inv = fraction_inverse(self.matrix)
            except ZeroDivisionError:
                raise BoundaryError(
                    f"W is singular: {self.graph.boundary_out} is unreachable from "
                    f"{self.graph.boundary_in} in {self.graph.M} steps") from None
        return self._inv

    def edge_probability(self, e: Edge) -> Fraction:
        b = self.graph.black_index[e.black]
        w = self.graph.white_index[e.white]
        return self.matrix[b][w] * self.inverse[w][b]


def exact_kasteleyn(g: CylinderGraph, epsilon, gauge: GaugeAssignment | None = None) -> ExactKasteleyn:
    eps = Fraction(epsilon)
    gauge = gauge or GaugeAssignment.standard(g.L, g.N)
    gauge.check_faces(g)
    pot = real_frame_potentials(g, gauge)
    L = g.L
    n = len(g.whites)
    A = [[Fraction(0)] * n for _ in range(n)]
    for e in g.edges:
        ex = (gauge.exponent(e) + pot[("b",) + e.black] - pot[("w",) + e.white]) % (2 * L)
        sign = 1 if ex == 0 else -1
        A[g.black_index[e.black]][g.white_index[e.white]] = sign * Fraction(edge_weight(e, eps))
    # W' = D_b W D_w^{-1}  =>  det W = omega^(sum p_w - sum p_b) det W'
    phase = sum(pot[("w",) + w] for w in g.whites) - sum(pot[("b",) + b] for b in g.blacks)
    return ExactKasteleyn(g, eps, gauge, A, phase % (2 * L))


def _output_schur(L, N, M, boundary_in, epsilon):
    """(det of the pivot block, L x N Schur complement S) or None when W is singular for every output."""
    g = CylinderGraph.build(L, N, M, boundary_in)
    ex = exact_kasteleyn(g, epsilon)
    lo = g.M_minus
    cols = [c for c, w in enumerate(g.whites) if w[0] > lo]
    top = [r for r, b in enumerate(g.blacks) if b[0] != lo]
    bot = [g.black_index[(lo, k)] for k in range(L)]
    T = [[ex.matrix[r][c] for c in cols] for r in top]
    Bm = [[ex.matrix[r][c] for c in cols] for r in bot]
    nr, nc = len(T), len(cols)
    # reduced row echelon form of T, tracking the pivot-block determinant
    det_a, pivots, row = Fraction(1), [], 0
    for c in range(nc):
        p = next((r for r in range(row, nr) if T[r][c] != 0), None)
        if p is None:
            continue
        T[row], T[p] = T[p], T[row]
        piv = T[row][c]
        det_a *= piv
        T[row] = [x / piv for x in T[row]]
        for r in range(nr):
            if r != row and T[r][c] != 0:
                f = T[r][c]
                T[r] = [x - f * y for x, y in zip(T[r], T[row])]
        pivots.append(c)
        row += 1
        if row == nr:
            break
    if row < nr:
        return None
    pset = set(pivots)
    free = [c for c in range(nc) if c not in pset]
    # S = Bm[:, free] - Bm[:, pivots] X with X = rref(T)[:, free]
    S = [[b[f] - sum(b[pc] * T[i][f] for i, pc in enumerate(pivots) if b[pc]) for f in free] for b in Bm]
    return det_a, S


def abs_det_by_output(L: int, N: int, M: int, boundary_in, epsilon) -> dict[tuple, Fraction]:
    """|det W| for every output boundary with the other data fixed.

    The output pendant columns of W are unit vectors at the output-level rows
    of the holes, so det W is (up to sign) the minor of the remaining columns R
    with those rows deleted.  Eliminating the rows of R off the output level
    once leaves an L x N Schur complement S, and |det W| = |det A| |det S[rows]|
    where A is the pivot block and ``rows`` the output stones.
    """
    import itertools

    states = list(itertools.combinations(range(L), N))
    sch = _output_schur(L, N, M, boundary_in, epsilon)
    if sch is None:
        return {s: Fraction(0) for s in states}
    det_a, S = sch
    return {s: abs(det_a * fraction_det_scaled([S[k] for k in s])) for s in states}


def certify_det_by_output(L: int, N: int, M: int, boundary_in, epsilon, Z: dict) -> int:
    """Number of output boundaries where |det W| differs from Z, without forming every minor.

    Minors are evaluated on the support of Z only.  The rest are certified
    zero by Cauchy-Binet: sum over all N-row subsets of det(S[rows])^2 equals
    det(S^T S), so the support must exhaust it.  Returns 1 if it does not
    (some off-support output has a nonzero determinant).
    """
    support = {bo: z for bo, z in Z.items() if z != 0}
    sch = _output_schur(L, N, M, boundary_in, epsilon)
    if sch is None:
        return len(support)
    det_a, S = sch
    # one common denominator q for S, then integer determinants throughout
    q = 1
    for row in S:
        for x in row:
            q = math.lcm(q, x.denominator)
    Si = [[int(x * q) for x in row] for row in S]
    scale = Fraction(q) ** N
    bad, sq = 0, 0
    for bo, z in support.items():
        m = integer_det([Si[k] for k in bo])
        sq += m * m
        bad += abs(det_a * m) != z * scale
    gram = [[sum(Si[r][i] * Si[r][j] for r in range(L)) for j in range(N)] for i in range(N)]
    return bad + (integer_det(gram) != sq)
