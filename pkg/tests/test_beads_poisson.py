import math
from fractions import Fraction

import numpy as np
import pytest

from youngtasep.dimer import beads, poisson
from youngtasep.errors import DomainError, SizeError
from youngtasep.young import Partition, dimension

P = Partition.parse


# beads kernel

def test_c_infinity():
    assert beads.c_infinity(0.5) == pytest.approx(0.0, abs=1e-16)
    assert beads.c_infinity(0.3) == pytest.approx(math.cos(0.3 * math.pi))
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            beads.c_infinity(bad)


@pytest.mark.parametrize("t", [0.7, -0.7])
@pytest.mark.parametrize("k", [0, 1, -1, 2, -2])
def test_arc_vs_segment(t, k):
    arc = beads.beads_kernel_arc(0.3, t, k)
    seg = beads.beads_kernel_segment(0.3, t, k)
    assert abs(arc - seg) <= 1e-8
    assert abs(arc.imag) <= 1e-10


@pytest.mark.parametrize("rho", [0.1, 0.25, 0.45])
def test_arc_vs_segment_other_densities(rho):
    for t in (0.0, 1.2, -1.2):
        for k in (-1, 0, 1, 3):
            assert abs(beads.beads_kernel_arc(rho, t, k) - beads.beads_kernel_segment(rho, t, k)) <= 1e-8


def test_segment_needs_low_density():
    with pytest.raises(DomainError):
        beads.beads_kernel_segment(0.6, 0.5, 1)
    # the arc form still works there
    assert np.isfinite(beads.beads_kernel_arc(0.6, 0.5, 1))
    with pytest.raises(DomainError):
        beads.beads_kernel_infinite(0.3, 0.5, 1, method="bogus")


def test_branch_jump_at_zero():
    # the two arcs together make the full circle: J(0+, k) - J(0-, k) = residue term delta_{k,1}
    for k in range(-2, 4):
        plus = beads.beads_kernel_arc(0.3, 1e-12, k)
        minus = beads.beads_kernel_arc(0.3, 0.0, k)
        assert plus - minus == pytest.approx(1.0 if k == 1 else 0.0, abs=1e-9)


def test_diagonal_density():
    # equal-time, zero-offset value is the stone density rho (shift k -> k - 1 in the jump kernel)
    for rho in (0.2, 0.3, 0.7):
        assert beads.beads_kernel_arc(rho, 1e-14, 1).real == pytest.approx(rho, abs=1e-9)


def test_residue():
    assert beads.residue_at_zero(0.3, 0.5, 0) == 0.0
    assert beads.residue_at_zero(0.3, 0.5, 1) == pytest.approx(math.exp(0.5 * math.cos(0.3 * math.pi)))


def test_cylinder_converges_like_one_over_L():
    rho, t, k = 0.3, 0.7, 1
    ref = beads.beads_kernel_arc(rho, t, k)
    Ls = (20, 100, 500, 2000)
    errs = [abs(beads.cylinder_jump_kernel(L, round(rho * L), t, k) - ref) for L in Ls]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    slope = np.polyfit(np.log(Ls), np.log(errs), 1)[0]
    assert slope < -0.9
    assert max(e * L for e, L in zip(errs, Ls)) < 5


# poissonization

def test_line_moves_respect_exclusion():
    moves = dict(poisson.line_moves((0, 1, 3), 3))
    # stone at 1 may only jump if 2 is free: yes; stone at 0 only if 1 vacates
    assert (0, 2, 3) in moves and (1, 2, 3) in moves and (0, 1, 4) in moves
    assert all(len(set(s)) == 3 for s in moves)
    assert all(max(s) < 6 for s in moves)


def test_path_weights_small():
    Z = poisson.path_weights(2, 1, Fraction(1, 10))
    # one step: nothing moves, the front stone jumps, or both jump together (the back one into the vacated hole)
    assert Z == {Partition(): 1, P("1"): Fraction(1, 10), P("1,1"): Fraction(1, 100)}


def test_path_weights_count_tableaux():
    # coefficient of eps^n in Z_M(lambda) counts M-step evolutions; at eps -> 0 with one cell per
    # step, the top coefficient of a size-n diagram reached in n steps is dim(lambda)
    Z = poisson.path_weights(3, 4, Fraction(1, 1000))
    for lam, z in Z.items():
        if lam.size == 4:
            assert z >= Fraction(dimension(lam), 1000**4)


def test_theta_to_zero():
    rep = poisson.poissonization_check(3, epsilon=1e-4, theta=1e-3)
    assert float(rep.weights[Partition()]) == pytest.approx(1.0, abs=1e-5)
    assert rep.target[Partition()] == pytest.approx(1.0, abs=1e-5)


def test_width3_converges_in_eps():
    reps = [poisson.poissonization_check(3, epsilon=e, theta=0.5) for e in (0.1, 0.05, 0.025)]
    errs = [r.error_at(P("1")) for r in reps]
    assert errs[0] > errs[1] > errs[2]
    maxes = [r.max_error for r in reps]
    assert maxes[0] > maxes[1] > maxes[2]
    assert [r.M for r in reps] == [5, 10, 20]


def test_symmetric_pair_ratio_tends_to_one():
    # simultaneous chain jumps favour columns at finite eps; the bias is O(eps)
    gaps = []
    for e in (0.01, 0.001, 0.0001):
        rep = poisson.poissonization_check(3, epsilon=e, theta=0.5)
        gaps.append(1 - float(rep.weights[P("2")] / rep.weights[P("1,1")]))
        assert sum(rep.target.values()) == pytest.approx(1.0)
    assert all(g > 0 for g in gaps)
    assert 8 < gaps[0] / gaps[1] < 12 and 8 < gaps[1] / gaps[2] < 12
    assert rep.target[P("2")] == rep.target[P("1,1")]


def test_poissonization_args():
    with pytest.raises(DomainError):
        poisson.poissonization_check(3, epsilon=0.0, theta=0.5)
    with pytest.raises(DomainError):
        poisson.poissonization_check(3, epsilon=0.1)
    with pytest.raises(DomainError):
        poisson.path_weights(0, 1, 0.1)


@pytest.mark.parametrize("w,M", [(1, 1), (1, 3), (2, 1), (2, 2), (3, 1)])
def test_mirrored_graph_matches_transfer_squared(w, M):
    eps = Fraction(1, 7)
    Z = poisson.path_weights(w, M, eps)
    brute = poisson.enumerate_mirrored(w, M, eps)
    assert set(brute) == {k for k, v in Z.items() if v}
    for lam, z in Z.items():
        assert brute[lam] == z * z


def test_mirrored_graph_shape_and_cap():
    g = poisson.mirrored_graph(2, 2)
    assert len(g.whites) == len(g.blacks)
    assert g.vertex_count == 36
    with pytest.raises(SizeError):
        poisson.enumerate_mirrored(3, 2)
    with pytest.raises(DomainError):
        poisson.mirrored_graph(2, 0)
