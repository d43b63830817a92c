import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from youngtasep.errors import DomainError, SizeError
from youngtasep.mtasep import (
    bits_to_state, build_transition, chain_period, circle_states, determinantal_state_probability,
    entropy_closed, parry_kernel, parry_measure, parry_vector, projection_kernel, sample_frozen_process,
    simulate_chain, sine_kernel, spectral_radius_numeric, state_to_bits, successors,
)

SPREAD = {(0, 2), (1, 3)}

ln_pairs = st.integers(2, 12).flatmap(lambda L: st.tuples(st.just(L), st.integers(1, L - 1)))


def test_state_bits():
    assert state_to_bits((0, 2), 4) == "1010"
    assert bits_to_state("1010") == (0, 2)


def test_successors_move_one_stone():
    assert sorted(successors((0, 1), 4)) == [(1, (0, 2))]
    assert sorted(successors((0, 3), 4)) == [(0, (1, 3))]


def test_transition_l4_n1():
    tm = build_transition(4, 1)
    assert len(tm.states) == 4
    assert (tm.out_degrees() == 1).all()


def test_transition_l4_n2():
    tm = build_transition(4, 2)
    assert len(tm.states) == 6
    for s, d in zip(tm.states, tm.out_degrees()):
        assert d == (2 if s in SPREAD else 1)


def test_transition_l5_n2():
    tm = build_transition(5, 2)
    assert len(tm.states) == 10
    assert tm.matrix.nnz == 15


def test_state_cap():
    with pytest.raises(SizeError):
        build_transition(20, 10, cap=1000)


def test_colex_order():
    assert circle_states(4, 2) == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))


def test_entropy_examples():
    for L in range(2, 10):
        assert entropy_closed(L, 1) == 0
        assert abs(entropy_closed(L, L - 1)) < 1e-15
    assert entropy_closed(4, 2) == pytest.approx(math.log(math.sqrt(2)), abs=1e-15)
    assert entropy_closed(4, 2) == pytest.approx(0.346574, abs=1e-6)
    for bad in (0, 4):
        with pytest.raises(DomainError):
            entropy_closed(4, bad)


@given(ln_pairs)
def test_entropy_particle_hole(ln):
    L, N = ln
    assert entropy_closed(L, N) == pytest.approx(entropy_closed(L, L - N), abs=1e-14)


def test_spectral_examples():
    assert abs(spectral_radius_numeric(4, 2).rho - math.sqrt(2)) < 1e-10
    assert abs(spectral_radius_numeric(6, 3).rho - 2) < 1e-10
    for L in (3, 5, 8):
        assert spectral_radius_numeric(L, 1).rho == pytest.approx(1.0, abs=1e-14)


def test_entropy_matches_power_iteration():
    for L in range(2, 13):
        for N in range(1, L):
            spec = spectral_radius_numeric(L, N)
            assert abs(entropy_closed(L, N) - spec.entropy) <= 1e-10
            assert (spec.right_vec > 0).all() and (spec.left_vec > 0).all()
            assert L % spec.period == 0


def test_period_is_l():
    for L, N in [(4, 2), (5, 2), (6, 3), (7, 3)]:
        assert chain_period(build_transition(L, N)) == L


def test_parry_examples():
    for L in (3, 6):
        assert all(v == pytest.approx(1 / L, abs=1e-12) for v in parry_measure(L, 1).values())
    mu = parry_measure(4, 2)
    for s, v in mu.items():
        assert v == pytest.approx(0.25 if s in SPREAD else 0.125, abs=1e-12)


def test_parry_rotation_invariant():
    mu = parry_measure(5, 2)
    for s, v in mu.items():
        rot = tuple(sorted((k + 1) % 5 for k in s))
        assert v == pytest.approx(mu[rot], abs=1e-12)


def test_parry_kernel_stochastic_and_stationary():
    for L in range(2, 9):
        for N in range(1, L):
            P = parry_kernel(L, N)
            assert np.abs(np.asarray(P.sum(axis=1)).ravel() - 1).max() < 1e-14
            pi = parry_vector(L, N)
            assert np.abs(pi @ P - pi).max() < 1e-10


def test_projection_kernel_diagonal_and_hermitian():
    for L in range(2, 10):
        for N in range(1, L):
            K = projection_kernel(L, N)
            assert K.value(0) == pytest.approx(N / L, abs=1e-14)
            M = K.matrix()
            assert np.abs(M @ M - M).max() < 1e-12
            assert np.abs(M - M.conj().T).max() < 1e-12
            assert np.trace(M).real == pytest.approx(N, abs=1e-12)


def test_projection_kernel_odd_is_sine_ratio():
    L, N = 11, 5
    K = projection_kernel(L, N)
    for d in range(1, L):
        expect = math.sin(math.pi * N * d / L) / (L * math.sin(math.pi * d / L))
        assert K.value(d) == pytest.approx(expect, abs=1e-13)


def test_determinantal_examples():
    K = projection_kernel(4, 2)
    assert determinantal_state_probability(K, [0, 2]) == pytest.approx(0.25, abs=1e-12)
    assert determinantal_state_probability(K, [0, 1]) == pytest.approx(0.125, abs=1e-12)
    with pytest.raises(DomainError):
        determinantal_state_probability(K, [0])


def test_determinantal_matches_parry():
    for L in range(2, 11):
        for N in range(1, L):
            K = projection_kernel(L, N)
            mu = parry_measure(L, N)
            err = max(abs(determinantal_state_probability(K, s) - p) for s, p in mu.items())
            assert err <= 1e-10
            if L <= 8:
                tot = sum(determinantal_state_probability(K, s) for s in itertools.combinations(range(L), N))
                assert tot == pytest.approx(1.0, abs=1e-12)


@given(ln_pairs, st.integers(-7, 7))
@settings(max_examples=60)
def test_window_offset_leaves_minors(ln, offset):
    L, N = ln
    K0, K1 = projection_kernel(L, N), projection_kernel(L, N, offset)
    for s in itertools.islice(itertools.combinations(range(L), N), 40):
        assert determinantal_state_probability(K0, s) == pytest.approx(
            determinantal_state_probability(K1, s), abs=1e-10)


def test_sine_kernel_examples():
    assert sine_kernel(0, 0.3) == 0.3
    for k in (2, -4, 10):
        assert abs(sine_kernel(k, 0.5)) < 1e-15
    with pytest.raises(DomainError):
        sine_kernel(1, 1.0)


def test_sine_limit_rate():
    a = 0.3
    for k in (1, 2, 5):
        errs = []
        for L in (10, 100, 1000, 2000):
            errs.append(abs(projection_kernel(L, int(a * L)).value(k) - sine_kernel(k, a)) * L)
        assert max(errs) < 5


def test_simulate_single_stone_rotates():
    tr = simulate_chain(7, 1, 20, seed=0, start=(3,))
    occ = tr.occupancies()
    assert all(occ[i] == ((3 + i) % 7,) for i in range(21))


def test_simulate_frequencies(sigma):
    steps = 1_000_000
    tr = simulate_chain(4, 2, steps, seed=4)
    mu = parry_measure(4, 2)
    counts = np.bincount(tr.path, minlength=6)
    # successive states are correlated, so the binomial band is only a sanity guide; the chain on
    # the spread/adjacent split has a short memory and stays well inside it
    for i, s in enumerate(tr.states):
        assert sigma(counts[i], steps + 1, mu[s], k=6)
        assert counts[i] / (steps + 1) == pytest.approx(mu[s], abs=2e-3)


def test_frozen_single_stone_rate():
    fs = sample_frozen_process(6, 1, 5000.0, seed=1)
    assert fs.rate == pytest.approx(1.0, abs=3 * math.sqrt(1 / 5000))


@pytest.mark.parametrize("L,N,rate", [(4, 2, math.sqrt(2)), (6, 3, 2.0)])
def test_frozen_rate(L, N, rate):
    tau = 1e4
    fs = sample_frozen_process(L, N, tau, seed=L)
    z = (len(fs.times) - rate * tau) / math.sqrt(rate * tau)
    assert abs(z) < 3


def test_frozen_events_one_stone_per_event():
    fs = sample_frozen_process(6, 3, 50.0, seed=2)
    states = fs.states()
    assert np.all(np.diff(fs.times) >= 0)
    for a, b in zip(states, states[1:]):
        moved = set(a) ^ set(b)
        assert len(moved) == 2
        lo, hi = sorted(moved, key=lambda k: k in b)
        assert lo in a and (lo + 1) % 6 == hi
    assert fs.to_csv().startswith("time,position\n")
    with pytest.raises(DomainError):
        sample_frozen_process(6, 3, 0.0)
