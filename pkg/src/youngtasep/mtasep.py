"""The modified TASEP on the discrete circle of length L with N stones.

States are sorted tuples of occupied holes in ``range(L)``; a stone at k may
move to ``(k + 1) % L`` when that hole is empty.  The chain is the
topological Markov chain of all such moves; its maximal-entropy (Parry)
measure is compared with the determinantal law of a Fourier projection kernel.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import DomainError, NumericalError, SizeError

STATE_CAP = 10**6
EIG_TOL = 1e-12
ITER_CAP = 10**6

State = tuple[int, ...]


def _check_ln(L: int, N: int) -> None:
    if not (isinstance(L, (int, np.integer)) and isinstance(N, (int, np.integer))):
        raise DomainError("L and N must be integers")
    if not 0 < N < L:
        raise DomainError(f"need 0 < N < L, got L={L}, N={N}")


def state_to_bits(state: State, L: int) -> str:
    occ = set(state)
    return "".join("1" if k in occ else "0" for k in range(L))


def bits_to_state(bits: str) -> State:
    if set(bits) - {"0", "1"}:
        raise DomainError(f"not a bitstring: {bits!r}")
    return tuple(k for k, c in enumerate(bits) if c == "1")


@lru_cache(maxsize=64)
def circle_states(L: int, N: int, cap: int = STATE_CAP) -> tuple[State, ...]:
    """All C(L, N) occupancy sets in colexicographic order."""
    _check_ln(L, N)
    if math.comb(L, N) > cap:
        raise SizeError(f"C({L},{N}) = {math.comb(L, N)} states exceeds the cap {cap}")
    return tuple(sorted(itertools.combinations(range(L), N), key=lambda s: s[::-1]))


def successors(state: State, L: int) -> list[tuple[int, State]]:
    """(position of the jumping stone, resulting state) for every legal move."""
    occ = set(state)
    out = []
    for k in state:
        nxt = (k + 1) % L
        if nxt not in occ:
            out.append((k, tuple(sorted((occ - {k}) | {nxt}))))
    return out


@dataclass(frozen=True)
class TransitionMatrix:
    L: int
    N: int
    states: tuple[State, ...]
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def index(self) -> dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}

    def out_degrees(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()


def build_transition(L: int, N: int, cap: int = STATE_CAP) -> TransitionMatrix:
    states = circle_states(L, N, cap)
    index = {s: i for i, s in enumerate(states)}
    rows, cols = [], []
    for i, s in enumerate(states):
        for _, t in successors(s, L):
            rows.append(i)
            cols.append(index[t])
    n = len(states)
    mat = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return TransitionMatrix(L, N, states, mat)


def entropy_closed(L: int, N: int) -> float:
    _check_ln(L, N)
    return math.log(math.sin(math.pi * N / L) / math.sin(math.pi / L))


@dataclass(frozen=True)
class ChainSpectrum:
    L: int
    N: int
    rho: float
    right_vec: np.ndarray = field(repr=False)
    left_vec: np.ndarray = field(repr=False)
    period: int
    iterations: int
    residual: float

    @property
    def entropy(self) -> float:
        return math.log(self.rho)


def chain_period(tm: TransitionMatrix) -> int:
    """gcd of level differences along edges of a BFS tree (the chain is irreducible)."""
    n = len(tm.states)
    level = np.full(n, -1)
    level[0] = 0
    frontier = [0]
    adj = tm.matrix
    g = 0
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj.indices[adj.indptr[u]:adj.indptr[u + 1]]:
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(v)
                else:
                    g = math.gcd(g, int(level[u] + 1 - level[v]))
        frontier = nxt
    return g


def _power(mat: sp.csr_matrix, tol: float, cap: int, batch: int = 16) -> tuple[np.ndarray, int]:
    x = np.full(mat.shape[0], 1.0 / mat.shape[0])
    it = 0
    while it < cap:
        prev = x
        for _ in range(batch):
            x = mat @ x
            x /= x.sum()
        it += batch
        if np.max(np.abs(x - prev)) < tol:
            return x, it
    raise NumericalError(f"power iteration did not converge in {cap} steps (last change {np.max(np.abs(x - prev)):.3e})")


@lru_cache(maxsize=64)
def spectral_radius_numeric(L: int, N: int, tol: float = EIG_TOL, cap: int = ITER_CAP) -> ChainSpectrum:
    """Perron data of T by power iteration on T + I.

    The chain has period L, so T has L eigenvalues of maximal modulus; the
    shift by the identity leaves only the Perron one on top.
    """
    tm = build_transition(L, N)
    T = tm.matrix
    shifted = (T + sp.identity(T.shape[0], format="csr")).tocsr()
    x, it_r = _power(shifted, tol * 1e-2, cap)
    y, it_l = _power(shifted.T.tocsr(), tol * 1e-2, cap)
    rho = float(y @ (T @ x) / (y @ x))
    resid = float(max(np.max(np.abs(T @ x - rho * x)), np.max(np.abs(T.T @ y - rho * y))))
    if resid > 1e3 * tol:
        raise NumericalError(f"eigen-residual {resid:.3e} above tolerance")
    return ChainSpectrum(L, N, rho, x, y, chain_period(tm), max(it_r, it_l), resid)


def parry_vector(L: int, N: int) -> np.ndarray:
    """Parry probabilities aligned with :func:`circle_states`."""
    spec = spectral_radius_numeric(L, N)
    p = spec.right_vec * spec.left_vec
    return p / p.sum()


def parry_measure(L: int, N: int) -> dict[State, float]:
    return dict(zip(circle_states(L, N), parry_vector(L, N)))


def parry_kernel(L: int, N: int) -> sp.csr_matrix:
    """Row-stochastic P(s -> s') = T[s, s'] u[s'] / (rho u[s]) with u the right Perron vector."""
    spec = spectral_radius_numeric(L, N)
    T = build_transition(L, N).matrix
    u = spec.right_vec
    P = sp.diags(1.0 / (spec.rho * u)) @ T @ sp.diags(u)
    return P.tocsr()


# ---------------------------------------------------------------- kernels


def fourier_window(L: int, N: int) -> list[int]:
    """Harmonics -m..m for N = 2m+1, -m..m-1 for N = 2m."""
    m = N // 2
    return list(range(-m, m + 1)) if N % 2 else list(range(-m, m))


@dataclass(frozen=True)
class ProjectionKernel:
    L: int
    N: int
    values: np.ndarray = field(repr=False)  # value(d) for d = 0..L-1

    def value(self, d: int) -> complex:
        return complex(self.values[d % self.L])

    def matrix(self) -> np.ndarray:
        k = np.arange(self.L)
        return self.values[(k[:, None] - k[None, :]) % self.L]


def projection_kernel(L: int, N: int, offset: int = 0) -> ProjectionKernel:
    """Projector onto N consecutive harmonics, value(d) = (1/L) sum_r exp(-2 pi i r d / L).

    ``offset`` shifts the block of harmonics; minors do not depend on it.
    """
    _check_ln(L, N)
    r = np.array(fourier_window(L, N)) + offset
    d = np.arange(L)
    vals = np.exp(-2j * np.pi * np.outer(d, r) / L).sum(axis=1) / L
    return ProjectionKernel(L, N, vals)


def determinantal_state_probability(K: ProjectionKernel, occupied) -> float:
    occupied = sorted(set(int(k) % K.L for k in occupied))
    if len(occupied) != K.N:
        raise DomainError(f"projection law charges only {K.N}-point sets, got {len(occupied)} points")
    idx = np.array(occupied)
    det = np.linalg.det(K.matrix()[np.ix_(idx, idx)])
    return float(det.real)


def sine_kernel(k: int, a: float) -> float:
    if not 0 < a < 1:
        raise DomainError("density a must lie in (0, 1)")
    if k == 0:
        return a
    return math.sin(math.pi * a * k) / (math.pi * k)


# ---------------------------------------------------------------- samplers


@dataclass
class _Sampler:
    states: tuple[State, ...]
    succ: list[list[int]]
    cum: list[list[float]]
    jumper: list[list[int]]
    stationary: np.ndarray

    @classmethod
    def build(cls, L: int, N: int) -> "_Sampler":
        states = circle_states(L, N)
        index = {s: i for i, s in enumerate(states)}
        u = spectral_radius_numeric(L, N).right_vec
        succ, cum, jumper = [], [], []
        for i, s in enumerate(states):
            moves = successors(s, L)
            w = np.array([u[index[t]] for _, t in moves])
            c = np.cumsum(w / w.sum())
            c[-1] = 1.0
            succ.append([index[t] for _, t in moves])
            cum.append(c.tolist())
            jumper.append([k for k, _ in moves])
        return cls(states, succ, cum, jumper, parry_vector(L, N))

    def run(self, steps: int, rng: np.random.Generator, start: int | None = None):
        if start is None:
            start = int(rng.choice(len(self.states), p=self.stationary))
        path = np.empty(steps + 1, dtype=np.int64)
        jumps = np.empty(steps, dtype=np.int64)
        path[0] = s = start
        for i, u in enumerate(rng.random(steps).tolist()):
            j = bisect.bisect_left(self.cum[s], u)
            jumps[i] = self.jumper[s][j]
            s = self.succ[s][j]
            path[i + 1] = s
        return path, jumps


@dataclass(frozen=True)
class Trajectory:
    L: int
    N: int
    states: tuple[State, ...] = field(repr=False)
    path: np.ndarray = field(repr=False)  # state indices, length steps + 1
    jumps: np.ndarray = field(repr=False)  # position of the moving stone at each step

    def occupancies(self) -> list[State]:
        return [self.states[i] for i in self.path]

    def frequencies(self) -> np.ndarray:
        return np.bincount(self.path, minlength=len(self.states)) / len(self.path)


def simulate_chain(L: int, N: int, steps: int, seed=None, start: State | None = None) -> Trajectory:
    """Stationary Parry-chain trajectory (started from the Parry law unless ``start`` is given)."""
    rng = np.random.default_rng(seed)
    smp = _Sampler.build(L, N)
    s0 = None if start is None else circle_states(L, N).index(tuple(sorted(start)))
    path, jumps = smp.run(steps, rng, s0)
    return Trajectory(L, N, smp.states, path, jumps)


@dataclass(frozen=True)
class FrozenSample:
    L: int
    N: int
    horizon: float
    initial: State
    times: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)

    @property
    def rate(self) -> float:
        return len(self.times) / self.horizon

    def states(self) -> list[State]:
        """Occupancy before the first event and after each event."""
        out = [self.initial]
        occ = set(self.initial)
        for k in self.positions.tolist():
            occ = (occ - {k}) | {(k + 1) % self.L}
            out.append(tuple(sorted(occ)))
        return out

    def to_csv(self) -> str:
        lines = ["time,position"]
        lines += [f"{t:.12g},{k}" for t, k in zip(self.times.tolist(), self.positions.tolist())]
        return "\n".join(lines) + "\n"


def sample_frozen_process(L: int, N: int, time_horizon: float, seed=None) -> FrozenSample:
    """Jump events of the frozen limit on [0, horizon].

    Poisson(e^h * horizon) events at sorted uniform times, carried by a
    stationary Parry-chain path of that many steps.
    """
    if time_horizon <= 0:
        raise DomainError("time horizon must be positive")
    rng = np.random.default_rng(seed)
    rho = math.exp(entropy_closed(L, N))
    count = int(rng.poisson(rho * time_horizon))
    smp = _Sampler.build(L, N)
    path, jumps = smp.run(count, rng)
    times = np.sort(rng.uniform(0.0, time_horizon, count))
    return FrozenSample(L, N, float(time_horizon), smp.states[path[0]], times, jumps)


# ------------------------------------------------- continuous-time chain oracles


def _generator(L: int, N: int) -> tuple[np.ndarray, np.ndarray, float]:
    spec = spectral_radius_numeric(L, N)
    P = parry_kernel(L, N).toarray()
    return P, parry_vector(L, N), spec.rho


def chain_stone_correlation(L: int, N: int, points) -> float:
    """P(stones at all (t, k)) for the stationary frozen chain, by matrix exponentials.

    Independent of any kernel: jumps arrive at rate e^h and follow the Parry kernel.
    """
    P, pi, rho = _generator(L, N)
    Q = rho * (P - np.eye(len(pi)))
    states = circle_states(L, N)
    pts = sorted(points, key=lambda p: p[0])
    vec = pi.copy()
    t_prev = pts[0][0]
    for t, k in pts:
        if t > t_prev:
            vec = vec @ scipy.linalg.expm(Q * (t - t_prev))
            t_prev = t
        vec = vec * np.array([(k % L) in s for s in states], dtype=float)
    return float(vec.sum())


def chain_jump_density(L: int, N: int, points) -> float:
    """Joint density of jumps from holes k_a at times t_a (distinct times, any order)."""
    P, pi, rho = _generator(L, N)
    Q = rho * (P - np.eye(len(pi)))
    states = circle_states(L, N)
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    pts = sorted(points, key=lambda p: p[0])
    vec = pi.copy()
    t_prev = pts[0][0]
    for t, k in pts:
        if t > t_prev:
            vec = vec @ scipy.linalg.expm(Q * (t - t_prev))
            t_prev = t
        J = np.zeros((n, n))
        for i, s in enumerate(states):
            for pos, nxt in successors(s, L):
                if pos == k % L:
                    J[i, index[nxt]] = rho * P[i, index[nxt]]
        vec = vec @ J
    return float(vec.sum())
