"""Poissonized Plancherel weights from the mirrored hexagonal graph.

Maya words live on a window of 2w holes (w stones), which confines diagrams to
the w x w box.  The graph of height M encodes M steps in which every stone
stays or jumps one hole right; jump edges weigh epsilon.  The mirrored graph
glues two copies along their target rows, so its matchings are pairs of
evolutions with a common target diagram and the weight binned on lambda is
Z_M(lambda)^2.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DomainError, SizeError
from ..young import MayaWord, Partition, dimension, maya_decode
from .graph import JUMP, NO_STONE, STAY, VERTEX_CAP, Edge, _backtrack

MIRROR = "mirror"


def _check_width(width):
    if width < 1:
        raise DomainError("width must be a positive integer")


def initial_state(width: int) -> tuple[int, ...]:
    return tuple(range(width))


def decode_state(width: int, state) -> Partition:
    occ = set(state)
    return maya_decode(MayaWord((-width, width), tuple(k in occ for k in range(2 * width))))


def line_moves(state, width: int):
    """(new state, number of jumps) for every simultaneous stay/jump pattern inside the window.

    A stone may jump when its right neighbour hole is empty or is itself
    vacated by a jump; no stone may leave the window.
    """
    occ = set(state)
    n = 2 * width
    for mask in itertools.product((False, True), repeat=len(state)):
        moved = {k for k, j in zip(state, mask) if j}
        ok = all(k + 1 < n and (k + 1 not in occ or k + 1 in moved) for k in moved)
        if ok:
            yield tuple(sorted((k + 1) if k in moved else k for k in state)), len(moved)


def path_weights(width: int, M: int, epsilon) -> dict[Partition, object]:
    """Z_M(lambda): weighted number of M-step evolutions from the empty diagram to lambda."""
    _check_width(width)
    cur = {initial_state(width): epsilon**0}
    for _ in range(M):
        nxt: dict = {}
        for s, wgt in cur.items():
            for t, j in line_moves(s, width):
                nxt[t] = nxt.get(t, 0 * epsilon) + wgt * epsilon**j
        cur = nxt
    return {decode_state(width, s): z for s, z in cur.items()}


def box_partitions(width: int) -> list[Partition]:
    out = []
    for parts in itertools.product(range(width + 1), repeat=width):
        if all(parts[i] >= parts[i + 1] for i in range(width - 1)):
            out.append(Partition(tuple(p for p in parts if p)))
    return sorted(out, key=lambda p: (p.size, p.parts))


def poissonized_target(width: int, theta: float) -> dict[Partition, float]:
    """(theta^(2n) / n!) dim^2 lambda / n!, normalised over the w x w box."""
    raw = {}
    for lam in box_partitions(width):
        n = lam.size
        raw[lam] = theta ** (2 * n) / math.factorial(n) * dimension(lam) ** 2 / math.factorial(n)
    tot = sum(raw.values())
    return {k: v / tot for k, v in raw.items()}


@dataclass(frozen=True)
class PoissonizationReport:
    width: int
    M: int
    epsilon: float
    theta: float
    weights: dict = field(repr=False)  # normalised Z^2 per lambda
    target: dict = field(repr=False)

    @property
    def max_error(self) -> float:
        return max(abs(float(self.weights.get(k, 0.0)) - v) for k, v in self.target.items())

    def error_at(self, lam: Partition) -> float:
        return abs(float(self.weights.get(lam, 0.0)) - self.target[lam])


def poissonization_check(width: int, M: int | None = None, epsilon: float = 0.1, theta: float | None = None) -> PoissonizationReport:
    """Binned mirrored-graph weights Z_M(lambda)^2 against the poissonized Plancherel law.

    Either M or theta may be omitted; they are tied by theta = M epsilon.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if M is None:
        if theta is None:
            raise DomainError("give M or theta")
        M = max(1, round(theta / epsilon))
    if theta is None:
        theta = M * epsilon
    Z = path_weights(width, M, epsilon)
    sq = {k: v * v for k, v in Z.items()}
    tot = sum(sq.values())
    return PoissonizationReport(width, M, float(epsilon), float(theta), {k: v / tot for k, v in sq.items()},
                                poissonized_target(width, theta))


# ------------------------------------------------------ literal mirrored graph


@dataclass(frozen=True)
class MirroredGraph:
    width: int
    M: int
    whites: list = field(repr=False)
    blacks: list = field(repr=False)
    edges: list = field(repr=False)

    @property
    def vertex_count(self) -> int:
        return len(self.whites) + len(self.blacks)


def mirrored_graph(width: int, M: int) -> MirroredGraph:
    """Two copies of the height-M line graph glued along the target row.

    Copy "A" keeps the colours, copy "B" swaps them; vertices are
    (copy, level, hole).  Level M carries the empty-diagram boundary, level 0
    the target row where every A-black is joined to its B-image.
    """
    _check_width(width)
    if M < 1:
        raise DomainError("M must be positive")
    n = 2 * width
    holes0 = set(range(width, n))
    whites_a = [("A", i, k) for i in range(M, 0, -1) for k in range(n)]
    blacks_a = [("A", i, k) for i in range(M) for k in range(n)] + [("A", M, k) for k in sorted(holes0)]
    edges = []
    for _, i, k in whites_a:
        edges.append(Edge(("A", i, k), ("A", i - 1, k), STAY))
        if k + 1 < n:
            edges.append(Edge(("A", i, k), ("A", i - 1, k + 1), JUMP))
        if i < M or k in holes0:
            edges.append(Edge(("A", i, k), ("A", i, k), NO_STONE))
    # colour-swapped copy
    mirror = [Edge(("B",) + e.black[1:], ("B",) + e.white[1:], e.kind) for e in edges]
    whites_b = sorted((("B",) + b[1:] for b in blacks_a), key=lambda v: (v[1], v[2]))
    blacks_b = [("B",) + w[1:] for w in whites_a]
    glue = [Edge(("B", 0, k), ("A", 0, k), MIRROR) for k in range(n)]
    return MirroredGraph(width, M, whites_a + whites_b, blacks_a + blacks_b, edges + mirror + glue)


def enumerate_mirrored(width: int, M: int, epsilon=Fraction(1, 10), cap: int = VERTEX_CAP) -> dict[Partition, object]:
    """Brute-force perfect matchings of the mirrored graph, total weight binned by target diagram."""
    g = mirrored_graph(width, M)
    if g.vertex_count > cap:
        raise SizeError(f"mirrored graph has {g.vertex_count} vertices, enumeration cap is {cap}")
    adj = {w: [] for w in g.whites}
    nb: dict = {b: [] for b in g.blacks}
    for e in g.edges:
        adj[e.white].append(e)
        nb[e.black].append(e.white)
    out: dict[Partition, object] = {}
    for edges, jumps in _backtrack(g.whites, nb, adj, epsilon):
        holes = {e.black[2] for e in edges if e.kind == MIRROR}
        lam = decode_state(width, [k for k in range(2 * width) if k not in holes])
        out[lam] = out.get(lam, 0 * epsilon) + epsilon**jumps
    return out
