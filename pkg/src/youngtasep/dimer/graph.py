"""Hexagonal cylinder graph encoding maya evolution on the circle.

Levels are indexed by ``i`` from ``M_minus`` to ``M_plus``; a stone at white
vertex ``(i, k)`` sits at hole k on level i and reaches level ``i - 1`` either
in place or one hole to the right.  Level ``M_plus`` holds ``boundary_in`` and
level ``M_minus`` holds ``boundary_out``, so the forward direction of the
dynamics is decreasing ``i``.

White vertices of level i are the matrix columns, black vertices of level i the
rows, which reproduces the block bidiagonal Kasteleyn matrix (-U1, B; -E, B; ...; -U2^T).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..errors import DomainError, GaugeError, SizeError

VERTEX_CAP = 40

NO_STONE = "no_stone"
STAY = "stone_stays"
JUMP = "jump"
EDGE_TYPES = (NO_STONE, STAY, JUMP)

Vertex = tuple[int, int]  # (level, hole)


@dataclass(frozen=True)
class Edge:
    white: Vertex
    black: Vertex
    kind: str


@dataclass(frozen=True)
class CylinderGraph:
    L: int
    N: int
    M_minus: int
    M_plus: int
    boundary_in: tuple[int, ...]
    boundary_out: tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.N < self.L:
            raise DomainError(f"need 0 < N < L, got L={self.L}, N={self.N}")
        if self.M_plus <= self.M_minus:
            raise DomainError("M_plus must exceed M_minus")
        for b in (self.boundary_in, self.boundary_out):
            if len(set(b)) != self.N or any(not 0 <= k < self.L for k in b):
                raise DomainError(f"boundary {b} is not an {self.N}-subset of Z_{self.L}")
        object.__setattr__(self, "boundary_in", tuple(sorted(self.boundary_in)))
        object.__setattr__(self, "boundary_out", tuple(sorted(self.boundary_out)))

    @classmethod
    def build(cls, L, N, M, boundary_in, boundary_out=None, M_minus=0):
        if boundary_out is None:
            boundary_out = boundary_in
        return cls(L, N, M_minus, M_minus + M, tuple(boundary_in), tuple(boundary_out))

    @property
    def M(self) -> int:
        return self.M_plus - self.M_minus

    def holes_in(self) -> list[int]:
        return [k for k in range(self.L) if k not in self.boundary_in]

    def holes_out(self) -> list[int]:
        return [k for k in range(self.L) if k not in self.boundary_out]

    @cached_property
    def whites(self) -> list[Vertex]:
        """Column order: boundary whites at M_minus, then full levels M_minus+1..M_plus."""
        out = [(self.M_minus, k) for k in self.holes_out()]
        for i in range(self.M_minus + 1, self.M_plus + 1):
            out += [(i, k) for k in range(self.L)]
        return out

    @cached_property
    def blacks(self) -> list[Vertex]:
        """Row order: full levels M_minus..M_plus-1, then boundary blacks at M_plus."""
        out = []
        for i in range(self.M_minus, self.M_plus):
            out += [(i, k) for k in range(self.L)]
        return out + [(self.M_plus, k) for k in self.holes_in()]

    @cached_property
    def white_index(self) -> dict[Vertex, int]:
        return {v: n for n, v in enumerate(self.whites)}

    @cached_property
    def black_index(self) -> dict[Vertex, int]:
        return {v: n for n, v in enumerate(self.blacks)}

    @property
    def vertex_count(self) -> int:
        return len(self.whites) + len(self.blacks)

    @cached_property
    def edges(self) -> list[Edge]:
        L, out = self.L, []
        blacks = self.black_index
        for w in self.whites:
            i, k = w
            if i > self.M_minus:
                out.append(Edge(w, (i - 1, k), STAY))
                out.append(Edge(w, (i - 1, (k + 1) % L), JUMP))
            if (i, k) in blacks:
                out.append(Edge(w, (i, k), NO_STONE))
        return out

    def edges_at(self, white: Vertex) -> list[Edge]:
        return [e for e in self.edges if e.white == white]

    @cached_property
    def _edge_lookup(self) -> dict:
        return {(e.white, e.black): e for e in self.edges}

    def edge(self, white: Vertex, black: Vertex) -> Edge:
        return self._edge_lookup[(white, black)]

    # faces: closed boundary walks starting at a black vertex
    def faces(self) -> list[tuple[str, list[Vertex | tuple]]]:
        """Every face as (name, alternating walk b, w, b, w, ...).

        Vertices are tagged ('b', i, k) / ('w', i, k).  The two annular end
        faces include their pendant boundary edges, each walked twice.
        """
        L, lo, hi = self.L, self.M_minus, self.M_plus
        faces = []
        for i in range(lo + 1, hi):
            for k in range(L):
                k1 = (k + 1) % L
                walk = [("b", i - 1, k1), ("w", i, k1), ("b", i, k1), ("w", i + 1, k), ("b", i, k), ("w", i, k)]
                faces.append((f"hex(i={i},k={k})", walk))
        holes_out, holes_in = set(self.holes_out()), set(self.holes_in())
        walk = []
        for k in range(L):
            walk.append(("b", lo, k))
            if k in holes_out:
                walk += [("w", lo, k), ("b", lo, k)]
            walk.append(("w", lo + 1, k))
        faces.append(("end(M_minus)", walk))
        walk = []
        for k in range(L):
            walk += [("b", hi - 1, k), ("w", hi, k)]
            if k in holes_in:
                walk += [("b", hi, k), ("w", hi, k)]
        faces.append(("end(M_plus)", walk))
        return faces

    def to_json(self) -> str:
        return json.dumps({
            "L": self.L, "N": self.N, "M_minus": self.M_minus, "M_plus": self.M_plus,
            "boundary_in": list(self.boundary_in), "boundary_out": list(self.boundary_out),
            "whites": [list(w) for w in self.whites],
            "blacks": [list(b) for b in self.blacks],
            "edges": [{"white": list(e.white), "black": list(e.black), "type": e.kind} for e in self.edges],
        })


@dataclass(frozen=True)
class GaugeAssignment:
    """Kasteleyn factors as powers of omega = exp(i pi / L): alpha = omega**e.

    Exponents are taken mod 2L, so -1 is e = L.  ``overrides`` maps
    (white, black) pairs to exponents for edges that deviate from their type.
    """
    L: int
    exponents: dict = field(default_factory=dict)
    overrides: dict = field(default_factory=dict)

    @classmethod
    def standard(cls, L: int, N: int) -> "GaugeAssignment":
        return cls(L, {STAY: 0, NO_STONE: L, JUMP: 0 if N % 2 else 1})

    def exponent(self, e: Edge) -> int:
        return self.overrides.get((e.white, e.black), self.exponents[e.kind]) % (2 * self.L)

    def alpha(self, e: Edge) -> complex:
        return complex(np.exp(1j * np.pi * self.exponent(e) / self.L))

    def face_exponent(self, g: CylinderGraph, walk) -> int:
        """Exponent of (product of alphas on odd steps) / (product on even steps)."""
        tot = 0
        n = len(walk)
        for s in range(n):
            a, b = walk[s], walk[(s + 1) % n]
            w, bl = (a, b) if a[0] == "w" else (b, a)
            e = g.edge(w[1:], bl[1:])
            tot += self.exponent(e) if s % 2 == 0 else -self.exponent(e)
        return tot % (2 * self.L)

    def check_faces(self, g: CylinderGraph) -> None:
        if g.L != self.L:
            raise GaugeError(f"gauge built for L={self.L}, graph has L={g.L}")
        for name, walk in g.faces():
            k = len(walk) // 2
            want = 0 if (k - 1) % 2 == 0 else self.L
            got = self.face_exponent(g, walk)
            if got != want:
                raise GaugeError(f"face condition fails on {name}: ratio omega^{got}, need (-1)^{k - 1}")


def edge_weight(e: Edge, epsilon):
    return epsilon if e.kind == JUMP else 1


def build_kasteleyn_W(g: CylinderGraph, epsilon: float, gauge: GaugeAssignment | None = None) -> np.ndarray:
    """Complex matrix W[black, white] = alpha * weight after checking every face condition."""
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    gauge = gauge or GaugeAssignment.standard(g.L, g.N)
    gauge.check_faces(g)
    n = len(g.whites)
    W = np.zeros((n, n), dtype=complex)
    bi, wi = g.black_index, g.white_index
    for e in g.edges:
        W[bi[e.black], wi[e.white]] = gauge.alpha(e) * float(edge_weight(e, epsilon))
    return W


# ---------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class Evolution:
    """Maya states in forward time order (boundary_in first) and the holes that jumped at each step."""
    states: tuple[tuple[int, ...], ...]
    jumps: tuple[tuple[int, ...], ...]

    def is_valid(self, L: int) -> bool:
        for before, after, jumped in zip(self.states, self.states[1:], self.jumps):
            moved = set(jumped)
            if not moved <= set(before):
                return False
            image = {(k + 1) % L if k in moved else k for k in before}
            if image != set(after) or len(image) != len(before):
                return False
        return True


@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...]
    jumps: int
    weight: object

    def decode(self, g: CylinderGraph) -> Evolution:
        occ = {i: set() for i in range(g.M_minus, g.M_plus + 1)}
        jumped = {i: [] for i in range(g.M_minus + 1, g.M_plus + 1)}
        for e in self.edges:
            if e.kind != NO_STONE:
                occ[e.black[0]].add(e.black[1])
                if e.white[0] == g.M_plus:
                    occ[g.M_plus].add(e.white[1])
                if e.kind == JUMP:
                    jumped[e.white[0]].append(e.white[1])
        levels = range(g.M_plus, g.M_minus - 1, -1)
        states = tuple(tuple(sorted(occ[i])) for i in levels)
        jumps = tuple(tuple(sorted(jumped[i])) for i in range(g.M_plus, g.M_minus, -1))
        return Evolution(states, jumps)


@dataclass(frozen=True)
class MatchingEnumeration:
    graph: CylinderGraph
    matchings: tuple[Matching, ...]
    Z: object

    def edge_probability(self, e: Edge):
        tot = sum((m.weight for m in self.matchings if e in m.edges), start=0 * self.Z)
        return tot / self.Z

    def edge_marginals(self) -> dict:
        """Probability of every edge of the graph in one pass over the matchings."""
        tot = {e: 0 * self.Z for e in self.graph.edges}
        for m in self.matchings:
            for e in m.edges:
                tot[e] += m.weight
        return {e: w / self.Z for e, w in tot.items()}

    def to_json(self) -> str:
        return json.dumps([
            {"weight": str(m.weight), "edges": [{"white": list(e.white), "black": list(e.black), "type": e.kind} for e in m.edges]}
            for m in self.matchings
        ])


def _backtrack(whites, blacks_required, adj, epsilon):
    """Yield (edges, jumps) for assignments covering ``whites`` injectively and all required blacks.

    Whites are visited in the given order; a required black is checked as soon
    as its last neighbouring white has been assigned.
    """
    pos = {w: n for n, w in enumerate(whites)}
    closes: dict[int, list] = {}
    for b, nbrs in blacks_required.items():
        closes.setdefault(max(pos[w] for w in nbrs), []).append(b)
    used: set[Vertex] = set()
    chosen: list[Edge] = []

    def rec(n, jumps):
        if n == len(whites):
            yield tuple(chosen), jumps
            return
        for e in adj[whites[n]]:
            if e.black in used:
                continue
            used.add(e.black)
            chosen.append(e)
            if all(b in used for b in closes.get(n, ())):
                yield from rec(n + 1, jumps + (e.kind == JUMP))
            chosen.pop()
            used.discard(e.black)

    yield from rec(0, 0)


def _adjacency(g: CylinderGraph, whites):
    adj = {w: [] for w in whites}
    nb: dict[Vertex, list] = {}
    for e in g.edges:
        if e.white in adj:
            adj[e.white].append(e)
            nb.setdefault(e.black, []).append(e.white)
    return adj, nb


def enumerate_matchings(g: CylinderGraph, epsilon=Fraction(1, 10), cap: int = VERTEX_CAP) -> MatchingEnumeration:
    """All perfect matchings by backtracking over white vertices; weight epsilon^(#jumps)."""
    if g.vertex_count > cap:
        raise SizeError(f"graph has {g.vertex_count} vertices, enumeration cap is {cap}")
    whites = sorted(g.whites, key=lambda w: -w[0])  # start from the input boundary
    adj, nb = _adjacency(g, whites)
    found = [Matching(edges, j, epsilon**j) for edges, j in _backtrack(whites, nb, adj, epsilon)]
    Z = sum((m.weight for m in found), start=0 * epsilon)
    return MatchingEnumeration(g, tuple(found), Z)


def enumerate_by_output(L: int, N: int, M: int, boundary_in, epsilon=Fraction(1, 10), cap: int = VERTEX_CAP) -> dict:
    """Partition sums Z(boundary_out) for every output boundary at once.

    Enumerates matchings of the graph with the output-side pendant whites
    removed; the uncovered output-level blacks are exactly the holes of the
    output boundary, and re-attaching the pendant edges is forced.  Every
    perfect matching of every instance (L, N, M, boundary_in, *) is visited once.
    """
    g = CylinderGraph.build(L, N, M, boundary_in)
    if g.vertex_count > cap:
        raise SizeError(f"graph has {g.vertex_count} vertices, enumeration cap is {cap}")
    whites = sorted((w for w in g.whites if w[0] > g.M_minus), key=lambda w: -w[0])
    adj, nb = _adjacency(g, whites)
    required = {b: ws for b, ws in nb.items() if b[0] > g.M_minus}
    for b in g.blacks:
        if b[0] > g.M_minus:
            required.setdefault(b, [])
    Z: dict[tuple, object] = {}
    for edges, j in _backtrack(whites, required, adj, epsilon):
        out = tuple(sorted(e.black[1] for e in edges if e.black[0] == g.M_minus))
        Z[out] = Z.get(out, 0 * epsilon) + epsilon**j
    return Z


# ---------------------------------------------------------------- exact frame


def real_frame_potentials(g: CylinderGraph, gauge: GaugeAssignment) -> dict[tuple, int]:
    """Vertex potentials p with exponent(e) + p_black - p_white = 0 mod L on every edge.

    Conjugating W by diag(omega^p) then leaves only real +-1 factors, so exact
    rational arithmetic applies.  Raises GaugeError if no such potentials exist.
    """
    L2 = 2 * g.L
    nbrs: dict[tuple, list] = {}
    for e in g.edges:
        nbrs.setdefault(("w",) + e.white, []).append((("b",) + e.black, e))
        nbrs.setdefault(("b",) + e.black, []).append((("w",) + e.white, e))
    pot: dict[tuple, int] = {}
    for root in nbrs:
        if root in pot:
            continue
        pot[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u, e in nbrs[v]:
                ex = gauge.exponent(e)
                # want ex + p_b - p_w = 0 (mod 2L) on tree edges
                want = (pot[v] + ex) % L2 if v[0] == "b" else (pot[v] - ex) % L2
                if u not in pot:
                    pot[u] = want
                    queue.append(u)
    for e in g.edges:
        if (gauge.exponent(e) + pot[("b",) + e.black] - pot[("w",) + e.white]) % g.L:
            raise GaugeError("gauge is not conjugate to a real one; exact arithmetic unavailable")
    return pot
