"""Partitions, maya words, exact tableau counting and Young-graph samplers.

Cells are ``(row, col)`` pairs, zero based, English convention (row 0 is the
longest).  The content of a cell is ``col - row``.  All counts are Python
integers and all transition probabilities are :class:`fractions.Fraction`;
floats only appear inside the samplers.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ContainmentError, DomainError, WindowError
from .exactla import integer_det

Cell = tuple[int, int]


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise DomainError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise DomainError(f"parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if text in ("-", ""):
            return cls(())
        try:
            return cls(tuple(int(t) for t in text.split(",")))
        except ValueError as exc:
            raise DomainError(f"cannot parse partition {text!r}") from exc

    def __str__(self) -> str:
        return ",".join(map(str, self.parts)) if self.parts else "-"

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        # missing parts read as 0
        return self.parts[i] if 0 <= i < len(self.parts) else 0

    @property
    def size(self) -> int:
        return sum(self.parts)

    def cells(self) -> list[Cell]:
        return [(i, j) for i, p in enumerate(self.parts) for j in range(p)]

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def contains(self, other: "Partition") -> bool:
        return len(other) <= len(self) and all(other[i] <= self[i] for i in range(len(other)))

    def addable_rows(self) -> list[int]:
        """Rows where a cell can be appended, top to bottom."""
        return [i for i in range(len(self.parts) + 1) if i == 0 or self[i - 1] > self[i]]

    def removable_rows(self) -> list[int]:
        return [i for i in range(len(self.parts)) if self[i] > self[i + 1]]

    def add(self, row: int) -> "Partition":
        parts = list(self.parts) + [0]
        parts[row] += 1
        return Partition(tuple(p for p in parts if p))

    def remove(self, row: int) -> "Partition":
        parts = list(self.parts)
        parts[row] -= 1
        return Partition(tuple(p for p in parts if p))

    def hooks(self) -> list[int]:
        conj = self.conjugate()
        return [self[i] - j + conj[j] - i - 1 for i, j in self.cells()]


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition = Partition()

    def __post_init__(self):
        if not self.outer.contains(self.inner):
            raise ContainmentError(f"{self.inner} is not contained in {self.outer}")

    @classmethod
    def parse(cls, text: str) -> "SkewShape":
        outer, _, inner = text.partition("/")
        return cls(Partition.parse(outer), Partition.parse(inner or "-"))

    def __str__(self) -> str:
        return f"{self.outer}/{self.inner}"

    @property
    def size(self) -> int:
        return self.outer.size - self.inner.size

    def cells(self) -> list[Cell]:
        return [(i, j) for i in range(len(self.outer)) for j in range(self.inner[i], self.outer[i])]


@dataclass(frozen=True)
class PathTableau:
    """A path inner -> outer in the Young graph, stored as the addition order of cells."""

    shape: SkewShape
    order: tuple[Cell, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "order", tuple((int(r), int(c)) for r, c in self.order))
        if sorted(self.order) != sorted(self.shape.cells()):
            raise DomainError("order must list every cell of the skew shape exactly once")
        entries = self.entries
        for (r, c), v in entries.items():
            for nb in ((r, c + 1), (r + 1, c)):
                if nb in entries and entries[nb] <= v:
                    raise DomainError(f"entries not increasing at {(r, c)} -> {nb}")

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def entries(self) -> dict[Cell, int]:
        return {cell: k + 1 for k, cell in enumerate(self.order)}

    def partitions(self) -> list[Partition]:
        """The diagrams visited by the path, inner first."""
        parts = list(self.shape.inner.parts)
        out = [self.shape.inner]
        for r, _ in self.order:
            if r == len(parts):
                parts.append(0)
            parts[r] += 1
            out.append(Partition(tuple(parts)))
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "shape": {"outer": str(self.shape.outer), "inner": str(self.shape.inner)},
                "order": [list(c) for c in self.order],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PathTableau":
        data = json.loads(text)
        shape = SkewShape(Partition.parse(data["shape"]["outer"]), Partition.parse(data["shape"]["inner"]))
        return cls(shape, tuple(tuple(c) for c in data["order"]))


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order."""

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for parts in rec(n, n if max_part is None else max_part):
        yield Partition(parts)


# ---------------------------------------------------------------- maya words


@dataclass(frozen=True)
class MayaWord:
    """Occupancy of the holes a+1/2, ..., b-1/2 of the window [a, b]."""

    window: tuple[int, int]
    occupancy: tuple[bool, ...]

    def __post_init__(self):
        a, b = self.window
        if len(self.occupancy) != b - a:
            raise DomainError("occupancy length must equal the window width")

    @property
    def positions(self) -> tuple[float, ...]:
        a, _ = self.window
        return tuple(a + k + 0.5 for k in range(len(self.occupancy)))

    @property
    def stones(self) -> tuple[float, ...]:
        return tuple(x for x, s in zip(self.positions, self.occupancy) if s)

    def __str__(self) -> str:
        return "".join("1" if s else "0" for s in self.occupancy)


def minimal_window(p: Partition) -> tuple[int, int]:
    return (-len(p), p[0])


def maya_encode(p: Partition, window: tuple[int, int] | None = None) -> MayaWord:
    """Stones sit at p_i - i + 1/2 (i = 1, 2, ...): down-steps of the rotated boundary."""
    need = minimal_window(p)
    a, b = need if window is None else window
    if a > need[0] or b < need[1]:
        raise WindowError(f"window {(a, b)} too narrow for {p}; need a <= {need[0]} and b >= {need[1]}")
    stones = {p[i] - (i + 1) for i in range(b - a + len(p) + 1)}  # integer part of position - 1/2
    return MayaWord((a, b), tuple((a + k) in stones for k in range(b - a)))


def maya_decode(word: MayaWord) -> Partition:
    a, _ = word.window
    stones = sorted((a + k for k, s in enumerate(word.occupancy) if s), reverse=True)
    # every hole left of the window is a stone, so the charge must vanish
    if len(stones) != -a:
        raise DomainError(f"word has {len(stones)} stones in window starting at {a}; charge is not zero")
    return Partition(tuple(x + i + 1 for i, x in enumerate(stones) if x + i + 1 > 0))


# ---------------------------------------------------------------- exact counts


def dimension(p: Partition) -> int:
    """Number of standard Young tableaux of shape p (hook length formula)."""
    return math.factorial(p.size) // math.prod(p.hooks())


def _conjugate_parts(parts: tuple) -> tuple:
    return tuple(sum(1 for p in parts if p > c) for c in range(parts[0])) if parts else ()


def _paths_raw(outer: tuple, inner: tuple) -> dict[tuple, int]:
    """Paths up to ``outer`` from every diagram between ``inner`` and ``outer``, on plain tuples.

    Diagrams are padded to len(outer) rows; the DP runs over levels from the
    top, memoised on the lower diagram.
    """
    ell = len(outer)
    inner = tuple(inner) + (0,) * (ell - len(inner))
    top = tuple(outer)
    counts = {top: 1}
    level = [top]
    for _ in range(sum(outer) - sum(inner)):
        below: dict[tuple, int] = {}
        for nu in level:
            c = counts[nu]
            for r in range(ell):
                # remove the last cell of row r if the result is a diagram above inner
                if nu[r] > inner[r] and (r + 1 == ell or nu[r + 1] < nu[r]):
                    mu = nu[:r] + (nu[r] - 1,) + nu[r + 1:]
                    below[mu] = below.get(mu, 0) + c
        counts.update(below)
        level = list(below)
    return counts


def _strip(parts: tuple) -> tuple:
    n = len(parts)
    while n and parts[n - 1] == 0:
        n -= 1
    return parts[:n]


def paths_to_outer(s: SkewShape) -> dict[Partition, int]:
    """Number of Young-graph paths from each intermediate diagram up to ``s.outer``."""
    raw = _paths_raw(s.outer.parts, s.inner.parts)
    return {Partition(_strip(mu)): c for mu, c in raw.items()}


def count_skew_dp(s: SkewShape) -> int:
    return paths_to_outer(s)[s.inner]


def _skew_det_raw(lam: tuple, mu: tuple) -> int:
    ell = len(lam)
    if ell == 0:
        return 1
    if ell > lam[0]:
        # transposing tableaux is a bijection; the conjugate gives a smaller matrix
        return _skew_det_raw(_conjugate_parts(lam), _conjugate_parts(_strip(mu)))
    mu = tuple(mu) + (0,) * (ell - len(mu))
    args = [[lam[i] - mu[j] - i + j for j in range(ell)] for i in range(ell)]
    K = max(max(row) for row in args)
    D = math.factorial(K)
    mat = [[D // math.factorial(a) if a >= 0 else 0 for a in row] for row in args]
    num = math.factorial(sum(lam) - sum(mu)) * integer_det(mat)
    val, rem = divmod(num, D**ell)
    if rem:
        raise ArithmeticError(f"non-integral skew count for {lam}/{mu}")
    return val


def count_skew_det(s: SkewShape) -> int:
    """n! det[1/(outer_i - inner_j - i + j)!], exact.

    Entries are scaled by a common D = K! (K the largest argument) so the
    determinant is taken over the integers.  Shapes taller than wide are
    transposed first.
    """
    return _skew_det_raw(s.outer.parts, s.inner.parts)


def count_skew(s: SkewShape) -> int:
    """F^{outer/inner}; the DP count and the determinant count must agree."""
    dp, det = count_skew_dp(s), count_skew_det(s)
    if dp != det:
        raise ArithmeticError(f"skew count mismatch for {s}: dp={dp}, det={det}")
    return dp


def plancherel_identity_check(n: int, bound: int = 14) -> bool:
    if n > bound:
        raise DomainError(f"n={n} exceeds the enumeration bound {bound}")
    return sum(dimension(p) ** 2 for p in partitions_of(n)) == math.factorial(n)


# ---------------------------------------------------------------- transitions


def forward_step_distribution(p: Partition) -> dict[Partition, Fraction]:
    n = p.size + 1
    d = dimension(p)
    return {q: Fraction(dimension(q), n * d) for q in (p.add(r) for r in p.addable_rows())}


def backward_step_distribution(p: Partition) -> dict[Partition, Fraction]:
    if p.size == 0:
        raise DomainError("the empty diagram has no predecessor")
    d = dimension(p)
    return {q: Fraction(dimension(q), d) for q in (p.remove(r) for r in p.removable_rows())}


def _corner_contents(p: Partition) -> tuple[list[int], list[int]]:
    """Contents of addable cells (profile minima) and removable cells (maxima)."""
    mins = [p[r] - r for r in p.addable_rows()]
    maxs = [p[r] - 1 - r for r in p.removable_rows()]
    return mins, maxs


def kerov_transition(p: Partition) -> dict[int, Fraction]:
    """Plancherel growth probabilities keyed by addable row, from the interlacing minima/maxima."""
    rows = p.addable_rows()
    mins, maxs = _corner_contents(p)
    out = {}
    for r, x in zip(rows, mins):
        num = math.prod(x - y for y in maxs)
        den = math.prod(x - z for z in mins if z != x)
        out[r] = Fraction(num, den)
    return out


def _kerov_weights_float(rows: Sequence[int], mins: np.ndarray, maxs: np.ndarray) -> np.ndarray:
    # log-space: products of ~sqrt(n) factors overflow doubles for large n
    dx = mins[:, None] - mins[None, :]
    np.fill_diagonal(dx, 1.0)
    logw = np.log(np.abs(mins[:, None] - maxs[None, :])).sum(axis=1) if len(maxs) else np.zeros(len(mins))
    logw -= np.log(np.abs(dx)).sum(axis=1)
    w = np.exp(logw - logw.max())
    return w / w.sum()


def sample_plancherel_path(n: int, seed=None) -> PathTableau:
    """Grow a diagram n times with the Plancherel forward transitions."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    parts: list[int] = []
    order: list[Cell] = []
    for _ in range(n):
        p = Partition(tuple(parts))
        rows = p.addable_rows()
        mins, maxs = _corner_contents(p)
        w = _kerov_weights_float(rows, np.asarray(mins, float), np.asarray(maxs, float))
        r = rows[rng.choice(len(rows), p=w)]
        if r == len(parts):
            parts.append(0)
        order.append((r, parts[r]))
        parts[r] += 1
    return PathTableau(SkewShape(Partition(tuple(parts))), tuple(order))


def sample_uniform_skew_path(s: SkewShape, seed=None) -> PathTableau:
    """Uniform standard skew tableau via count-proportional transitions."""
    rng = np.random.default_rng(seed)
    counts = paths_to_outer(s)
    mu = s.inner
    order: list[Cell] = []
    while mu != s.outer:
        rows = [r for r in mu.addable_rows() if mu[r] < s.outer[r]]
        w = np.array([counts[mu.add(r)] for r in rows], dtype=float)
        r = rows[rng.choice(len(rows), p=w / w.sum())]
        order.append((r, mu[r]))
        mu = mu.add(r)
    return PathTableau(s, tuple(order))


@lru_cache(maxsize=None)
def plancherel_measure(n: int) -> dict[Partition, Fraction]:
    f = math.factorial(n)
    return {p: Fraction(dimension(p) ** 2, f) for p in partitions_of(n)}
