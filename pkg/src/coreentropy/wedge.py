"""Labeled wedges and their graphs.

The wedge of an angle labels every index pair (i, j) by whether the orbit
points 2^{i-1} theta and 2^{j-1} theta are equal, separated by the critical
rays, or neither.  Quotienting the associated infinite graph by the orbit
periodicity gives a finite model whose characteristic polynomial carries the
core entropy; truncating the multicycle expansion of the infinite graph gives
the spectral determinant coefficients directly.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

import networkx as nx

from .angles import Angle, AnglePartition, classify, orbit
from .polyalg import IntPolynomial, charpoly, leading_real_root


class CycleBudgetExceeded(Exception):
    """Simple-cycle enumeration grew past the configured cap."""


class WedgeLabel(enum.Enum):
    NON_SEPARATED = "N"
    SEPARATED = "S"
    EQUIVALENT = "E"


class LabeledWedge:
    """Labels of the pairs (i, j), 1 <= i <= j, for one rational angle."""

    def __init__(self, theta: Angle, window: int):
        self.theta = theta
        self.preperiod, self.period = classify(theta)
        self.window = window
        horizon = max(window, self.preperiod + self.period)
        self._orbit = orbit(theta, horizon)
        partition = AnglePartition(theta)
        self._side = [partition.interior_side(x) for x in self._orbit]

    def _reduce_index(self, i: int) -> int:
        if i <= self.preperiod + self.period:
            return i
        return (i - self.preperiod - 1) % self.period + self.preperiod + 1

    def point(self, i: int) -> Angle:
        return self._orbit[self._reduce_index(i) - 1]

    def label(self, i: int, j: int) -> WedgeLabel:
        if not (1 <= i <= j):
            raise ValueError("need 1 <= i <= j")
        xi, xj = self.point(i), self.point(j)
        if xi == xj:
            return WedgeLabel.EQUIVALENT
        si = self._side[self._reduce_index(i) - 1]
        sj = self._side[self._reduce_index(j) - 1]
        if si is not None and sj is not None and si != sj:
            return WedgeLabel.SEPARATED
        return WedgeLabel.NON_SEPARATED

    def separated_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(1, self.window + 1)
            for j in range(i + 1, self.window + 1)
            if self.label(i, j) is WedgeLabel.SEPARATED
        ]

    def labels(self) -> dict[tuple[int, int], WedgeLabel]:
        return {
            (i, j): self.label(i, j)
            for i in range(1, self.window + 1)
            for j in range(i, self.window + 1)
        }


def build_wedge(theta: Angle, window: int) -> LabeledWedge:
    return LabeledWedge(theta, window)


def infinite_graph_targets(wedge: LabeledWedge, i: int, j: int) -> list[tuple[int, int]]:
    """Out-edges of (i, j) in the infinite wedge graph."""
    label = wedge.label(i, j)
    if label is WedgeLabel.EQUIVALENT:
        return []
    if label is WedgeLabel.NON_SEPARATED:
        return [(i + 1, j + 1)]
    return [(1, i + 1), (1, j + 1)]


class FiniteModel:
    """Quotient of the wedge graph by index congruence mod (k*period, preperiod)."""

    def __init__(self, theta: Angle, k: int):
        if k < 1:
            raise ValueError("cover index k must be at least 1")
        self.theta = theta
        self.k = k
        wedge = build_wedge(theta, 1)
        self.preperiod, self.period = wedge.preperiod, wedge.period
        self.size = k * self.period + self.preperiod
        self._wedge = LabeledWedge(theta, self.size + 1)
        self.vertices = [
            (i, j) for i in range(1, self.size + 1) for j in range(i, self.size + 1)
        ]
        index = {v: n for n, v in enumerate(self.vertices)}
        dim = len(self.vertices)
        self.matrix = [[0] * dim for _ in range(dim)]
        self.edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
        for v in self.vertices:
            for target in infinite_graph_targets(self._wedge, *v):
                w = self._reduce_pair(*target)
                self.matrix[index[v]][index[w]] += 1
                self.edges.append((v, w))
        self.edges.sort()

    def _reduce_index(self, i: int) -> int:
        if i <= self.size:
            return i
        return (i - self.preperiod - 1) % (self.k * self.period) + self.preperiod + 1

    def _reduce_pair(self, i: int, j: int) -> tuple[int, int]:
        a, b = self._reduce_index(i), self._reduce_index(j)
        return (a, b) if a <= b else (b, a)

    def adjacency(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        out: dict[tuple[int, int], list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for source, target in self.edges:
            out[source].append(target)
        return out

    def export_edges(self) -> str:
        """Line-based adjacency text: "i,j -> k,l", one edge per line, sorted."""
        return "\n".join(
            f"{a},{b} -> {c},{d}" for (a, b), (c, d) in self.edges
        ) + ("\n" if self.edges else "")

    def charpoly(self) -> IntPolynomial:
        return charpoly(self.matrix)


def finite_model(theta: Angle, k: int = 1) -> FiniteModel:
    return FiniteModel(theta, k)


def thurston_polynomial(theta: Angle) -> IntPolynomial:
    """Characteristic polynomial of the finite model, made monic."""
    return finite_model(theta, 1).charpoly().monic_normalized()


def growth_rate_from_wedge(theta: Angle) -> float:
    """Leading eigenvalue of the finite model: exp of the core entropy."""
    return leading_real_root(finite_model(theta, 1).charpoly())


def quotient_charpoly_ratio(theta: Angle, k: int) -> IntPolynomial:
    """Exact quotient charpoly(Gamma_k) / charpoly(Gamma_1).

    Divisibility is guaranteed; a remainder signals an implementation bug and
    surfaces as NonDivisible.
    """
    if k < 1:
        raise ValueError("cover index k must be at least 1")
    numerator = finite_model(theta, k).charpoly()
    if k == 1:
        return IntPolynomial([1])
    return numerator.exact_div(finite_model(theta, 1).charpoly())


def multicycle_count_bound(n: int) -> float:
    """Upper bound (2n)^sqrt(2n) on multicycles of length n in a wedge graph."""
    return float((2 * n) ** math.sqrt(2 * n)) if n else 1.0


def truncated_spectral_determinant(
    theta: Angle, nmax: int, cycle_budget: int = 500_000
) -> IntPolynomial:
    """Degree-<= nmax part of the spectral determinant of the infinite graph.

    Simple cycles of length <= nmax only visit vertices with both coordinates
    at most 2*nmax + preperiod, so the enumeration runs on that finite box.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    if nmax == 0:
        return IntPolynomial([1])
    preperiod, _ = classify(theta)
    box = 2 * nmax + preperiod
    wedge = build_wedge(theta, box + 1)
    graph = nx.DiGraph()
    for i in range(1, box + 1):
        for j in range(i, box + 1):
            graph.add_node((i, j))
            for target in infinite_graph_targets(wedge, i, j):
                if target[1] <= box:
                    graph.add_edge((i, j), target)
    cycles = []
    for nodes in nx.simple_cycles(graph, length_bound=nmax):
        cycles.append((frozenset(nodes), len(nodes)))
        if len(cycles) > cycle_budget:
            raise CycleBudgetExceeded(f"more than {cycle_budget} simple cycles")
    cycles.sort(key=lambda c: c[1])
    coeffs = [0] * (nmax + 1)
    coeffs[0] = 1
    counts = [0] * (nmax + 1)

    def extend(first: int, used: frozenset, length: int, components: int):
        for idx in range(first, len(cycles)):
            support, cyc_len = cycles[idx]
            if length + cyc_len > nmax:
                break
            if used & support:
                continue
            total = length + cyc_len
            coeffs[total] += (-1) ** (components + 1)
            counts[total] += 1
            extend(idx + 1, used | support, total, components + 1)

    extend(0, frozenset(), 0, 0)
    for n, count in enumerate(counts):
        if n and count > multicycle_count_bound(n):
            raise AssertionError(
                f"multicycle count {count} at length {n} beats the wedge bound"
            )
    return IntPolynomial(coeffs)
