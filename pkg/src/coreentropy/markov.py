"""Star-shaped Hubbard tree models and their Markov transition matrices.

A vein parameter's tree is a q-pronged star plus one interval beyond the
critical point.  Marked points are placed by iterating the constant-slope
model at high precision; branches past the first-return domain inherit
coordinates from their pullbacks, which is consistent because the branch
maps fix the central point.  Cutting at the marked points gives the Markov
partition and its integer transition matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .kneading import finite_word_kneading_polynomial, leading_root_mp
from .polyalg import IntPolynomial, charpoly, leading_real_root
from .words import BinaryWord, FullWord, ZeroEntropy, simplified_from_full


class PositionCollision(Exception):
    """Two distinct marked points coincide within tolerance."""


@dataclass
class StarTreeModel:
    full_word: FullWord
    q: int
    lam: object  # mpmath mpf
    branch_points: dict[int, list]  # branch -> sorted marked coordinates
    intervals: list[tuple[int, object, object]]  # (branch, lo, hi)
    precision_bits: int

    def interval_labels(self) -> list[str]:
        counters: dict[int, int] = {}
        labels = []
        for branch, _, _ in self.intervals:
            n = counters.get(branch, 0)
            counters[branch] = n + 1
            labels.append(f"I{branch}" + (f":{n}" if self._multi(branch) else ""))
        return labels

    def _multi(self, branch: int) -> bool:
        return sum(1 for b, _, _ in self.intervals if b == branch) > 1


def _branch_maps(lam, q: int):
    lam_q1 = lam ** (q - 1)

    def f0(x):
        return lam * x + lam + 1

    def f1(x):
        return -lam * x + lam + 1

    def f2(x):
        return -lam_q1 * x + lam_q1 + 1

    return f0, f1, f2


def star_tree_model(w: FullWord, q: int, precision_bits: int = 200) -> StarTreeModel:
    """Marked star tree for a critically periodic full itinerary."""
    if q != w.q:
        raise ValueError("q mismatch with the word's alphabet")
    w.validate_grammar()
    simplified = simplified_from_full(w)
    poly = finite_word_kneading_polynomial(simplified, q)
    with mp.workprec(precision_bits):
        lam = leading_root_mp(poly)
        if lam <= 1 + mp.mpf(1) / 10**9:
            raise ZeroEntropy(f"growth rate 1 for word {w}")
        tol = mp.mpf(10) ** -30
        f0, f1, f2 = _branch_maps(lam, q)

        # first-return orbit positions, one per simplified symbol
        positions = [1 + lam]
        for ch in simplified.text[:-1]:
            x = positions[-1]
            positions.append({"0": f0, "1": f1, "2": f2}[ch](x))
        if abs(positions[-1]) > tol:
            raise PositionCollision(
                f"first-return orbit of {w} does not close at the critical point"
            )

        # coordinates for every full-word position; branches >= 3 pull back to I_2
        coords: list = []
        return_iter = iter(positions)
        for j, ch in enumerate(w.text):
            symbol = int(ch, 36)
            if symbol <= 2:
                coords.append(next(return_iter))
            else:
                coords.append(coords[j - (symbol - 2)])

        branch_points: dict[int, list] = {b: [] for b in [0, 1, 2] + list(range(3, q + 1))}
        branch_points[1].extend([mp.mpf(0), mp.mpf(1)])  # critical point and alpha
        branch_points[0].append(mp.mpf(0))
        for b in range(2, q + 1):
            branch_points[b].append(mp.mpf(1))  # alpha end of every star branch
        ranges = {0: (1 - lam**q, 0), 1: (0, 1), 2: (1, 1 + lam)}
        for j, ch in enumerate(w.text):
            symbol = int(ch, 36)
            x = coords[j]
            if abs(x) < tol:
                continue  # the critical point itself, already marked
            lo, hi = ranges[min(symbol, 2)]  # pulled-back branches carry I_2 coords
            if not (lo - tol <= x <= hi + tol):
                raise ValueError(
                    f"orbit point {j} of {w} leaves its branch: model is inconsistent"
                )
            branch_points[symbol].append(x)

        intervals: list[tuple[int, object, object]] = []
        for branch in [1] + list(range(2, q + 1)) + [0]:
            pts = sorted(branch_points[branch])
            for a, b in zip(pts, pts[1:]):
                if b - a < tol:
                    raise PositionCollision(
                        f"marked points collide on branch {branch} of {w}"
                    )
                intervals.append((branch, a, b))
        return StarTreeModel(w, q, lam, branch_points, intervals, precision_bits)


@dataclass
class MarkovMatrix:
    entries: list[list[int]]
    labels: list[str]

    def as_json(self) -> dict:
        return {"labels": self.labels, "matrix": self.entries}


def positions_markov_matrix(model: StarTreeModel) -> MarkovMatrix:
    """Transition matrix read off the linear-model coordinates.

    Only defined when the marked points are distinct, i.e. for minimal words;
    used to cross-check the symbolic construction below.
    """
    q = model.q
    with mp.workprec(model.precision_bits):
        lam = model.lam
        tol = mp.mpf(10) ** -25
        f0, f1, f2 = _branch_maps(lam, q)
        intervals = model.intervals

        def image(branch: int, a, b):
            if branch == 1:
                lo, hi = sorted((f1(a), f1(b)))
                return (0, 1, 2), lo, hi
            if branch == q:
                lo, hi = sorted((f2(a), f2(b)))
                return (0, 1, 2), lo, hi
            if 2 <= branch <= q - 1:
                return (branch + 1,), a, b
            if branch == 0:
                lo, hi = sorted((f0(a), f0(b)))
                return (0, 1, 2), lo, hi
            raise AssertionError(f"unexpected branch {branch}")

        n = len(intervals)
        entries = [[0] * n for _ in range(n)]
        for row, (branch, a, b) in enumerate(intervals):
            targets, lo, hi = image(branch, a, b)
            for col, (tb, ta, tb_hi) in enumerate(intervals):
                if tb not in targets:
                    continue
                if ta >= lo - tol and tb_hi <= hi + tol:
                    entries[row][col] += 1
    return MarkovMatrix(entries, model.interval_labels())


_ALPHA = "alpha"
_JUNCTION = "zero"


class _SymbolicTree:
    """Marked star tree ordered by exact itinerary comparison.

    Orbit points on the first-return branches sort by the twisted order of
    their simplified tails (branch order 0 < 1 < 2 on the line, sign flipped
    by orientation-reversing symbols); deeper branches inherit the order of
    their pullbacks on branch 2, which is legitimate because the branch maps
    fix the central point.  No two distinct points of an irreducible word
    compare equal, so this covers renormalizable itineraries where the
    constant-slope coordinates collide.
    """

    def __init__(self, w: FullWord, q: int):
        w.validate_grammar()
        self.q = q
        text = w.text
        period = len(text)
        if any(text == text[:d] * (period // d) for d in range(1, period)):
            raise ValueError(f"itinerary {w} is not irreducible")
        self.text = text
        self.period = period
        # simplified cyclic tails, one horizon-length string per orbit index
        cyclic = [text[j:] + text[:j] for j in range(period)]
        simplified_len = sum(1 for ch in text if ch in "012")
        horizon = 2 * simplified_len + 2
        self.tails = [
            "".join(ch for ch in s * (horizon // simplified_len + 2) if ch in "012")[
                :horizon
            ]
            for s in cyclic
        ]
        self.branch_of = [int(ch, 36) for ch in text]

        branch_members: dict[int, list[int]] = {b: [] for b in range(q + 1)}
        for j in range(period - 1):  # the last point is the critical point itself
            branch_members[self.branch_of[j]].append(j)

        def line_key(j: int):
            return _TailKey(self, j)

        for b in (0, 1, 2):
            branch_members[b].sort(key=line_key)
        for b in range(3, q + 1):
            branch_members[b].sort(key=lambda j: line_key(j - (b - 2)))
        self.branch_members = branch_members

        # global order along the segment through the critical point and alpha
        self.line: list = (
            [("pt", j) for j in branch_members[0]]
            + [(_JUNCTION, None)]
            + [("pt", j) for j in branch_members[1]]
            + [(_ALPHA, None)]
            + [("pt", j) for j in branch_members[2]]
        )
        self.line_rank = {node: i for i, node in enumerate(self.line)}

        # intervals: consecutive marked points along each branch
        self.intervals: list[tuple[int, object, object]] = []
        for b in [1] + list(range(2, q + 1)) + [0]:
            chain = self._branch_chain(b)
            for a, c in zip(chain, chain[1:]):
                self.intervals.append((b, a, c))

    def _branch_chain(self, b: int) -> list:
        members = [("pt", j) for j in self.branch_members[b]]
        if b == 0:
            return members + [(_JUNCTION, None)]
        if b == 1:
            return [(_JUNCTION, None)] + members + [(_ALPHA, None)]
        return [(_ALPHA, None)] + members

    def compare(self, i: int, j: int) -> int:
        """Line order of two first-return orbit points by their tails."""
        u, v = self.tails[i], self.tails[j]
        sign = 1
        for a, b in zip(u, v):
            if a != b:
                return sign * (1 if a > b else -1)
            if a in "12":
                sign = -sign
        raise PositionCollision(f"indistinguishable orbit points {i}, {j}")

    def image(self, node):
        kind, j = node
        if kind == _ALPHA:
            return (_ALPHA, None)
        if kind == _JUNCTION:
            return ("pt", 0)  # the critical point maps to the critical value
        succ = (j + 1) % self.period
        return (_JUNCTION, None) if succ == self.period - 1 else ("pt", succ)

    def matrix(self) -> MarkovMatrix:
        index = {iv: n for n, iv in enumerate(self.intervals)}
        entries = [[0] * len(self.intervals) for _ in self.intervals]
        per_branch: dict[int, list[tuple]] = {}
        for iv in self.intervals:
            per_branch.setdefault(iv[0], []).append(iv)
        for row, (b, a, c) in enumerate(self.intervals):
            if 2 <= b <= self.q - 1:
                # homeomorphic shift one branch outward, same pullback order
                pos = per_branch[b].index((b, a, c))
                entries[row][index[per_branch[b + 1][pos]]] = 1
                continue
            ia, ic = self.image(a), self.image(c)
            lo, hi = sorted((self.line_rank[ia], self.line_rank[ic]))
            for k in range(lo, hi):
                entries[row][index[self.line_interval(k)]] += 1
        return MarkovMatrix(entries, self.labels())

    def line_interval(self, k: int):
        a, c = self.line[k], self.line[k + 1]
        branch = 0 if self.line_rank[a] < self.line_rank[(_JUNCTION, None)] else (
            1 if self.line_rank[a] < self.line_rank[(_ALPHA, None)] else 2
        )
        return (branch, a, c)

    def labels(self) -> list[str]:
        counters: dict[int, int] = {}
        multi = {b: sum(1 for iv in self.intervals if iv[0] == b) > 1 for b in range(self.q + 1)}
        out = []
        for b, _, _ in self.intervals:
            n = counters.get(b, 0)
            counters[b] = n + 1
            out.append(f"I{b}" + (f":{n}" if multi[b] else ""))
        return out


class _TailKey:
    __slots__ = ("tree", "idx")

    def __init__(self, tree: _SymbolicTree, idx: int):
        self.tree = tree
        self.idx = idx

    def __lt__(self, other: "_TailKey") -> bool:
        return self.tree.compare(self.idx, other.idx) < 0


def markov_matrix(w: FullWord, q: int) -> MarkovMatrix:
    """Integer transition matrix of the Markov partition of the star tree.

    Marked points are the critical orbit, the critical point and alpha; the
    partition order comes from exact itinerary comparison, which agrees with
    the linear-model coordinates whenever those are injective.
    """
    if q != w.q:
        raise ValueError("q mismatch with the word's alphabet")
    simplified = simplified_from_full(w)
    poly = finite_word_kneading_polynomial(simplified, q)
    if leading_real_root(poly) <= 1 + 1e-9:
        raise ZeroEntropy(f"growth rate 1 for word {w}")
    return _SymbolicTree(w, q).matrix()


def markov_polynomial(w: FullWord, q: int) -> IntPolynomial:
    """Monic characteristic polynomial of the Markov transition matrix."""
    return charpoly(markov_matrix(w, q).entries).monic_normalized()


# ---------------------------------------------------------------------------
# Real (q = 2) partitions without the alpha point, for the kneading identity
# ---------------------------------------------------------------------------


def _real_center_for(word: BinaryWord):
    from . import oracles

    for center in oracles.real_centers(len(word)):
        if center.itinerary == word.text:
            return center
    raise ValueError(f"{word} is not the itinerary of a real center")


def real_transition_matrix(word: BinaryWord, include_beta: bool = False) -> list[list[int]]:
    """Markov matrix of a real center on its Hubbard tree [f(c), f^2(c)].

    Marked points are the postcritical orbit only; with ``include_beta`` the
    domain extends to [-beta, beta], adding one interval at each end.
    """
    center = _real_center_for(word)
    n = len(word.text)
    with mp.workprec(220):
        c = mp.mpf(center.c)
        points = []
        x = c
        for _ in range(n):
            points.append(x)
            x = x * x + c
        if include_beta:
            beta = (1 + mp.sqrt(1 - 4 * c)) / 2
            points.extend([beta, -beta])
        points.sort()
        tol = mp.mpf(10) ** -30
        for a, b in zip(points, points[1:]):
            if b - a < tol:
                raise PositionCollision(f"postcritical points of {word} collide")
        intervals = list(zip(points, points[1:]))
        entries = [[0] * len(intervals) for _ in intervals]
        for row, (a, b) in enumerate(intervals):
            fa, fb = a * a + c, b * b + c
            if a < -tol and b > tol:
                raise AssertionError("marked intervals never straddle the critical point")
            lo, hi = sorted((fa, fb))
            for col, (ta, tb) in enumerate(intervals):
                if ta >= lo - tol and tb <= hi + tol:
                    entries[row][col] += 1
    return entries
