"""Independent numeric reference oracles.

``real_centers`` locates every real superattracting parameter of a given
period by a sign-change scan of c -> f_c^n(0) over [-2, 1/4] followed by
high-precision bisection; it knows nothing about the combinatorial word
machinery it is used to validate.  ``brute_force_multicycles`` is a naive
multicycle enumerator for cross-checking spectral determinants.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from mpmath import mp

from .words import center_word_from_prefix


class PrecisionExhausted(Exception):
    """The root scan did not stabilize under refinement."""


@dataclass(frozen=True)
class RealCenter:
    """A real parameter with superattracting orbit of exact period ``period``."""

    c: object  # mpmath mpf
    period: int
    itinerary: str

    def as_float(self) -> float:
        return float(self.c)


def _orbit_value(c, n: int):
    x = c
    for _ in range(n - 1):
        x = x * x + c
    return x


def _grid_scan(n: int, du: float) -> list[tuple[float, float]]:
    """Sign-change brackets of f_c^n(0) on [-2, 1/4], scanned as c = u^2 - 2.

    The substitution concentrates samples near the tip c = -2 where
    period-n centers accumulate quadratically in the angle.
    """
    brackets = []
    u_max = 1.5
    chunk = 1 << 19
    total = int(u_max / du) + 2
    prev_u = prev_sign = None
    for start in range(0, total, chunk):
        u = (np.arange(start, min(start + chunk, total), dtype=float)) * du
        c = u * u - 2.0
        x = c.copy()
        for _ in range(n - 1):
            x = x * x + c
        sign = np.sign(x)
        sign[sign == 0] = 1.0
        if prev_sign is not None:
            if sign[0] != prev_sign:
                brackets.append((prev_u, float(u[0])))
        flips = np.nonzero(sign[1:] != sign[:-1])[0]
        for i in flips:
            brackets.append((float(u[i]), float(u[i + 1])))
        prev_u, prev_sign = float(u[-1]), sign[-1]
    return brackets


def _refine(n: int, u_lo: float, u_hi: float):
    """Bisect the bracket in the u coordinate at working precision."""
    lo, hi = mp.mpf(u_lo), mp.mpf(u_hi)
    f_lo = _orbit_value(lo * lo - 2, n)
    if f_lo == 0:
        return lo * lo - 2
    if _orbit_value(hi * hi - 2, n) == 0:
        return hi * hi - 2
    for _ in range(mp.prec + 20):
        mid = (lo + hi) / 2
        f_mid = _orbit_value(mid * mid - 2, n)
        if f_mid == 0:
            return mid * mid - 2
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    mid = (lo + hi) / 2
    return mid * mid - 2


def _minimal_period(c, n: int, tol) -> int:
    x = c
    for k in range(1, n):
        if abs(x) < tol:
            return k
        x = x * x + c
    return n


def _itinerary(c, n: int, tol) -> str:
    """Binary word of the critical value; hit symbol by the one-sided limit."""
    symbols = []
    x = c
    for k in range(1, n):
        if abs(x) < tol:
            raise AssertionError("orbit hit the critical point early")
        symbols.append("1" if x < 0 else "0")
        x = x * x + c
    if abs(x) > tol:
        raise AssertionError("orbit did not close up at the requested period")
    return center_word_from_prefix("".join(symbols))


@lru_cache(maxsize=None)
def real_centers(n: int, precision_bits: int = 256) -> tuple[RealCenter, ...]:
    """All real superattracting parameters of exact minimal period n <= 14."""
    if not 1 <= n <= 14:
        raise ValueError("oracle supports periods 1 to 14")
    if n == 1:
        return (RealCenter(mp.mpf(0), 1, "0"),)
    du = 2.5e-7 if n >= 12 else 1e-6
    with mp.workprec(precision_bits):
        tol = mp.mpf(2) ** (-precision_bits // 2)
        roots = []
        for pass_du in (du, du / 2):
            found = []
            for u_lo, u_hi in _grid_scan(n, pass_du):
                c = _refine(n, u_lo, u_hi)
                if _minimal_period(c, n, tol) == n:
                    found.append(c)
            found.sort()
            deduped = []
            for c in found:
                if not deduped or abs(c - deduped[-1]) > mp.mpf(1e-20):
                    deduped.append(c)
            roots.append(deduped)
        coarse, fine = roots
        if len(coarse) != len(fine) or any(
            abs(a - b) > mp.mpf(1e-30) for a, b in zip(coarse, fine)
        ):
            raise PrecisionExhausted(f"period-{n} scan unstable under refinement")
        return tuple(RealCenter(c, n, _itinerary(c, n, tol)) for c in fine)


def centers_jsonl(n: int) -> str:
    """Centers as JSON lines for test fixtures."""
    import json

    lines = []
    for center in real_centers(n):
        lines.append(
            json.dumps(
                {
                    "c": mp.nstr(center.c, 40),
                    "period": center.period,
                    "itinerary": center.itinerary,
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Naive multicycle enumeration
# ---------------------------------------------------------------------------


def _simple_cycles_naive(adjacency: Mapping, nmax: int) -> list[tuple[frozenset, int]]:
    """All simple cycles of length <= nmax by plain DFS from each start vertex.

    A cycle is kept only when its start is its smallest vertex, so each
    cyclic class appears once.  Parallel edges contribute multiplicity.
    """
    order = {v: i for i, v in enumerate(sorted(adjacency, key=repr))}
    cycles: dict[tuple[frozenset, int], int] = {}

    def walk(start, current, visited: list, length: int):
        for target in adjacency.get(current, ()):
            if target == start:
                key = (frozenset(visited), length + 1)
                cycles[key] = cycles.get(key, 0) + 1
            elif target not in visited and order[target] > order[start]:
                if length + 1 < nmax:
                    visited.append(target)
                    walk(start, target, visited, length + 1)
                    visited.pop()

    for start in adjacency:
        walk(start, start, [start], 0)
    out = []
    for (support, length), count in cycles.items():
        out.extend([(support, length)] * count)
    return out


def brute_force_multicycles(
    adjacency: Mapping, nmax: int, cycle_cap: int = 100000
) -> list[int]:
    """Coefficients of the multicycle sum of (-1)^components * t^length.

    ``adjacency`` maps each vertex to an iterable of edge targets (repeats
    allowed for parallel edges).  The empty multicycle contributes the
    constant term 1.
    """
    if nmax > 10:
        raise ValueError("naive enumeration is limited to nmax <= 10")
    cycles = sorted(_simple_cycles_naive(adjacency, nmax), key=lambda c: c[1])
    if len(cycles) > cycle_cap:
        raise ResourceWarning(f"cycle count {len(cycles)} exceeds cap {cycle_cap}")
    coeffs = [0] * (nmax + 1)
    coeffs[0] = 1

    def extend(first: int, used: frozenset, length: int, components: int):
        for j in range(first, len(cycles)):
            support, cyc_len = cycles[j]
            if length + cyc_len > nmax:
                break
            if used & support:
                continue
            coeffs[length + cyc_len] += (-1) ** (components + 1)
            extend(j + 1, used | support, length + cyc_len, components + 1)

    extend(0, frozenset(), 0, 0)
    return coeffs
