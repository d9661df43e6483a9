"""Exact rational angles under the doubling map.

Angles are reduced rationals mod 1 with arbitrary-precision arithmetic; no
floating point enters any decision here.  The module provides the doubling
orbit, the two-arc critical partition, the rotation cycles bounding each
limb, and the translation from an angle to the symbolic itinerary of the
corresponding vein parameter.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .words import FullWord, SimplifiedWord, simplified_from_full


class OnPartitionBoundary(Exception):
    """An orbit point landed exactly on a rotation-cycle angle."""


class NotOnVein(Exception):
    """The angle does not produce a valid principal-vein itinerary."""


class Angle:
    """Rational point of the circle R/Z, always stored reduced in [0, 1)."""

    __slots__ = ("value",)

    def __init__(self, numerator, denominator: int | None = None):
        if denominator is None:
            frac = Fraction(numerator)
        else:
            frac = Fraction(numerator, denominator)
        self.value = frac - math.floor(frac)

    @classmethod
    def parse(cls, text: str) -> "Angle":
        num, _, den = text.strip().partition("/")
        return cls(int(num), int(den) if den else 1)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def double(self) -> "Angle":
        return Angle(2 * self.value)

    def half(self) -> "Angle":
        return Angle(self.value / 2)

    def antipodal_half(self) -> "Angle":
        return Angle((self.value + 1) / 2)

    def __eq__(self, other) -> bool:
        return isinstance(other, Angle) and self.value == other.value

    def __lt__(self, other: "Angle") -> bool:
        return self.value < other.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self) -> str:
        return f"Angle({self.numerator}, {self.denominator})"


def classify(theta: Angle) -> tuple[int, int]:
    """Minimal (preperiod, period) of theta under doubling."""
    seen: dict[Fraction, int] = {}
    current = theta
    step = 0
    while current.value not in seen:
        seen[current.value] = step
        current = current.double()
        step += 1
    first = seen[current.value]
    return first, step - first


def orbit(theta: Angle, n: int) -> list[Angle]:
    """x_1 = theta, x_{i+1} = 2 x_i mod 1; n terms."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = [theta]
    for _ in range(n - 1):
        out.append(out[-1].double())
    return out


def arc_contains(start: Fraction, length: Fraction, x: Fraction, open_arc: bool) -> bool:
    """Membership of x in the circular arc [start, start+length), or its interior."""
    pos = (x - start) % 1
    if open_arc:
        return 0 < pos < length
    return pos < length


class AnglePartition:
    """The two half-open arcs [theta/2, (theta+1)/2) and [(theta+1)/2, theta/2)."""

    def __init__(self, theta: Angle):
        self.theta = theta
        self.low = theta.half().value
        self.high = theta.antipodal_half().value

    def is_boundary(self, x: Angle) -> bool:
        return x.value == self.low or x.value == self.high

    def side(self, x: Angle) -> int:
        """0 for the arc starting at theta/2, 1 for the other; boundaries go by half-open rule."""
        return 0 if arc_contains(self.low, (self.high - self.low) % 1, x.value, False) else 1

    def interior_side(self, x: Angle) -> int | None:
        """Like side() but None on the two boundary points."""
        if self.is_boundary(x):
            return None
        return self.side(x)


class RotationCycle:
    """The period-q doubling cycle with combinatorial rotation number p/q."""

    def __init__(self, p: int, q: int, angles: list[Angle]):
        self.p = p
        self.q = q
        self.angles = sorted(angles)

    def characteristic_arc(self) -> tuple[Angle, Angle]:
        """Endpoints of the shortest complementary arc; it bounds the limb."""
        pairs = []
        for i, a in enumerate(self.angles):
            b = self.angles[(i + 1) % self.q]
            length = (b.value - a.value) % 1
            pairs.append((length, a, b))
        _, a, b = min(pairs, key=lambda t: t[0])
        return a, b

    def __repr__(self) -> str:
        return f"RotationCycle({self.p}/{self.q}: {[str(a) for a in self.angles]})"


def rotation_cycle(p: int, q: int) -> RotationCycle:
    """Brute-force search for the unique doubling cycle of rotation number p/q."""
    if not (0 < p < q) or math.gcd(p, q) != 1:
        raise ValueError("need 0 < p < q with gcd(p, q) = 1")
    modulus = (1 << q) - 1
    seen: set[int] = set()
    for a in range(1, modulus):
        if a in seen:
            continue
        cycle = []
        x = a
        while x not in cycle:
            cycle.append(x)
            x = (2 * x) % modulus
        if x != a or len(cycle) != q:
            seen.update(cycle)
            continue
        seen.update(cycle)
        ordered = sorted(cycle)
        shifts = {ordered.index((2 * v) % modulus) - ordered.index(v) for v in cycle}
        shifts = {s % q for s in shifts}
        if shifts == {p}:
            return RotationCycle(p, q, [Angle(v, modulus) for v in cycle])
    raise ValueError(f"no rotation cycle found for {p}/{q}")


def _sector_index(boundaries: list[Fraction], x: Fraction) -> int:
    """Index i such that x lies in [boundaries[i], boundaries[i+1]) circularly."""
    for i, start in enumerate(boundaries):
        end = boundaries[(i + 1) % len(boundaries)]
        if arc_contains(start, (end - start) % 1, x, False):
            return i
    raise AssertionError("sectors cover the circle")


def angle_to_itineraries(
    theta: Angle, p: int, q: int, check_realizable: bool = True
) -> tuple[FullWord, SimplifiedWord]:
    """Full and simplified itineraries of the vein parameter with external angle theta.

    The circle is cut by the q rotation-cycle angles of the p/q limb plus the
    two critical rays.  The sector containing angle 0 splits into the symbol-0
    sub-arc (containing 0) and the symbol-1 sub-arc; the remaining sectors are
    labeled 2..q starting from the one containing theta, following doubling.
    Orbit points landing exactly on a critical ray take the symbol given by the
    one-sided limit along the orbit.
    """
    pre, per = classify(theta)
    if pre != 0:
        raise ValueError("theta must be strictly periodic under doubling")
    cycle = rotation_cycle(p, q)
    points = orbit(theta, per)
    cycle_values = {a.value for a in cycle.angles}
    for x in points:
        if x.value in cycle_values:
            raise OnPartitionBoundary(f"orbit point {x} is a rotation-cycle angle")
    lo, hi = cycle.characteristic_arc()
    if not arc_contains(lo.value, (hi.value - lo.value) % 1, theta.value, True):
        raise NotOnVein(f"{theta} is not strictly inside the {p}/{q} characteristic arc")

    boundaries = sorted(a.value for a in cycle.angles)
    partition = AnglePartition(theta)

    # label the non-critical sectors 2..q by following doubling from theta's sector
    zero_sector = _sector_index(boundaries, Fraction(0))
    labels: dict[int, int] = {}
    sector = _sector_index(boundaries, theta.value)
    for label in range(2, q + 1):
        if sector == zero_sector:
            raise NotOnVein(f"sector chain of {theta} re-enters the critical sector early")
        labels[sector] = label
        # doubling sends this sector onto the next one; follow its left endpoint
        sector = _sector_index(boundaries, (2 * boundaries[sector]) % 1)

    symbols: list[int] = []
    sign = -1  # orbit enters the critical value from below in the linear model
    hit_index = None
    for x in points:
        idx = _sector_index(boundaries, x.value)
        if idx != zero_sector:
            symbols.append(labels[idx])
            if labels[idx] == 2:
                sign = -sign  # F_2 has negative slope
            continue
        side = partition.interior_side(x)
        if side is None:
            # landed on a critical ray: one-sided limit along the orbit
            symbol = 1 if sign > 0 else 0
            hit_index = len(symbols)
        else:
            # symbol 0 is the sub-arc containing angle 0
            symbol = 0 if side == 1 else 1
        symbols.append(symbol)
        if symbol == 1:
            sign = -sign  # F_1 has negative slope; F_0 positive

    text = "".join(_digit(s) for s in symbols)
    if hit_index is not None and _is_reducible(text):
        # the one-sided word closed up early: label by the flipped twin,
        # matching the convention for superattracting center words
        flipped = "1" if symbols[hit_index] == 0 else "0"
        text = text[:hit_index] + flipped + text[hit_index + 1 :]
    full = FullWord(text, q)
    full.validate_grammar()
    simplified = simplified_from_full(full)
    if check_realizable:
        from . import words as words_mod

        binary = words_mod.recode_inverse(simplified)
        if not words_mod.is_realizable_combinatorial(binary.text):
            raise NotOnVein(f"itinerary {simplified} of {theta} is not realizable")
    return full, simplified


def _digit(symbol: int) -> str:
    if symbol > 35:
        raise ValueError("symbol alphabet limited to base 36 digits")
    return "0123456789abcdefghijklmnopqrstuvwxyz"[symbol]


def _is_reducible(text: str) -> bool:
    n = len(text)
    return any(n % d == 0 and text == text[:d] * (n // d) for d in range(1, n))


def _sector_arcs(p: int, q: int) -> tuple[dict[int, tuple[Fraction, Fraction]], int]:
    """Sector (start, length) arcs keyed by label; symbols 0 and 1 share label 0."""
    cycle = rotation_cycle(p, q)
    boundaries = sorted(a.value for a in cycle.angles)
    zero_sector = _sector_index(boundaries, Fraction(0))
    lo, hi = cycle.characteristic_arc()
    theta_sector = _sector_index(boundaries, lo.value + (hi.value - lo.value) / 2)
    labels: dict[int, int] = {}
    sector = theta_sector
    for label in range(2, q + 1):
        labels[sector] = label
        sector = _sector_index(boundaries, (2 * boundaries[sector]) % 1)
    arcs: dict[int, tuple[Fraction, Fraction]] = {}
    for idx, start in enumerate(boundaries):
        end = boundaries[(idx + 1) % q]
        length = (end - start) % 1
        arcs[0 if idx == zero_sector else labels[idx]] = (start, length)
    return arcs, zero_sector


def angle_for_itinerary(word, p: int, q: int) -> Angle:
    """Smallest strictly periodic angle whose full itinerary equals the word.

    The itinerary pins each orbit point to a sector arc; intersecting the
    pulled-back arcs leaves an interval containing finitely many candidate
    angles of the right period, which are then verified directly.
    """
    from .words import FullWord

    if not isinstance(word, FullWord):
        raise TypeError("expected a FullWord")
    text = word.text
    if text == _digit(2) + "".join(_digit(s) for s in range(3, q + 1)) + "0":
        # the alpha component itself: its root rays are the cycle angles
        return min(rotation_cycle(p, q).angles)
    arcs, _ = _sector_arcs(p, q)
    period = len(text)

    # candidates start as the sector of the first symbol; each later symbol
    # intersects with a preimage of its sector under doubling
    first = arcs[0] if text[0] in "01" else arcs[int(text[0], 36)]
    candidates: list[tuple[Fraction, Fraction]] = [first]
    for i in range(1, period):
        target = arcs[0] if text[i] in "01" else arcs[int(text[i], 36)]
        scale = 1 << i
        refined: list[tuple[Fraction, Fraction]] = []
        t_start, t_len = target
        for s, length in candidates:
            # preimage arcs of the target have starts (t_start + k) / scale
            k_lo = math.floor((s - t_start / scale) * scale) - 1
            k_hi = math.ceil((s + length - t_start / scale) * scale) + 1
            for k in range(k_lo, k_hi + 1):
                p_start = (t_start + k) / scale
                lo = max(s, p_start)
                hi = min(s + length, p_start + t_len / scale)
                if lo < hi:
                    refined.append((lo, hi - lo))
        candidates = refined
        if not candidates:
            raise NotOnVein(f"no angle realizes itinerary {word}")

    modulus = (1 << period) - 1
    found = []
    for s, length in candidates:
        a_lo = math.ceil(s * modulus)
        a_hi = math.floor((s + length) * modulus)
        for a in range(a_lo, a_hi + 1):
            theta = Angle(a % modulus, modulus)
            try:
                full, _ = angle_to_itineraries(theta, p, q, check_realizable=False)
            except (OnPartitionBoundary, NotOnVein):
                continue
            if full.text == text:
                found.append(theta)
    if not found:
        raise NotOnVein(f"no angle realizes itinerary {word}")
    return min(found)
