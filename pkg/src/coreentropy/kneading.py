"""Kneading polynomials for principal veins.

The affine model maps send x to a(z) x + b(z) with a, b polynomial in the
reciprocal growth variable; composing them along a simplified itinerary and
seeding with 1 + z yields the vein kneading polynomial, whose roots off the
unit circle are the Markov eigenvalues.  The module also covers the kneading
power series, Parry polynomials, the Milnor-Thurston polynomial of a real
word, and the tuning (renormalization) operator.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .polyalg import IntPolynomial, NonDivisible, ONE, leading_real_root
from .words import (
    BinaryWord,
    InfiniteWord,
    SimplifiedWord,
    ZeroEntropy,
    recode_inverse,
)


@dataclass(frozen=True)
class AffineModelMap:
    """x -> epsilon * z^degree * x + offset(z), one branch of the linear model."""

    symbol: int
    q: int
    epsilon: int
    degree: int
    offset: IntPolynomial

    def apply(self, value: IntPolynomial) -> IntPolynomial:
        scale = IntPolynomial.monomial(self.degree, self.epsilon)
        return scale * value + self.offset


def affine_model(symbol: int, q: int) -> AffineModelMap:
    """The branch map for one simplified symbol on the q-vein."""
    if q < 2:
        raise ValueError("q must be at least 2")
    if symbol == 0:
        return AffineModelMap(0, q, 1, 1, IntPolynomial([1, 1]))
    if symbol == 1:
        return AffineModelMap(1, q, -1, 1, IntPolynomial([1, 1]))
    if symbol == 2:
        offset = ONE + IntPolynomial.monomial(q - 1)
        return AffineModelMap(2, q, -1, q - 1, offset)
    raise ValueError("symbol must be 0, 1 or 2")


def finite_word_kneading_polynomial(w: SimplifiedWord | str, q: int) -> IntPolynomial:
    """Compose the branch maps along all but the last symbol, seeded with 1 + z."""
    text = w.text if isinstance(w, SimplifiedWord) else w
    value = IntPolynomial([1, 1])
    for ch in text[:-1]:
        value = affine_model(int(ch), q).apply(value)
    return value


def kneading_polynomial(w: SimplifiedWord, q: int) -> IntPolynomial:
    """Vein kneading polynomial of a critically periodic simplified itinerary."""
    if not w.text.startswith("2"):
        raise ValueError("critically periodic itineraries start with symbol 2")
    return finite_word_kneading_polynomial(w, q)


def full_degree(w: SimplifiedWord | str, q: int) -> int:
    """Sum of branch degrees over one period: the full itinerary period."""
    text = w.text if isinstance(w, SimplifiedWord) else w
    return sum(q - 1 if ch == "2" else 1 for ch in text)


@dataclass
class KneadingSeries:
    """Truncated kneading determinant, with its rational form when periodic."""

    coefficients: list[int]
    numerator: IntPolynomial | None = None
    denominator: IntPolynomial | None = None

    def truncation(self) -> int:
        return len(self.coefficients) - 1


def _series_symbols(w: SimplifiedWord | InfiniteWord) -> tuple[list[int], int | None]:
    """Symbol stream w_0 w_1 ... for the determinant, plus the period if any.

    A finite periodic itinerary s_1..s_p (the critical value's word) becomes
    the critical point's word: it starts with the ambiguous hit symbol s_p,
    which only enters through its branch degree 1.
    """
    if isinstance(w, SimplifiedWord):
        if w.text[-1] not in "01":
            raise ValueError("periodic itinerary must end with the hit symbol 0 or 1")
        rotated = w.text[-1] + w.text[:-1]
        return [int(c) for c in rotated], len(w.text)
    n = len(w.preperiod) + 2 * len(w.period)
    return [int(w.symbol(i)) for i in range(n)], None


def kneading_determinant(
    w: SimplifiedWord | InfiniteWord, q: int, truncation: int
) -> KneadingSeries:
    """Power series sum of eta_k * B_{w_k} * z^{d_k} up to the given degree.

    For a purely periodic word the exact rational form numerator/denominator
    is attached, with denominator 1 - eta_p z^{d_p}.
    """
    symbols, period = _series_symbols(w)
    coeffs = [0] * (truncation + 1)
    eta, d = 1, 0
    k = 0
    while d <= truncation:
        if period is not None:
            sym = symbols[k % period]
        elif k < len(symbols):
            sym = symbols[k]
        else:
            break
        model = affine_model(sym, q)
        for power, c in enumerate(model.offset.coeffs):
            if c and d + power <= truncation:
                coeffs[d + power] += eta * c
        d += model.degree
        eta *= model.epsilon
        k += 1
    series = KneadingSeries(coeffs)
    if period is not None:
        eta, d = 1, 0
        numerator = IntPolynomial()
        for sym in symbols:
            model = affine_model(sym, q)
            numerator = numerator + eta * model.offset.shift_degree(d)
            d += model.degree
            eta *= model.epsilon
        series.numerator = numerator
        series.denominator = ONE - IntPolynomial.monomial(d, eta)
    return series


def parry_polynomial(w: BinaryWord) -> IntPolynomial:
    """Compose f_0(x) = zx and f_1(x) = 2 - zx along the word, start 1, minus 1."""
    value = ONE
    z = IntPolynomial.monomial(1)
    for ch in w.text:
        value = z * value if ch == "0" else IntPolynomial([2]) - z * value
    return value - ONE


def mt_kneading_polynomial(w: BinaryWord) -> IntPolynomial:
    """Milnor-Thurston kneading polynomial: signed sum over one period.

    The coefficient of t^k is the product of branch signs along the first k
    symbols (+ for 0, - for 1); degree is the period minus one, and the full
    kneading determinant equals this divided by 1 - t^p.
    """
    coeffs = [1]
    sign = 1
    for ch in w.text[:-1]:
        sign = -sign if ch == "1" else sign
        coeffs.append(sign)
    return IntPolynomial(coeffs)


# ---------------------------------------------------------------------------
# Tuning
# ---------------------------------------------------------------------------


def orientation(outer: SimplifiedWord) -> int:
    """Cumulative branch orientation over all but the last symbol of the word."""
    eps = 1
    for ch in outer.text[:-1]:
        if ch in "12":
            eps = -eps
    return eps


def tune(outer: SimplifiedWord, q: int, inner: SimplifiedWord) -> SimplifiedWord:
    """Tuning of a real-vein itinerary into the component of the outer word.

    Each inner symbol contributes one block: the outer word with its final
    (hit) symbol replaced by the image of the inner symbol, 0 and {1, 2}
    mapping to the two sides according to the outer orientation.
    """
    if not outer.text.startswith("2") or outer.text[-1] not in "01":
        raise ValueError("outer word must be a critically periodic itinerary")
    eps = orientation(outer)
    if eps == 1:
        image = {"0": "0", "1": "1", "2": "1"}
    else:
        image = {"0": "1", "1": "0", "2": "0"}
    body = outer.text[:-1]
    return SimplifiedWord("".join(body + image[ch] for ch in inner.text))


def tuned_polynomial_identity(
    outer: SimplifiedWord, q: int, inner: SimplifiedWord
) -> tuple[IntPolynomial, IntPolynomial]:
    """Both sides of P_tuned = P_outer * P_inner(t^ell) / (1 + t^ell), exactly."""
    ell = full_degree(outer, q)
    lhs = kneading_polynomial(tune(outer, q, inner), q)
    p_outer = kneading_polynomial(outer, q)
    p_inner = finite_word_kneading_polynomial(inner, 2)
    numerator = p_outer * p_inner.compose_power(ell)
    rhs = numerator.exact_div(ONE + IntPolynomial.monomial(ell))
    return lhs, rhs


def tuned_entropy(outer: SimplifiedWord, q: int, inner: SimplifiedWord) -> float:
    """Core entropy of the tuned parameter: max of outer and inner/period."""
    import math

    ell = full_degree(outer, q)
    lam_outer = leading_real_root(kneading_polynomial(outer, q))
    lam_inner = leading_real_root(finite_word_kneading_polynomial(inner, 2))
    return max(math.log(lam_outer), math.log(lam_inner) / ell)


# ---------------------------------------------------------------------------
# High-precision leading root
# ---------------------------------------------------------------------------


def leading_root_mp(poly: IntPolynomial):
    """Largest real root >= 1 at the current mpmath precision, or mpf(1)."""
    seed = leading_real_root(poly)
    if seed <= 1 + 1e-9:
        return mp.mpf(1)
    x = mp.mpf(seed)
    deriv = poly.derivative()
    for _ in range(mp.prec):
        step = poly(x) / deriv(x)
        x = x - step
        if abs(step) < mp.mpf(2) ** (8 - mp.prec) * max(1, abs(x)):
            break
    return x


def growth_rate(w: SimplifiedWord, q: int) -> float:
    """Leading root of the kneading polynomial; 1.0 for zero-entropy words."""
    return leading_real_root(finite_word_kneading_polynomial(w, q))


def binary_growth_rate(w: BinaryWord) -> float:
    from .words import recode

    return growth_rate(recode(w), 2)
