"""Exact integer polynomial arithmetic, characteristic polynomials and roots.

Polynomials are dense integer coefficient vectors in ascending degree order.
Everything here is exact except :func:`roots`, which refines floating-point
estimates and verifies residuals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class NonConvergence(Exception):
    """Root refinement did not reach the requested residual."""


class NonDivisible(Exception):
    """Exact polynomial division left a nonzero remainder."""


class IntPolynomial:
    """Integer-coefficient polynomial, coefficients ascending by degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        for c in cs:
            if not isinstance(c, int):
                raise TypeError(f"integer coefficient expected, got {type(c).__name__}")
        self.coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def from_string(cls, text: str) -> "IntPolynomial":
        """Parse the sparse ``c*z^k`` ascending text form emitted by str()."""
        text = text.replace("-", "+-").replace(" ", "")
        terms = [t for t in text.split("+") if t]
        coeffs: dict[int, int] = {}
        for term in terms:
            if "z" in term:
                head, _, tail = term.partition("z")
                k = int(tail.lstrip("^")) if tail else 1
                head = head.rstrip("*")
                c = int(head) if head not in ("", "-") else (-1 if head == "-" else 1)
            else:
                k, c = 0, int(term)
            coeffs[k] = coeffs.get(k, 0) + c
        out = [0] * (max(coeffs) + 1 if coeffs else 0)
        for k, c in coeffs.items():
            out[k] = c
        return cls(out)

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial([other])
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k <= self.degree else 0

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "IntPolynomial":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(
            [self[k] + other[k] for k in range(n)]
        )

    __radd__ = __add__

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "IntPolynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return _coerce(other) - self

    def __mul__(self, other) -> "IntPolynomial":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        result = IntPolynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod_exact(self, other: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Polynomial division over Q, returned only when both results are integral."""
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        d, lead = other.degree, other.coeffs[-1]
        if abs(lead) == 1:
            # synthetic division stays in the integers for a +-1 leading coefficient
            rem = list(self.coeffs)
            quo = [0] * max(1, len(rem) - d)
            for k in range(len(rem) - 1 - d, -1, -1):
                q = rem[k + d] * lead
                quo[k] = q
                if q:
                    for j, b in enumerate(other.coeffs):
                        rem[k + j] -= q * b
            return IntPolynomial(quo), IntPolynomial(rem[:d] if d else [])
        rem = [Fraction(c) for c in self.coeffs]
        quo = [Fraction(0)] * max(1, len(rem) - len(other.coeffs) + 1)
        for k in range(len(rem) - 1 - d, -1, -1):
            q = rem[k + d] / lead
            quo[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        for seq in (quo, rem):
            for c in seq:
                if c.denominator != 1:
                    raise NonDivisible("result is not an integer polynomial")
        return IntPolynomial(int(c) for c in quo), IntPolynomial(int(c) for c in rem)

    def __floordiv__(self, other) -> "IntPolynomial":
        q, _ = self.divmod_exact(_coerce(other))
        return q

    def divides(self, other: "IntPolynomial") -> bool:
        """True when self exactly divides other over the integers."""
        try:
            _, r = other.divmod_exact(self)
        except NonDivisible:
            return False
        return r.is_zero()

    def exact_div(self, other) -> "IntPolynomial":
        q, r = self.divmod_exact(_coerce(other))
        if not r.is_zero():
            raise NonDivisible("nonzero remainder in exact division")
        return q

    # -- transforms --------------------------------------------------------

    def monic_normalized(self) -> "IntPolynomial":
        """Scale by -1 if needed so the leading coefficient is positive.

        Raises when the leading coefficient is not +-1 (all polynomials in
        this project are characteristic-polynomial-like).
        """
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        if abs(lead) != 1:
            raise ValueError(f"cannot normalize leading coefficient {lead} to 1")
        return self if lead == 1 else -self

    def reciprocal(self) -> "IntPolynomial":
        """Coefficient reversal: z^deg * P(1/z)."""
        return IntPolynomial(reversed(self.coeffs)) if self.coeffs else self

    def shift_degree(self, k: int) -> "IntPolynomial":
        """Multiply by z^k."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def strip_power_of_z(self) -> tuple["IntPolynomial", int]:
        """Factor out the largest z^d, returning (quotient, d)."""
        if self.is_zero():
            return self, 0
        d = 0
        while self.coeffs[d] == 0:
            d += 1
        return IntPolynomial(self.coeffs[d:]), d

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def truncated(self, nmax: int) -> "IntPolynomial":
        return IntPolynomial(self.coeffs[: nmax + 1])

    def compose_power(self, k: int) -> "IntPolynomial":
        """Substitute z -> z^k."""
        out = [0] * (self.degree * k + 1 if self.coeffs else 0)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return IntPolynomial(out)

    # -- evaluation --------------------------------------------------------

    def __call__(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    # -- I/O -----------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            elif k == 1:
                body = "z" if mag == 1 else f"{mag}*z"
            else:
                body = f"z^{k}" if mag == 1 else f"{mag}*z^{k}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)!r})"


def _coerce(value) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int):
        return IntPolynomial([value])
    raise TypeError(f"cannot coerce {type(value).__name__} to IntPolynomial")


ONE = IntPolynomial([1])
Z = IntPolynomial([0, 1])


# ---------------------------------------------------------------------------
# Exact determinants and characteristic polynomials
# ---------------------------------------------------------------------------


def det_exact(matrix: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [[int(x) for x in row] for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("square matrix required")
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


_PRIMES: list[int] = []


def _primes(count: int) -> list[int]:
    # 30-bit primes keep int64 products safely below 2**63.
    candidate = _PRIMES[-1] - 2 if _PRIMES else (1 << 30) - 1
    while len(_PRIMES) < count:
        while True:
            if all(candidate % p for p in range(3, int(candidate**0.5) + 1, 2)):
                _PRIMES.append(candidate)
                candidate -= 2
                break
            candidate -= 2
    return _PRIMES[:count]


def _charpoly_mod(matrix: np.ndarray, p: int) -> np.ndarray:
    """det(xI - M) mod p via Hessenberg reduction; ascending coefficients."""
    h = np.mod(matrix.astype(np.int64), p)
    n = h.shape[0]
    for j in range(n - 2):
        pivot_rows = np.nonzero(h[j + 1 :, j])[0]
        if pivot_rows.size == 0:
            continue
        piv = pivot_rows[0] + j + 1
        if piv != j + 1:
            h[[j + 1, piv]] = h[[piv, j + 1]]
            h[:, [j + 1, piv]] = h[:, [piv, j + 1]]
        inv = pow(int(h[j + 1, j]), p - 2, p)
        for i in range(j + 2, n):
            if h[i, j]:
                factor = (int(h[i, j]) * inv) % p
                h[i] = (h[i] - factor * h[j + 1]) % p
                h[:, j + 1] = (h[:, j + 1] + factor * h[:, i]) % p
    # char polys of leading principal Hessenberg blocks, ascending degree
    polys = [np.array([1], dtype=np.int64)]
    subdiag_prod = [np.int64(1)] * (n + 1)
    for k in range(1, n + 1):
        a_kk = int(h[k - 1, k - 1])
        prev = polys[k - 1]
        poly = np.zeros(k + 1, dtype=np.int64)
        poly[1:] = prev
        poly[:-1] = (poly[:-1] - a_kk * prev) % p
        poly %= p
        prod = 1
        for i in range(1, k):
            prod = (prod * int(h[k - i, k - i - 1])) % p
            coeff = (int(h[k - 1 - i, k - 1]) * prod) % p
            if coeff:
                poly[: k - i] = (poly[: k - i] - coeff * polys[k - 1 - i]) % p
        polys.append(poly % p)
    return polys[n]


def charpoly(matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """Exact det(xI - M) for an integer matrix.

    Computed modulo enough 30-bit primes to cover a Hadamard-style bound on
    the coefficients, then lifted by the Chinese remainder theorem.
    """
    m = np.asarray(matrix, dtype=object)
    if m.size == 0:
        return ONE
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("square matrix required")
    # |coeff_k| <= C(n,k) * prod of the k largest row norms <= 2^n * prod(norms)
    log_bound = n * math.log(2.0)
    for row in m:
        norm_sq = sum(int(x) * int(x) for x in row)
        log_bound += 0.5 * math.log(max(norm_sq, 1))
    bits = int(log_bound / math.log(2.0)) + 2
    primes = _primes(bits // 29 + 1)
    m64 = np.array([[int(x) for x in row] for row in m], dtype=np.int64)
    residues = [_charpoly_mod(m64, p) for p in primes]
    modulus = 1
    combined = [0] * (n + 1)
    for p, res in zip(primes, residues):
        if modulus == 1:
            combined = [int(r) % p for r in res]
            modulus = p
            continue
        inv = pow(modulus % p, p - 2, p)
        for k in range(n + 1):
            delta = ((int(res[k]) - combined[k]) * inv) % p
            combined[k] += modulus * delta
        modulus *= p
    half = modulus // 2
    return IntPolynomial(c - modulus if c > half else c for c in combined)


def det_one_minus_tA(matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """det(I - tA) as a polynomial in t, via the reversed characteristic polynomial."""
    chi = charpoly(matrix)
    return chi.reciprocal()


# ---------------------------------------------------------------------------
# Cyclotomic polynomials
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, by exact division of z^n - 1."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = IntPolynomial.monomial(n) - ONE
    for d in range(1, n):
        if n % d == 0:
            poly = poly.exact_div(cyclotomic(d))
    return poly


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m = n, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            result -= result // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        result -= result // m
    return result


def strip_cyclotomic(poly: IntPolynomial, nmax: int) -> IntPolynomial:
    """Remove all z^d and cyclotomic factors Phi_n with n <= nmax.

    The result is normalized to a positive leading coefficient.  Orders whose
    totient exceeds the remaining degree are skipped without building them.
    """
    if poly.is_zero():
        return poly
    reduced, _ = poly.strip_power_of_z()
    changed = True
    while changed and reduced.degree > 0:
        changed = False
        for n in range(1, nmax + 1):
            if euler_phi(n) > reduced.degree:
                continue
            phi = cyclotomic(n)
            while phi.divides(reduced):
                reduced = reduced.exact_div(phi)
                changed = True
    if reduced.coeffs[-1] < 0:
        reduced = -reduced
    return reduced


def is_cyclotomic_product(poly: IntPolynomial) -> bool:
    """True when poly is +-z^d times a product of cyclotomic polynomials."""
    if poly.is_zero():
        return False
    reduced, _ = poly.strip_power_of_z()
    limit = _cyclotomic_order_limit(reduced.degree)
    reduced = strip_cyclotomic(reduced, limit)
    return reduced.degree == 0


def _cyclotomic_order_limit(degree: int) -> int:
    # phi(n) >= sqrt(n/2), so phi(n) <= degree forces n <= 2*(degree+1)^2
    return 2 * (degree + 1) * (degree + 1)


def squarefree_part(poly: IntPolynomial) -> IntPolynomial:
    """Primitive squarefree part poly / gcd(poly, poly'), over the rationals."""
    reduced, _ = poly.strip_power_of_z()
    if reduced.degree <= 1:
        return reduced
    g = _poly_gcd(reduced, reduced.derivative())
    quo, _ = _frac_divmod(reduced, g)
    return _primitive(quo)


def _frac_divmod(a: IntPolynomial, b: IntPolynomial):
    rem = [Fraction(c) for c in a.coeffs]
    d, lead = b.degree, Fraction(b.coeffs[-1])
    quo = [Fraction(0)] * max(1, len(rem) - d)
    for k in range(len(rem) - 1 - d, -1, -1):
        q = rem[k + d] / lead
        quo[k] = q
        if q:
            for j, c in enumerate(b.coeffs):
                rem[k + j] -= q * c
    return quo, rem[:d]


def _primitive(frac_coeffs) -> IntPolynomial:
    denom = 1
    for c in frac_coeffs:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [int(c * denom) for c in frac_coeffs]
    content = 0
    for c in ints:
        content = math.gcd(content, abs(c))
    content = content or 1
    out = IntPolynomial(c // content for c in ints)
    return -out if out.coeffs and out.coeffs[-1] < 0 else out


def _poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]
    while any(fb):
        while fb and not fb[-1]:
            fb.pop()
        if not fb:
            break
        _, rem = _frac_divmod(_primitive(fa), _primitive(fb))
        fa, fb = fb, rem
    return _primitive(fa)


# ---------------------------------------------------------------------------
# Root extraction
# ---------------------------------------------------------------------------


class RootSet:
    """Complex roots with multiplicities and the tolerance used to verify them."""

    def __init__(self, roots: list[tuple[complex, int]], tol: float):
        self.roots = roots
        self.tol = tol

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return sum(mult for _, mult in self.roots)

    def points(self) -> list[complex]:
        """All roots repeated by multiplicity."""
        return [z for z, mult in self.roots for _ in range(mult)]

    def as_triples(self) -> list[tuple[float, float, int]]:
        return [(z.real, z.imag, mult) for z, mult in self.roots]

    def __repr__(self) -> str:
        return f"RootSet({self.roots!r}, tol={self.tol})"


def roots(poly: IntPolynomial, tol: float = 1e-12) -> RootSet:
    """All complex roots by Aberth refinement of companion-matrix estimates."""
    if poly.is_zero():
        raise ValueError("zero polynomial has no root set")
    core, zero_mult = poly.strip_power_of_z()
    out: list[tuple[complex, int]] = []
    if zero_mult:
        out.append((0j, zero_mult))
    if core.degree >= 1:
        coeffs = np.array(core.coeffs[::-1], dtype=float)
        estimates = np.roots(coeffs)
        refined = _aberth(core, estimates, tol)
        out.extend(_cluster(refined))
    out.sort(key=lambda item: (item[0].real, item[0].imag))
    return RootSet(out, tol)


def _aberth(poly: IntPolynomial, z: np.ndarray, tol: float, max_iter: int = 60) -> np.ndarray:
    coeffs = np.array(poly.coeffs[::-1], dtype=complex)
    dcoeffs = np.array(poly.derivative().coeffs[::-1], dtype=complex)
    scale = max(abs(c) for c in poly.coeffs)
    z = z.astype(complex)
    for _ in range(max_iter):
        p = np.polyval(coeffs, z)
        bound = tol * scale * np.maximum(1.0, np.abs(z)) ** poly.degree
        if np.all(np.abs(p) <= bound):
            return z
        dp = np.polyval(dcoeffs, z)
        dp = np.where(dp == 0, 1e-300, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repulse = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * repulse
        denom = np.where(np.abs(denom) < 1e-14, 1.0, denom)
        step = newton / denom
        # clustered (multiple) roots cannot beat the d-th-root noise floor;
        # stop moving points that are already residual-small
        step = np.where(np.abs(p) <= bound * 1e3, 0.0, step)
        z = z - step
        if np.all(np.abs(step) < 1e-16 * np.maximum(1.0, np.abs(z))):
            break
    p = np.polyval(coeffs, z)
    mult_slack = np.maximum(1.0, np.abs(z)) ** poly.degree * scale
    if np.any(np.abs(p) > np.sqrt(tol) * mult_slack):
        raise NonConvergence(f"residual {np.max(np.abs(p)):.3e} above budget")
    return z


def _cluster(values: np.ndarray, radius: float = 1e-6) -> list[tuple[complex, int]]:
    remaining = list(values)
    clusters: list[tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop()
        members = [seed]
        changed = True
        while changed:
            changed = False
            center = sum(members) / len(members)
            keep = []
            for w in remaining:
                if abs(w - center) <= radius * max(1.0, abs(center)):
                    members.append(w)
                    changed = True
                else:
                    keep.append(w)
            remaining = keep
        center = sum(members) / len(members)
        if abs(center.imag) < 1e-9 * max(1.0, abs(center.real)):
            center = complex(center.real, 0.0)
        clusters.append((center, len(members)))
    return clusters


def off_circle_roots(poly: IntPolynomial, band: float = 1e-6, tol: float = 1e-12) -> RootSet:
    """Roots with modulus outside [1 - band, 1 + band]; zero roots kept."""
    full = roots(poly, tol)
    kept = [(z, m) for z, m in full if not (1.0 - band <= abs(z) <= 1.0 + band)]
    return RootSet(kept, tol)


def leading_real_root(poly: IntPolynomial, tol: float = 1e-12) -> float:
    """Largest real root >= 1, or 1.0 when none exists (zero-entropy case)."""
    best = 1.0
    for z, _ in roots(poly, tol):
        if abs(z.imag) < 1e-8 and z.real > best:
            best = z.real
    return best


def root_set_distance(
    a: Iterable[complex], b: Iterable[complex], with_circle: bool = True
) -> float:
    """Hausdorff distance between two finite sets, each unioned with the unit circle.

    With ``with_circle=False`` the plain Hausdorff distance of the finite sets
    is returned (infinite when exactly one is empty).
    """
    pa, pb = list(a), list(b)

    def to_set(z: complex, points: list[complex]) -> float:
        dist = min((abs(z - w) for w in points), default=math.inf)
        if with_circle:
            dist = min(dist, abs(abs(z) - 1.0))
        return dist

    if not pa and not pb:
        return 0.0
    d_ab = max((to_set(z, pb) for z in pa), default=0.0)
    d_ba = max((to_set(z, pa) for z in pb), default=0.0)
    return max(d_ab, d_ba)


# ---------------------------------------------------------------------------
# Vein tip growth rates
# ---------------------------------------------------------------------------


def tip_polynomial(q: int) -> IntPolynomial:
    """x^q - x^(q-1) - 2, whose largest root is the growth rate of the vein tip."""
    if q < 2:
        raise ValueError("q must be at least 2")
    return IntPolynomial.monomial(q) - IntPolynomial.monomial(q - 1) - IntPolynomial([2])


def tip_growth_rate(q: int) -> float:
    """Largest real root of the tip polynomial; exact integers returned exactly."""
    poly = tip_polynomial(q)
    for candidate in (2,):
        if poly(candidate) == 0:
            return float(candidate)
    lo, hi = Fraction(1), Fraction(2)
    assert poly(lo) < 0 < poly(hi)
    for _ in range(60):
        mid = (lo + hi) / 2
        if poly(mid) < 0:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def json_coeffs(poly: IntPolynomial) -> list[int]:
    return list(poly.coeffs)
