"""Symbolic itineraries: binary kneading words, twisted order, recoding, tuning.

Finite words are stored as digit strings.  Eventually periodic infinite words
carry a (preperiod, period) pair of strings and print as "preperiod|period".

The twisted lexicographic order compares binary sequences with a sign that
flips after every 1.  A key fact used throughout: applying the prefix-XOR
transform turns the twisted order into the plain lexicographic order, which
makes rotation maximization cheap.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Literal

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class TailOfOnes(Exception):
    """Recoding is undefined on words ending in all 1s."""


class ZeroEntropy(Exception):
    """The word has growth rate 1; minimality machinery does not apply."""


class OracleUnavailable(Exception):
    """Realizability was requested in strict mode beyond the oracle period."""


class BinaryWord:
    """Finite word over {0, 1}."""

    def __init__(self, text: str):
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"invalid binary word {text!r}")
        self.text = text

    def __len__(self) -> int:
        return len(self.text)

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryWord) and self.text == other.text

    def __hash__(self):
        return hash(("bin", self.text))

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"BinaryWord({self.text!r})"


class SimplifiedWord:
    """Word over {0, 1, 2}: a first-return itinerary on a principal vein."""

    def __init__(self, text: str):
        if not text or any(ch not in "012" for ch in text):
            raise ValueError(f"invalid simplified word {text!r}")
        self.text = text

    def validate_grammar(self, cyclic: bool = True) -> None:
        """Successor rules 1 -> 2 and 2 -> {0, 1}, cyclically for periodic words."""
        pairs = zip(self.text, self.text[1:] + (self.text[0] if cyclic else ""))
        for a, b in pairs:
            if a == "1" and b != "2":
                raise ValueError(f"grammar violation 1->{b} in {self.text}")
            if a == "2" and b not in "01":
                raise ValueError(f"grammar violation 2->{b} in {self.text}")

    def __len__(self) -> int:
        return len(self.text)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplifiedWord) and self.text == other.text

    def __hash__(self):
        return hash(("simp", self.text))

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"SimplifiedWord({self.text!r})"


class FullWord:
    """Word over {0, ..., q} (base-36 digits): a full vein itinerary."""

    def __init__(self, text: str, q: int):
        if q < 2 or q > 35:
            raise ValueError("q out of supported range")
        self.q = q
        alphabet = DIGITS[: q + 1]
        if not text or any(ch not in alphabet for ch in text):
            raise ValueError(f"invalid symbols for q={q} in {text!r}")
        self.text = text

    def validate_grammar(self, cyclic: bool = True) -> None:
        """Successor rules k -> k+1 (2 <= k < q), q -> {0,1}, 1 -> 2."""
        pairs = list(zip(self.text, self.text[1:] + (self.text[0] if cyclic else "")))
        for a, b in pairs:
            av, bv = DIGITS.index(a), DIGITS.index(b)
            if av == 1 and bv != 2:
                raise ValueError(f"grammar violation 1->{bv} in {self.text}")
            if 2 <= av < self.q and bv != av + 1:
                raise ValueError(f"grammar violation {av}->{bv} in {self.text}")
            if av == self.q and bv not in (0, 1):
                raise ValueError(f"grammar violation {av}->{bv} in {self.text}")

    def __len__(self) -> int:
        return len(self.text)

    def __eq__(self, other) -> bool:
        return isinstance(other, FullWord) and (self.text, self.q) == (other.text, other.q)

    def __hash__(self):
        return hash(("full", self.text, self.q))

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"FullWord({self.text!r}, q={self.q})"


class InfiniteWord:
    """Eventually periodic sequence, stored as (preperiod, period) strings."""

    def __init__(self, preperiod: str, period: str):
        if not period:
            raise ValueError("period must be nonempty")
        self.preperiod = preperiod
        self.period = period

    @classmethod
    def parse(cls, text: str) -> "InfiniteWord":
        pre, _, per = text.partition("|")
        return cls(pre, per)

    def symbol(self, i: int) -> str:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> str:
        return "".join(self.symbol(i) for i in range(n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, InfiniteWord):
            return False
        n = max(len(self.preperiod), len(other.preperiod)) + _lcm(
            len(self.period), len(other.period)
        )
        return self.prefix(n) == other.prefix(n)

    def __str__(self) -> str:
        return f"{self.preperiod}|{self.period}"

    def __repr__(self) -> str:
        return f"InfiniteWord({self.preperiod!r}, {self.period!r})"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def periodic(word: str) -> InfiniteWord:
    return InfiniteWord("", word)


# ---------------------------------------------------------------------------
# Twisted lexicographic order
# ---------------------------------------------------------------------------


def _compare_streams(u, v, horizon: int) -> int:
    parity = 0
    for i in range(horizon):
        a, b = u(i), v(i)
        if a != b:
            diff = (1 if a == "1" else 0) - (1 if b == "1" else 0)
            return -diff if parity else diff
        if a == "1":
            parity ^= 1
    return 0


def twisted_lex_compare(u, v) -> int:
    """-1, 0 or +1 comparing binary words in the twisted lexicographic order.

    Accepts two finite BinaryWords of equal length or two InfiniteWords.
    """
    if isinstance(u, BinaryWord) and isinstance(v, BinaryWord):
        if len(u) != len(v):
            raise ValueError("finite comparison requires equal lengths")
        return _compare_streams(lambda i: u.text[i], lambda i: v.text[i], len(u))
    if isinstance(u, InfiniteWord) and isinstance(v, InfiniteWord):
        horizon = (
            max(len(u.preperiod), len(v.preperiod))
            + _lcm(len(u.period), len(v.period))
            + 1
        )
        return _compare_streams(u.symbol, v.symbol, horizon)
    raise TypeError("compare two BinaryWords or two InfiniteWords")


def _rotation_keys(word: str) -> list[str]:
    """Prefix-XOR keys whose plain lex order is the twisted order of rotations.

    Key i compares the infinite periodic word starting at rotation i.
    """
    n = len(word)
    tripled = word * 3
    bits = []
    parity = 0
    for ch in tripled:
        parity ^= ch == "1"
        bits.append("1" if parity else "0")
    g = "".join(bits)
    g_flip = "".join("1" if b == "0" else "0" for b in bits)
    keys = []
    for i in range(n):
        before = g[i - 1] if i else "0"
        keys.append((g if before == "0" else g_flip)[i : i + 2 * n])
    return keys


def twisted_max_rotation(word: str) -> str:
    keys = _rotation_keys(word)
    best = max(range(len(word)), key=keys.__getitem__)
    return word[best:] + word[:best]


def is_admissible(w: BinaryWord | str) -> bool:
    """True when every cyclic split w = ab satisfies ba <= ab in twisted order."""
    text = w.text if isinstance(w, BinaryWord) else w
    keys = _rotation_keys(text)
    return keys[0] == max(keys)


def minimal_period(word: str) -> int:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word == word[:d] * (n // d):
            return d
    return n


def is_irreducible(word: str) -> bool:
    return minimal_period(word) == len(word)


def cumulative_sign(word: str) -> int:
    """+1 when the word contains an even number of 1s, else -1."""
    return -1 if word.count("1") % 2 else 1


# ---------------------------------------------------------------------------
# Recoding between the binary and simplified alphabets
# ---------------------------------------------------------------------------


def _sigma_ones(k: int) -> str:
    # 1^{2m} -> (12)^m ; 1^{2m-1} -> 2(12)^{m-1}
    return "12" * (k // 2) if k % 2 == 0 else "2" + "12" * ((k - 1) // 2)


def _sigma_hat_ones(k: int) -> str:
    # trailing block: 1^{2m} -> (21)^m ; 1^{2m+1} -> 1(21)^m
    return "21" * (k // 2) if k % 2 == 0 else "1" + "21" * (k // 2)


def _blocks(text: str) -> list[str]:
    out = []
    for ch in text:
        if out and out[-1][0] == ch:
            out[-1] += ch
        else:
            out.append(ch)
    return out


def recode(w: BinaryWord | InfiniteWord) -> SimplifiedWord | InfiniteWord:
    """The substitution turning real kneading words into vein itineraries.

    Finite input must begin with "10"; a trailing block of 1s substitutes with
    the hatted rule so that recoding commutes with concatenation.
    """
    if isinstance(w, InfiniteWord):
        return _recode_infinite(w)
    text = w.text
    if set(text) == {"1"}:
        raise TailOfOnes("all-ones word cannot be recoded")
    if not text.startswith("10"):
        raise ValueError("finite recoding input must start with '10'")
    blocks = _blocks(text)
    out = []
    for idx, block in enumerate(blocks):
        if block[0] == "0":
            out.append(block)
        elif idx == len(blocks) - 1:
            out.append(_sigma_hat_ones(len(block)))
        else:
            out.append(_sigma_ones(len(block)))
    return SimplifiedWord("".join(out))


def _recode_infinite(w: InfiniteWord) -> InfiniteWord:
    if set(w.period) == {"1"}:
        raise TailOfOnes("word eventually all 1s cannot be recoded")
    pre_len, per_len = len(w.preperiod), len(w.period)
    window = pre_len + 2 * per_len
    unrolled = w.prefix(window + pre_len + 3 * per_len)
    out = []
    for block in _blocks(unrolled):
        out.append(block if block[0] == "0" else _sigma_ones(len(block)))
        if sum(map(len, out)) >= window + per_len:
            break
    emitted = "".join(out)[:window]
    pre, per = emitted[:pre_len], emitted[pre_len : pre_len + per_len]
    if emitted[pre_len + per_len : pre_len + 2 * per_len] != per:
        raise AssertionError("recoded word lost its periodicity")
    return InfiniteWord(pre, per)


def recode_inverse(w: SimplifiedWord | InfiniteWord) -> BinaryWord | InfiniteWord:
    """Replace every 2 with 1."""
    if isinstance(w, InfiniteWord):
        return InfiniteWord(w.preperiod.replace("2", "1"), w.period.replace("2", "1"))
    return BinaryWord(w.text.replace("2", "1"))


def q_recode(w: SimplifiedWord | InfiniteWord, q: int) -> FullWord | InfiniteWord:
    """Substitute every 2 with 23...q, producing a full vein itinerary."""
    if q < 2:
        raise ValueError("q must be at least 2")
    expansion = DIGITS[2 : q + 1]
    if isinstance(w, InfiniteWord):
        return InfiniteWord(
            w.preperiod.replace("2", expansion), w.period.replace("2", expansion)
        )
    return FullWord(w.text.replace("2", expansion), q)


def simplified_from_full(w: FullWord) -> SimplifiedWord:
    """Delete all symbols greater than 2."""
    kept = "".join(ch for ch in w.text if ch in "012")
    return SimplifiedWord(kept)


def substitution_D(w: BinaryWord) -> BinaryWord:
    """Period doubling: 1 -> 10 and 0 -> 11."""
    return BinaryWord("".join("10" if ch == "1" else "11" for ch in w.text))


# ---------------------------------------------------------------------------
# Center words: which binary words come from real superattracting parameters
# ---------------------------------------------------------------------------


def is_realizable_combinatorial(word: str) -> bool:
    """Center-word test: admissible, irreducible, and of positive cumulative
    sign -- or the flipped twin of a repeated word (a period doubling).

    This is the fast combinatorial filter; it is validated against the
    numeric center oracle in the test suite.
    """
    if not is_irreducible(word) or not is_admissible(word):
        return False
    if cumulative_sign(word) == 1:
        return True
    twin = word[:-1] + ("0" if word[-1] == "1" else "1")
    return minimal_period(twin) < len(twin)


def parity_completion(prefix: str) -> str:
    """Append the hit symbol that gives the word positive cumulative sign."""
    return prefix + ("1" if prefix.count("1") % 2 else "0")


def center_word_from_prefix(prefix: str) -> str:
    """The center word whose first symbols are the given orbit prefix.

    Uses the one-sided-limit hit symbol, flipping it when the direct
    completion would be a repeated word.
    """
    direct = parity_completion(prefix)
    if is_irreducible(direct):
        return direct
    return prefix + ("0" if direct[-1] == "1" else "1")


def is_realizable(
    w: BinaryWord, oracle_bound: int = 14, strict: bool = False
) -> bool:
    """True when w^infinity is the kneading word of a real superattracting map.

    Up to ``oracle_bound`` the decision defers to the numeric center oracle;
    longer words use the linear-model reproduction check plus the tuning
    decomposition.  ``strict=True`` refuses to go past the oracle instead.
    """
    n = len(w)
    if n <= oracle_bound:
        from . import oracles

        return w.text in {c.itinerary for c in oracles.real_centers(n)}
    if strict:
        raise OracleUnavailable(f"period {n} exceeds oracle bound {oracle_bound}")
    if not is_realizable_combinatorial(w.text):
        return False
    if pl_reproduces(w):
        return True
    return any(
        is_realizable(BinaryWord(u), oracle_bound) and is_realizable(BinaryWord(v), oracle_bound)
        for u, v in tuning_decompositions(w.text)
    )


# ---------------------------------------------------------------------------
# Tuning structure and minimality
# ---------------------------------------------------------------------------


def binary_orientation(word: str) -> int:
    """Orientation of the first-return branch: sign over all symbols but the last."""
    return cumulative_sign(word[:-1])


def tune_binary(outer: str, inner: str) -> str:
    """Binary-level tuning: blocks of outer with last symbol driven by inner."""
    eps = binary_orientation(outer)
    flip = {"0": "1", "1": "0"}
    body = outer[:-1]
    return "".join(body + (ch if eps == 1 else flip[ch]) for ch in inner)


def tuning_decompositions(word: str) -> Iterator[tuple[str, str]]:
    """All splittings word = tune_binary(outer, inner) into shorter center words.

    Yields (outer, inner) pairs that are combinatorially realizable; a
    nonempty stream means the parameter is renormalizable.
    """
    n = len(word)
    for ell in range(2, n // 2 + 1):
        if n % ell:
            continue
        blocks = [word[i : i + ell] for i in range(0, n, ell)]
        body = blocks[0][:-1]
        if any(b[:-1] != body for b in blocks[1:]):
            continue
        outer = center_word_from_prefix(body)
        if not is_realizable_combinatorial(outer):
            continue
        eps = binary_orientation(outer)
        flip = {"0": "1", "1": "0"}
        inner = "".join(b[-1] if eps == 1 else flip[b[-1]] for b in blocks)
        if not is_realizable_combinatorial(inner):
            continue
        if tune_binary(outer, inner) == word:
            yield outer, inner


def pl_reproduces(w: BinaryWord, precision_bits: int = 200) -> bool:
    """Whether the constant-slope unimodal model retraces w as its critical word.

    The model is the glued pair of slope +-lambda branches with lambda the
    leading root of the kneading polynomial of the recoded word; the turning
    point symbol follows the one-sided limit.
    """
    from mpmath import mp

    from .kneading import finite_word_kneading_polynomial, leading_root_mp

    simplified = recode(w)
    poly = finite_word_kneading_polynomial(simplified, 2)
    with mp.workprec(precision_bits):
        lam = leading_root_mp(poly)
        if lam <= 1 + mp.mpf(2) ** -40:
            raise ZeroEntropy(f"{w} has growth rate 1")
        tol = mp.mpf(2) ** (-precision_bits // 2)
        x = 1 + lam
        symbols = []
        sign = -1  # orbit enters the critical value from below
        n = len(w)
        for step in range(1, n + 1):
            if abs(x) < tol:
                if step < n:
                    return False  # the model closes up early
                symbols.append("1" if sign > 0 else "0")
                break
            if x < 0:
                symbols.append("0")
                x = lam * x + lam + 1
            else:
                symbols.append("1")
                x = -lam * x + lam + 1
                sign = -sign
        else:
            return False  # did not return to the turning point
    return "".join(symbols) == w.text


def is_minimal(w: BinaryWord, oracle_bound: int = 14) -> bool:
    """Whether w labels the parameter closest to the main cardioid at its entropy.

    Equivalent to non-renormalizability: no tuning decomposition into shorter
    center words exists.  Words of growth rate 1 raise ZeroEntropy.
    """
    if not is_realizable(w, oracle_bound):
        return False
    from .kneading import finite_word_kneading_polynomial
    from .polyalg import leading_real_root

    lam = leading_real_root(finite_word_kneading_polynomial(recode(w), 2))
    if lam <= 1 + 1e-9:
        raise ZeroEntropy(f"{w} has growth rate 1")
    return next(tuning_decompositions(w.text), None) is None


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _lyndon_words(nmax: int) -> Iterator[str]:
    """Duval's algorithm: binary Lyndon words of length <= nmax, lex order."""
    w = [0]
    while w:
        yield "".join(map(str, w))
        w = (w * (nmax // len(w) + 1))[:nmax]
        while w and w[-1] == 1:
            w.pop()
        if w:
            w[-1] = 1


@lru_cache(maxsize=None)
def admissible_words(n: int) -> tuple[str, ...]:
    """All admissible irreducible binary words of length exactly n, sorted."""
    found = [
        twisted_max_rotation(u)
        for u in _lyndon_words(n)
        if len(u) == n and set(u) != {"1"}
    ]
    return tuple(sorted(found))


Mode = Literal["all", "realizable", "minimal"]


def enumerate_vein_itineraries(
    p: int, q: int, max_period: int, mode: Mode = "all"
) -> Iterator[SimplifiedWord]:
    """Simplified itineraries of period <= max_period on the p/q vein.

    mode "all" streams every admissible irreducible word (the combinatorial
    universe plotted in teapot clouds); "realizable" keeps center words only;
    "minimal" keeps non-renormalizable center words of positive entropy.
    The stream is ordered by (period, word) and is vein-independent apart
    from parameter validation: recoding transports the same simplified words
    to every vein.
    """
    if not (0 < p < q) or math.gcd(p, q) != 1:
        raise ValueError("need 0 < p < q coprime")
    for n in range(1, max_period + 1):
        for word in admissible_words(n):
            if mode in ("realizable", "minimal") and not is_realizable_combinatorial(word):
                continue
            if mode == "minimal":
                if word in ("0", "10"):
                    continue  # growth rate 1
                if next(tuning_decompositions(word), None) is not None:
                    continue
            if word == "0":
                yield SimplifiedWord("0")
            else:
                yield recode(BinaryWord(word))
