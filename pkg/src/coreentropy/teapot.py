"""Master Teapot and Thurston set point clouds for a principal vein.

Every enumerated itinerary contributes the roots of its kneading polynomial
as points (z, lambda) with lambda the leading real root.  Generation is
deterministic: words stream in (period, word) order and the final cloud is
sorted, so identical inputs produce byte-identical CSV.
"""

from __future__ import annotations

import json
import math
import multiprocessing
from dataclasses import dataclass, field

from . import words as words_mod
from .kneading import finite_word_kneading_polynomial
from .polyalg import (
    IntPolynomial,
    leading_real_root,
    root_set_distance,
    roots,
    strip_cyclotomic,
    tip_growth_rate,
)
from .words import BinaryWord, SimplifiedWord

TOOL_VERSION = "coreentropy 0.1.0"


class NotMinimal(Exception):
    """The word does not label a closest-to-cardioid representative."""


class ConnectorNotFound(Exception):
    """No connector word completed the persistence concatenation."""


@dataclass(frozen=True)
class TeapotPoint:
    z: complex
    lam: float
    period: int
    itinerary: str
    minimal: bool

    def sort_key(self):
        return (self.period, self.itinerary, self.z.real, self.z.imag)


@dataclass
class PointCloud:
    p: int
    q: int
    max_period: int
    mode: str
    strip: bool
    points: list[TeapotPoint] = field(default_factory=list)
    word_count: int = 0

    def metadata(self) -> dict:
        return {
            "kind": "teapot-metadata",
            "vein": f"{self.p}/{self.q}",
            "max_period": self.max_period,
            "mode": self.mode,
            "strip_cyclotomic": self.strip,
            "points": len(self.points),
            "words": self.word_count,
            "tool": TOOL_VERSION,
        }


def _word_points(args) -> list[tuple[complex, float, int, str, bool]]:
    text, q, strip, tol = args
    simplified = SimplifiedWord(text)
    poly = finite_word_kneading_polynomial(simplified, q)
    if strip:
        poly = strip_cyclotomic(poly, 2 * poly.degree + 2)
    if poly.degree < 1:
        return []
    lam = leading_real_root(poly, tol)
    minimal = _word_is_minimal(text)
    out = []
    for z, mult in roots(poly, tol):
        out.extend([(complex(z), lam, len(text), text, minimal)] * mult)
    return out


def _word_is_minimal(text: str) -> bool:
    if text in ("0", "10"):
        return False
    binary = text.replace("2", "1")
    if not words_mod.is_realizable_combinatorial(binary):
        return False
    return next(words_mod.tuning_decompositions(binary), None) is None


def generate(
    p: int,
    q: int,
    max_period: int,
    mode: str = "all",
    strip: bool = False,
    jobs: int = 1,
    tol: float = 1e-12,
) -> PointCloud:
    """Point cloud over all itineraries of period <= max_period on the vein."""
    cloud = PointCloud(p, q, max_period, mode, strip)
    tasks = []
    for word in words_mod.enumerate_vein_itineraries(p, q, max_period, mode):
        tasks.append((word.text, q, strip, tol))
    cloud.word_count = len(tasks)
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            chunks = pool.map(_word_points, tasks, chunksize=256)
    else:
        chunks = map(_word_points, tasks)
    for chunk in chunks:
        cloud.points.extend(TeapotPoint(*item) for item in chunk)
    cloud.points.sort(key=TeapotPoint.sort_key)
    return cloud


def write_csv(cloud: PointCloud, path: str) -> None:
    """CSV columns period,itinerary,lambda,re,im,minimal; UTF-8 with LF ends."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("period,itinerary,lambda,re,im,minimal\n")
        for pt in cloud.points:
            handle.write(
                f"{pt.period},{pt.itinerary},{pt.lam!r},{pt.z.real!r},{pt.z.imag!r},"
                f"{int(pt.minimal)}\n"
            )


def write_jsonl(cloud: PointCloud, path: str) -> None:
    """JSONL mirror; the first record is the metadata."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(cloud.metadata(), sort_keys=True) + "\n")
        for pt in cloud.points:
            record = {
                "period": pt.period,
                "itinerary": pt.itinerary,
                "lambda": pt.lam,
                "re": pt.z.real,
                "im": pt.z.imag,
                "minimal": pt.minimal,
            }
            handle.write(json.dumps(record, sort_keys=True) + "\n")


def z_of_lambda(p: int, q: int, word: SimplifiedWord, tol: float = 1e-12):
    """Eigenvalue set of the closest-to-cardioid representative of a growth rate."""
    binary = BinaryWord(word.text.replace("2", "1"))
    if not words_mod.is_minimal(binary):
        raise NotMinimal(f"{word} is not a minimal itinerary")
    return roots(finite_word_kneading_polynomial(word, q), tol)


def thurston_projection(cloud: PointCloud, tol: float = 1e-9) -> list[complex]:
    """Forget lambda and deduplicate roots within tolerance."""
    seen: dict[tuple[int, int], complex] = {}
    for pt in cloud.points:
        key = (round(pt.z.real / tol), round(pt.z.imag / tol))
        seen.setdefault(key, pt.z)
    return sorted(seen.values(), key=lambda z: (z.real, z.imag))


# ---------------------------------------------------------------------------
# Persistence probe
# ---------------------------------------------------------------------------


def _inside_roots(poly: IntPolynomial, band: float = 1e-6, tol: float = 1e-12):
    return [z for z, m in roots(poly, tol) for _ in range(m) if abs(z) < 1.0 - band]


def persistence_probe(
    p: int,
    q: int,
    w0: SimplifiedWord,
    w1: SimplifiedWord,
    n_list: tuple[int, ...] = (2, 4, 8),
    connector_budget: int = 6,
) -> dict:
    """Track roots of words w1^N connector w0^N as N grows.

    Inside-circle roots approach those of w0 while the growth rate approaches
    that of w1; reported distances are Hausdorff against the unit circle
    union, so stray near-circle roots stay harmless.
    """
    u0 = w0.text.replace("2", "1")
    u1 = w1.text.replace("2", "1")
    lam0 = leading_real_root(finite_word_kneading_polynomial(w0, q))
    lam1 = leading_real_root(finite_word_kneading_polynomial(w1, q))
    if lam1 < lam0:
        raise ValueError("w0 must be the word closer to the main cardioid")
    target = _inside_roots(finite_word_kneading_polynomial(w0, q))
    report = {"pairs": (w0.text, w1.text), "lambda_targets": (lam0, lam1), "rows": []}
    for n in n_list:
        found = None
        for length in range(0, connector_budget + 1):
            for connector in _binary_words(length):
                candidate = u1 * n + connector + u0 * n
                if not words_mod.is_irreducible(candidate):
                    continue
                if not words_mod.is_admissible(candidate):
                    continue
                found = candidate
                break
            if found:
                break
        if not found:
            raise ConnectorNotFound(f"no connector for N={n} within budget")
        simplified = words_mod.recode(BinaryWord(found))
        poly = finite_word_kneading_polynomial(simplified, q)
        inside = _inside_roots(poly)
        distance = root_set_distance(inside, target)
        lam = leading_real_root(poly)
        report["rows"].append(
            {
                "N": n,
                "connector": found[n * len(u1) : len(found) - n * len(u0)],
                "inside_distance": distance,
                "lambda_gap": abs(lam - lam1),
            }
        )
    dists = [row["inside_distance"] for row in report["rows"]]
    report["non_increasing"] = all(a >= b - 1e-12 for a, b in zip(dists, dists[1:]))
    return report


def _binary_words(length: int):
    if length == 0:
        yield ""
        return
    for value in range(1 << length):
        yield format(value, f"0{length}b")


def unit_cylinder_gap(cloud: PointCloud, lam_lo: float, lam_hi: float) -> float:
    """Largest distance to the unit circle over points in a growth-rate slice."""
    best = math.inf
    for pt in cloud.points:
        if lam_lo <= pt.lam <= lam_hi:
            best = min(best, abs(abs(pt.z) - 1.0))
    return best


def max_modulus(cloud: PointCloud) -> float:
    return max((abs(pt.z) for pt in cloud.points), default=0.0)


def tip_bound(q: int) -> float:
    return tip_growth_rate(q)
