"""Finite-field laboratory: exhaustive fiber counts of rational maps P^r -> P^r.

Every point of P^r(F_p) is enumerated (first nonzero coordinate 1), the map
is evaluated everywhere with the mod-p kernels, images are normalized and
keyed as base-p integers, and np.unique gives every fiber size at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .fields import FieldError, PrimeField
from .poly import MPoly, PolyError, parse
from .polarity import PolarMap, gradient
from .sampling import make_rng

ENUM_GUARD = 10**7
DEFAULT_EPS = 0.05
DEFAULT_SAMPLES = 200
DEFAULT_PRIMES = {2: 101, 3: 41, 4: 23}


class GuardExceeded(ValueError):
    pass


class BadPrime(ValueError):
    pass


def count_points(r: int, p: int) -> int:
    return (p ** (r + 1) - 1) // (p - 1)


def enumerate_points(r: int, p: int) -> np.ndarray:
    """All points of P^r(F_p), normalized, in a fixed order; shape (N, r+1)."""
    n = count_points(r, p)
    if n > ENUM_GUARD:
        raise GuardExceeded(f"P^{r}(F_{p}) has {n} points, above the guard {ENUM_GUARD}")
    blocks = []
    for lead in range(r + 1):
        free = r - lead
        block = np.zeros((p ** free, r + 1), dtype=np.int64)
        block[:, lead] = 1
        if free:
            idx = np.arange(p ** free, dtype=np.int64)
            for j in range(free):
                block[:, r - j] = idx % p
                idx //= p
        blocks.append(block)
    return np.concatenate(blocks)


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def normalize(vals: np.ndarray, p: int, inv: Optional[np.ndarray] = None) -> tuple[np.ndarray, np.ndarray]:
    """Scale rows so the first nonzero entry is 1; returns (rows, nonzero-mask)."""
    vals = np.asarray(vals, dtype=np.int64) % p
    nz = vals.any(axis=1)
    first = np.argmax(vals != 0, axis=1)
    lead = vals[np.arange(vals.shape[0]), first]
    if inv is None:
        inv = _inverse_table(p)
    scale = inv[lead]
    return vals * scale[:, None] % p, nz


def point_keys(rows: np.ndarray, p: int) -> np.ndarray:
    weights = np.array([p ** i for i in range(rows.shape[1])], dtype=np.int64)
    return rows @ weights


@dataclass
class DegreeEstimate:
    p: int
    seed: int
    samples: int
    total_points: int
    base_locus_points: int
    singular_points: int
    fiber_histogram: dict
    image_histogram: dict
    distinct_images: int
    image_ratio: Fraction
    regular_points: int
    regular_image_ratio: Fraction
    verdict: str
    k: Optional[int]
    heuristic: bool
    eps: float
    reason: str = ""

    @property
    def nonbase_points(self) -> int:
        return self.total_points - self.base_locus_points

    @property
    def singleton_samples(self) -> int:
        return self.fiber_histogram.get(1, 0)

    def to_json(self) -> dict:
        return {
            "p": self.p, "seed": self.seed, "samples": self.samples,
            "total_points": self.total_points, "base_locus_points": self.base_locus_points,
            "singular_jacobian_points": self.singular_points,
            "fiber_histogram": {str(k): v for k, v in sorted(self.fiber_histogram.items())},
            "image_histogram": {str(k): v for k, v in sorted(self.image_histogram.items())},
            "distinct_images": self.distinct_images,
            "image_ratio": f"{self.image_ratio.numerator}/{self.image_ratio.denominator}",
            "image_ratio_float": round(float(self.image_ratio), 6),
            "regular_points": self.regular_points,
            "regular_image_ratio": f"{self.regular_image_ratio.numerator}/{self.regular_image_ratio.denominator}",
            "regular_image_ratio_float": round(float(self.regular_image_ratio), 6),
            "verdict": self.verdict, "heuristic": self.heuristic, "eps": self.eps,
            "reason": self.reason,
        }

    def histogram_csv(self) -> str:
        lines = ["fiber_size,count"]
        lines += [f"{k},{v}" for k, v in sorted(self.fiber_histogram.items())]
        return "\n".join(lines) + "\n"


def _as_map(obj) -> PolarMap:
    if isinstance(obj, PolarMap):
        return obj
    if isinstance(obj, MPoly):
        return gradient(obj)
    return PolarMap(tuple(obj))


def _jacobian_dets(forms: Sequence[MPoly], pts: np.ndarray, p: int) -> np.ndarray:
    n = len(forms)
    jac = np.zeros((pts.shape[0], n, n), dtype=np.int64)
    for i, g in enumerate(forms):
        for j in range(n):
            jac[:, i, j] = kernels.eval_mod_p(g.diff(j), pts, p)
    return kernels.batch_det_mod_p(jac, p)


def polar_degree(mapping, p: Optional[int] = None, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                 eps: float = DEFAULT_EPS) -> DegreeEstimate:
    """Estimate the degree of a rational self-map of P^r (or of the polar map of f).

    Samples are drawn among non-base points where the Jacobian is invertible;
    a sampled fiber of size >= 2 there refutes birationality.
    """
    phi = _as_map(mapping)
    r = phi.r
    if phi.nvars != r + 1:
        raise PolyError("map must send P^r to P^r")
    if p is None:
        p = DEFAULT_PRIMES.get(r, 23)
    top = mapping.degree() if isinstance(mapping, MPoly) else phi.degree
    if p <= top:
        raise BadPrime(f"p={p} must exceed the degree {top}")
    try:
        PrimeField(p)
        forms = [g.reduce_mod(p) for g in phi.forms]
    except FieldError as exc:
        raise BadPrime(str(exc)) from exc
    pts = enumerate_points(r, p)
    total = pts.shape[0]
    vals = np.stack([kernels.eval_mod_p(g, pts, p) for g in forms], axis=1)
    images, defined = normalize(vals, p)
    base = int((~defined).sum())
    keys = point_keys(images[defined], p)
    uniq, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    nonbase = total - base
    ratio = Fraction(int(uniq.size), nonbase) if nonbase else Fraction(0)
    sizes, freq = np.unique(counts, return_counts=True)
    image_hist = {int(s): int(c) for s, c in zip(sizes, freq)}
    fiber_of = counts[inverse]  # fiber size for each defined point

    defined_idx = np.nonzero(defined)[0]
    dets = _jacobian_dets(forms, pts[defined_idx], p) if defined_idx.size else np.zeros(0, dtype=np.int64)
    regular = np.nonzero(dets)[0]
    singular = int(defined_idx.size - regular.size)
    # The contracted locus V(J) maps onto a lower-dimensional set and costs
    # about (number of contracted components)/p of the raw ratio; the
    # verdict uses distinct images of regular points over regular points.
    reg_distinct = int(np.unique(keys[regular]).size)
    reg_ratio = Fraction(reg_distinct, int(regular.size)) if regular.size else Fraction(0)

    def result(verdict, k, heuristic, hist, nsamp, reason=""):
        return DegreeEstimate(p, seed, nsamp, total, base, singular, hist, image_hist, int(uniq.size),
                              ratio, int(regular.size), reg_ratio, verdict, k, heuristic, eps, reason)

    if regular.size == 0:
        return result("not_dominant", 0, False, {}, 0, "Jacobian singular at every non-base point")
    rng = make_rng(seed, 10)
    take = min(samples, regular.size)
    chosen = rng.choice(regular, size=take, replace=False)
    sampled = fiber_of[chosen]
    s_sizes, s_freq = np.unique(sampled, return_counts=True)
    hist = {int(s): int(c) for s, c in zip(s_sizes, s_freq)}
    if take < samples:
        return result("inconclusive", None, False, hist, take,
                      f"only {take} regular non-base points for {samples} samples")
    kmax = int(s_sizes.max())
    if kmax == 1:
        if reg_ratio >= 1 - Fraction(eps).limit_denominator(10**6):
            return result("delta_eq(1)", 1, False, hist, take)
        return result("inconclusive", None, False, hist, take,
                      f"all sampled fibers singletons but regular image ratio {float(reg_ratio):.4f} < 1 - eps")
    if abs(float(reg_ratio) - 1 / kmax) <= eps:
        return result(f"delta_eq({kmax})", kmax, True, hist, take)
    return result(f"delta_ge({kmax})", kmax, True, hist, take)


def is_homaloidal_estimate(est: DegreeEstimate) -> bool:
    return est.verdict == "delta_eq(1)"


# families

def smooth_quadric(r: int) -> MPoly:
    """x_0 x_r - sum_{0<i<r/2} x_i x_{r-i} (- x_{r/2}^2 for even r)."""
    xs = MPoly.gens(r + 1)
    q = xs[0] * xs[r]
    for i in range(1, (r + 1) // 2):
        if i != r - i:
            q = q - xs[i] * xs[r - i]
    if r % 2 == 0:
        q = q - xs[r // 2] ** 2
    return q


def coordinate_simplex(r: int) -> MPoly:
    out = MPoly.const(1, r + 1)
    for x in MPoly.gens(r + 1):
        out = out * x
    return out


def quadric_with_tangent(r: int) -> MPoly:
    """Smooth quadric times its tangent hyperplane x_r = 0 at (1:0:..:0)."""
    return MPoly.var(r, r + 1) * smooth_quadric(r)


def extension_family(r: int) -> dict:
    return {
        "smooth_quadric": smooth_quadric(r),
        "coordinate_simplex": coordinate_simplex(r),
        "quadric_with_tangent_hyperplane": quadric_with_tangent(r),
    }


def plane_homaloidal_family() -> dict:
    """The three reduced plane curves with birational polar map, plus a non-dominant one."""
    return {
        "smooth_conic": parse("x0*x2 - x1^2"),
        "three_general_lines": parse("x0*x1*x2"),
        "conic_and_tangent_line": parse("x0*x2^2 - x1^2*x2"),
        "three_concurrent_lines": parse("x0^2*x1 + x0*x1^2", nvars=3),
    }


def thickened_pairs() -> list[tuple[str, MPoly, MPoly]]:
    """(name, reduced f, f times one of its own factors): same support, same polar degree."""
    xs = MPoly.gens(3)
    conic = parse("x0*x2 - x1^2")
    lines = parse("x0*x1*x2")
    tangent = parse("x0*x2^2 - x1^2*x2")
    return [
        ("smooth_conic", conic, conic * conic),
        ("three_general_lines", lines, lines * xs[0]),
        ("conic_and_tangent_line", tangent, tangent * xs[2]),
    ]


@dataclass
class SeriesReport:
    r: int
    p: int
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(is_homaloidal_estimate(e) for e in self.results.values())


def homaloidal_series_suite(r: int, p: Optional[int] = None, samples: int = DEFAULT_SAMPLES,
                            seed: int = 0) -> SeriesReport:
    if r > 4:
        raise GuardExceeded("homaloidal series suite is limited to r <= 4")
    p = p or DEFAULT_PRIMES.get(r, 23)
    rep = SeriesReport(r, p)
    for name, f in extension_family(r).items():
        rep.results[name] = polar_degree(f, p, samples, seed)
    return rep
