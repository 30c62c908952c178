"""Polar maps, Hessians and the invariants rho, z, v of a hypersurface."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .fields import Number, PrimeField
from .matrix import InconclusiveError, PolyMatrix, det, field_nullspace
from .poly import MPoly, PolyError, poly_sum
from .sampling import make_rng, random_points


class UnsupportedDegree(PolyError):
    pass


class SymbolicGuardError(RuntimeError):
    """Symbolic Hessian refused; use probabilistic mode."""


@dataclass(frozen=True)
class Hypersurface:
    f: MPoly

    def __post_init__(self):
        if self.f.is_zero():
            raise PolyError("hypersurface of the zero polynomial")
        if not self.f.is_homogeneous():
            raise PolyError("hypersurface equation must be homogeneous")
        if self.f.degree() < 1:
            raise PolyError("hypersurface equation must have degree >= 1")

    @property
    def r(self) -> int:
        return self.f.nvars - 1

    @property
    def d(self) -> int:
        return self.f.degree()


@dataclass(frozen=True)
class PolarMap:
    forms: tuple

    def __post_init__(self):
        forms = tuple(self.forms)
        object.__setattr__(self, "forms", forms)
        if not forms:
            raise PolyError("empty map")
        nz = [g for g in forms if g]
        if not nz:
            raise PolyError("all forms vanish")
        degs = {g.degree() for g in nz}
        if len(degs) != 1 or not all(g.is_homogeneous() for g in nz):
            raise PolyError("forms must be homogeneous of one degree")
        if any(g.nvars != forms[0].nvars for g in forms):
            raise PolyError("forms must share variables")

    @property
    def r(self) -> int:
        return len(self.forms) - 1

    @property
    def degree(self) -> int:
        return next(g.degree() for g in self.forms if g)

    @property
    def nvars(self) -> int:
        return self.forms[0].nvars

    def reduce_mod(self, p: int) -> "PolarMap":
        return PolarMap(tuple(g.reduce_mod(p) for g in self.forms))


def as_hypersurface(f) -> Hypersurface:
    return f if isinstance(f, Hypersurface) else Hypersurface(f)


def gradient(h) -> PolarMap:
    h = as_hypersurface(h)
    if h.d < 2:
        raise UnsupportedDegree(f"polar map needs degree >= 2, got {h.d}")
    return PolarMap(tuple(h.f.diff(i) for i in range(h.f.nvars)))


@dataclass(frozen=True)
class Polar:
    form: MPoly
    vanishes: bool  # identically zero, i.e. the polar is all of P^r


def polar_operator(h, point: Sequence[Number], s: int) -> Polar:
    """The s-th polar Delta_p^s f, with Delta_p = sum p_i d/dx_i."""
    h = as_hypersurface(h)
    if not 1 <= s < h.d:
        raise PolyError(f"polar order s must satisfy 1 <= s < {h.d}")
    if len(point) != h.f.nvars or not any(point):
        raise PolyError("polar pole must be a nonzero point of P^r")
    g = h.f
    for _ in range(s):
        g = poly_sum((g.diff(i).scale(c) for i, c in enumerate(point) if c), g.nvars, g.field)
    return Polar(g, g.is_zero())


def reciprocity_sides(h, p: Sequence[Number], q: Sequence[Number], s: int) -> tuple[Number, Number]:
    """Both sides of (1/s!) D_p^s f(q) = (1/(d-s)!) D_q^{d-s} f(p)."""
    h = as_hypersurface(h)
    d = h.d
    left = polar_operator(h, p, s).form.evaluate(q)
    right = polar_operator(h, q, d - s).form.evaluate(p)
    field = h.f.field
    if isinstance(field, PrimeField):
        return field.div(left, factorial(s)), field.div(right, factorial(d - s))
    return Fraction(left) / factorial(s), Fraction(right) / factorial(d - s)


def hessian_matrix(h) -> PolyMatrix:
    h = as_hypersurface(h)
    if h.d < 2:
        raise UnsupportedDegree(f"Hessian needs degree >= 2, got {h.d}")
    n = h.f.nvars
    first = [h.f.diff(i) for i in range(n)]
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = first[i].diff(j)
    return PolyMatrix(rows)


@dataclass
class HessianReport:
    rho: int
    r: int
    hessian_det: Optional[MPoly] = None
    symbolic_zero: bool = False
    v: Optional[int] = None
    method: dict = dc_field(default_factory=dict)

    @property
    def z(self) -> int:
        return self.rho - 1

    @property
    def vanishing(self) -> bool:
        return self.rho < self.r + 1

    def to_json(self) -> dict:
        if self.hessian_det is not None:
            hs = "zero" if self.hessian_det.is_zero() else self.hessian_det.to_str()
        else:
            hs = "zero" if self.vanishing else "nonzero"
        out = {"hessian": hs, "rho": self.rho, "z": self.z, "method": dict(self.method)}
        if self.v is not None:
            out["v"] = self.v
        return out


# defaults for probabilistic checks
HESSIAN_PRIME = 32003
HESSIAN_TRIALS = 8
SYMBOLIC_MAX_R = 5
SYMBOLIC_MAX_ENTRY_DEGREE = 2


def hessian_values_mod_p(h, points: np.ndarray, p: int) -> np.ndarray:
    """Hessian matrices at the given points, shape (npts, n, n), mod p."""
    h = as_hypersurface(h)
    n = h.f.nvars
    pts = np.asarray(points, dtype=np.int64)
    out = np.zeros((pts.shape[0], n, n), dtype=np.int64)
    first = [h.f.diff(i) for i in range(n)]
    for i in range(n):
        for j in range(i, n):
            vals = kernels.eval_mod_p(first[i].diff(j), pts, p)
            out[:, i, j] = vals
            out[:, j, i] = vals
    return out


def gradient_values_mod_p(h, points: np.ndarray, p: int) -> np.ndarray:
    h = as_hypersurface(h)
    return np.stack([kernels.eval_mod_p(h.f.diff(i), points, p) for i in range(h.f.nvars)], axis=1)


def hessian_rank_probabilistic(h, p: int = HESSIAN_PRIME, trials: int = HESSIAN_TRIALS,
                               seed: int = 0) -> tuple[int, int, np.ndarray]:
    """(max rank, number of points attaining it, all ranks) at random F_p points."""
    h = as_hypersurface(h)
    if p <= h.d:
        raise PolyError(f"prime {p} must exceed the degree {h.d}")
    pts = random_points(make_rng(seed, 1), trials, h.f.nvars, p)
    ranks = kernels.batch_rank_mod_p(hessian_values_mod_p(h, pts, p), p)
    top = int(ranks.max())
    return top, int((ranks == top).sum()), ranks


def hessian(h, mode: str = "symbolic", p: int = HESSIAN_PRIME, trials: int = HESSIAN_TRIALS,
            seed: int = 0, max_r: int = SYMBOLIC_MAX_R,
            max_entry_degree: int = SYMBOLIC_MAX_ENTRY_DEGREE) -> HessianReport:
    h = as_hypersurface(h)
    if h.d < 2:
        raise UnsupportedDegree(f"Hessian needs degree >= 2, got {h.d}")
    if mode == "symbolic":
        if h.r > max_r and h.d - 2 > max_entry_degree:
            raise SymbolicGuardError(
                f"symbolic Hessian refused for r={h.r}, entry degree {h.d - 2}; use probabilistic mode")
        hd = det(hessian_matrix(h))
        if hd:
            return HessianReport(rho=h.r + 1, r=h.r, hessian_det=hd, symbolic_zero=False,
                                 method={"kind": "symbolic"})
        top, hits, _ = hessian_rank_probabilistic(h, p, trials, seed)
        return HessianReport(rho=top, r=h.r, hessian_det=hd, symbolic_zero=True,
                             method={"kind": "symbolic", "rank": {"p": p, "trials": trials, "seed": seed,
                                                                   "certified": hits >= 2}})
    if mode == "probabilistic":
        top, hits, _ = hessian_rank_probabilistic(h, p, trials, seed)
        return HessianReport(rho=top, r=h.r, method={"kind": "probabilistic", "p": p, "trials": trials,
                                                     "seed": seed, "certified": hits >= 2})
    raise ValueError(f"unknown Hessian mode {mode!r}")


def hessian_zero_at_points(h, points: int = 1000, p: int = HESSIAN_PRIME, seed: int = 0) -> bool:
    """True when det h(f) vanishes at every one of ``points`` random F_p points."""
    h = as_hypersurface(h)
    pts = random_points(make_rng(seed, 2), points, h.f.nvars, p)
    dets = kernels.batch_det_mod_p(hessian_values_mod_p(h, pts, p), p)
    return not dets.any()


@dataclass(frozen=True)
class ConeResult:
    is_cone: bool
    witness: Optional[tuple]


def is_cone(h) -> ConeResult:
    """Linear dependence of the partial derivatives, with a dependence vector."""
    h = as_hypersurface(h)
    n = h.f.nvars
    if h.d == 1:
        # the partials are constants; a linear form in >= 2 variables is a cone
        parts = [h.f.coeff(tuple(int(k == i) for k in range(n))) for i in range(n)]
        rows = [parts]
    else:
        parts_p = [h.f.diff(i) for i in range(n)]
        monos = sorted({e for g in parts_p for e in g.terms})
        rows = [[g.coeff(e) for g in parts_p] for e in monos]
    basis = field_nullspace(rows, n, h.f.field)
    if not basis:
        return ConeResult(False, None)
    w = basis[0]
    lead = next(c for c in w if c)
    return ConeResult(True, tuple(h.f.field.div(c, lead) for c in w))


@dataclass(frozen=True)
class TotallyHessianResult:
    outcome: str  # totally_hessian | not_totally_hessian | vanishing_hessian | degree_mismatch
    c: Optional[Number]
    e: Optional[int]

    @property
    def holds(self) -> bool:
        return self.outcome == "totally_hessian"


def totally_hessian_test(h, mode: str = "symbolic", p: int = HESSIAN_PRIME, trials: int = 20,
                         seed: int = 0) -> TotallyHessianResult:
    """Test h(f) = c * f^e with e = (d-2)(r+1)/d."""
    h = as_hypersurface(h)
    if h.d < 2:
        raise UnsupportedDegree(f"Hessian needs degree >= 2, got {h.d}")
    num = (h.d - 2) * (h.r + 1)
    if num % h.d:
        return TotallyHessianResult("degree_mismatch", None, None)
    e = num // h.d
    if mode == "symbolic":
        hd = det(hessian_matrix(h))
        if hd.is_zero():
            return TotallyHessianResult("vanishing_hessian", None, e)
        fe = h.f ** e
        c = hd.field.div(hd.leading_term()[1], fe.leading_term()[1])
        ok = hd == fe.scale(c)
        return TotallyHessianResult("totally_hessian" if ok else "not_totally_hessian", c if ok else None, e)
    if mode == "probabilistic":
        pts = random_points(make_rng(seed, 3), trials, h.f.nvars, p)
        dets = kernels.batch_det_mod_p(hessian_values_mod_p(h, pts, p), p)
        if not dets.any():
            return TotallyHessianResult("vanishing_hessian", None, e)
        fvals = kernels.eval_mod_p(h.f, pts, p)
        fe = np.array([pow(int(v), e, p) for v in fvals], dtype=np.int64)
        good = fe != 0
        if not good.any():
            raise InconclusiveError("f vanished at every sampled point")
        i0 = int(np.argmax(good))
        c = int(dets[i0]) * pow(int(fe[i0]), -1, p) % p
        ok = bool(((dets - c * fe) % p == 0).all())
        return TotallyHessianResult("totally_hessian" if ok else "not_totally_hessian", c if ok else None, e)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class GaussImageResult:
    v: int
    smooth_points: int
    rank_histogram: dict
    p: int
    seed: int


GAUSS_MIN_POINTS = 20


def smooth_points_mod_p(h, p: int, seed: int, want: int, max_draws: int = 2_000_000,
                        batch: int = 50_000) -> np.ndarray:
    """Smooth F_p-points of V(f) found by seeded batch sampling."""
    h = as_hypersurface(h)
    rng = make_rng(seed, 4)
    found = []
    total = 0
    drawn = 0
    while total < want and drawn < max_draws:
        pts = random_points(rng, batch, h.f.nvars, p)
        drawn += batch
        on = kernels.eval_mod_p(h.f, pts, p) == 0
        if not on.any():
            continue
        cand = pts[on]
        grads = gradient_values_mod_p(h, cand, p)
        cand = cand[grads.any(axis=1)]
        found.append(cand)
        total += cand.shape[0]
    if not found:
        return np.zeros((0, h.f.nvars), dtype=np.int64)
    return np.concatenate(found)[:want]


def gauss_image_dim(h, p: int = 101, seed: int = 0, points: int = 40) -> GaussImageResult:
    """Dimension v(f) of the dual variety, as the max rank of the Gauss map differential."""
    h = as_hypersurface(h)
    if p <= h.d:
        raise PolyError(f"prime {p} must exceed the degree {h.d}")
    pts = smooth_points_mod_p(h, p, seed, max(points, GAUSS_MIN_POINTS))
    if pts.shape[0] < GAUSS_MIN_POINTS:
        raise InconclusiveError(f"only {pts.shape[0]} smooth F_{p}-points found; try a larger p")
    hs = hessian_values_mod_p(h, pts, p)
    grads = gradient_values_mod_p(h, pts, p)
    n = h.f.nvars
    prods = []
    for k in range(pts.shape[0]):
        w = kernels.nullspace_mod_p(grads[k].reshape(1, n), p)  # tangent hyperplane, r vectors
        prods.append(kernels.matmul_mod_p(hs[k], w.T, p))
    ranks = kernels.batch_rank_mod_p(np.stack(prods), p)
    hist: dict[int, int] = {}
    for rk in ranks.tolist():
        hist[rk - 1] = hist.get(rk - 1, 0) + 1
    return GaussImageResult(int(ranks.max()) - 1, int(pts.shape[0]), dict(sorted(hist.items())), p, seed)
