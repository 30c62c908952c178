"""Rational normal scrolls, their projections Y(a,b), and duals of those surfaces.

S(a,b) is parameterized in the chart t=1, v=1.  Tangent hyperplanes are
sampled mod p and the dual equation is interpolated from them.  The dual form
is then lifted to the integers by multi-prime CRT and rational reconstruction.
The lift is what gets reduced to the small primes used by the fiber counter.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import fflab, kernels
from .fields import QQ, crt_pair, is_prime, rational_reconstruction
from .matrix import field_nullspace, field_rank
from .poly import MPoly, PolyError, monomials_of_degree
from .polarity import PolarMap, gradient, is_cone
from .sampling import make_rng, small_nonzero

DUAL_PRIME = 32003
COEFF_BOUND = 5
MAX_RESEEDS = 5
OVERSAMPLE = 1.2
HELD_OUT = 50
INVERSE_HELD_OUT = 20
RESAMPLE_WARN = 0.2
LIFT_MAX_PRIMES = 12


class ScrollError(ValueError):
    pass


class DegenerateChoiceError(ScrollError):
    pass


class InterpolationError(ScrollError):
    pass


# parameterization

@dataclass
class ScrollParam:
    a: int
    b: int
    forms: tuple  # a+b+2 forms in (s, t, u, v)

    @property
    def ambient(self) -> int:
        return self.a + self.b + 1

    def catalecticant(self) -> list[list[MPoly]]:
        n = self.a + self.b + 2
        xs = MPoly.gens(n)
        top = [xs[i] for i in range(self.a)] + [xs[self.a + 1 + j] for j in range(self.b)]
        bot = [xs[i + 1] for i in range(self.a)] + [xs[self.a + 2 + j] for j in range(self.b)]
        return [top, bot]

    def minors_vanish(self) -> bool:
        top, bot = self.catalecticant()
        for i in range(len(top)):
            for j in range(i + 1, len(top)):
                minor = top[i] * bot[j] - top[j] * bot[i]
                if minor.compose(list(self.forms)) != MPoly.zero(4):
                    return False
        return True

    def chart_point(self, s: int, u: int) -> list[int]:
        """Coordinates at t=1, v=1."""
        return [u * s ** (self.a - k) for k in range(self.a + 1)] + [s ** (self.b - k) for k in range(self.b + 1)]


def scroll_param(a: int, b: int) -> ScrollParam:
    if not (1 <= a <= b) or a + b < 3:
        raise ScrollError(f"need 1 <= a <= b and a+b >= 3, got ({a},{b})")
    s, t, u, v = MPoly.gens(4)
    forms = [u * s ** (a - k) * t ** k for k in range(a + 1)]
    forms += [v * s ** (b - k) * t ** k for k in range(b + 1)]
    return ScrollParam(a, b, tuple(forms))


# projection chains

def _int_annihilator(vectors: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Integer basis of {w : w.c = 0 for all c}; rows of the projection matrix."""
    if not vectors:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    basis = field_nullspace([list(v) for v in vectors], n, QQ)
    out = []
    for vec in basis:
        den = math.lcm(*[Fraction(c).denominator for c in vec])
        ints = [int(Fraction(c) * den) for c in vec]
        g = math.gcd(*ints)
        out.append([c // g for c in ints])
    return out


def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _apply(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


@dataclass
class ProjectionChain:
    a: int
    b: int
    seed: int
    stages: list  # integer matrices, applied left to right
    center_1: list  # spanning vectors of the center inside <E>
    rulings_used: list  # s-values of the rulings spanning Phi with Lambda
    center_2: list  # spanning vectors of Psi
    lambda_basis: list  # two vectors spanning Lambda (after stage 1)
    reseeds: int = 0
    e: int = 0
    mu: int = 0
    nu: int = 0

    @property
    def param(self) -> ScrollParam:
        return scroll_param(self.a, self.b)

    @property
    def matrix(self) -> list[list[int]]:
        m = [[int(i == j) for j in range(self.a + self.b + 2)] for i in range(self.a + self.b + 2)]
        for st in self.stages:
            m = _matmul(st, m)
        return m

    @property
    def target_dim(self) -> int:
        return len(self.matrix) - 1

    def L_vectors(self) -> list[list[int]]:
        """Two vectors spanning the image L of Lambda in the target space."""
        if not self.stages:
            return [list(v) for v in self.lambda_basis]
        last = self.stages[-1]  # Lambda is stored after the first projection
        return [_apply(last, v) for v in self.lambda_basis]

    def L_perp_forms(self) -> tuple[MPoly, MPoly]:
        """The two linear forms on the dual space cutting out L^perp."""
        n = self.target_dim + 1
        xs = MPoly.gens(n)
        out = []
        for vec in self.L_vectors():
            out.append(sum((xs[i].scale(c) for i, c in enumerate(vec) if c), MPoly.zero(n)))
        return out[0], out[1]

    def to_json(self) -> dict:
        return {
            "a": self.a, "b": self.b, "seed": self.seed, "reseeds": self.reseeds,
            "stages": self.stages, "center_1": self.center_1, "rulings_used": self.rulings_used,
            "center_2": self.center_2, "L": self.L_vectors(),
            "e": self.e, "mu": self.mu, "nu": self.nu, "target_dim": self.target_dim,
        }


def identity_chain(a: int, b: int) -> ProjectionChain:
    """S(a,b) itself, no projection."""
    n = a + b + 2
    lam = [[int(i == j) for i in range(n)] for j in range(a + 1)]
    return ProjectionChain(a, b, 0, [], [], [], [], lam[:2], 0, a, a, a + 1)


def _try_build_Y(a: int, b: int, rng) -> Optional[ProjectionChain]:
    n = a + b + 2
    # center_1: a-1 general points of <E> (the first a+1 coordinates)
    center_1 = []
    for _ in range(a - 1):
        vec = [int(c) for c in small_nonzero(rng, a + 1, COEFF_BOUND)] + [0] * (b + 1)
        center_1.append(vec)
    if center_1 and field_rank(center_1, QQ) < a - 1:
        return None
    a1 = _int_annihilator(center_1, n)  # (b+3) x n
    images_E = [_apply(a1, [int(i == k) for i in range(n)]) for k in range(a + 1)]
    if field_rank(images_E, QQ) != 2:
        return None
    lam = []
    for vec in images_E:
        if field_rank(lam + [vec], QQ) > len(lam):
            lam.append(vec)
        if len(lam) == 2:
            break
    # Phi = <Lambda, b-a rulings>; each ruling adds its point on the degree-b curve
    pool = [s for s in range(-3 * b, 3 * b + 1) if s not in (0, 1, -1)]
    svals = sorted(int(s) for s in rng.choice(pool, size=b - a, replace=False))
    ruling_dirs = [_apply(a1, [0] * (a + 1) + [s ** (b - k) for k in range(b + 1)]) for s in svals]
    phi_basis = lam + ruling_dirs
    if field_rank(phi_basis, QQ) != b - a + 2:
        return None
    # Psi: b-a general points of Phi, meeting Lambda nowhere
    coeffs = small_nonzero(rng, (b - a, b - a + 2), COEFF_BOUND)
    psi = [[int(sum(int(c) * v[j] for c, v in zip(row, phi_basis))) for j in range(len(phi_basis[0]))]
           for row in coeffs]
    if field_rank(psi + lam, QQ) != b - a + 2:
        return None
    a2 = _int_annihilator(psi, b + 3)  # (a+3) x (b+3)
    total = _matmul(a2, a1)
    if field_rank(total, QQ) != a + 3:
        return None
    if field_rank([_apply(a2, v) for v in lam], QQ) != 2:
        return None
    stages = [a1, a2] if a > 1 else [a2]
    return ProjectionChain(a, b, 0, stages, center_1, svals, psi, lam, 0, b, a, a + 1)


def build_Y(a: int, b: int, seed: int = 0) -> ProjectionChain:
    """Project S(a,b) from a center in <E> to X(a,b), then from Psi in Phi to P^{a+2}."""
    if not (1 <= a < b):
        raise ScrollError(f"build_Y needs 1 <= a < b, got ({a},{b})")
    for k in range(MAX_RESEEDS + 1):
        rng = make_rng(seed, 300 + k)
        chain = _try_build_Y(a, b, rng)
        if chain is not None:
            chain.seed = seed
            chain.reseeds = k
            return chain
    raise DegenerateChoiceError(f"no admissible centers for Y({a},{b}) after {MAX_RESEEDS} re-seeds")


# dual sampling and interpolation

@dataclass
class DualSamples:
    points: np.ndarray
    p: int
    seed: int
    attempts: int

    @property
    def resample_rate(self) -> float:
        n = self.points.shape[0]
        return (self.attempts - n) / self.attempts if self.attempts else 0.0


def _chart_data(a: int, b: int, s: np.ndarray, u: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Point, d/ds and d/du of the chart map t=1, v=1, all mod p; shapes (n, a+b+2)."""
    n = s.shape[0]
    pt = np.zeros((n, a + b + 2), dtype=np.int64)
    ds = np.zeros_like(pt)
    du = np.zeros_like(pt)

    def pw(e):
        return np.array([pow(int(x), e, p) if e >= 0 else 0 for x in s], dtype=np.int64)

    for k in range(a + 1):
        e = a - k
        pt[:, k] = u * pw(e) % p
        ds[:, k] = u * e % p * pw(e - 1) % p if e else 0
        du[:, k] = pw(e)
    for k in range(b + 1):
        e = b - k
        j = a + 1 + k
        pt[:, j] = pw(e)
        ds[:, j] = e * pw(e - 1) % p if e else 0
    return pt, ds, du


def dual_sample(chain: ProjectionChain, n: int, p: int = DUAL_PRIME, seed: int = 0,
                stream: int = 0) -> DualSamples:
    """n points of the dual surface: hyperplanes through the image tangent planes."""
    a, b = chain.a, chain.b
    mat = np.array(chain.matrix, dtype=object)
    matp = np.array((mat % p).tolist(), dtype=np.int64)
    rng = make_rng(seed, 400 + stream)
    out = []
    attempts = 0
    while len(out) < n:
        need = n - len(out)
        batch = max(need + need // 4, 8)
        s = rng.integers(1, p, size=batch, dtype=np.int64)
        u = rng.integers(1, p, size=batch, dtype=np.int64)
        pt, ds, du = _chart_data(a, b, s, u, p)
        rows = np.stack([kernels.matmul_mod_p(pt, matp.T, p), kernels.matmul_mod_p(ds, matp.T, p),
                         kernels.matmul_mod_p(du, matp.T, p)], axis=1)
        ranks = kernels.batch_rank_mod_p(rows, p)
        for k in range(batch):
            attempts += 1
            if ranks[k] != 3:
                continue
            null = kernels.nullspace_mod_p(rows[k], p)
            c = rng.integers(0, p, size=null.shape[0], dtype=np.int64)
            xi = kernels.matmul_mod_p(c[None, :], null, p)[0]
            if not xi.any():
                continue
            out.append(xi)
            if len(out) == n:
                break
    res = DualSamples(np.array(out, dtype=np.int64), p, seed, attempts)
    if res.resample_rate > RESAMPLE_WARN:
        warnings.warn(f"dual sampling resampled {res.resample_rate:.0%} of parameters", RuntimeWarning)
    return res


def _eval_matrix(points: np.ndarray, monos: list[tuple[int, ...]], p: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.int64) % p
    cols = []
    for m in monos:
        col = np.ones(pts.shape[0], dtype=np.int64)
        for j, e in enumerate(m):
            for _ in range(e):
                col = col * pts[:, j] % p
        cols.append(col)
    return np.stack(cols, axis=1) if cols else np.zeros((pts.shape[0], 0), dtype=np.int64)


def kernel_dim(points: np.ndarray, d: int, p: int) -> int:
    nvars = points.shape[1]
    monos = monomials_of_degree(nvars, d)
    m = _eval_matrix(points, monos, p)
    return len(monos) - kernels.rank_mod_p(m, p)


@dataclass
class InterpolatedForm:
    d: int
    p: int
    nvars: int
    coeffs: dict  # exponent tuple -> residue mod p
    kernel_dim_below: int
    kernel_dim_at: int
    n_samples: int
    seed: int

    @property
    def form(self) -> MPoly:
        from .fields import GF
        return MPoly(self.nvars, dict(self.coeffs), GF(self.p))

    def to_text(self) -> str:
        return self.form.to_str()

    def to_json(self) -> dict:
        return {"d": self.d, "p": self.p, "nvars": self.nvars, "n_samples": self.n_samples, "seed": self.seed,
                "kernel_dim_at_d_minus_1": self.kernel_dim_below, "kernel_dim_at_d": self.kernel_dim_at,
                "form": self.to_text()}


def required_samples(d: int, r: int) -> int:
    return math.ceil(OVERSAMPLE * math.comb(d + r, r))


def dual_interpolate(samples: DualSamples | np.ndarray, d: int, p: Optional[int] = None,
                     seed: int = 0) -> InterpolatedForm:
    """Unique degree-d form through the samples, with kernel dimensions at d-1 and d."""
    if isinstance(samples, DualSamples):
        pts, p = samples.points, samples.p if p is None else p
        seed = samples.seed
    else:
        pts = np.asarray(samples, dtype=np.int64)
    if p is None:
        raise InterpolationError("prime p required")
    nvars = pts.shape[1]
    r = nvars - 1
    if pts.shape[0] < required_samples(d, r):
        raise InterpolationError(f"need >= {required_samples(d, r)} samples for degree {d} in P^{r}, "
                                 f"got {pts.shape[0]}")
    below = kernel_dim(pts, d - 1, p) if d > 1 else 0
    monos = monomials_of_degree(nvars, d)
    null = kernels.nullspace_mod_p(_eval_matrix(pts, monos, p), p)
    if null.shape[0] == 0:
        raise InterpolationError(f"no degree-{d} form vanishes on the samples (degree too low)")
    if null.shape[0] > 1:
        raise InterpolationError(f"{null.shape[0]}-dimensional space of degree-{d} forms (degenerate samples)")
    coeffs = {m: int(c) for m, c in zip(monos, null[0]) if c}
    return InterpolatedForm(d, p, nvars, coeffs, below, 1, int(pts.shape[0]), seed)


def check_out_of_sample(chain: ProjectionChain, form: InterpolatedForm, n: int = HELD_OUT, seed: int = 0) -> bool:
    fresh = dual_sample(chain, n, form.p, seed, stream=99)
    return not kernels.eval_mod_p(form.form, fresh.points, form.p).any()


# lifting to Q

def lift_primes(count: int, start: int = 2**31 - 1) -> list[int]:
    out = []
    q = start
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q -= 2
    return out


@dataclass
class LiftedForm:
    form: MPoly
    primes: list
    verified_at: int


def lift_dual(chain: ProjectionChain, d: int, seed: int = 0, max_primes: int = LIFT_MAX_PRIMES) -> LiftedForm:
    """Integer dual form via CRT over large primes, checked at a fresh prime."""
    nvars = chain.target_dim + 1
    need = required_samples(d, nvars - 1)
    primes = lift_primes(max_primes + 1)
    check_prime = primes.pop()
    residues: Optional[dict] = None
    modulus = 1
    anchor = None
    previous = None
    used = []
    for k, q in enumerate(primes):
        samp = dual_sample(chain, need, q, seed, stream=10 + k)
        interp = dual_interpolate(samp, d, q)
        coeffs = interp.coeffs
        if anchor is None:
            anchor = max(coeffs)  # a fixed monomial to normalize on
        if anchor not in coeffs:
            continue  # unlucky prime
        inv = pow(coeffs[anchor], -1, q)
        coeffs = {m: c * inv % q for m, c in coeffs.items()}
        used.append(q)
        if residues is None:
            residues = dict(coeffs)
            modulus = q
        else:
            keys = set(residues) | set(coeffs)
            residues = {m: crt_pair(residues.get(m, 0), modulus, coeffs.get(m, 0), q)[0] for m in keys}
            modulus *= q
        rec = {}
        ok = True
        for m, c in residues.items():
            fr = rational_reconstruction(c, modulus)
            if fr is None:
                ok = False
                break
            if fr:
                rec[m] = fr
        if not ok:
            continue
        if rec == previous:
            den = math.lcm(*[c.denominator for c in rec.values()])
            ints = {m: int(c * den) for m, c in rec.items()}
            g = math.gcd(*ints.values())
            form = MPoly(nvars, {m: Fraction(c // g) for m, c in ints.items()}, QQ)
            samp = dual_sample(chain, HELD_OUT, check_prime, seed, stream=98)
            if kernels.eval_mod_p(form, samp.points, check_prime).any():
                raise InterpolationError("lifted dual form fails at the check prime")
            return LiftedForm(form, used, check_prime)
        previous = rec
    raise InterpolationError(f"rational reconstruction did not stabilize within {max_primes} primes")


# multiplicity along a codimension-2 subspace

def multiplicity_along(form: MPoly, l1: MPoly, l2: MPoly) -> int:
    """Multiplicity of V(form) at a general point of V(l1, l2)."""
    n = form.nvars
    rows = []
    for lf in (l1, l2):
        if lf.nvars != n or not lf.is_homogeneous() or lf.degree() != 1:
            raise PolyError("subspace must be given by two linear forms")
        rows.append([lf.coeff(tuple(int(i == j) for i in range(n))) for j in range(n)])
    if field_rank(rows, form.field) < 2:
        raise PolyError("dependent linear forms")
    # complete (l1, l2) to a basis with coordinate vectors: y = T x
    basis = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        if field_rank(basis + rows + [e], form.field) > len(basis) + 2:
            basis.append(e)
        if len(basis) == n - 2:
            break
    t = basis + rows
    # x = T^{-1} y; columns of T^{-1} from solving T z = e_k
    from .matrix import field_rref
    f = form.field
    aug = [list(t[i]) + [int(i == k) for k in range(n)] for i in range(n)]
    red, _ = field_rref(aug, f)
    tinv = [[red[i][n + k] for k in range(n)] for i in range(n)]
    g = _linear_substitute(form, tinv)
    return min(m[n - 2] + m[n - 1] for m, _ in g.items())


def _linear_substitute(f: MPoly, a: Sequence[Sequence]) -> MPoly:
    """f(A y) for a constant square matrix A."""
    n = f.nvars
    ys = MPoly.gens(n, f.field)
    forms = []
    for row in a:
        acc = MPoly.zero(n, f.field)
        for j, c in enumerate(row):
            if c:
                acc = acc + ys[j].scale(c)
        forms.append(acc)
    return f.compose(forms)


# inverse of a polar map

@dataclass
class InverseDegreeResult:
    degree: Optional[int]
    kernel_dims: dict
    held_out_ok: bool
    p: int
    seed: int

    def to_json(self) -> dict:
        return {"degree": self.degree, "kernel_dims": {str(k): v for k, v in self.kernel_dims.items()},
                "held_out_ok": self.held_out_ok, "p": self.p, "seed": self.seed}


def _graph_pairs(forms: Sequence[MPoly], n: int, p: int, rng) -> tuple[np.ndarray, np.ndarray]:
    nv = forms[0].nvars
    xs = []
    qs = []
    while sum(len(x) for x in xs) < n:
        x = rng.integers(0, p, size=(n, nv), dtype=np.int64)
        q = np.stack([kernels.eval_mod_p(g, x, p) for g in forms], axis=1)
        keep = x.any(axis=1) & q.any(axis=1)
        xs.append(x[keep])
        qs.append(q[keep])
    return np.concatenate(xs)[:n], np.concatenate(qs)[:n]


def inverse_degree(mapping, p: int = DUAL_PRIME, seed: int = 0, e_max: Optional[int] = None) -> InverseDegreeResult:
    """Least e such that degree-e forms G with G(phi(x)) proportional to x exist."""
    phi = mapping if isinstance(mapping, PolarMap) else (gradient(mapping) if isinstance(mapping, MPoly)
                                                          else PolarMap(tuple(mapping)))
    forms = [g.reduce_mod(p) for g in phi.forms]
    n = len(forms)
    if e_max is None:
        e_max = 2 * (phi.degree + 1)
    rng = make_rng(seed, 500)
    dims = {}
    for e in range(1, e_max + 1):
        monos = monomials_of_degree(n, e)
        nm = len(monos)
        npairs = math.ceil(OVERSAMPLE * n * nm)
        x, q = _graph_pairs(forms, npairs + INVERSE_HELD_OUT, p, rng)
        xt, qt = x[:npairs], q[:npairs]
        ev = _eval_matrix(qt, monos, p)  # npairs x nm
        blocks = []
        for i in range(n):
            for j in range(i + 1, n):
                # G_i(q) x_j - G_j(q) x_i = 0
                blk = np.zeros((npairs, n * nm), dtype=np.int64)
                blk[:, i * nm:(i + 1) * nm] = ev * xt[:, j:j + 1] % p
                blk[:, j * nm:(j + 1) * nm] = (-ev * xt[:, i:i + 1]) % p
                blocks.append(blk)
        system = np.concatenate(blocks)
        null = kernels.nullspace_mod_p(system, p)
        dims[e] = int(null.shape[0])
        if null.shape[0] == 0:
            continue
        c = rng.integers(1, p, size=null.shape[0], dtype=np.int64)
        sol = kernels.matmul_mod_p(c[None, :], null, p)[0]
        gvals = np.stack([kernels.matmul_mod_p(_eval_matrix(q[npairs:], monos, p), sol[i * nm:(i + 1) * nm, None], p)[:, 0]
                          for i in range(n)], axis=1)
        xh = x[npairs:] % p
        ok = bool(gvals.any(axis=1).all())
        for i in range(n):
            for j in range(i + 1, n):
                ok = ok and not ((gvals[:, i] * xh[:, j] - gvals[:, j] * xh[:, i]) % p).any()
        if ok:
            return InverseDegreeResult(e, dims, True, p, seed)
    return InverseDegreeResult(None, dims, False, p, seed)


# the homaloidal series

@dataclass
class SerieReport:
    r: int
    d: int
    a: int
    b: int
    seed: int
    chain: ProjectionChain
    interpolation: InterpolatedForm
    out_of_sample_ok: bool
    resample_rate: float
    lifted: Optional[LiftedForm] = None
    degree: Optional[fflab.DegreeEstimate] = None
    multiplicity: Optional[int] = None
    expected_multiplicity: int = 0
    cone: Optional[bool] = None
    stage_errors: dict = field(default_factory=dict)

    @property
    def kernel_dims(self) -> tuple[int, int]:
        return self.interpolation.kernel_dim_below, self.interpolation.kernel_dim_at

    @property
    def ok(self) -> bool:
        return (not self.stage_errors and self.kernel_dims == (0, 1) and self.out_of_sample_ok
                and self.degree is not None and self.degree.verdict == "delta_eq(1)"
                and self.multiplicity == self.expected_multiplicity)

    def to_json(self) -> dict:
        return {
            "r": self.r, "d": self.d, "a": self.a, "b": self.b, "seed": self.seed,
            "chain": self.chain.to_json(), "interpolation": self.interpolation.to_json(),
            "out_of_sample_ok": self.out_of_sample_ok, "resample_rate": round(self.resample_rate, 6),
            "lifted_form": self.lifted.form.to_str() if self.lifted else None,
            "lift_primes": self.lifted.primes if self.lifted else None,
            "degree": self.degree.to_json() if self.degree else None,
            "multiplicity_along_L_perp": self.multiplicity, "expected_multiplicity": self.expected_multiplicity,
            "is_cone": self.cone, "stage_errors": self.stage_errors, "ok": self.ok,
        }


SERIE_GRID = ((3, 3), (3, 4), (3, 5), (4, 5))


def dual_of_Y(a: int, b: int, seed: int = 0, p: int = DUAL_PRIME, samples: Optional[int] = None):
    """Chain, samples and interpolated dual of Y(a,b)."""
    chain = build_Y(a, b, seed)
    d = a + b
    n = samples or required_samples(d, a + 2)
    samp = dual_sample(chain, n, p, seed)
    return chain, samp, dual_interpolate(samp, d, p)


def serie_verify(r: int, d: int, p: int = DUAL_PRIME, seed: int = 0, degree_prime: Optional[int] = None,
                 samples: int = fflab.DEFAULT_SAMPLES) -> SerieReport:
    if r not in (3, 4):
        raise ScrollError("serie_verify is limited to r in {3, 4}")
    if d < 2 * r - 3:
        raise ScrollError(f"need d >= 2r-3 = {2 * r - 3}")
    a, b = r - 2, d - r + 2
    chain, samp, interp = dual_of_Y(a, b, seed, p)
    rep = SerieReport(r, d, a, b, seed, chain, interp, check_out_of_sample(chain, interp, seed=seed),
                      samp.resample_rate, expected_multiplicity=d - a)
    try:
        rep.lifted = lift_dual(chain, d, seed)
    except ScrollError as exc:
        rep.stage_errors["lift"] = str(exc)
        return rep
    f = rep.lifted.form
    l1, l2 = chain.L_perp_forms()
    rep.multiplicity = multiplicity_along(f, l1, l2)
    rep.cone = is_cone(f).is_cone
    q = degree_prime or fflab.DEFAULT_PRIMES.get(r, 23)
    try:
        rep.degree = fflab.polar_degree(f, q, samples, seed)
    except (fflab.BadPrime, fflab.GuardExceeded) as exc:
        rep.stage_errors["degree"] = str(exc)
    return rep
