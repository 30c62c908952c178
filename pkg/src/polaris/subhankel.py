"""Sub-Hankel matrices, their determinants f^(r), and exact identity checks.

M^(r) is the r x r Hankel matrix in x_0..x_r with every entry below the
main anti-diagonal set to zero (entry (i, j) is x_{i+j} when i+j <= r).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .fields import QQ
from .matrix import PolyMatrix, det, maximal_minors, monomial_content, no_common_factor_probabilistic
from .poly import MPoly, poly_sum
from .polarity import hessian_matrix, hessian_values_mod_p
from .sampling import make_rng, random_points

MAX_ORDER = 10
SYMBOLIC_HESSIAN_MAX = 6


class OrderError(ValueError):
    pass


def xi(r: int) -> int:
    """+1 when r = 1, 2 mod 4 and -1 when r = 0, 3 mod 4."""
    return 1 if r % 4 in (1, 2) else -1


def subhankel_matrix(variables: list[MPoly]) -> PolyMatrix:
    """Sub-Hankel matrix of order len(variables)-1 on the given variables."""
    r = len(variables) - 1
    zero = MPoly.zero(variables[0].nvars, variables[0].field)
    return PolyMatrix([[variables[i + j] if i + j <= r else zero for j in range(r)] for i in range(r)])


def presentation_matrix(r: int, i: int) -> PolyMatrix:
    """The (i+1) x i matrix Phi^[i] presenting the partials f_0..f_i (divided by their gcd)."""
    xs = MPoly.gens(r + 1)
    zero = MPoly.zero(r + 1)
    col = [xs[r - i + k].scale(Fraction(2 * i - k, i)) for k in range(i)] + [xs[r]]
    if i == 1:
        return PolyMatrix([[c] for c in col])
    inner = presentation_matrix(r, i - 1)
    rows = []
    for k in range(i + 1):
        tail = [inner[k, j] for j in range(i - 1)] if k < i else [zero] * (i - 1)
        rows.append([col[k]] + tail)
    return PolyMatrix(rows)


@dataclass
class SubHankelBundle:
    r: int
    M: PolyMatrix
    f: MPoly
    phi: list  # phi[j] = f^(j)(x_{r-j}, .., x_r), phi[0] = 1
    Phi: dict  # Phi[i] for i = 1..r-1
    _partials: Optional[list] = None

    @property
    def partials(self) -> list[MPoly]:
        if self._partials is None:
            self._partials = [self.f.diff(i) for i in range(self.r + 1)]
        return self._partials


def build(r: int) -> SubHankelBundle:
    if not 2 <= r <= MAX_ORDER:
        raise OrderError(f"sub-Hankel order must be in 2..{MAX_ORDER}, got {r}")
    xs = MPoly.gens(r + 1)
    M = subhankel_matrix(xs)
    f = det(M)
    phi = [MPoly.const(1, r + 1)]
    for j in range(1, r):
        phi.append(det(subhankel_matrix(xs[r - j:])))
    Phi = {i: presentation_matrix(r, i) for i in range(1, r)}
    return SubHankelBundle(r, M, f, phi, Phi)


# Lemma checks

@dataclass
class LemmaReport:
    r: int
    part_i_ok: bool = True
    part_ii_gcd_ok: bool = True
    part_ii_cofactor_free_ok: bool = True
    part_iii_a_ok: bool = True
    part_iii_b_ok: bool = True
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "part_i": self.part_i_ok,
            "part_ii_gcd": self.part_ii_gcd_ok,
            "part_ii_cofactor_free": self.part_ii_cofactor_free_ok,
            "part_iii_a": self.part_iii_a_ok,
            "part_iii_b": self.part_iii_b_ok,
            "failures": [[name, str(w)] for name, w in self.failures],
        }


def verify_lemma(b: SubHankelBundle, seed: int = 0) -> LemmaReport:
    r = b.r
    n = r + 1
    xs = MPoly.gens(n)
    fs = b.partials
    rep = LemmaReport(r)

    def fail(flag: str, name: str, witness):
        setattr(rep, flag, False)
        rep.failures.append((name, witness))

    # (i) partials of f through those of phi^(r-1)
    sign = -1 if r % 2 else 1
    phi_r1 = b.phi[r - 1]
    for i in range(r - 1):
        diff = fs[i] - (xs[r] * phi_r1.diff(i + 1)).scale(sign)
        if diff:
            fail("part_i_ok", f"i:{i}", diff)

    # (ii) support, gcd x_r^{r-i-1}, nothing else in common
    for i in range(r):
        group = fs[: i + 1]
        allowed = set(range(r - i, n))
        for k, g in enumerate(group):
            if not g.support_vars() <= allowed:
                fail("part_ii_gcd_ok", f"ii_support:{i}:{k}", g)
        content = monomial_content(group)
        expected = tuple(r - i - 1 if v == r else 0 for v in range(n))
        if content != expected:
            fail("part_ii_gcd_ok", f"ii_gcd:{i}", MPoly.monomial(content))
            continue
        reduced = [g.div_monomial(content) for g in group]
        if not no_common_factor_probabilistic(reduced, trials=max(8, 2 * n), seed=seed + i):
            fail("part_ii_cofactor_free_ok", f"ii_cofactor:{i}", reduced[0])

    # (iii-a) x_r f_i = -sum_{k<i} (2i-k)/i x_{r-i+k} f_k
    for i in range(1, r):
        rhs = poly_sum(((xs[r - i + k] * fs[k]).scale(Fraction(-(2 * i - k), i)) for k in range(i)), n)
        diff = xs[r] * fs[i] - rhs
        if diff:
            fail("part_iii_a_ok", f"iii_a:{i}", diff)

    # (iii-b) x_r f_r = sum_{k<=r-2} (r-1-k) x_k f_k
    rhs = poly_sum(((xs[k] * fs[k]).scale(r - 1 - k) for k in range(r - 1)), n)
    diff = xs[r] * fs[r] - rhs
    if diff:
        fail("part_iii_b_ok", "iii_b", diff)
    return rep


# presentation matrix minors

@dataclass
class MinorReport:
    r: int
    i: int
    delta1: MPoly
    delta2: MPoly
    delta1_ok: bool
    delta2_coprime_to_xr: bool
    delta2_coeff: object
    delta2_coeff_ok: bool

    @property
    def ok(self) -> bool:
        return self.delta1_ok and self.delta2_coprime_to_xr and self.delta2_coeff_ok

    def to_json(self) -> dict:
        return {
            "r": self.r, "i": self.i,
            "delta1": self.delta1.to_str(), "delta2": self.delta2.to_str(),
            "delta1_is_pm_xr_pow_i": self.delta1_ok,
            "xr_does_not_divide_delta2": self.delta2_coprime_to_xr,
            "delta2_coeff_x_rm1_pow_i": str(self.delta2_coeff),
            "delta2_coeff_is_pm_i_plus_1": self.delta2_coeff_ok,
        }


def minor_checks(b: SubHankelBundle, i: int) -> MinorReport:
    r = b.r
    if not 1 <= i <= r - 1:
        raise OrderError(f"i must be in 1..{r - 1}")
    Phi = b.Phi[i]
    d1 = det(Phi.delete_row(0))
    d2 = det(Phi.delete_row(i))
    xr_pow = tuple(i if v == r else 0 for v in range(r + 1))
    d1_ok = len(d1) == 1 and d1.coeff(xr_pow) in (1, -1)
    coprime = any(e[r] == 0 for e in d2.terms)
    c = d2.coeff(tuple(i if v == r - 1 else 0 for v in range(r + 1)))
    return MinorReport(r, i, d1, d2, d1_ok, coprime, c, c in (i + 1, -(i + 1)))


@dataclass
class HilbertBurchReport:
    r: int
    i: int
    ok: bool
    scalar: object
    syzygy_ok: bool
    convention: str = "minor_j = (-1)^j det(Phi without row j) matched to f_j / x_r^(r-i-1), same j"
    gap: str = "linear-type and G_infinity codimension conditions not checked (need Groebner bases)"
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"r": self.r, "i": self.i, "ok": self.ok, "scalar": str(self.scalar),
                "syzygy_ok": self.syzygy_ok, "convention": self.convention, "gap": self.gap,
                "failures": [[n, str(w)] for n, w in self.failures]}


def hilbert_burch_check(b: SubHankelBundle, i: int) -> HilbertBurchReport:
    r = b.r
    if not 1 <= i <= r - 1:
        raise OrderError(f"i must be in 1..{r - 1}")
    Phi = b.Phi[i]
    minors = maximal_minors(Phi)
    content = tuple(r - i - 1 if v == r else 0 for v in range(r + 1))
    failures = []
    try:
        gens = [g.div_monomial(content) for g in b.partials[: i + 1]]
    except ValueError as exc:
        return HilbertBurchReport(r, i, False, None, False, failures=[("division", str(exc))])
    # the columns of Phi are syzygies of the generators
    syz_ok = True
    for j in range(i):
        s = poly_sum((gens[k] * Phi[k, j] for k in range(i + 1)), r + 1)
        if s:
            syz_ok = False
            failures.append((f"syzygy:{j}", s))
    j0 = next((j for j, g in enumerate(gens) if g), None)
    lam = None
    if j0 is not None and minors[j0]:
        lam = QQ.div(minors[j0].leading_term()[1], gens[j0].leading_term()[1])
        for j, (m, g) in enumerate(zip(minors, gens)):
            if m != g.scale(lam):
                failures.append((f"minor:{j}", m - g.scale(lam)))
    else:
        failures.append(("minor", "no nonzero reference generator"))
    return HilbertBurchReport(r, i, not failures, lam, syz_ok, failures=failures)


# Hessian closed form

@dataclass
class HessianFormReport:
    r: int
    exponent: int
    c: object
    closed_form_ok: bool
    anti_triangular_ok: bool
    method: str

    @property
    def ok(self) -> bool:
        return self.closed_form_ok and self.anti_triangular_ok and self.c not in (None, 0)

    def to_json(self) -> dict:
        return {"r": self.r, "exponent": self.exponent, "c": str(self.c),
                "closed_form": self.closed_form_ok, "anti_triangular": self.anti_triangular_ok,
                "method": self.method}


def hessian_closed_form(b: SubHankelBundle, p: int = 32003, trials: int = 20, seed: int = 0) -> HessianFormReport:
    """h(f^(r)) = c x_r^{(r+1)(r-2)} and d^2 f / dx_i dx_j = 0 for i+j <= r-1."""
    r = b.r
    e = (r + 1) * (r - 2)
    H = hessian_matrix(b.f)
    anti = all(H[i, j].is_zero() for i in range(r + 1) for j in range(r + 1) if i + j <= r - 1)
    if r <= SYMBOLIC_HESSIAN_MAX:
        hd = det(H)
        mono = tuple(e if v == r else 0 for v in range(r + 1))
        ok = len(hd) == 1 and hd.coeff(mono) != 0
        c = hd.coeff(mono) if ok else None
        return HessianFormReport(r, e, c, ok, anti, "symbolic")
    pts = random_points(make_rng(seed, 5), trials, r + 1, p)
    dets = kernels.batch_det_mod_p(hessian_values_mod_p(b.f, pts, p), p)
    xr = np.array([pow(int(v), e, p) for v in pts[:, r]], dtype=np.int64)
    k = int(np.argmax(xr != 0))
    c = int(dets[k]) * pow(int(xr[k]), -1, p) % p
    ok = bool(((dets - c * xr) % p == 0).all()) and c != 0
    return HessianFormReport(r, e, c, ok, anti, f"probabilistic(p={p}, trials={trials}, seed={seed})")


@dataclass
class IrreducibilityReport:
    r: int
    degree_in_x0: int
    x0_coefficient: MPoly
    sign: Optional[int]
    xi: int

    @property
    def ok(self) -> bool:
        return self.degree_in_x0 == 1 and self.sign is not None

    def to_json(self) -> dict:
        return {"r": self.r, "degree_in_x0": self.degree_in_x0,
                "x0_coefficient": self.x0_coefficient.to_str(), "sign": self.sign, "xi": self.xi,
                "ok": self.ok}


def irreducibility_structure(b: SubHankelBundle) -> IrreducibilityReport:
    """f = s x_r^{r-1} x_0 + g with g free of x_0 and s = +-1."""
    r = b.r
    coeff = b.f.coefficient_in(0, 1)
    mono = tuple(r - 1 if v == r else 0 for v in range(r + 1))
    sign = None
    if len(coeff) == 1 and coeff.coeff(mono) in (1, -1):
        sign = int(coeff.coeff(mono))
    return IrreducibilityReport(r, b.f.degree_in(0), coeff, sign, xi(r))
