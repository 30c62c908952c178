"""Gordan-Noether and Permutti polynomials: builders and invariant checks.

Both families have vanishing Hessian without being cones.  The core is the
coordinate subspace x_{t+1} = ... = x_r = 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .matrix import PolyMatrix, det, field_rank
from .poly import MPoly, PolyError, monomials_of_degree, parse
from .polarity import GaussImageResult, Hypersurface, gauss_image_dim, hessian
from .sampling import make_rng, small_nonzero

COEFF_BOUND = 5


class DegenerateSpecError(ValueError):
    """The requested construction is degenerate (zero form, empty core, impossible degree)."""


def random_form(nvars: int, variables: Sequence[int], degree: int, rng, bound: int = COEFF_BOUND) -> MPoly:
    """Dense form of the given degree in a subset of variables, coefficients in +-1..bound."""
    monos = monomials_of_degree(len(variables), degree)
    coeffs = small_nonzero(rng, len(monos), bound).tolist()
    terms = {}
    for mono, c in zip(monos, coeffs):
        e = [0] * nvars
        for v, k in zip(variables, mono):
            e[v] = k
        terms[tuple(e)] = c
    return MPoly(nvars, terms)


def core_multiplicity(h, t: int) -> int:
    """Multiplicity of V(f) at a general point of x_{t+1} = .. = x_r = 0."""
    f = h.f if isinstance(h, Hypersurface) else h
    if f.is_zero():
        raise DegenerateSpecError("zero polynomial")
    return min(sum(e[t + 1:]) for e in f.terms)


# Gordan-Noether

@dataclass
class GNSpec:
    r: int
    t: int
    m: int
    n: int
    d: int
    seed: int = 0
    h: Optional[list] = None      # t+1 forms in y_0..y_m
    psi: Optional[list] = None    # m+1 forms in x_{t+1}..x_r (as MPoly in x_0..x_r)
    a: Optional[list] = None      # t-m-1 rows of t+1 constants (one block per Q)
    P: Optional[list] = None      # biforms P_k in z_1..z_{t-m}, x_{t+1}..x_r

    @property
    def mu(self) -> int:
        return self.d // self.n

    def validate(self):
        r, t, m, n, d = self.r, self.t, self.m, self.n, self.d
        if r < 4 or not 2 <= t <= r - 2 or t < m + 1 or not 1 <= m <= r - t - 1:
            raise DegenerateSpecError(f"bad GN type (r,t,m)=({r},{t},{m})")
        if n < 1 or d <= n:
            raise DegenerateSpecError(f"need d > n >= 1, got n={n}, d={d}")
        if d - self.mu < 1:
            raise DegenerateSpecError("d - mu = 0: the core would not lie on V(f)")


def gn_degrees(m: int, n: int) -> tuple[int, int]:
    """(deg h, deg psi) with n = 1 + (m+1)(deg h - 1) deg psi; smallest deg psi wins."""
    if n == 1:
        return 1, 1
    if (n - 1) % (m + 1):
        raise DegenerateSpecError(f"n={n} is not 1 + (m+1)*k for m={m}")
    k = (n - 1) // (m + 1)
    return k + 1, 1


@dataclass
class GNResult:
    spec: GNSpec
    f: MPoly
    Q: list
    M: list  # M[l][i], coefficient of x_i in Q_l
    P: list  # biforms in (z_1..z_{t-m}, x_0..x_r)

    @property
    def hypersurface(self) -> Hypersurface:
        return Hypersurface(self.f)


def _compose_biforms(P: Sequence[MPoly], Q: Sequence[MPoly], nvars: int) -> MPoly:
    """Evaluate biforms P_k(z_1..z_s; x) at z = Q; z are the first s variables of each P_k."""
    s = len(Q)
    cache: dict = {}
    total = MPoly.zero(nvars)
    for Pk in P:
        for e, c in Pk.terms.items():
            term = MPoly(nvars, {tuple(e[s:]): c})
            for i in range(s):
                if e[i]:
                    if (i, e[i]) not in cache:
                        cache[(i, e[i])] = Q[i] ** e[i]
                    term = term * cache[(i, e[i])]
            total = total + term
    return total


def gn_build(spec: GNSpec) -> GNResult:
    spec.validate()
    r, t, m, n, d = spec.r, spec.t, spec.m, spec.n, spec.d
    nv = r + 1
    rng = make_rng(spec.seed, 100)
    dh, dpsi = gn_degrees(m, n)
    tail = list(range(t + 1, nv))
    ys = list(range(m + 1))
    h = spec.h or [random_form(m + 1, ys, dh, rng) for _ in range(t + 1)]
    psi = spec.psi or [random_form(nv, tail, dpsi, rng) for _ in range(m + 1)]
    s = t - m
    if spec.a is not None:
        a = spec.a
    else:
        a = [small_nonzero(rng, (t - m - 1, t + 1)).tolist() for _ in range(s)]
    xs = MPoly.gens(nv)
    # rows of partials dh_i/dy_j evaluated at y = psi
    dmat = [[h[i].diff(j).compose(psi) for i in range(t + 1)] for j in range(m + 1)]
    Q, M = [], []
    for ell in range(s):
        const_rows = [[MPoly.const(c, nv) for c in row] for row in a[ell]]
        mat = PolyMatrix([xs[: t + 1]] + dmat + const_rows)
        minors = []
        for i in range(t + 1):
            sub = mat.submatrix(range(1, t + 1), [j for j in range(t + 1) if j != i])
            cof = det(sub)
            minors.append(-cof if i % 2 else cof)
        q = MPoly.zero(nv)
        for i in range(t + 1):
            q = q + minors[i] * xs[i]
        if q.is_zero():
            raise DegenerateSpecError(f"Q_{ell + 1} vanishes identically")
        if q.degree() != n:
            raise DegenerateSpecError(f"Q_{ell + 1} has degree {q.degree()}, expected {n}")
        Q.append(q)
        M.append(minors)
    # biforms in (z_1..z_s, x_0..x_r); z_i are variables 0..s-1
    nb = s + nv
    if spec.P is not None:
        P = spec.P
    else:
        P = []
        for k in range(spec.mu + 1):
            zpart = random_form(nb, list(range(s)), k, rng) if k else MPoly.const(1, nb)
            xpart = random_form(nb, [s + v for v in tail], d - k * n, rng)
            P.append(zpart * xpart if k else xpart)
    f = _compose_biforms(P, Q, nv)
    if f.is_zero():
        raise DegenerateSpecError("f vanishes identically")
    return GNResult(spec, f, Q, M, P)


# Permutti

@dataclass
class PermuttiSpec:
    r: int
    t: int
    n: int
    d: int
    seed: int = 0
    M: Optional[list] = None  # t+1 forms of degree n-1 in x_{t+1}..x_r
    P: Optional[list] = None  # P_k of degree d-kn in x_{t+1}..x_r

    @property
    def mu(self) -> int:
        return self.d // self.n

    def validate(self):
        r, t, n, d = self.r, self.t, self.n, self.d
        if r < 2 or not 1 <= t <= r - 2:
            raise DegenerateSpecError(f"bad Permutti type (r,t)=({r},{t})")
        if n < 1 or d <= n:
            raise DegenerateSpecError(f"need d > n >= 1, got n={n}, d={d}")
        if d - self.mu < 1:
            raise DegenerateSpecError("d - mu = 0: the core would not lie on V(f)")


@dataclass
class PermuttiResult:
    spec: PermuttiSpec
    f: MPoly
    Q: MPoly
    M: list
    composed: bool  # M_i built as forms in t linear forms (needed when r > 2t)
    reseeds: int = 0

    @property
    def hypersurface(self) -> Hypersurface:
        return Hypersurface(self.f)


MAX_RESEEDS = 5


def _linear_rank(forms: Sequence[MPoly]) -> int:
    monos = sorted({e for g in forms for e in g.terms})
    return field_rank([[g.coeff(e) for e in monos] for g in forms])


def permutti_build(spec: PermuttiSpec) -> PermuttiResult:
    """Build f = sum_k Q^k P_k.

    Seed-driven M are drawn again (up to MAX_RESEEDS times) when they come
    out less linearly independent than the type allows, since such draws
    produce cones that a general member of the family is not.
    """
    spec.validate()
    r, t, n, d = spec.r, spec.t, spec.n, spec.d
    nv = r + 1
    tail = list(range(t + 1, nv))
    composed = r > 2 * t and spec.M is None
    reseeds = 0
    while True:
        rng = make_rng(spec.seed, 200 + reseeds)
        if spec.M is not None:
            M = list(spec.M)
            break
        if not composed:
            # fewer variables than forms: algebraic dependence is automatic
            M = [random_form(nv, tail, n - 1, rng) for _ in range(t + 1)]
            room = len(monomials_of_degree(r - t, n - 1))
        else:
            # t+1 forms in t linear forms are algebraically dependent
            lin = [random_form(nv, tail, 1, rng) for _ in range(t)]
            G = [random_form(t, list(range(t)), n - 1, rng) for _ in range(t + 1)]
            M = [g.compose(lin) for g in G]
            room = len(monomials_of_degree(t, n - 1))
        if _linear_rank(M) == min(t + 1, room) or reseeds >= MAX_RESEEDS:
            break
        reseeds += 1
    xs = MPoly.gens(nv)
    Q = MPoly.zero(nv)
    for i in range(t + 1):
        Q = Q + M[i] * xs[i]
    if Q.is_zero():
        raise DegenerateSpecError("Q vanishes identically")
    P = spec.P if spec.P is not None else [random_form(nv, tail, d - k * n, rng) for k in range(spec.mu + 1)]
    f = MPoly.zero(nv)
    qk = MPoly.const(1, nv)
    for k, Pk in enumerate(P):
        if k:
            qk = qk * Q
        f = f + qk * Pk
    if f.is_zero():
        raise DegenerateSpecError("f vanishes identically")
    return PermuttiResult(spec, f, Q, M, composed, reseeds)


def gn_as_permutti(res: GNResult) -> PermuttiSpec:
    """Explicit Permutti data for a GN polynomial of type (r,t,t-1,n)."""
    s = res.spec
    if s.m != s.t - 1:
        raise DegenerateSpecError("only type (r,t,t-1,n) is a Permutti polynomial")
    nv = s.r + 1
    # a single z variable: P_k(z; x) = z^k P'_k(x)
    P = [MPoly(nv, {tuple(e[1:]): c for e, c in B.terms.items()}) for B in res.P]
    return PermuttiSpec(s.r, s.t, s.n, s.d, s.seed, M=list(res.M[0]), P=P)


# checks

def z_expected(r: int, t: int) -> int:
    return min(r - 1, 2 * (r - t) - 1)


def v_expected(r: int, t: int) -> int:
    return min(r - 2, 2 * (r - t - 1))


@dataclass
class ZVReport:
    r: int
    t: int
    z: int
    v: int
    z_expected: int
    v_expected: int
    hessian: dict
    gauss: dict

    @property
    def z_ok(self) -> bool:
        return self.z == self.z_expected

    @property
    def v_ok(self) -> bool:
        return self.v == self.v_expected

    @property
    def ok(self) -> bool:
        return self.z_ok and self.v_ok

    def to_json(self) -> dict:
        return {"r": self.r, "t": self.t, "z": self.z, "z_expected": self.z_expected, "v": self.v,
                "v_expected": self.v_expected, "z_ok": self.z_ok, "v_ok": self.v_ok,
                "hessian": self.hessian, "gauss": self.gauss}


def z_and_v_check(h, spec: PermuttiSpec, p_hessian: int = 32003, p_gauss: int = 101,
                  trials: int = 8, seed: int = 0) -> ZVReport:
    h = h if isinstance(h, Hypersurface) else Hypersurface(h)
    rep = hessian(h, "probabilistic", p=p_hessian, trials=trials, seed=seed)
    g: GaussImageResult = gauss_image_dim(h, p=p_gauss, seed=seed)
    return ZVReport(spec.r, spec.t, rep.z, g.v, z_expected(spec.r, spec.t), v_expected(spec.r, spec.t),
                    rep.to_json(), {"v": g.v, "points": g.smooth_points, "ranks": g.rank_histogram,
                                    "p": g.p, "seed": g.seed})


def load_spec(text: str):
    """Parse a JSON spec: {type: gn|permutti, r, t, m?, n, d, seed} with optional explicit forms."""
    data = json.loads(text)
    kind = data.get("type")
    nv = data["r"] + 1

    def forms(key, nvars):
        if key not in data:
            return None
        return [parse(s, nvars) for s in data[key]]

    if kind == "gn":
        s = data["t"] - data["m"]
        return GNSpec(data["r"], data["t"], data["m"], data["n"], data["d"], data.get("seed", 0),
                      h=forms("h", data["m"] + 1), psi=forms("psi", nv), a=data.get("a"),
                      P=forms("P", s + nv))
    if kind == "permutti":
        return PermuttiSpec(data["r"], data["t"], data["n"], data["d"], data.get("seed", 0),
                            M=forms("M", nv), P=forms("P", nv))
    raise PolyError(f"unknown spec type {kind!r}")
