"""Polynomial matrices, determinants and exact linear algebra over a field."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

from .fields import QQ, Number
from .poly import MPoly, PolyError


class InconclusiveError(RuntimeError):
    """A probabilistic procedure could not reach a verdict."""


class PolyMatrix:
    __slots__ = ("rows", "cols", "entries", "nvars", "field")

    def __init__(self, rows: Sequence[Sequence[MPoly]]):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise PolyError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise PolyError("ragged matrix rows")
        first = rows[0][0]
        for r in rows:
            for e in r:
                if e.nvars != first.nvars or e.field != first.field:
                    raise PolyError("matrix entries must share variables and field")
        self.rows = len(rows)
        self.cols = ncols
        self.entries = [e for r in rows for e in r]
        self.nvars = first.nvars
        self.field = first.field

    @classmethod
    def from_constants(cls, values: Sequence[Sequence[Number]], nvars: int = 1, field=QQ) -> "PolyMatrix":
        return cls([[MPoly.const(v, nvars, field) for v in row] for row in values])

    @classmethod
    def from_function(cls, rows: int, cols: int, fn: Callable[[int, int], MPoly]) -> "PolyMatrix":
        return cls([[fn(i, j) for j in range(cols)] for i in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> MPoly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_list(self) -> list[list[MPoly]]:
        c = self.cols
        return [self.entries[i * c:(i + 1) * c] for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self[i, j] for j in cols] for i in rows])

    def delete_row(self, i: int) -> "PolyMatrix":
        return self.submatrix([k for k in range(self.rows) if k != i], range(self.cols))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def map(self, fn: Callable[[MPoly], MPoly]) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in row] for row in self.row_list()])

    def evaluate(self, point: Sequence[Number]) -> list[list[Number]]:
        return [[e.evaluate(point) for e in row] for row in self.row_list()]

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        body = "; ".join(", ".join(e.to_str() for e in row) for row in self.row_list())
        return f"PolyMatrix([{body}])"


# determinants

def _det_cofactor(a: list[list[MPoly]], zero: MPoly) -> MPoly:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    # expand along the sparsest row
    k = min(range(n), key=lambda i: sum(1 for e in a[i] if e))
    total = zero
    for j, e in enumerate(a[k]):
        if not e:
            continue
        minor = [row[:j] + row[j + 1:] for i, row in enumerate(a) if i != k]
        term = e * _det_cofactor(minor, zero)
        total = total - term if (k + j) % 2 else total + term
    return total


def _det_bareiss(a: list[list[MPoly]], zero: MPoly) -> MPoly:
    n = len(a)
    a = [list(r) for r in a]
    sign = 1
    prev = None
    for k in range(n - 1):
        candidates = [i for i in range(k, n) if a[i][k]]
        if not candidates:
            return zero
        piv = min(candidates, key=lambda i: len(a[i][k]))
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                v = akk * a[i][j]
                if aik and a[k][j]:
                    v = v - aik * a[k][j]
                if prev is not None and v:
                    v = v._exact_div(prev)
                a[i][j] = v
            a[i][k] = zero
        prev = akk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def det(m: PolyMatrix, method: str = "auto") -> MPoly:
    """Exact determinant: cofactor expansion for n <= 4, Bareiss otherwise."""
    if m.rows != m.cols:
        raise PolyError(f"determinant of a non-square {m.rows}x{m.cols} matrix")
    if method == "auto":
        method = "cofactor" if m.rows <= 4 else "bareiss"
    zero = MPoly.zero(m.nvars, m.field)
    if method == "cofactor":
        return _det_cofactor(m.row_list(), zero)
    if method == "bareiss":
        return _det_bareiss(m.row_list(), zero)
    raise ValueError(f"unknown determinant method {method!r}")


def maximal_minors(m: PolyMatrix) -> list[MPoly]:
    """Signed maximal minors of an (n+1) x n matrix: (-1)^j det(m without row j)."""
    if m.rows != m.cols + 1:
        raise PolyError("expected an (n+1) x n matrix")
    out = []
    for j in range(m.rows):
        d = det(m.delete_row(j))
        out.append(-d if j % 2 else d)
    return out


# exact linear algebra over a coefficient field

def field_rref(rows: Sequence[Sequence[Number]], field=QQ) -> tuple[list[list[Number]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[field.canon(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.canon(x * inv) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                fac = a[i][c]
                a[i] = [field.canon(x - fac * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def field_rank(rows: Sequence[Sequence[Number]], field=QQ) -> int:
    return len(field_rref(rows, field)[1])


def field_nullspace(rows: Sequence[Sequence[Number]], ncols: int, field=QQ) -> list[list[Number]]:
    """Basis of {v : rows . v = 0}."""
    red, pivots = field_rref(rows, field) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = field.canon(-row[fc])
        basis.append(v)
    return basis


# gcd-type tests

def monomial_content(fs: Sequence[MPoly]) -> tuple[int, ...]:
    """Largest monomial dividing every input (componentwise minimum exponent)."""
    if not fs:
        raise PolyError("monomial_content of an empty list")
    if any(f.is_zero() for f in fs):
        raise PolyError("monomial_content of a zero polynomial")
    exps = [e for f in fs for e in f.terms]
    return tuple(min(col) for col in zip(*exps))


def _uni_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _uni_rem(a: list, b: list) -> list:
    a = list(a)
    lb = Fraction(b[-1])
    while len(a) >= len(b):
        q = a[-1] / lb
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        _uni_trim(a)
    return a


def _uni_gcd_degree(polys: list[list]) -> int:
    g: list = []
    for p in polys:
        p = _uni_trim([Fraction(c) for c in p])
        if not p:
            continue
        if not g:
            g = p
            continue
        a, b = g, p
        while b:
            a, b = b, _uni_rem(a, b)
        g = a
        if len(g) == 1:
            return 0
    return len(g) - 1 if g else -1


def _restrict(f: MPoly, free: int, values: Sequence[int]) -> list:
    coeffs: dict[int, Number] = {}
    for e, c in f.terms.items():
        v = c
        for i, k in enumerate(e):
            if k and i != free:
                v *= values[i] ** k
        coeffs[e[free]] = coeffs.get(e[free], 0) + v
    top = max(coeffs, default=-1)
    return [coeffs.get(k, 0) for k in range(top + 1)]


def no_common_factor_probabilistic(fs: Sequence[MPoly], trials: int = 8, seed: int = 0,
                                   bound: int = 1000) -> bool:
    """One-sided test that the inputs share no non-constant factor.

    Each trial keeps one variable free (cycling through a seeded
    permutation of all variables) and fixes the others to random nonzero
    integers in [-bound, bound]; the univariate restrictions must have a
    constant gcd.  Rational inputs only.
    """
    if not fs:
        raise PolyError("empty input")
    nvars = fs[0].nvars
    rng = random.Random(seed)
    order = list(range(nvars))
    rng.shuffle(order)
    informative = 0
    for t in range(trials):
        free = order[t % nvars]
        values = [rng.choice((-1, 1)) * rng.randint(1, bound) for _ in range(nvars)]
        restr = [_restrict(f, free, values) for f in fs]
        g = _uni_gcd_degree(restr)
        if g < 0:
            continue
        informative += 1
        if g > 0:
            return False
    if not informative:
        raise InconclusiveError("all restrictions vanished identically")
    return True


def linear_change(f: MPoly, matrix) -> MPoly:
    """Substitute x_i -> sum_j A[i][j] x_j for a constant invertible A."""
    if isinstance(matrix, PolyMatrix):
        if not matrix.is_constant():
            raise PolyError("linear change needs constant entries")
        values = [[e.constant_value() for e in row] for row in matrix.row_list()]
    else:
        values = [list(r) for r in matrix]
    n = f.nvars
    if len(values) != n or any(len(r) != n for r in values):
        raise PolyError(f"linear change needs a {n}x{n} matrix")
    if field_rank(values, f.field) < n:
        raise PolyError("singular linear change")
    xs = MPoly.gens(n, f.field)
    forms = []
    for row in values:
        acc: dict = {}
        for j, c in enumerate(row):
            if c:
                acc[xs[j].leading_term()[0]] = c
        forms.append(MPoly(n, acc, f.field))
    return f.compose(forms)
