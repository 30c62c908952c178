"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a map from exponent tuples to nonzero coefficients in a
field (``QQ`` or ``GF(p)``).  Instances are treated as immutable.  The
canonical term order is graded reverse lexicographic, used for printing,
leading terms and iteration.

Text format::

    2*x1*x2*x3 - x0*x3^2 - x2^3

Coefficients are integers (or ``a/b`` for rationals), variables are
``x0 .. x{n-1}``, whitespace is ignored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from operator import add, sub
from typing import Iterable, Iterator, Sequence

from .fields import QQ, Number, PrimeField, RationalField, GF

Exp = tuple  # tuple[int, ...]


class PolyError(ValueError):
    """Structural error: mismatched variables/fields, bad indices."""


class PolyParseError(PolyError):
    pass


def grevlex_key(e: Sequence[int]):
    return (sum(e), tuple(-x for x in reversed(e)))


def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree d, in descending grevlex order."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], left: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    if nvars == 0:
        return [()] if d == 0 else []
    rec([], d, nvars)
    out.sort(key=grevlex_key, reverse=True)
    return out


class MPoly:
    __slots__ = ("nvars", "field", "terms", "_hash")

    def __init__(self, nvars: int, terms=None, field=QQ):
        self.nvars = nvars
        self.field = field
        clean = {}
        if terms:
            canon = field.canon
            for e, c in dict(terms).items():
                e = tuple(e)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise PolyError(f"bad exponent {e} for {nvars} variables")
                c = canon(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            clean = {e: canon(c) for e, c in clean.items() if canon(c)}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, field, terms: dict) -> "MPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def _from_accumulated(cls, nvars: int, field, acc: dict) -> "MPoly":
        canon = field.canon
        terms = {}
        for e, c in acc.items():
            c = canon(c)
            if c:
                terms[e] = c
        return cls._raw(nvars, field, terms)

    # constructors

    @classmethod
    def zero(cls, nvars: int, field=QQ) -> "MPoly":
        return cls._raw(nvars, field, {})

    @classmethod
    def const(cls, c: Number, nvars: int, field=QQ) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def var(cls, i: int, nvars: int, field=QQ) -> "MPoly":
        if not 0 <= i < nvars:
            raise PolyError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, field, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c: Number = 1, field=QQ) -> "MPoly":
        return cls(len(exp), {tuple(exp): c}, field)

    @classmethod
    def gens(cls, nvars: int, field=QQ) -> list["MPoly"]:
        return [cls.var(i, nvars, field) for i in range(nvars)]

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[tuple[int, ...], Number]]:
        """Terms in descending grevlex order."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Number]]:
        return iter(self.items())

    def leading_term(self) -> tuple[tuple[int, ...], Number]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def coeff(self, exp: Sequence[int]) -> Number:
        return self.terms.get(tuple(exp), 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def support_vars(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def constant_value(self) -> Number:
        return self.terms.get((0,) * self.nvars, 0)

    # arithmetic

    def _check(self, other: "MPoly"):
        if other.nvars != self.nvars:
            raise PolyError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        if other.field != self.field:
            raise PolyError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.nvars, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) + c
        return MPoly._from_accumulated(self.nvars, self.field, acc)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._from_accumulated(self.nvars, self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, 0) - c
        return MPoly._from_accumulated(self.nvars, self.field, acc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        acc: dict = {}
        get = acc.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(add, e1, e2))
                acc[e] = get(e, 0) + c1 * c2
        return MPoly._from_accumulated(self.nvars, self.field, acc)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "MPoly":
        c = self.field.canon(c)
        if not c:
            return MPoly.zero(self.nvars, self.field)
        return MPoly._from_accumulated(self.nvars, self.field, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "MPoly":
        if not isinstance(k, int) or k < 0:
            raise PolyError("only non-negative integer powers")
        result = MPoly.const(1, self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(other, self.nvars, self.field)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.field, frozenset(self.terms.items())))
        return self._hash

    def __reduce__(self):
        return (MPoly._raw, (self.nvars, self.field, self.terms))

    # calculus and substitution

    def diff(self, i: int) -> "MPoly":
        """Formal partial derivative with respect to x_i.

        Over F_p this is only allowed when p exceeds the degree, so that
        derivatives behave as in characteristic zero.
        """
        if not 0 <= i < self.nvars:
            raise PolyError(f"variable index {i} out of range for {self.nvars} variables")
        if isinstance(self.field, PrimeField) and self.field.p <= self.degree():
            raise PolyError(f"p={self.field.p} does not exceed degree {self.degree()}")
        acc = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                acc[ne] = c * k
        return MPoly._from_accumulated(self.nvars, self.field, acc)

    def evaluate(self, point: Sequence[Number]) -> Number:
        if len(point) != self.nvars:
            raise PolyError("point has wrong length")
        field = self.field
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x**k
            total += v
        return field.canon(total)

    def compose(self, subs: Sequence["MPoly"]) -> "MPoly":
        """Substitute x_i -> subs[i]; all subs share variables and field."""
        if len(subs) != self.nvars:
            raise PolyError("need one substitution per variable")
        target = subs[0]
        powers: list[dict[int, MPoly]] = [{0: MPoly.const(1, target.nvars, target.field)} for _ in subs]

        def pw(i: int, k: int) -> MPoly:
            cache = powers[i]
            if k not in cache:
                j = max(x for x in cache if x < k)
                val = cache[j]
                for _ in range(k - j):
                    val = val * subs[i]
                    j += 1
                    cache[j] = val
            return cache[k]

        acc = MPoly.zero(target.nvars, target.field)
        for e, c in self.terms.items():
            t = MPoly.const(c, target.nvars, target.field)
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k)
            acc = acc + t
        return acc

    def substitute(self, values: dict[int, Number]) -> "MPoly":
        """Set some variables to constants, keeping the number of variables."""
        acc: dict = {}
        for e, c in self.terms.items():
            v = c
            ne = list(e)
            for i, x in values.items():
                if e[i]:
                    v = v * x ** e[i]
                    ne[i] = 0
            ne = tuple(ne)
            acc[ne] = acc.get(ne, 0) + v
        return MPoly._from_accumulated(self.nvars, self.field, acc)

    def coefficient_in(self, i: int, k: int) -> "MPoly":
        """Coefficient of x_i^k, as a polynomial free of x_i."""
        acc = {}
        for e, c in self.terms.items():
            if e[i] == k:
                acc[e[:i] + (0,) + e[i + 1:]] = c
        return MPoly._raw(self.nvars, self.field, acc)

    def div_monomial(self, exp: Sequence[int]) -> "MPoly":
        """Exact division by the monomial x^exp."""
        exp = tuple(exp)
        acc = {}
        for e, c in self.terms.items():
            ne = tuple(map(sub, e, exp))
            if min(ne, default=0) < 0:
                raise PolyError(f"monomial {exp} does not divide the term {e}")
            acc[ne] = c
        return MPoly._raw(self.nvars, self.field, acc)

    def _exact_div(self, divisor: "MPoly") -> "MPoly":
        """Exact division; raises if the remainder is nonzero.

        Internal helper for fraction-free elimination, not a general
        division algorithm.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if len(divisor.terms) == 1:
            (de, dc), = divisor.terms.items()
            q = self.div_monomial(de)
            if dc == 1:
                return q
            return q.scale(self.field.inv(dc))
        field = self.field
        le, lc = divisor.leading_term()
        lc_inv = field.inv(lc)
        rem = dict(self.terms)
        quot: dict = {}
        dterms = list(divisor.terms.items())
        while rem:
            e = max(rem, key=grevlex_key)
            c = rem[e]
            qe = tuple(map(sub, e, le))
            if min(qe, default=0) < 0:
                raise PolyError("inexact polynomial division")
            qc = field.canon(c * lc_inv)
            quot[qe] = qc
            for de, dc in dterms:
                te = tuple(map(add, qe, de))
                v = field.canon(rem.get(te, 0) - qc * dc)
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return MPoly._raw(self.nvars, field, quot)

    # change of field

    def reduce_mod(self, p: int) -> "MPoly":
        """Image over F_p of a rational polynomial."""
        field = GF(p)
        if isinstance(self.field, PrimeField):
            if self.field.p != p:
                raise PolyError("cannot change prime")
            return self
        acc = {}
        for e, c in self.terms.items():
            v = QQ.to_mod(c, p)
            if v:
                acc[e] = v
        return MPoly._raw(self.nvars, field, acc)

    def to_field(self, field) -> "MPoly":
        if isinstance(field, RationalField):
            if not isinstance(self.field, RationalField):
                raise PolyError("cannot lift from F_p implicitly")
            return self
        return self.reduce_mod(field.p)

    def monic(self) -> "MPoly":
        """Scale so the grevlex-leading coefficient is 1."""
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading_term()[1]))

    def homogeneous_component(self, d: int) -> "MPoly":
        return MPoly._raw(self.nvars, self.field, {e: c for e, c in self.terms.items() if sum(e) == d})

    # text format

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.items()):
            neg = c < 0
            mag = -c if neg else c
            mono = "*".join(
                f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    __str__ = to_str

    def __repr__(self) -> str:
        return f"MPoly({self.to_str()!r}, nvars={self.nvars}, field={self.field!r})"


_TERM_RE = re.compile(
    r"""([+-])?                           # sign
        (?:(\d+(?:/\d+)?)(?:\*|(?=$|[+-])))?   # coefficient
        (x\d+(?:\^\d+)?(?:\*x\d+(?:\^\d+)?)*)?  # monomial
    """,
    re.X,
)
_VAR_RE = re.compile(r"x(\d+)(?:\^(\d+))?")


def parse(text: str, nvars: int | None = None, field=QQ) -> MPoly:
    """Parse the text format; ``nvars`` defaults to 1 + highest index seen."""
    s = "".join(str(text).split())
    if not s:
        raise PolyParseError("empty polynomial text")
    terms: list[tuple[dict[int, int], Number]] = []
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise PolyParseError(f"cannot parse polynomial near {s[pos:pos + 12]!r}")
        if pos > 0 and m.group(1) is None:
            raise PolyParseError(f"missing operator near {s[pos:pos + 12]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef: Number = Fraction(m.group(2)) if m.group(2) else 1
        exps: dict[int, int] = {}
        if m.group(3):
            for vm in _VAR_RE.finditer(m.group(3)):
                i = int(vm.group(1))
                exps[i] = exps.get(i, 0) + int(vm.group(2) or 1)
        terms.append((exps, sign * coef))
        pos = m.end()
    top = max((i for e, _ in terms for i in e), default=-1)
    if nvars is None:
        nvars = top + 1
    elif top >= nvars:
        raise PolyParseError(f"variable x{top} exceeds nvars={nvars}")
    acc: dict = {}
    for exps, c in terms:
        e = [0] * nvars
        for i, k in exps.items():
            e[i] = k
        e = tuple(e)
        acc[e] = acc.get(e, 0) + c
    return MPoly(nvars, acc, field)


def gens(nvars: int, field=QQ) -> list[MPoly]:
    return MPoly.gens(nvars, field)


def poly_sum(polys: Iterable[MPoly], nvars: int, field=QQ) -> MPoly:
    acc: dict = {}
    for q in polys:
        for e, c in q.terms.items():
            acc[e] = acc.get(e, 0) + c
    return MPoly._from_accumulated(nvars, field, acc)
