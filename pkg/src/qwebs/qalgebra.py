"""Exact arithmetic in Z[q, q^-1], its fraction field, and q-combinatorics.

``LaurentPoly`` is the scalar type used everywhere.  ``RatFunc`` only shows
up as the output of linear algebra (span membership, null spaces), which is
delegated to sympy's exact ``DomainMatrix`` over QQ(q).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sympy import QQ, ZZ, symbols
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

__all__ = [
    "LaurentPoly",
    "RatFunc",
    "NOT_IN_SPAN",
    "ONE",
    "ZERO",
    "Q",
    "qpow",
    "qint",
    "qbinom",
    "bar",
    "eval_at",
    "in_span",
    "nullspace",
    "rank",
]


class LaurentPoly:
    """Element of Z[q, q^-1] stored as a sparse exponent -> coefficient map."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            clean: dict[int, int] = {}
        elif isinstance(terms, int):
            clean = {0: terms} if terms else {}
        else:
            clean = {int(e): int(c) for e, c in terms.items() if c}
        self._terms = tuple(sorted(clean.items()))
        self._hash = None

    # -- construction helpers -------------------------------------------
    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPoly:
        return cls({exponent: coeff})

    @classmethod
    def coerce(cls, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- accessors ---------------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def coeff(self, exponent: int) -> int:
        return dict(self._terms).get(exponent, 0)

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return self._terms[0][0]

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return self._terms[-1][0]

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other) -> LaurentPoly:
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms:
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms})

    def __sub__(self, other) -> LaurentPoly:
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> LaurentPoly:
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if self.is_monomial():
                (e, c), = self._terms
                if c in (1, -1):
                    return LaurentPoly({-e * -k: c ** (-k)})
            raise ValueError("only unit monomials can be inverted")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by q^k."""
        return LaurentPoly({e + k: c for e, c in self._terms})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- text / json ---------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (e, c) in enumerate(self._terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "q" if e == 1 else f"q^{e}"
                body = var if mag == 1 else f"{mag}{var}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in self._terms}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in obj.items()})


ZERO = LaurentPoly()
ONE = LaurentPoly(1)
Q = LaurentPoly.monomial(1)


def qpow(k: int, sign: int = 1) -> LaurentPoly:
    """The monomial sign * q^k."""
    return LaurentPoly.monomial(k, sign)


@lru_cache(maxsize=None)
def _qint_pos(n: int) -> LaurentPoly:
    return LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)})


def qint(n: int) -> LaurentPoly:
    """Balanced quantum integer [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    if n >= 0:
        return _qint_pos(n)
    return -_qint_pos(-n)


@lru_cache(maxsize=None)
def qbinom(m: int, k: int) -> LaurentPoly:
    """Balanced Gaussian binomial; zero unless 0 <= k <= m."""
    if k < 0 or k > m or m < 0:
        return ZERO
    if k == 0 or k == m:
        return ONE
    # [m k] = q^k [m-1 k] + q^{k-m} [m-1 k-1]
    return qbinom(m - 1, k).shift(k) + qbinom(m - 1, k - 1).shift(k - m)


def bar(p: LaurentPoly) -> LaurentPoly:
    """The involution q -> q^-1."""
    return LaurentPoly({-e: c for e, c in p.items()})


def eval_at(p: LaurentPoly, q0) -> Fraction:
    q0 = Fraction(q0)
    if q0 == 0:
        raise ZeroDivisionError("cannot evaluate a Laurent polynomial at q = 0")
    return sum((c * q0**e for e, c in p.items()), Fraction(0))


# ---------------------------------------------------------------------------
# fraction field

_q_sym = symbols("q")
_ZRING, _zq = ring("q", ZZ)
FIELD = QQ.frac_field(_q_sym)
_fq = FIELD.gens[0] if hasattr(FIELD, "gens") else FIELD.from_sympy(_q_sym)


def _to_poly(p: LaurentPoly, shift: int):
    """Integer polynomial q^shift * p (shift must clear negative exponents)."""
    out = _ZRING.zero
    for e, c in p.items():
        out += c * _zq ** (e + shift)
    return out


def _from_poly(poly, shift: int = 0) -> LaurentPoly:
    return LaurentPoly({m[0] + shift: int(c) for m, c in poly.terms()})


class RatFunc:
    """Reduced quotient num/den of Laurent polynomials.

    Normal form: gcd(num, den) is a unit, den has minimal exponent 0 and a
    positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = LaurentPoly.coerce(num)
        den = ONE if den is None else LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        s = -min(num.min_exp, den.min_exp)
        pn, pd = _to_poly(num, s), _to_poly(den, s)
        pn, pd = pn.cancel(pd)
        n2, d2 = _from_poly(pn), _from_poly(pd)
        lo = d2.min_exp
        n2, d2 = n2.shift(-lo), d2.shift(-lo)
        if d2.coeff(d2.max_exp) < 0:
            n2, d2 = -n2, -d2
        self.num, self.den = n2, d2

    def _field(self):
        return to_field(self.num) / to_field(self.den)

    @classmethod
    def from_field(cls, x) -> RatFunc:
        return cls(_from_poly(_ZRING.from_dict(_clear(x.numer))),
                   _from_poly(_ZRING.from_dict(_clear(x.denom))))

    def __add__(self, other):
        other = _as_rat(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) - self

    def __mul__(self, other):
        other = _as_rat(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero RatFunc")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rat(other) / self

    def __eq__(self, other):
        try:
            other = _as_rat(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_laurent(self) -> LaurentPoly | None:
        """The Laurent polynomial equal to this, if the denominator is a unit."""
        if self.den.is_monomial() and self.den.coeff(self.den.min_exp) == 1:
            return self.num.shift(-self.den.min_exp)
        return None

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _as_rat(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(LaurentPoly.coerce(x))


def _clear(p) -> dict:
    """Sparse QQ[q] element -> integer dict, dropping the common denominator."""
    from math import lcm

    d = 1
    for c in p.values():
        d = lcm(d, int(QQ.denom(c)))
    return {m: int(QQ.numer(c * d)) // int(QQ.denom(c * d)) for m, c in p.items()}


def to_field(x):
    """LaurentPoly or RatFunc -> element of sympy's QQ(q)."""
    if isinstance(x, RatFunc):
        return x._field()
    if isinstance(x, int):
        return FIELD(x)
    out = FIELD.zero
    for e, c in x.items():
        out += c * _fq**e
    return out


class _NotInSpan:
    def __repr__(self):
        return "NOT_IN_SPAN"

    def __bool__(self):
        return False


NOT_IN_SPAN = _NotInSpan()


def _matrix(columns: Sequence[Sequence], nrows: int) -> DomainMatrix:
    rows = [[to_field(col[i]) for col in columns] for i in range(nrows)]
    return DomainMatrix(rows, (nrows, len(columns)), FIELD)


def in_span(v: Sequence, basis: Sequence[Sequence]):
    """Exact solve of v = sum c_i basis_i over QQ(q).

    Returns the list of RatFunc coefficients (free variables set to zero) or
    NOT_IN_SPAN.
    """
    n = len(v)
    for b in basis:
        if len(b) != n:
            raise ValueError("all vectors must have the same length")
    if not basis:
        return [] if all(_is_zero(x) for x in v) else NOT_IN_SPAN
    aug = _matrix(list(basis) + [v], n)
    red, pivots = aug.rref()
    m = len(basis)
    if m in pivots:
        return NOT_IN_SPAN
    coeffs = [RatFunc(0)] * m
    rows = red.rep.to_ddm()
    for r, p in enumerate(pivots):
        coeffs[p] = RatFunc.from_field(rows[r][m])
    return coeffs


def _is_zero(x) -> bool:
    if isinstance(x, int):
        return x == 0
    return x.is_zero()


def rank(columns: Sequence[Sequence]) -> int:
    if not columns:
        return 0
    return len(_matrix(columns, len(columns[0])).rref()[1])


def nullspace(columns: Sequence[Sequence]) -> list[list[RatFunc]]:
    """Basis of {c : sum c_i columns_i = 0}, in reduced echelon form."""
    if not columns:
        return []
    mat = _matrix(columns, len(columns[0]))
    red, pivots = mat.rref()
    rows = red.rep.to_ddm()
    m = len(columns)
    free = [j for j in range(m) if j not in pivots]
    out = []
    for f in free:
        vec = [RatFunc(0)] * m
        vec[f] = RatFunc(1)
        for r, p in enumerate(pivots):
            vec[p] = -RatFunc.from_field(rows[r][f])
        out.append(vec)
    return out


def clear_denominators(vec: Iterable[RatFunc]) -> list[LaurentPoly]:
    """Scale a RatFunc vector to a primitive Laurent vector (up to unit)."""
    vec = list(vec)
    den = ONE
    for x in vec:
        if not x.is_zero():
            den = _lcm(den, x.den)
    out = [(x * den) for x in vec]
    lps = [x.as_laurent() if x.den == ONE else None for x in out]
    if any(p is None for p in lps):
        raise ArithmeticError("denominator clearing failed")
    return lps


def _lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    pa, pb = _to_poly(a, -a.min_exp), _to_poly(b, -b.min_exp)
    return _from_poly(pa.lcm(pb))
