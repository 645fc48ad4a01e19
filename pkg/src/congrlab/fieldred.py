"""Arithmetic in Q(a) = Q[x]/(m) and reduction modulo primes above ell.

Polynomials are coefficient tuples in ascending degree order, so
``(188, -90, 0, 1)`` is x^3 - 90x + 188. Primes above ell are identified
with the monic irreducible factors g of m mod ell; an element is reduced
by substituting a -> x in F_ell[x]/(g).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .errors import (
    BadParameters,
    DenominatorNotInvertible,
    MismatchedField,
    UnsupportedDegree,
)

Poly = Tuple[int, ...]


def _trim(c: Sequence[int]) -> List[int]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def poly_mod_ell(c: Iterable[int], ell: int) -> Poly:
    return tuple(_trim([x % ell for x in c]))


def poly_mul(a: Sequence[int], b: Sequence[int], ell: int) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_mod_ell(out, ell)


def poly_divmod(a: Sequence[int], g: Sequence[int], ell: int) -> Tuple[Poly, Poly]:
    """Divide a by the monic polynomial g over F_ell."""
    a = [x % ell for x in a]
    dg = len(g) - 1
    if len(a) - 1 < dg:
        return (0,), poly_mod_ell(a, ell)
    q = [0] * (len(a) - dg)
    for i in range(len(a) - 1, dg - 1, -1):
        c = a[i]
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                a[i - dg + j] = (a[i - dg + j] - c * g[j]) % ell
    return poly_mod_ell(q, ell), poly_mod_ell(a[:dg] or [0], ell)


def poly_eval(c: Sequence[int], x: int, ell: int) -> int:
    acc = 0
    for coef in reversed(c):
        acc = (acc * x + coef) % ell
    return acc


@dataclass(frozen=True)
class NumberField:
    """Q[x]/(minpoly) for a monic integer polynomial (ascending coefficients)."""

    minpoly: Poly

    def __post_init__(self):
        mp = tuple(int(c) for c in self.minpoly)
        if len(mp) < 2 or mp[-1] != 1:
            raise BadParameters("minimal polynomial must be monic of degree >= 1")
        object.__setattr__(self, "minpoly", mp)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def __call__(self, coeffs) -> "NumberFieldElement":
        return NumberFieldElement(self, coeffs)

    def gen(self) -> "NumberFieldElement":
        return self([0, 1]) if self.degree > 1 else self([-self.minpoly[0]])

    def zero(self) -> "NumberFieldElement":
        return self([0])

    def one(self) -> "NumberFieldElement":
        return self([1])


class NumberFieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = _reduce(field, [Fraction(c) for c in coeffs])

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise MismatchedField("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NumberFieldElement(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, [a * other for a in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = [Fraction(0)] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return NumberFieldElement(self.field, prod)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NumberFieldElement(self.field, [other])
        if not isinstance(other, NumberFieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})" + ("" if i == 0 else "*a" if i == 1 else f"*a^{i}"))
        return " + ".join(terms) or "0"


def _reduce(field: NumberField, c: List[Fraction]) -> Tuple[Fraction, ...]:
    m = field.minpoly
    d = field.degree
    for i in range(len(c) - 1, d - 1, -1):
        t = c[i]
        if t:
            for j in range(d + 1):
                c[i - d + j] -= t * m[j]
    c = c[:d] + [Fraction(0)] * (d - len(c))
    return tuple(c)


@dataclass(frozen=True)
class PrimeIdealFactor:
    ell: int
    g: Poly
    residue_degree: int
    multiplicity: int

    def describe(self) -> str:
        return f"({self.ell}, {format_poly(self.g)})"


@dataclass(frozen=True)
class ResidueElement:
    """An element of F_ell[x]/(g), stored as ``deg g`` coefficients."""

    ell: int
    g: Poly
    poly: Poly

    def _check(self, other: "ResidueElement"):
        if self.ell != other.ell or self.g != other.g:
            raise MismatchedField("residue elements live in different fields")

    def __add__(self, other):
        self._check(other)
        return _residue(self.ell, self.g, [a + b for a, b in zip(self.poly, other.poly)])

    def __mul__(self, other):
        self._check(other)
        return _residue(self.ell, self.g, poly_mul(self.poly, other.poly, self.ell))

    def is_zero(self) -> bool:
        return not any(self.poly)


def _residue(ell: int, g: Poly, c: Sequence[int]) -> ResidueElement:
    _, r = poly_divmod(c, g, ell)
    d = len(g) - 1
    r = tuple(r) + (0,) * (d - len(r))
    return ResidueElement(ell, g, r[:d])


def format_poly(c: Sequence[int], var: str = "x") -> str:
    terms = []
    for i in range(len(c) - 1, -1, -1):
        a = c[i]
        if a == 0 and len(c) > 1:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if mono and a == 1:
            terms.append(mono)
        elif mono:
            terms.append(f"{a}*{mono}")
        else:
            terms.append(str(a))
    return " + ".join(terms)


def factor_minpoly_mod(m: Sequence[int], ell: int) -> List[PrimeIdealFactor]:
    """Factor the monic m (degree <= 4) over F_ell into irreducibles.

    Linear factors come from an exhaustive root search; whatever remains has
    no roots and is split by trial division against every monic quadratic.
    """
    m = tuple(int(c) for c in m)
    deg = len(m) - 1
    if deg > 4:
        raise UnsupportedDegree(f"degree {deg} > 4")
    if deg < 1 or m[-1] != 1:
        raise BadParameters("minimal polynomial must be monic of degree >= 1")
    f = poly_mod_ell(m, ell)
    found: List[Tuple[Poly, int]] = []
    for r in range(ell):
        mult = 0
        while len(f) > 1 and poly_eval(f, r, ell) == 0:
            f, _ = poly_divmod(f, ((-r) % ell, 1), ell)
            mult += 1
        if mult:
            found.append((((-r) % ell, 1), mult))
        if len(f) == 1:
            break
    rest = len(f) - 1
    if rest in (2, 3):
        found.append((f, 1))
    elif rest == 4:
        split = None
        for b in range(ell):
            for c in range(ell):
                q, r = poly_divmod(f, (c, b, 1), ell)
                if r == (0,):
                    split = ((c, b, 1), q)
                    break
            if split:
                break
        if split is None:
            found.append((f, 1))
        elif split[0] == split[1]:
            found.append((split[0], 2))
        else:
            found.extend([(split[0], 1), (split[1], 1)])
    found.sort(key=lambda t: (len(t[0]), t[0]))
    return [PrimeIdealFactor(ell, g, len(g) - 1, e) for g, e in found]


def reduce_rational(q: Fraction, ell: int) -> int:
    q = Fraction(q)
    if q.denominator % ell == 0:
        raise DenominatorNotInvertible(f"denominator of {q} is divisible by {ell}")
    return q.numerator * pow(q.denominator, -1, ell) % ell


def reduce_element(e, ideal: PrimeIdealFactor) -> ResidueElement:
    """Image of e (a number-field element or rational) in the residue field."""
    if isinstance(e, NumberFieldElement):
        coeffs = e.coeffs
    else:
        coeffs = (Fraction(e),)
    c = [reduce_rational(x, ideal.ell) for x in coeffs]
    return _residue(ideal.ell, ideal.g, c)


def residue_equal(r1: ResidueElement, r2: ResidueElement) -> bool:
    r1._check(r2)
    return r1.poly == r2.poly


def generator_vanishes(h, ideal: PrimeIdealFactor) -> bool:
    """Whether h maps to zero at ``ideal``.

    Diagnostic linking a two-element generator (ell, h(a)) to one of the
    factors returned by :func:`factor_minpoly_mod`.
    """
    return reduce_element(h, ideal).is_zero()
