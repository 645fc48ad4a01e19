"""Truncated q-expansions over Q, Z/m, or a number field Q(a).

A :class:`QSeries` of precision N stores a(0), ..., a(N-1); every
coefficient it reports is exact. Binary operations return the minimum
precision of their operands, and U_p / T_q shrink precision to the indices
that remain determined.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    BadParameters,
    BadWeight,
    DenominatorNotInvertible,
    FractionalExponent,
    InsufficientPrecision,
    RingMismatch,
)
from .exact_arith import bernoulli
from .fieldred import NumberField, NumberFieldElement


@dataclass(frozen=True)
class Ring:
    """Coefficient ring tag: ``rational``, ``integers_mod`` or ``number_field``."""

    kind: str
    modulus: Optional[int] = None
    field: Optional[NumberField] = None

    def zero(self):
        if self.kind == "number_field":
            return self.field.zero()
        return 0 if self.kind == "integers_mod" else Fraction(0)

    def one(self):
        if self.kind == "number_field":
            return self.field.one()
        return 1 % self.modulus if self.kind == "integers_mod" else Fraction(1)

    def coerce(self, x):
        if self.kind == "rational":
            if isinstance(x, NumberFieldElement):
                raise RingMismatch("number-field element in a rational series")
            return Fraction(x)
        if self.kind == "integers_mod":
            if isinstance(x, NumberFieldElement):
                raise RingMismatch("number-field element in a Z/m series")
            x = Fraction(x)
            if gcd(x.denominator, self.modulus) != 1:
                raise DenominatorNotInvertible(f"{x} has no image in Z/{self.modulus}")
            return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
        if isinstance(x, NumberFieldElement):
            if x.field != self.field:
                raise RingMismatch("number-field element of another field")
            return x
        return self.field([x])

    def describe(self) -> str:
        if self.kind == "integers_mod":
            return f"Z/{self.modulus}"
        if self.kind == "number_field":
            return f"Q[x]/({list(self.field.minpoly)})"
        return "Q"


QQ = Ring("rational")


def IntegersMod(m: int) -> Ring:
    if m < 2:
        raise BadParameters("modulus must be at least 2")
    return Ring("integers_mod", modulus=m)


def NumberFieldRing(minpoly: Sequence[int]) -> Ring:
    return Ring("number_field", field=NumberField(tuple(minpoly)))


class QSeries:
    """Immutable truncated q-expansion ``sum_{n < prec} a(n) q^n``."""

    __slots__ = ("ring", "coeffs", "weight")

    def __init__(self, coeffs: Iterable, ring: Ring = QQ, weight: Optional[int] = None):
        self.ring = ring
        self.coeffs = tuple(ring.coerce(c) for c in coeffs)
        if not self.coeffs:
            raise BadParameters("precision must be positive")
        self.weight = weight

    @classmethod
    def _raw(cls, coeffs, ring, weight):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.coeffs = tuple(coeffs)
        obj.weight = weight
        return obj

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        shown = " + ".join(f"({c})q^{i}" for i, c in enumerate(self.coeffs[:6]) if c)
        return f"QSeries[{self.ring.describe()}]({shown or '0'} + O(q^{self.prec}))"

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise InsufficientPrecision(f"cannot extend precision {self.prec} to {prec}")
        return QSeries._raw(self.coeffs[:prec], self.ring, self.weight)

    def with_weight(self, weight: Optional[int]) -> "QSeries":
        return QSeries._raw(self.coeffs, self.ring, weight)

    def _check(self, other: "QSeries"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring.describe()} vs {other.ring.describe()}")

    def _finish(self, coeffs) -> List:
        if self.ring.kind == "integers_mod":
            return [c % self.ring.modulus for c in coeffs]
        return list(coeffs)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + constant(other, self.prec, self.ring)
        self._check(other)
        n = min(self.prec, other.prec)
        w = self.weight if self.weight == other.weight else None
        return QSeries._raw(self._finish(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])), self.ring, w)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw(self._finish(-a for a in self.coeffs), self.ring, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            c = self.ring.coerce(other)
            return QSeries._raw(self._finish(a * c for a in self.coeffs), self.ring, self.weight)
        self._check(other)
        n = min(self.prec, other.prec)
        w = self.weight + other.weight if self.weight is not None and other.weight is not None else None
        return QSeries._raw(_cauchy(self.coeffs, other.coeffs, n, self.ring), self.ring, w)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return series_pow(self, e)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        return series_to_json(self)


def series_add(f: QSeries, g: QSeries) -> QSeries:
    return f + g


def series_mul(f: QSeries, g: QSeries) -> QSeries:
    return f * g


def series_pow(f: QSeries, e: int) -> QSeries:
    if e < 0:
        raise BadParameters("negative exponent")
    result = constant(1, f.prec, f.ring)
    base = f
    k = e
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result.with_weight(f.weight * e if f.weight is not None else None)


def _conv_int(a: Sequence[int], b: Sequence[int], n: int) -> List[int]:
    out = [0] * n
    nz = [(j, y) for j, y in enumerate(b[:n]) if y]
    for i in range(n):
        x = a[i]
        if x:
            lim = n - i
            for j, y in nz:
                if j >= lim:
                    break
                out[i + j] += x * y
    return out


def _cauchy(a, b, n: int, ring: Ring) -> List:
    if ring.kind == "rational":
        da = lcm(*(c.denominator for c in a[:n]))
        db = lcm(*(c.denominator for c in b[:n]))
        ia = [c.numerator * (da // c.denominator) for c in a[:n]]
        ib = [c.numerator * (db // c.denominator) for c in b[:n]]
        d = da * db
        return [Fraction(c, d) for c in _conv_int(ia, ib, n)]
    if ring.kind == "integers_mod":
        m = ring.modulus
        return [c % m for c in _conv_int(a, b, n)]
    zero = ring.zero()
    out = [zero] * n
    for i in range(n):
        if a[i]:
            for j in range(n - i):
                if b[j]:
                    out[i + j] = out[i + j] + a[i] * b[j]
    return out


def constant(c, prec: int, ring: Ring = QQ) -> QSeries:
    return QSeries([ring.coerce(c)] + [ring.zero()] * (prec - 1), ring)


def sigma_table(m: int, prec: int) -> List[int]:
    """[0, sigma_m(1), ..., sigma_m(prec-1)] by a divisor sieve."""
    s = [0] * prec
    for d in range(1, prec):
        dm = d**m
        for n in range(d, prec, d):
            s[n] += dm
    return s


def eisenstein_E(k: int, prec: int) -> QSeries:
    """E_k = -B_k/2k + sum sigma_{k-1}(n) q^n."""
    if k < 2 or k % 2:
        raise BadWeight(f"weight {k} must be even and >= 2")
    s = sigma_table(k - 1, prec)
    s[0] = -bernoulli(k) / (2 * k)
    return QSeries(s, QQ, weight=k)


def eisenstein_G(alpha: int, prec: int) -> QSeries:
    """G_alpha = 1 - (2 alpha / B_alpha) sum sigma_{alpha-1}(n) q^n."""
    if alpha < 2 or alpha % 2:
        raise BadWeight(f"weight {alpha} must be even and >= 2")
    c = -2 * alpha / bernoulli(alpha)
    s = [c * x for x in sigma_table(alpha - 1, prec)]
    s[0] = Fraction(1)
    return QSeries(s, QQ, weight=alpha)


def level_raise_V(p: int, f: QSeries) -> QSeries:
    """f(z) -> f(pz): b(n) = a(n/p) when p | n, else 0."""
    zero = f.ring.zero()
    out = [f.coeffs[n // p] if n % p == 0 else zero for n in range(f.prec)]
    return QSeries._raw(out, f.ring, f.weight)


def eisenstein_level(k: int, p: int, eps: int, prec: int) -> QSeries:
    """E_{k,p}^eps = E_k + eps p^{k/2} E_k(pz)."""
    if eps not in (1, -1):
        raise BadParameters("eps must be +1 or -1")
    if k == 2 and eps == 1:
        raise BadParameters("weight 2 requires eps = -1")
    e = eisenstein_E(k, prec)
    return (e + level_raise_V(p, e) * (eps * p ** (k // 2))).with_weight(k)


def g2_minus(p: int, prec: int) -> QSeries:
    """G_2(z) - p G_2(pz)."""
    g = eisenstein_G(2, prec)
    return (g - level_raise_V(p, g) * p).with_weight(2)


def _out_prec(prec: int, p: int) -> int:
    if prec < p:
        raise InsufficientPrecision(f"precision {prec} < {p}")
    return (prec - 1) // p + 1


def hecke_U(p: int, f: QSeries) -> QSeries:
    """U_p: b(n) = a(np)."""
    n = _out_prec(f.prec, p)
    return QSeries._raw([f.coeffs[i * p] for i in range(n)], f.ring, f.weight)


def hecke_T(qp: int, k: Optional[int], f: QSeries) -> QSeries:
    """T_q for q prime to the level: b(n) = a(qn) + q^{k-1} a(n/q)."""
    if k is None:
        k = f.weight
    if k is None:
        raise BadWeight("T_q needs a weight")
    n = _out_prec(f.prec, qp)
    c = f.ring.coerce(qp ** (k - 1))
    out = []
    for i in range(n):
        v = f.coeffs[i * qp]
        if i % qp == 0:
            v = v + c * f.coeffs[i // qp]
        out.append(v)
    return QSeries._raw(f._finish(out), f.ring, k)


def _euler_product(n: int) -> List[int]:
    """prod_{m>=1} (1 - q^m) to n terms (pentagonal number theorem)."""
    out = [0] * n
    out[0] = 1
    j = 1
    while j * (3 * j - 1) // 2 < n:
        sign = -1 if j % 2 else 1
        out[j * (3 * j - 1) // 2] += sign
        if j * (3 * j + 1) // 2 < n:
            out[j * (3 * j + 1) // 2] += sign
        j += 1
    return out


def _int_inverse(a: List[int]) -> List[int]:
    # a[0] == 1
    n = len(a)
    b = [0] * n
    b[0] = 1
    for i in range(1, n):
        b[i] = -sum(a[j] * b[i - j] for j in range(1, i + 1) if a[j])
    return b


def _int_pow(a: List[int], e: int) -> List[int]:
    n = len(a)
    result = [1] + [0] * (n - 1)
    while e:
        if e & 1:
            result = _conv_int(result, a, n)
        e >>= 1
        if e:
            a = _conv_int(a, a, n)
    return result


def eta_product(terms: Sequence[Tuple[int, int]], prec: int) -> QSeries:
    """prod eta(delta z)^{r_delta} as a q-series (integer coefficients)."""
    total = sum(d * r for d, r in terms)
    if total % 24:
        raise FractionalExponent(f"sum delta*r = {total} is not divisible by 24")
    h = total // 24
    if h < 0:
        raise FractionalExponent(f"leading exponent {h} is negative")
    n = max(prec - h, 0)
    acc = [1] + [0] * (n - 1) if n else []
    for d, r in terms:
        if not n or r == 0:
            continue
        base = _euler_product((n - 1) // d + 1)
        if r < 0:
            base = _int_inverse(base)
        base = _int_pow(base, abs(r))
        spread = [0] * n
        for i, c in enumerate(base):
            spread[i * d] = c
        acc = _conv_int(acc, spread, n)
    coeffs = [0] * min(h, prec) + acc
    weight = sum(r for _, r in terms)
    return QSeries([Fraction(c) for c in coeffs], QQ, weight=weight // 2 if weight % 2 == 0 else None)


def change_ring(f: QSeries, m: int) -> QSeries:
    """Reduce a rational series coefficient-wise into Z/m."""
    if f.ring.kind != "rational":
        raise RingMismatch("change_ring expects a rational series")
    ring = IntegersMod(m)
    return QSeries._raw([ring.coerce(c) for c in f.coeffs], ring, f.weight)


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def series_to_json(f: QSeries) -> dict:
    out = {"ring": f.ring.kind}
    if f.ring.kind == "integers_mod":
        out["modulus"] = f.ring.modulus
        coeffs = list(f.coeffs)
    elif f.ring.kind == "number_field":
        out["minpoly"] = list(f.ring.field.minpoly)
        coeffs = [[_frac_str(c) for c in e.coeffs] for e in f.coeffs]
    else:
        coeffs = [_frac_str(c) for c in f.coeffs]
    if f.weight is not None:
        out["weight"] = f.weight
    out["prec"] = f.prec
    out["coeffs"] = coeffs
    return out


def series_from_json(obj) -> QSeries:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj["ring"]
    if kind == "rational":
        ring = QQ
        coeffs = [Fraction(c) for c in obj["coeffs"]]
    elif kind == "integers_mod":
        ring = IntegersMod(int(obj["modulus"]))
        coeffs = [int(c) for c in obj["coeffs"]]
    elif kind == "number_field":
        ring = NumberFieldRing(obj["minpoly"])
        coeffs = [ring.field([Fraction(x) for x in c]) for c in obj["coeffs"]]
    else:
        raise BadParameters(f"unknown ring {kind!r}")
    if len(coeffs) != int(obj["prec"]):
        raise BadParameters("prec does not match the number of coefficients")
    return QSeries(coeffs, ring, weight=obj.get("weight"))
