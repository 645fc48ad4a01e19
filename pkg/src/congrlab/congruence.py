"""Congruence moduli, theorem hypotheses, explicit constructions, certificates.

Congruence of rationals modulo a composite N means: for every prime power
ell^e exactly dividing N, the difference has ell-adic valuation >= e.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    BadParameters,
    ConstructionFailed,
    CoprimalityFailed,
    DenominatorNotInvertible,
    InsufficientPrecision,
    PreconditionFailed,
)
from .exact_arith import (
    Factorization,
    bernoulli,
    factor,
    is_prime,
    rational_valuation,
    reduced_numerator,
    sigma,
)
from .fieldred import (
    PrimeIdealFactor,
    factor_minpoly_mod,
    format_poly,
    reduce_element,
    reduce_rational,
    residue_equal,
)
from .qseries import (
    QQ,
    QSeries,
    eisenstein_G,
    eisenstein_level,
    g2_minus,
    hecke_U,
    level_raise_V,
)

# Primes p for which the Fricke group of level p has genus zero.
GENUS_ZERO_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71)


@dataclass(frozen=True)
class ModuliReport:
    k: int
    p: int
    eps: int
    N: int
    N_factors: Factorization
    M: int
    M_factors: Factorization

    def to_json(self) -> dict:
        d = asdict(self)
        d["N_factors"] = [list(t) for t in self.N_factors]
        d["M_factors"] = [list(t) for t in self.M_factors]
        return d


@dataclass(frozen=True)
class HypothesisReport:
    theorem: str
    conditions: Tuple[Tuple[str, bool], ...]

    @property
    def overall(self) -> bool:
        return all(ok for _, ok in self.conditions)

    def failed(self) -> List[str]:
        return [text for text, ok in self.conditions if not ok]

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "conditions": [{"condition": t, "holds": ok} for t, ok in self.conditions],
            "overall": self.overall,
        }


@dataclass
class CongruenceCertificate:
    lhs: str
    rhs: str
    modulus: dict
    checked_bound: int
    sturm_bound: Optional[int]
    verdict: str
    first_failure: Optional[int] = None
    details: Dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    @property
    def theorem_level(self) -> bool:
        return self.holds and self.sturm_bound is not None and self.checked_bound >= self.sturm_bound

    def to_json(self) -> dict:
        d = asdict(self)
        d["theorem_level"] = self.theorem_level
        return d


def _admissible(k: int, eps: int) -> bool:
    return k >= 2 and k % 2 == 0 and eps in (1, -1) and not (k == 2 and eps == 1)


def _check_params(k: int, p: int, eps: int) -> None:
    if not _admissible(k, eps):
        raise BadParameters(f"(k, eps) = ({k}, {eps}) is not admissible")
    if not is_prime(p):
        raise BadParameters(f"{p} is not prime")


def moduli_value(k: int, p: int, eps: int) -> Fraction:
    """(B_k / 2k)(eps + p^{k/2}), whose reduced numerator is N."""
    return bernoulli(k) / (2 * k) * (eps + p ** (k // 2))


def moduli(k: int, p: int, eps: int) -> ModuliReport:
    _check_params(k, p, eps)
    N = reduced_numerator(moduli_value(k, p, eps))
    M = abs((eps + p ** (k // 2)) * (eps + p ** (k // 2 - 1)))
    # M vanishes for (k, eps) = (2, -1); every ell divides it.
    return ModuliReport(k, p, eps, N, factor(N), M, factor(M) if M else [])


def sturm_bound(k: int, p: int) -> int:
    return -(-k * (p + 1) // 12)


def _divides(ell: int, n: int) -> bool:
    return n % ell == 0


def check_hypotheses_main(k: int, p: int, eps: int, ell: int) -> HypothesisReport:
    adm = _admissible(k, eps)
    conds = [
        ("(k, eps) admissible: k even >= 2, eps = -1 when k = 2", adm),
        ("ell is prime", is_prime(ell)),
        (f"ell >= max(5, k-1) = {max(5, k - 1)}", ell >= max(5, k - 1)),
        ("p != -1 (mod ell)", (p + 1) % ell != 0),
    ]
    if adm:
        rep = moduli(k, p, eps)
        conds += [("ell | N", _divides(ell, rep.N)), ("ell | M", _divides(ell, rep.M))]
    else:
        conds += [("ell | N", False), ("ell | M", False)]
    return HypothesisReport("main", tuple(conds))


def check_hypotheses_rmain(k: int, p: int, eps: int, ell: int) -> HypothesisReport:
    if ell < 5 or not is_prime(ell):
        raise BadParameters("ell must be a prime >= 5")
    adm = _admissible(k, eps)
    conds = [("(k, eps) admissible: k even >= 2, eps = -1 when k = 2", adm)]
    if adm:
        conds.append(("ell | N", _divides(ell, moduli(k, p, eps).N)))
    else:
        conds.append(("ell | N", False))
    conds.append(("k != 0 (mod ell-1)", k % (ell - 1) != 0))
    conds.append(("ell does not divide B_k/2k", not _divides(ell, reduced_numerator(bernoulli(k) / (2 * k)))))
    return HypothesisReport("rmain", tuple(conds))


def check_hypotheses_gapo(k: int, p: int, eps: int, ell: int) -> HypothesisReport:
    """Hypotheses of the earlier result requiring ell >= k+2."""
    ok_k = k >= 4 and k % 2 == 0 and eps in (1, -1)
    conds = [("k even >= 4", ok_k), ("ell is prime", is_prime(ell)), (f"ell >= k+2 = {k + 2}", ell >= k + 2)]
    if ok_k:
        rep = moduli(k, p, eps)
        conds += [("ell | N", _divides(ell, rep.N)), ("ell | M", _divides(ell, rep.M))]
        if _divides(ell, eps + p ** (k // 2)):
            aux = True
        else:
            aux = any(
                not _divides(ell, (bernoulli(n) * bernoulli(k - n) * (p ** (n - 1) - 1)).numerator)
                for n in range(2, k, 2)
            )
        conds.append(("ell | (eps + p^{k/2}) or some even 0<n<k has ell not dividing B_n B_{k-n} (p^{n-1}-1)", aux))
    return HypothesisReport("gapo", tuple(conds))


def _modulus_descriptor(modulus: int) -> dict:
    return {"kind": "integer", "value": modulus, "factors": [list(t) for t in factor(modulus)]}


def verify_congruence(
    f: QSeries,
    g: QSeries,
    modulus: int,
    bound: int,
    *,
    sturm: Optional[int] = None,
    lhs: str = "f",
    rhs: str = "g",
) -> CongruenceCertificate:
    """Check v_ell(a_f(n) - a_g(n)) >= v_ell(modulus) for all ell | modulus, 0 <= n <= bound."""
    if f.ring != QQ or g.ring != QQ:
        raise BadParameters("verify_congruence compares rational series")
    if bound >= min(f.prec, g.prec):
        raise InsufficientPrecision(f"bound {bound} needs precision > {bound}")
    if modulus < 2:
        raise BadParameters("modulus must be at least 2")
    pe = factor(modulus)
    for c in f.coeffs[: bound + 1] + g.coeffs[: bound + 1]:
        if gcd(c.denominator, modulus) != 1:
            raise DenominatorNotInvertible(f"coefficient {c} is not integral at {modulus}")
    first = None
    for n in range(bound + 1):
        d = f.coeffs[n] - g.coeffs[n]
        if any((v := rational_valuation(ell, d)) is not None and v < e for ell, e in pe):
            first = n
            break
    return CongruenceCertificate(
        lhs=lhs,
        rhs=rhs,
        modulus=_modulus_descriptor(modulus),
        checked_bound=bound,
        sturm_bound=sturm,
        verdict="holds" if first is None else "fails",
        first_failure=first,
    )


def verify_congruence_numberfield(
    f: QSeries,
    E: QSeries,
    ell: int,
    bound: int,
    *,
    sturm: Optional[int] = None,
    lhs: str = "f",
    rhs: str = "E",
) -> List[Tuple[PrimeIdealFactor, CongruenceCertificate]]:
    """Compare f (over Q(a)) with a rational E modulo every prime above ell."""
    if bound >= min(f.prec, E.prec):
        raise InsufficientPrecision(f"bound {bound} needs precision > {bound}")
    if f.ring.kind != "number_field":
        raise BadParameters("f must have number-field coefficients")
    out = []
    for ideal in factor_minpoly_mod(f.ring.field.minpoly, ell):
        first = None
        for n in range(bound + 1):
            if not residue_equal(reduce_element(f.coeffs[n], ideal), reduce_element(E.coeffs[n], ideal)):
                first = n
                break
        cert = CongruenceCertificate(
            lhs=lhs,
            rhs=rhs,
            modulus={
                "kind": "prime_ideal",
                "ell": ell,
                "g": list(ideal.g),
                "g_text": format_poly(ideal.g),
                "residue_degree": ideal.residue_degree,
                "multiplicity": ideal.multiplicity,
            },
            checked_bound=bound,
            sturm_bound=sturm,
            verdict="holds" if first is None else "fails",
            first_failure=first,
        )
        out.append((ideal, cert))
    return out


def up_eigenvalue(k: int, p: int, eps: int) -> int:
    return 1 + p ** (k - 1) + eps * p ** (k // 2)


def up_closed_form(k: int, p: int, eps: int, n: int) -> Fraction:
    """n-th coefficient of U_p E_{k,p}^eps from the closed form, via sigma()."""
    h = p ** (k // 2)
    if n == 0:
        return -bernoulli(k) / (2 * k) * eps * (eps + h)
    a_n = sigma(k - 1, n) + (eps * h * sigma(k - 1, n // p) if n % p == 0 else 0)
    b = up_eigenvalue(k, p, eps) * a_n
    if n % p == 0:
        b -= eps * sigma(k - 1, n // p) * h * (eps + h) * (eps + p ** (k // 2 - 1))
    return Fraction(b)


def up_eigen_congruence(k: int, p: int, eps: int, ell: int, prec: Optional[int] = None) -> CongruenceCertificate:
    """U_p E_{k,p}^eps = (1 + p^{k-1} + eps p^{k/2}) E_{k,p}^eps (mod ell)."""
    rep = moduli(k, p, eps)
    if rep.N % ell or rep.M % ell:
        raise PreconditionFailed(f"{ell} must divide N = {rep.N} and M = {rep.M}")
    sb = sturm_bound(k, p)
    if prec is None:
        prec = p * (sb + 1)
    if prec < p * (sb + 1):
        raise InsufficientPrecision(f"precision {prec} < p*(sturm+1) = {p * (sb + 1)}")
    E = eisenstein_level(k, p, eps, prec)
    U = hecke_U(p, E)
    lam = up_eigenvalue(k, p, eps)
    first = None
    for n in range(U.prec):
        v = rational_valuation(ell, U[n] - lam * E[n])
        if v is not None and v < 1:
            first = n
            break
    mismatches = [n for n in range(U.prec) if U[n] != up_closed_form(k, p, eps, n)]
    return CongruenceCertificate(
        lhs=f"U_{p} E_{{{k},{p}}}^{eps:+d}",
        rhs=f"{lam} * E_{{{k},{p}}}^{eps:+d}",
        modulus={"kind": "integer", "value": ell, "factors": [[ell, 1]]},
        checked_bound=U.prec - 1,
        sturm_bound=sb,
        verdict="holds" if first is None else "fails",
        first_failure=first,
        details={
            "eigenvalue": lam,
            "closed_form_checked": U.prec,
            "closed_form_mismatches": mismatches,
        },
    )


def default_prec(k: int, p: int) -> int:
    return 2 * sturm_bound(k, p) + 10


def _decompose_8_12(n: int) -> Optional[Tuple[int, int]]:
    """Nonnegative (a, b) with 8a + 12b = n, minimizing b then a."""
    for b in range(n // 12 + 1):
        if (n - 12 * b) % 8 == 0:
            return (n - 12 * b) // 8, b
    return None


def _finish_construction(
    k: int, p: int, eps: int, g: QSeries, prec: int, label: str, details: dict
) -> Tuple[QSeries, CongruenceCertificate]:
    rep = moduli(k, p, eps)
    g0 = g[0]
    if g0 == 0:
        raise ConstructionFailed("auxiliary form has zero constant term")
    g0_int = Fraction(g0)
    if g0_int.denominator != 1 or any(c.denominator != 1 for c in g.coeffs):
        raise ConstructionFailed("auxiliary form must have integer coefficients")
    if gcd(g0_int.numerator, rep.N) != 1:
        raise CoprimalityFailed(f"a_g(0) = {g0} is not coprime to N = {rep.N}")
    E = eisenstein_level(k, p, eps, prec)
    c = bernoulli(k) / (2 * k) * eps * (eps + p ** (k // 2))
    f = (E + g * (c / g0)).with_weight(k)
    if f[0] != 0:
        raise ConstructionFailed(f"a_f(0) = {f[0]} != 0")
    if f.is_zero():
        raise ConstructionFailed(f"f vanishes to precision {prec}; the cusp space looks trivial (N = {rep.N})")
    if f[1] == 0:
        raise ConstructionFailed("a_f(1) = 0")
    sb = sturm_bound(k, p)
    cert = verify_congruence(
        f, E, rep.N, prec - 1, sturm=sb, lhs=label, rhs=f"E_{{{k},{p}}}^{eps:+d}"
    ) if rep.N > 1 else CongruenceCertificate(
        lhs=label, rhs=f"E_{{{k},{p}}}^{eps:+d}", modulus={"kind": "integer", "value": 1, "factors": []},
        checked_bound=prec - 1, sturm_bound=sb, verdict="holds",
    )
    cert.details.update(details)
    cert.details.update({"a_g0": str(g0), "a_f1": str(f[1]), "N": rep.N})
    return f, cert


def construct_case_b(k: int, p: int, eps: int, prec: Optional[int] = None) -> Tuple[QSeries, CongruenceCertificate]:
    """Cusp form f = E + c g / a_g(0) with g built from G_4(z)G_4(pz), G_6(z)G_6(pz)."""
    _check_params(k, p, eps)
    if k < 8 or (k - (1 - eps)) % 4:
        raise BadParameters(f"case (b) needs k >= 8 and k = {1 - eps} (mod 4)")
    rep = moduli(k, p, eps)
    if eps == -1 and gcd(rep.N, p - 1) != 1:
        raise CoprimalityFailed(f"N = {rep.N} is not coprime to p - 1 = {p - 1}")
    if prec is None:
        prec = default_prec(k, p)
    a, b = _decompose_8_12(k if eps == 1 else k - 2)
    G4, G6 = eisenstein_G(4, prec), eisenstein_G(6, prec)
    g = (G4 * level_raise_V(p, G4)) ** a * (G6 * level_raise_V(p, G6)) ** b
    if eps == -1:
        g = g2_minus(p, prec) * g
    return _finish_construction(k, p, eps, g, prec, f"case_b({k},{p},{eps:+d})", {"a": a, "b": b})


def construct_case_c(k: int, p: int, eps: int, prec: Optional[int] = None) -> Tuple[QSeries, CongruenceCertificate]:
    """Cusp form built from p^2 G_4(pz)G_6(z) + p^3 G_4(z)G_6(pz)."""
    _check_params(k, p, eps)
    if k < 10 or (k - (1 - eps)) % 10:
        raise BadParameters(f"case (c) needs k >= 10 and k = {1 - eps} (mod 10)")
    rep = moduli(k, p, eps)
    if gcd(rep.N, (p + eps) * p * (p + 1)) != 1:
        raise CoprimalityFailed(f"N = {rep.N} is not coprime to (p+eps)p(p+1)")
    if prec is None:
        prec = default_prec(k, p)
    alpha = (k if eps == 1 else k - 2) // 10
    G4, G6 = eisenstein_G(4, prec), eisenstein_G(6, prec)
    h = level_raise_V(p, G4) * G6 * p**2 + G4 * level_raise_V(p, G6) * p**3
    g = h**alpha
    if eps == -1:
        g = g2_minus(p, prec) * g
    return _finish_construction(k, p, eps, g, prec, f"case_c({k},{p},{eps:+d})", {"alpha": alpha})


def check_victor_miller(basis: Sequence[QSeries]) -> bool:
    """Echelon shape f_j = q^j + O(q^{d+1}) with integer coefficients."""
    d = len(basis) - 1
    for j, f in enumerate(basis):
        if f.prec <= d or any(Fraction(c).denominator != 1 for c in f.coeffs):
            return False
        if any(f[i] != (1 if i == j else 0) for i in range(d + 1)):
            return False
    return True


def construct_case_a(
    k: int, p: int, eps: int, basis: Sequence[QSeries]
) -> Tuple[QSeries, CongruenceCertificate]:
    """Use the first member of a supplied Victor-Miller basis of M_k^eps(p)."""
    _check_params(k, p, eps)
    if p not in GENUS_ZERO_PRIMES:
        raise BadParameters(f"case (a) needs p in {GENUS_ZERO_PRIMES}")
    if not check_victor_miller(basis):
        raise PreconditionFailed("basis is not in Victor-Miller echelon form")
    prec = min(f.prec for f in basis)
    return _finish_construction(k, p, eps, basis[0].truncate(prec), prec, f"case_a({k},{p},{eps:+d})", {"dim": len(basis)})


def level_raising_condition(a_gp, k: int, p: int, eps: int, ell: int, ideal: Optional[PrimeIdealFactor] = None) -> dict:
    """Evaluate the level-raising congruences for a level-1 newform's a_g(p).

    ``a_gp`` is rational, or a number-field element together with ``ideal``.
    """
    if ideal is None:
        x = reduce_rational(Fraction(a_gp), ell)
        red = lambda v: v % ell  # noqa: E731
    else:
        x = reduce_element(a_gp, ideal)
        red = lambda v: reduce_element(Fraction(v), ideal)  # noqa: E731
    lhs2 = x * x
    rhs2 = red(p ** (k - 2) * (1 + p) ** 2)
    refined = red(-eps * p ** (k // 2 - 1) * (1 + p))
    if ideal is None:
        return {"square": lhs2 % ell == rhs2, "refined": x == refined}
    return {"square": residue_equal(lhs2, rhs2), "refined": residue_equal(x, refined)}
