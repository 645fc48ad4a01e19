"""Non-divisibility statistics for sigma_m and its level-p twist.

The function studied is f(n) = sigma_m(n) + eps p^{(m+1)/2} sigma_m(n/p)
(plain sigma_m when no level part is given). It is multiplicative, so
f(n) mod ell is assembled prime power by prime power in a segmented sieve.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Optional, Sequence, Tuple

import mpmath
import numba
import numpy as np

from .errors import BadParameters, NotInTable
from .exact_arith import is_prime, multiplicative_order, primes_upto
from .fixtures import GAMMA_1_37, GAMMA_TAU

# Skip the TBB layer: the system TBB is too old and numba warns about it.
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

SEGMENT = 1 << 20
# Longest prime-power exponent that fits below 2^63.
_MAX_EXP = 64


@dataclass(frozen=True)
class NonDivParams:
    ell: int
    m: int
    p: Optional[int] = None
    eps: Optional[int] = None

    def __post_init__(self):
        if self.ell < 3 or not is_prime(self.ell):
            raise BadParameters("ell must be an odd prime")
        if self.m < 1:
            raise BadParameters("m must be positive")
        if (self.p is None) != (self.eps is None):
            raise BadParameters("level part needs both p and eps")
        if self.p is not None:
            if not is_prime(self.p) or self.eps not in (1, -1):
                raise BadParameters("level part needs a prime p and eps = +-1")
            if (self.m + 1) % 2:
                raise BadParameters("level part needs m odd (m + 1 = k even)")

    @property
    def r(self) -> int:
        return gcd(self.m, self.ell - 1)

    @property
    def h1(self) -> int:
        return (self.ell - 1) // self.r

    @property
    def level_twist_is_minus_one(self) -> bool:
        """Whether eps p^{(m+1)/2} = -1 (mod ell), the non-divisibility setting."""
        if self.p is None:
            return False
        return (self.eps * pow(self.p, (self.m + 1) // 2, self.ell) + 1) % self.ell == 0


@dataclass(frozen=True)
class EulerFactor:
    p1: int
    mu: int
    indicator: Tuple[int, ...]


@dataclass(frozen=True)
class NonDivCount:
    x: int
    count: int
    h1: int
    landau: float
    ramanujan: float


def mu_of(p1: int, r: int, ell: int) -> int:
    if p1 % ell == 0:
        raise BadParameters("p1 must differ from ell")
    g = multiplicative_order(pow(p1, r, ell), ell)
    return ell if g == 1 else g


def _sigma_prime_power_mod(p1: int, m: int, ell: int, a: int) -> int:
    s = 0
    for j in range(a + 1):
        s = (s + pow(p1, j * m, ell)) % ell
    return s


def local_factor_indicator(
    p1: int, r: int, ell: int, A: int, level: Optional[Tuple[int, int, int]] = None
) -> EulerFactor:
    """Coefficients of (1 - t^{mu-1}) / ((1-t)(1-t^mu)) up to t^A.

    ``level = (p, eps, k)`` switches on the level-prime override: when
    p1 = p and eps p^{k/2} = -1 (mod ell) the factor is 1/(1-t).
    """
    if A < 1:
        raise BadParameters("A must be at least 1")
    mu = mu_of(p1, r, ell)
    if level is not None:
        p, eps, k = level
        if p1 == p and (eps * pow(p, k // 2, ell) + 1) % ell == 0:
            return EulerFactor(p1, mu, (1,) * (A + 1))
    # (1 + t + ... + t^{mu-2}) * (1 + t^mu + t^{2mu} + ...)
    head = [1 if j <= mu - 2 else 0 for j in range(A + 1)]
    coeffs = [0] * (A + 1)
    for i in range(0, A + 1, mu):
        for j in range(A + 1 - i):
            coeffs[i + j] += head[j]
    indicator = tuple(coeffs)
    direct = tuple(int(_sigma_prime_power_mod(p1, r, ell, a) != 0) for a in range(A + 1))
    if indicator != direct:
        raise AssertionError(f"local factor at {p1} disagrees with sigma_{r} mod {ell}")
    return EulerFactor(p1, mu, indicator)


def ek_delta_term(p: int, r: int, ell: int, with_log: bool = True) -> float:
    """(mu/(p^mu - 1) - (mu-1)/(p^{mu-1} - 1)) * log p, to about 30 digits.

    ``with_log=False`` drops the log p factor.
    """
    mu = mu_of(p, r, ell)
    with mpmath.workdps(40):
        t = mpmath.mpf(mu) / (mpmath.mpf(p) ** mu - 1) - mpmath.mpf(mu - 1) / (mpmath.mpf(p) ** (mu - 1) - 1)
        if with_log:
            t *= mpmath.log(p)
        return float(t)


def ek_delta_report(p: int, k: int, eps: int, ell: int, gamma_base: Optional[float] = None) -> dict:
    """Both readings of the level correction to the Euler-Kronecker constant."""
    if (eps * pow(p, k // 2, ell) + 1) % ell:
        raise BadParameters(f"eps p^(k/2) is not -1 mod {ell}")
    r = gcd(ell - 1, k - 1)
    out = {
        "p": p,
        "k": k,
        "eps": eps,
        "ell": ell,
        "r": r,
        "h1": (ell - 1) // r,
        "mu": mu_of(p, r, ell),
        "delta_with_log": ek_delta_term(p, r, ell, True),
        "delta_without_log": ek_delta_term(p, r, ell, False),
    }
    out["readings_differ"] = out["delta_with_log"] != out["delta_without_log"]
    if gamma_base is not None:
        out["gamma_base"] = gamma_base
        out["gamma_with_log"] = gamma_base + out["delta_with_log"]
        out["gamma_without_log"] = gamma_base + out["delta_without_log"]
    return out


def gamma_from_table(ell: int) -> float:
    try:
        return GAMMA_TAU[ell]
    except KeyError:
        raise NotInTable(f"no tabulated gamma for ell = {ell}") from None


def gamma_sigma5_37() -> float:
    return GAMMA_1_37


def winner(gamma: float) -> str:
    if gamma > 0.5:
        return "Landau"
    if gamma < 0.5:
        return "Ramanujan"
    return "tie"


def _prime_power_tables(primes: np.ndarray, params: NonDivParams) -> np.ndarray:
    """tab[i, a] = f(primes[i]^a) mod ell for a < _MAX_EXP."""
    ell, m = params.ell, params.m
    tab = np.empty((primes.size, _MAX_EXP), dtype=np.int64)
    pm = np.array([pow(int(q), m, ell) for q in primes], dtype=np.int64)
    tab[:, 0] = 1
    for a in range(1, _MAX_EXP):
        tab[:, a] = (1 + pm * tab[:, a - 1]) % ell
    if params.p is not None:
        idx = np.searchsorted(primes, params.p)
        if idx < primes.size and primes[idx] == params.p:
            tw = params.eps * pow(params.p, (params.m + 1) // 2, ell)
            row = tab[idx].copy()
            tab[idx, 1:] = (row[1:] + tw * row[:-1]) % ell
    return tab


def _large_prime_table(params: NonDivParams) -> np.ndarray:
    """f(q) mod ell indexed by q mod ell, for primes q above the sieve limit."""
    ell = params.ell
    return np.array([(1 + pow(c, params.m, ell)) % ell for c in range(ell)], dtype=np.int64)


@numba.njit(cache=True)
def _segment_values(lo, hi, primes, tab, large, ell, lvl_p, lvl_tw, out):
    n = hi - lo
    rem = np.empty(n, dtype=np.int64)
    for i in range(n):
        rem[i] = lo + i
        out[i] = 1
    for j in range(primes.size):
        q = primes[j]
        if q * q > hi - 1:
            break
        start = ((lo + q - 1) // q) * q
        for v in range(start, hi, q):
            i = v - lo
            a = 0
            while rem[i] % q == 0:
                rem[i] //= q
                a += 1
            out[i] = out[i] * tab[j, a] % ell
    for i in range(n):
        q = rem[i]
        if q > 1:
            if q == lvl_p:
                out[i] = out[i] * ((large[q % ell] + lvl_tw) % ell) % ell
            else:
                out[i] = out[i] * large[q % ell] % ell
    return out


@numba.njit(parallel=True, cache=True)
def _count_segments(x, seg, primes, tab, large, ell, lvl_p, lvl_tw):
    nseg = (x + seg) // seg
    counts = np.zeros(nseg, dtype=np.int64)
    for s in numba.prange(nseg):
        lo = max(1, s * seg)
        hi = min(x + 1, (s + 1) * seg)
        if lo >= hi:
            continue
        buf = np.empty(hi - lo, dtype=np.int64)
        _segment_values(lo, hi, primes, tab, large, ell, lvl_p, lvl_tw, buf)
        c = 0
        for i in range(hi - lo):
            if buf[i] != 0:
                c += 1
        counts[s] = c
    return counts.sum()


def _threads() -> int:
    env = os.environ.get("CONGRLAB_THREADS")
    n = int(env) if env else numba.config.NUMBA_NUM_THREADS
    return max(1, min(n, numba.config.NUMBA_NUM_THREADS))


def _sieve_setup(x: int, params: NonDivParams):
    primes = primes_upto(isqrt(x) + 1)
    tab = _prime_power_tables(primes, params)
    large = _large_prime_table(params)
    if params.p is not None:
        lvl_tw = params.eps * pow(params.p, (params.m + 1) // 2, params.ell) % params.ell
        lvl_p = params.p
    else:
        lvl_p, lvl_tw = 0, 0
    return primes, tab, large, lvl_p, lvl_tw


def fvalues_mod(x: int, params: NonDivParams) -> np.ndarray:
    """Array v with v[n] = f(n) mod ell for 1 <= n <= x (v[0] unused)."""
    out = np.zeros(x + 1, dtype=np.int64)
    if x < 1:
        return out
    primes, tab, large, lvl_p, lvl_tw = _sieve_setup(x, params)
    buf = np.empty(x, dtype=np.int64)
    _segment_values(1, x + 1, primes, tab, large, params.ell, lvl_p, lvl_tw, buf)
    out[1:] = buf
    return out


def count_nondiv_raw(x: int, params: NonDivParams) -> int:
    """#{1 <= n <= x : ell does not divide f(n)}."""
    if x < 1:
        return 0
    primes, tab, large, lvl_p, lvl_tw = _sieve_setup(x, params)
    numba.set_num_threads(_threads())
    return int(_count_segments(x, SEGMENT, primes, tab, large, params.ell, lvl_p, lvl_tw))


def count_nondiv(x: int, params: NonDivParams, C: float = 1.0) -> NonDivCount:
    count = count_nondiv_raw(x, params)
    if x > 2:
        landau, ramanujan, _ = approx_compare(x, C, params.h1, 1.0)
    else:
        landau = ramanujan = float("nan")
    return NonDivCount(x, count, params.h1, landau, ramanujan)


def prime_density_check(x: int, params: NonDivParams) -> Tuple[float, float]:
    """Share of primes p1 <= x with ell | sigma_r(p1), and r/(ell-1) (0 for odd h1)."""
    if x < 100:
        raise BadParameters("x must be at least 100")
    ell, r = params.ell, params.r
    primes = primes_upto(x)
    table = np.array([(1 + pow(c, r, ell)) % ell for c in range(ell)], dtype=np.int64)
    hits = int(np.count_nonzero(table[primes % ell] == 0))
    predicted = r / (ell - 1) if params.h1 % 2 == 0 else 0.0
    return hits / primes.size, predicted


def ramanujan_integral(x: float, h1: int) -> float:
    """int_2^x dt / (log t)^{1/h1}."""
    with mpmath.workdps(30):
        f = lambda t: mpmath.log(t) ** (-mpmath.mpf(1) / h1)  # noqa: E731
        pts = [mpmath.mpf(2)]
        b = mpmath.mpf(10)
        while b < x:
            pts.append(b)
            b *= 10
        pts.append(mpmath.mpf(x))
        return float(mpmath.quad(f, pts))


def approx_compare(x: float, C: float, h1: int, gamma: float) -> Tuple[float, float, float]:
    """(Landau, Ramanujan, second-order) approximations to the count."""
    if x <= 2 or C <= 0 or h1 < 1:
        raise BadParameters("need x > 2, C > 0, h1 >= 1")
    lx = math.log(x)
    landau = C * x / lx ** (1.0 / h1)
    ramanujan = C * ramanujan_integral(x, h1)
    second = landau * (1 + (1 - gamma) / (h1 * lx))
    return landau, ramanujan, second


def fit_C(xs: Sequence[float], counts: Sequence[int], h1: int) -> float:
    """Least-squares C for count ~ C x / (log x)^{1/h1}."""
    L = np.array([x / math.log(x) ** (1.0 / h1) for x in xs])
    c = np.asarray(counts, dtype=float)
    return float(L @ c / (L @ L))


def fit_exponent(xs: Sequence[float], counts: Sequence[int], second_order: bool = False) -> Tuple[float, float]:
    """Fit log(count/x) = log C - beta log log x and return (beta, C).

    With ``second_order`` a term c / log x is fitted as well, matching the
    shape C x (log x)^{-beta} (1 + c / log x) of the refined asymptotic.
    """
    need = 3 if second_order else 2
    if len(xs) < need:
        raise BadParameters(f"need at least {need} points")
    lx = np.log(np.asarray(xs, dtype=float))
    Y = np.log(np.asarray(counts, dtype=float) / np.asarray(xs, dtype=float))
    cols = [np.ones_like(lx), -np.log(lx)]
    if second_order:
        cols.append(1 / lx)
    sol, *_ = np.linalg.lstsq(np.vstack(cols).T, Y, rcond=None)
    return float(sol[1]), float(math.exp(sol[0]))


def dirichlet_indicator_from_factors(x: int, params: NonDivParams) -> np.ndarray:
    """0/1 array on 1..x rebuilt from the local Euler factors (product over p1 | n)."""
    out = np.ones(x + 1, dtype=np.int64)
    out[0] = 0
    ell, r = params.ell, params.r
    level = (params.p, params.eps, params.m + 1) if params.p is not None else None
    for q in primes_upto(x):
        q = int(q)
        A = int(math.log(x) / math.log(q)) + 1
        if q == ell:
            ind = (1,) * (A + 1)
        else:
            ind = local_factor_indicator(q, r, ell, A, level).indicator
            if params.p == q and not params.level_twist_is_minus_one:
                # Without the -1 twist the level factor is not covered by the
                # Rankin shape; fall back to the direct values.
                tw = params.eps * pow(q, (params.m + 1) // 2, ell)
                ind = tuple(
                    int((_sigma_prime_power_mod(q, params.m, ell, a)
                         + (tw * _sigma_prime_power_mod(q, params.m, ell, a - 1) if a else 0)) % ell != 0)
                    for a in range(A + 1)
                )
        qa, a = q, 1
        while qa <= x:
            if not ind[a]:
                # zero out n with exact q-adic valuation a
                idx = np.arange(qa, x + 1, qa)
                idx = idx[(idx // qa) % q != 0]
                out[idx] = 0
            qa *= q
            a += 1
    return out
