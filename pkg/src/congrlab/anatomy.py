"""Friable integers, the Dickman function and shifted-prime statistics."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import BadParameters
from .exact_arith import largest_prime_factor, prime_pi, primes_upto

RHO_STEP = 2.0**-10


@dataclass(frozen=True)
class RhoTable:
    step: float
    values: np.ndarray

    @property
    def u_max(self) -> float:
        return self.step * (self.values.size - 1)

    def dump_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["u", "rho"])
            for i, v in enumerate(self.values):
                w.writerow([repr(i * self.step), repr(float(v))])

    @classmethod
    def load_csv(cls, path: Union[str, Path]) -> "RhoTable":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        us = [float(r[0]) for r in rows]
        step = us[1] - us[0]
        return cls(step, np.array([float(r[1]) for r in rows]))

    def __call__(self, u: float) -> float:
        return _interpolate(self, u)


def _delay_grid(h: float, u_max: float) -> np.ndarray:
    """rho on the grid u = j h from u rho(u) = int_{u-1}^{u} rho (trapezoid, implicit)."""
    K = round(1 / h)
    n = int(math.ceil(u_max / h)) + 1
    rho = np.ones(max(n, K + 1))
    # S = sum of rho over the open window (u-1, u) excluding both endpoints
    S = float(K - 1)
    for j in range(K + 1, rho.size):
        u = j * h
        S += rho[j - 1]  # window now ends just before j
        S -= rho[j - K]  # rho[j-K] becomes the left endpoint
        rho[j] = h * (rho[j - K] / 2 + S) / (u - h / 2)
    return rho


@lru_cache(maxsize=8)
def rho_table(u_max: float = 16.0, step: float = RHO_STEP) -> RhoTable:
    """Grid values with one Richardson step from spacings 2h and h."""
    coarse = _delay_grid(2 * step, u_max)
    fine = _delay_grid(step, u_max)
    m = min(coarse.size, (fine.size + 1) // 2)
    fine = fine[: 2 * m - 1]
    rich = fine.copy()
    rich[::2] = (4 * fine[::2] - coarse[:m]) / 3
    # odd points: correct by the interpolated even-point adjustment
    corr = rich[::2] - fine[::2]
    rich[1::2] += (corr[:-1] + corr[1:]) / 2
    return RhoTable(step, rich)


def _interpolate(tab: RhoTable, u: float) -> float:
    h = tab.step
    x = u / h
    j = int(math.floor(x))
    if abs(x - round(x)) < 1e-12:
        return float(tab.values[int(round(x))])
    # four-point Lagrange stencil kept inside one unit interval [n, n+1]
    K = round(1 / h)
    lo_int = (j // K) * K
    hi_int = lo_int + K
    i0 = min(max(j - 1, lo_int), hi_int - 3)
    xs = np.arange(i0, i0 + 4)
    ys = tab.values[xs]
    t = x
    out = 0.0
    for a in range(4):
        w = 1.0
        for b in range(4):
            if a != b:
                w *= (t - xs[b]) / (xs[a] - xs[b])
        out += w * ys[a]
    return float(out)


def dickman_rho(u: float) -> float:
    if u < 0:
        raise BadParameters("u must be nonnegative")
    if u <= 1:
        return 1.0
    if u <= 2:
        return 1.0 - math.log(u)
    u_max = max(16.0, 2.0 ** math.ceil(math.log2(u + 1)))
    return rho_table(u_max)(u)


def solve_u1(tol: float = 1e-9) -> float:
    """The root of 4 u rho(u) = 1 in (2, 3)."""
    f = lambda u: 4 * u * dickman_rho(u) - 1  # noqa: E731
    a, b = 2.0, 3.0
    if not (f(a) > 0 > f(b)):
        raise ArithmeticError("no sign change on (2, 3)")
    while b - a > tol:
        c = (a + b) / 2
        if f(c) > 0:
            a = c
        else:
            b = c
    return (a + b) / 2


def lpf_table(n: int) -> np.ndarray:
    """P^+(j) for 0 <= j <= n (entries 0 and 1 are 1)."""
    lpf = np.ones(n + 1, dtype=np.int64)
    for p in primes_upto(n):
        lpf[p::p] = p
    return lpf


def psi_friable(x: int, y: int) -> int:
    """#{1 <= n <= x : P^+(n) <= y}."""
    if x < 1 or y < 1:
        raise BadParameters("x and y must be positive")
    if y >= x:
        return x
    rough = np.zeros(x + 1, dtype=bool)
    for p in primes_upto(x):
        if p > y:
            rough[p::p] = True
    return int(x - np.count_nonzero(rough[1:]))


@dataclass(frozen=True)
class SmoothStats:
    x: int
    u: float
    shift: int
    hits: int
    total: int
    conjectural_density: float
    unconditional_floor: float

    @property
    def density(self) -> float:
        return self.hits / self.total if self.total else float("nan")


def shifted_prime_stats(x: int, s: int, u: float) -> SmoothStats:
    """Count primes p <= x with P^+(p+s) >= p^{1/u}.

    Primes with p + s = 0 are left out of both counts.
    """
    if x < 100:
        raise BadParameters("x must be at least 100")
    if s == 0 or u <= 1:
        raise BadParameters("need s != 0 and u > 1")
    primes = primes_upto(x)
    vals = np.abs(primes + s)
    keep = vals != 0
    primes, vals = primes[keep], vals[keep]
    lpf = lpf_table(int(vals.max()))
    P = lpf[vals].astype(float)
    # P >= p^{1/u}  <=>  u log P >= log p
    hits = int(np.count_nonzero(u * np.log(P) >= np.log(primes.astype(float))))
    rho = dickman_rho(u)
    return SmoothStats(x, u, s, hits, int(primes.size), 1 - rho, 1 - 4 * rho)


def dk_lower_bound(k: int, p: int) -> float:
    if k < 4 or k % 2:
        raise BadParameters("k must be even and at least 4")
    return 5 * math.log(largest_prime_factor(p * p - 1)) / (2 * k)


def dknew_lower_bound(k: int, p: int) -> Optional[float]:
    if k < 2 or k % 2:
        raise BadParameters("k must be even and at least 2")
    if p < (k + 1) ** 4:
        return None
    P = largest_prime_factor(p - 1)
    if P < 5:
        return None
    return 5 * math.log(P) / (2 * k)


def _smooth_shift_primes(X: int, y: int) -> List[int]:
    """Primes p <= X with P^+(p^2 - 1) = max(P^+(p-1), P^+(p+1)) <= y."""
    primes = primes_upto(X)
    lpf = lpf_table(X + 1)
    ok = (lpf[primes - 1] <= y) & (lpf[primes + 1] <= y)
    return [int(p) for p in primes[ok]]


def special_smooth_primes(bound: int) -> List[int]:
    """Primes p <= bound with P^+(p^2 - 1) <= 3."""
    if bound < 2:
        return []
    return _smooth_shift_primes(bound, 3)


def evertse_bound_check(X: int, x: int) -> Tuple[int, int, bool]:
    if X < 2 or x < 2:
        raise BadParameters("X and x must be at least 2")
    count = len(_smooth_shift_primes(X, x))
    bound = 3 * 7 ** (1 + 2 * prime_pi(x))
    return count, bound, count <= bound
