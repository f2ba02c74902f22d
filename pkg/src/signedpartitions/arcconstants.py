"""Exact arc constants g(q, r), G(q), V(q), W(q) and checks of their identities.

All exact values are :class:`fractions.Fraction` (always in lowest terms with
a positive denominator).  Where a constant involves ``1/zeta(2)`` the functions
return the rational cofactor and say so in their name.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument
from .numtheory import (
    FactorSieve,
    arithmetic_tables,
    factorize,
    shared_sieve,
    squarefree_count_progression,
    squarefree_indicator,
)

ZETA2 = math.pi**2 / 6


def _check_q(q: int) -> None:
    if q < 1:
        raise InvalidArgument("q must be a positive integer")


def _divisors(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisors(n: int) -> list[int]:
    return _divisors(factorize(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def big_g(q: int, sieve: FactorSieve | None = None) -> Fraction:
    """G(q): multiplicative, G(p) = G(p^2) = -1/(p^2 - 1), zero on higher powers."""
    _check_q(q)
    out = Fraction(1)
    for p, e in factorize(q, sieve).items():
        if e > 2:
            return Fraction(0)
        out *= Fraction(-1, p * p - 1)
    return out


def g_times_zeta2(q: int, r: int) -> Fraction:
    """``zeta(2) * g(q, r)`` as an exact rational.

    g(q, r) is supported on squarefree n and factors over primes; the primes
    not dividing q contribute exactly ``1/zeta(2) * prod_{p|q} (1-p^-2)^-1``.
    """
    _check_q(q)
    d = math.gcd(q, r)
    if not is_squarefree(d):
        return Fraction(0)
    out = Fraction(1, q)
    for p, v in factorize(q).items():
        out /= 1 - Fraction(1, p * p)
        e = min(2, v)
        if r % p**e == 0:
            out *= 1 - Fraction(p**e, p * p)
    return out


@lru_cache(maxsize=4)
def _mu_table(N: int) -> np.ndarray:
    mu = arithmetic_tables(shared_sieve(N), N)[0].astype(np.float64)
    mu.flags.writeable = False
    return mu


def g_numeric_truncated(q: int, r: int, N: int) -> float:
    """Partial sum over ``n <= N`` of the defining series of g(q, r).

    The discarded tail is at most ``1/N`` since ``(n^2, q)/q <= 1``.
    """
    _check_q(q)
    if N < 10:
        raise InvalidArgument("N must be >= 10")
    if not is_squarefree(math.gcd(q, r)):
        return 0.0
    mu = _mu_table(N)
    n = np.arange(N + 1, dtype=np.int64)
    g2 = np.gcd(n * n % q, q)  # (n^2, q)
    g2[0] = q
    ok = (r % g2 == 0) & (mu != 0)
    ok[0] = False
    terms = mu[ok] * g2[ok].astype(np.float64) / (n[ok].astype(np.float64) ** 2 * q)
    return math.fsum(terms.tolist())


def _coprime_zeta2_fraction(m: int) -> Fraction:
    """``sum_{(i, m) = 1} i^-2 / zeta(2)`` by Moebius inversion over rad(m)."""
    primes = list(factorize(m))
    out = Fraction(0)
    for mask in range(1 << len(primes)):
        e = 1
        bits = 0
        for i, p in enumerate(primes):
            if mask >> i & 1:
                e *= p
                bits += 1
        out += Fraction((-1) ** bits, e * e)
    return out


def _even_gcd_block(q: int, d: int) -> Fraction:
    """``sum_{k even, (k, q) = d} k^-2`` divided by zeta(2)."""
    qd = q // d
    if d % 2 == 0:
        # k = d j, (j, q/d) = 1, parity automatic
        return _coprime_zeta2_fraction(qd) / (d * d)
    if qd % 2 == 0:
        # j must be even yet coprime to an even q/d
        return Fraction(0)
    # j = 2i with (i, q/d) = 1
    return _coprime_zeta2_fraction(qd) / (4 * d * d)


def v_constant(q: int) -> Fraction:
    """V(q) = zeta(2)^-1 sum_{d | q} G(q/d) sum_{k even, (k, q) = d} k^-2, exactly."""
    _check_q(q)
    return sum((big_g(q // d) * _even_gcd_block(q, d) for d in divisors(q)), Fraction(0))


def v_numeric_truncated(q: int, K: int) -> float:
    """Direct truncation ``zeta(2)^-1 sum_{k even <= K} G(q/(q,k)) k^-2`` (oracle)."""
    _check_q(q)
    terms = [float(big_g(q // math.gcd(q, k))) / (k * k) for k in range(2, K + 1, 2)]
    return math.fsum(terms) / ZETA2


def w_constant(q: int) -> Fraction:
    _check_q(q)
    return Fraction(1, q * q) if q % 2 == 0 else Fraction(1, 4 * q * q)


def crude_v_bound(q: int) -> Fraction:
    """``q^-2 sum_{d | q} |G(d)| d^2``, the majorant of |V(q)|."""
    _check_q(q)
    return sum((abs(big_g(d)) * d * d for d in divisors(q)), Fraction(0)) / (q * q)


def ramanujan_sum_at_one(m: int) -> int:
    """``sum_{(r, m) = 1, 1 <= r <= m} e(r/m)``, equal to mu(m)."""
    fac = factorize(m)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


# ---------------------------------------------------------------- identity checks


@dataclass(frozen=True)
class GsumReport:
    q: int
    lhs: complex
    rhs: float
    abs_diff: float
    exact_lhs: Fraction
    exact_rhs: Fraction
    passed: bool


def verify_gsum_identity(q: int, tol: float = 1e-9) -> GsumReport:
    """Compare ``sum_r e(r/q) g(q, r)`` with ``G(q)/zeta(2)``.

    The numeric side sums ``q`` complex terms directly.  The exact side groups
    ``r`` by ``d = (q, r)``; each group is a Ramanujan sum ``c_{q/d}(1)``.
    """
    _check_q(q)
    terms = [cmath.exp(2j * math.pi * r / q) * float(g_times_zeta2(q, r)) for r in range(1, q + 1)]
    lhs = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)) / ZETA2
    G = big_g(q)
    rhs = float(G) / ZETA2
    exact_lhs = sum(
        (g_times_zeta2(q, d) * ramanujan_sum_at_one(q // d) for d in divisors(q)), Fraction(0)
    )
    diff = abs(lhs - rhs)
    return GsumReport(q, lhs, rhs, diff, exact_lhs, G, diff <= tol and exact_lhs == G)


@dataclass(frozen=True)
class DensityRow:
    t: int
    count: int
    expected: float
    normalized: float  # |count - g t| / sqrt(t)


def verify_sqfree_density(q: int, r: int, t_list: Iterable[int]) -> list[DensityRow]:
    g = float(g_times_zeta2(q, r)) / ZETA2
    rows = []
    for t in t_list:
        c = squarefree_count_progression(t, q, r)
        rows.append(DensityRow(int(t), c, g * t, abs(c - g * t) / math.sqrt(t)))
    return rows


def density_table(q_max: int, t_list: Sequence[int]) -> list[tuple[int, int, DensityRow]]:
    """Normalised squarefree-density discrepancies for every ``q <= q_max``, ``0 <= r < q``."""
    s = squarefree_indicator(max(t_list))
    out = []
    for q in range(1, q_max + 1):
        for r in range(q):
            g = float(g_times_zeta2(q, r)) / ZETA2
            for t in t_list:
                start = r % q or q
                count = int(np.count_nonzero(s[start : t + 1 : q])) if t >= start else 0
                out.append((q, r, DensityRow(t, count, g * t, abs(count - g * t) / math.sqrt(t))))
    return out
