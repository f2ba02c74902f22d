"""Sieves, arithmetic sign functions, exponential sums and Stirling numbers."""

from __future__ import annotations

import bisect
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidArgument, OutOfRange


@dataclass(frozen=True)
class FactorSieve:
    """Smallest-prime-factor table for ``1..limit``.

    ``spf[0]`` is unused (0); ``spf[1] == 1``.
    """

    limit: int
    spf: np.ndarray = field(repr=False, compare=False)

    def check(self, n: int) -> None:
        if n < 1 or n > self.limit:
            raise OutOfRange(f"n={n} outside sieve range 1..{self.limit}")

    def factorize(self, n: int) -> dict[int, int]:
        self.check(n)
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out


def build_sieve(limit: int) -> FactorSieve:
    if limit < 1:
        raise InvalidArgument("sieve limit must be >= 1")
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            mask = block == np.arange(p * p, limit + 1, p)
            block[mask] = p
    spf.flags.writeable = False
    return FactorSieve(limit, spf)


_shared: FactorSieve | None = None


def shared_sieve(limit: int) -> FactorSieve:
    """Process-wide sieve that grows (by doubling) to cover ``limit``."""
    global _shared
    if _shared is None or _shared.limit < limit:
        size = max(limit, 1024)
        if _shared is not None:
            size = max(size, 2 * _shared.limit)
        _shared = build_sieve(size)
    return _shared


def factorize(n: int, sieve: FactorSieve | None = None) -> dict[int, int]:
    """Prime factorisation of ``n`` as ``{p: exponent}``."""
    if n < 1:
        raise InvalidArgument("factorize needs n >= 1")
    if sieve is not None and n <= sieve.limit:
        return sieve.factorize(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int, sieve: FactorSieve) -> int:
    sieve.check(n)
    r = 0
    for e in sieve.factorize(n).values():
        if e > 1:
            return 0
        r += 1
    return -1 if r % 2 else 1


def liouville(n: int, sieve: FactorSieve) -> int:
    sieve.check(n)
    return -1 if sum(sieve.factorize(n).values()) % 2 else 1


def arithmetic_tables(sieve: FactorSieve, n_max: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(mu, lambda)`` arrays over ``0..n_max`` (index 0 holds 0)."""
    n_max = sieve.limit if n_max is None else n_max
    if n_max > sieve.limit:
        raise OutOfRange(f"n_max={n_max} exceeds sieve limit {sieve.limit}")
    rest = np.arange(n_max + 1, dtype=np.int64)
    omega_total = np.zeros(n_max + 1, dtype=np.int64)
    squarefree = np.ones(n_max + 1, dtype=bool)
    prev = np.zeros(n_max + 1, dtype=np.int64)
    spf = sieve.spf
    active = rest > 1
    while active.any():
        idx = np.nonzero(active)[0]
        p = spf[rest[idx]]
        squarefree[idx[p == prev[idx]]] = False
        prev[idx] = p
        rest[idx] //= p
        omega_total[idx] += 1
        active = rest > 1
    liou = np.where(omega_total % 2 == 0, 1, -1).astype(np.int8)
    mu = np.where(squarefree, liou, 0).astype(np.int8)
    mu[0] = 0
    liou[0] = 0
    return mu, liou


@lru_cache(maxsize=8)
def squarefree_indicator(t: int) -> np.ndarray:
    """Boolean array ``s`` with ``s[n]`` true iff ``n`` is squarefree (``s[0]`` false)."""
    s = np.ones(t + 1, dtype=bool)
    s[0] = False
    for p in range(2, math.isqrt(t) + 1):
        s[p * p :: p * p] = False
    s.flags.writeable = False
    return s


# ---------------------------------------------------------------- sign functions

_TAGS = ("One", "Mobius", "Liouville", "MobiusSquared", "Indicator")


@dataclass(frozen=True)
class SignFunction:
    """Identifier of an arithmetic function ``N -> {-1, 0, 1}``.

    ``members`` is only used by the ``Indicator`` tag and is kept sorted.
    """

    tag: str
    members: tuple[int, ...] = ()

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise InvalidArgument(f"unknown sign function {self.tag!r}")
        if self.tag != "Indicator" and self.members:
            raise InvalidArgument("only Indicator carries a member set")

    @property
    def descriptor(self) -> str:
        """Short stable name used in cache files and CLI output."""
        if self.tag == "Indicator":
            digest = hashlib.sha256(",".join(map(str, self.members)).encode()).hexdigest()[:12]
            return f"ind-{digest}"
        return _DESCRIPTORS[self.tag]

    @property
    def nonnegative(self) -> bool:
        return self.tag in ("One", "MobiusSquared", "Indicator")

    def contains(self, n: int) -> bool:
        i = bisect.bisect_left(self.members, n)
        return i < len(self.members) and self.members[i] == n

    def __str__(self) -> str:
        return self.descriptor


def indicator(members: Iterable[int]) -> SignFunction:
    return SignFunction("Indicator", tuple(sorted({int(m) for m in members if int(m) >= 1})))


ONE = SignFunction("One")
MOBIUS = SignFunction("Mobius")
LIOUVILLE = SignFunction("Liouville")
MOBIUS_SQUARED = SignFunction("MobiusSquared")

_DESCRIPTORS = {"One": "one", "Mobius": "mu", "Liouville": "lambda", "MobiusSquared": "mu2"}
_BY_NAME = {
    "one": ONE,
    "1": ONE,
    "mu": MOBIUS,
    "mobius": MOBIUS,
    "lambda": LIOUVILLE,
    "liouville": LIOUVILLE,
    "mu2": MOBIUS_SQUARED,
    "mobiussquared": MOBIUS_SQUARED,
}


def parse_sign_function(name: str) -> SignFunction:
    try:
        return _BY_NAME[name.strip().lower()]
    except KeyError:
        raise InvalidArgument(f"unknown sign function {name!r}; expected one of one, mu, lambda, mu2") from None


def sign_value(f: SignFunction, n: int, sieve: FactorSieve) -> int:
    if n < 1:
        raise InvalidArgument("sign functions are defined on positive integers")
    if f.tag == "One":
        return 1
    if f.tag == "Indicator":
        return 1 if f.contains(n) else 0
    if f.tag == "Liouville":
        return liouville(n, sieve)
    m = mobius(n, sieve)
    return m * m if f.tag == "MobiusSquared" else m


def sign_values(f: SignFunction, n_max: int, sieve: FactorSieve | None = None) -> np.ndarray:
    """Array ``v`` of length ``n_max + 1`` with ``v[n] = f(n)`` and ``v[0] = 0``."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    if n_max < 1:
        return out
    if f.tag == "One":
        out[1:] = 1
    elif f.tag == "Indicator":
        mem = [m for m in f.members if m <= n_max]
        out[mem] = 1
    else:
        sieve = sieve if sieve is not None and sieve.limit >= n_max else shared_sieve(n_max)
        mu, liou = arithmetic_tables(sieve, n_max)
        if f.tag == "Mobius":
            out[:] = mu
        elif f.tag == "Liouville":
            out[:] = liou
        else:
            out[:] = mu.astype(np.int64) ** 2
    return out


# ---------------------------------------------------------------- counting / sums


def squarefree_count_progression(t: int, q: int, r: int) -> int:
    """Number of squarefree ``n <= t`` with ``n = r (mod q)``."""
    if q < 1:
        raise InvalidArgument("modulus q must be >= 1")
    if t < 1:
        return 0
    s = squarefree_indicator(int(t))
    start = r % q
    if start == 0:
        start = q
    return int(np.count_nonzero(s[start::q]))


def exp_sum(f: SignFunction, t: int, alpha, sieve: FactorSieve | None = None) -> complex:
    """``sum_{n <= t} f(n) e(n alpha)`` by direct summation.

    A :class:`fractions.Fraction` ``alpha`` gets exact phase reduction.
    """
    t = int(t)
    if t < 1:
        return 0j
    vals = sign_values(f, t, sieve).astype(np.float64)
    if isinstance(alpha, Fraction):
        a, q = alpha.numerator, alpha.denominator
        n = np.arange(t + 1, dtype=np.int64)
        ph = 2.0 * math.pi * ((n * (a % q)) % q).astype(np.float64) / q
        re = math.fsum((vals * np.cos(ph)).tolist())
        im = math.fsum((vals * np.sin(ph)).tolist())
        return complex(re, im)
    re, im = _kernels.phase_sums(vals, np.array([float(alpha)]))
    return complex(re[0], im[0])


def exp_sums(f: SignFunction, t: int, alphas: Sequence[float], sieve: FactorSieve | None = None) -> np.ndarray:
    """Vectorised :func:`exp_sum` over float ``alphas``."""
    t = int(t)
    alphas = np.asarray(alphas, dtype=np.float64)
    if t < 1:
        return np.zeros(alphas.shape, dtype=complex)
    vals = sign_values(f, t, sieve).astype(np.float64)
    re, im = _kernels.phase_sums(vals, alphas)
    return re + 1j * im


def stirling_tables(jmax: int) -> tuple[list[list[int]], list[list[int]]]:
    """Return ``(S2, s1)``: second kind and signed first kind, indexed ``[j][k]``."""
    if jmax < 0 or jmax > 20:
        raise InvalidArgument("stirling_tables supports 0 <= jmax <= 20")
    S2 = [[0] * (jmax + 1) for _ in range(jmax + 1)]
    s1 = [[0] * (jmax + 1) for _ in range(jmax + 1)]
    S2[0][0] = s1[0][0] = 1
    for j in range(1, jmax + 1):
        for k in range(1, j + 1):
            S2[j][k] = k * S2[j - 1][k] + S2[j - 1][k - 1]
            s1[j][k] = s1[j - 1][k - 1] - (j - 1) * s1[j - 1][k]
    return S2, s1
