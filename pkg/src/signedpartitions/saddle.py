"""Evaluation of Psi and its weighted derivatives, and the saddle-point solver.

Everything goes through the integer coefficients ``b_m`` of
:mod:`signedpartitions.exactpartitions`:

    Psi_(j)(z) = sum_{m >= 1} m^(j-1) b_m z^m,    Psi_(j) = (z d/dz)^j Psi.

At a real point ``z = sign * exp(-u)`` the series is summed term by term with
``exp(-m u)`` computed per term.  Truncation points are certified against the
majorant ``|m^(j-1) b_m| <= m^j (1 + ln m)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import (
    AmbiguousSolutionError,
    ConsistencyError,
    InvalidArgument,
    NoSolutionError,
    TruncationError,
)
from .exactpartitions import weight_coeffs
from .numtheory import LIOUVILLE, MOBIUS, ONE, SignFunction, stirling_tables

log = logging.getLogger(__name__)

ZETA2 = math.pi**2 / 6
REL_EPS = 1e-15  # default tail target relative to the size X^(j+1)/4 of Psi_(j)
SAMPLE_REL_EPS = 1e-8  # looser target for the monotonicity scan
SAMPLE_POINTS = 64
RESIDUAL_TOL = 1e-10
MIN_X = 100.0


# ---------------------------------------------------------------- truncation


@dataclass(frozen=True)
class SeriesTruncation:
    M: int
    eps: float
    certified: bool
    X: float
    j: int
    tail_bound: float = float("nan")

    def covers(self, X: float, j: int) -> bool:
        return self.certified and self.j >= j and self.X >= X * (1 - 1e-12)


def _log_tail(M: int, X: float, j: int) -> float:
    """log of ``int_{M-1}^inf m^j (1 + ln m) e^(-m/X) dm`` (assumes decreasing integrand)."""
    a = max(M - 1, 1)

    # substitute m = a + X s so the integrand decays on a unit scale for any X
    def scaled(s):
        m = a + X * s
        return math.exp(j * math.log(m / a) - s) * (1 + math.log(m)) / (1 + math.log(a))

    val, _ = integrate.quad(scaled, 0, np.inf, limit=200)
    return math.log(val) + math.log(X) + j * math.log(a) + math.log1p(math.log(a)) - a / X


def default_eps(X: float, j: int) -> float:
    return REL_EPS * max(X, 1.0) ** (j + 1) / 4


def truncation_for(X: float, j: int = 0, eps: float | None = None) -> SeriesTruncation:
    """Smallest doubling of ``M0`` whose tail majorant is at most ``eps``.

    Each term bounded by ``m^j (1 + ln m) e^(-m/X)`` and the sum over
    ``m > M`` by the integral from ``M - 1``, valid once the integrand is
    decreasing there (``M - 1 > X (j + 1)``).
    """
    if X < 1:
        raise InvalidArgument("truncation_for needs X >= 1")
    if not 0 <= j <= 4:
        raise InvalidArgument("j must be in 0..4")
    if eps is None:
        eps = default_eps(X, j)
    if not eps > 0:
        raise InvalidArgument("eps must be positive")
    M = math.ceil(X * ((j + 2) * math.log(X) + math.log(1 / eps) + 4))
    M = max(M, math.ceil(X * (j + 1)) + 2, 8)
    log_eps = math.log(eps)
    for _ in range(60):
        lt = _log_tail(M, X, j)
        if lt <= log_eps:
            return SeriesTruncation(M, eps, True, X, j, math.exp(lt))
        M *= 2
    return SeriesTruncation(M, eps, False, X, j)  # pragma: no cover


@lru_cache(maxsize=512)
def _bucketed_truncation(k: int, j: int, rel: float) -> SeriesTruncation:
    X = 2.0 ** (k / 8)
    return truncation_for(X, j, rel * X ** (j + 1) / 4)


def auto_truncation(X: float, j: int, rel: float = REL_EPS) -> SeriesTruncation:
    """Certified truncation for ``X`` rounded up to a 2^(1/8) grid (cached)."""
    k = max(0, math.ceil(8 * math.log2(max(X, 1.0)) - 1e-9))
    return _bucketed_truncation(k, j, rel)


# ---------------------------------------------------------------- coefficients

_coeff_store: dict[SignFunction, tuple[np.ndarray, np.ndarray]] = {}
_weighted_store: dict[tuple, np.ndarray] = {}


def coefficients(f: SignFunction, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Float arrays ``(b_even, b_odd)`` of length at least ``M + 1`` (grown by doubling)."""
    have = _coeff_store.get(f)
    if have is None or len(have[0]) < M + 1:
        size = M if have is None else max(M, 2 * (len(have[0]) - 1))
        wc = weight_coeffs(f, size)
        have = (wc.even.astype(np.float64), wc.odd.astype(np.float64))
        _coeff_store[f] = have
        for key in [k for k in _weighted_store if k[0] == f]:
            del _weighted_store[key]
    return have


def weighted(f: SignFunction, j: int, M: int, part: str = "all") -> np.ndarray:
    """``c[m] = m^(j-1) b_m`` for ``m <= M`` (``c[0] = 0``); a read-only view."""
    even, odd = coefficients(f, M)
    key = (f, j, part)
    c = _weighted_store.get(key)
    if c is None:
        b = {"all": lambda: even + odd, "even": even.copy, "odd": odd.copy}[part]()
        m = np.arange(len(b), dtype=np.float64)
        m[0] = 1.0
        c = b * m ** (j - 1) if j != 1 else b
        c[0] = 0.0
        c.flags.writeable = False
        _weighted_store[key] = c
    return c[: M + 1]


def _resolve(X: float, j: int, trunc: SeriesTruncation | None) -> SeriesTruncation:
    if trunc is None:
        return auto_truncation(X, j)
    if not trunc.covers(X, j):
        raise TruncationError(
            f"truncation (M={trunc.M}, X={trunc.X:.6g}, j={trunc.j}) not certified for X={X:.6g}, j={j}"
        )
    return trunc


# ---------------------------------------------------------------- evaluation


def _u_of(r: float) -> float:
    if not 0 < r < 1:
        raise InvalidArgument(f"radius must lie in (0, 1), got {r}")
    return -math.log(r)


def eval_psi_real(f: SignFunction, j: int, point: float, trunc: SeriesTruncation | None = None) -> float:
    """``Psi_(j)(point)`` for real ``point`` in (-1, 1) \\ {0}."""
    sign = -1 if point < 0 else 1
    u = _u_of(abs(point))
    tr = _resolve(1 / u, j, trunc)
    c = weighted(f, j, tr.M)
    return float(_kernels.series_at_many(c, np.array([u]), sign)[0])


def eval_psi_at_u(f: SignFunction, j: int, u: float, sign: int = 1, trunc=None) -> float:
    """Same as :func:`eval_psi_real` at ``sign * exp(-u)`` without forming ``rho``."""
    tr = _resolve(1 / u, j, trunc)
    return float(_kernels.series_at_many(weighted(f, j, tr.M), np.array([u]), sign)[0])


def eval_psi_complex(f: SignFunction, j: int, r: float, alpha, trunc: SeriesTruncation | None = None, part="all"):
    """``Psi_(j)(r e(alpha))``; ``alpha`` may be a scalar or an array."""
    u = _u_of(r)
    tr = _resolve(1 / u, j, trunc)
    c = weighted(f, j, tr.M, part)
    w = c * np.exp(-u * np.arange(tr.M + 1, dtype=np.float64))
    scalar = np.ndim(alpha) == 0
    alphas = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    re, im = _kernels.phase_sums(w, alphas)
    out = re + 1j * im
    return complex(out[0]) if scalar else out


def eval_psi_split(f: SignFunction, r: float, alpha, trunc: SeriesTruncation | None = None, j: int = 0):
    """``(Psi_0, Psi_1)`` at ``r e(alpha)``: contributions of even and odd k."""
    return (
        eval_psi_complex(f, j, r, alpha, trunc, part="even"),
        eval_psi_complex(f, j, r, alpha, trunc, part="odd"),
    )


# ---------------------------------------------------------------- solver


@dataclass(frozen=True)
class SaddleSolution:
    f: SignFunction
    x: float
    sign: int
    rho: float
    X: float
    u: float
    psi: tuple  # Psi_(0..3) at sign * rho
    truncation: SeriesTruncation = field(repr=False)
    residual: float = 0.0
    bracket: tuple = ()

    @property
    def point(self) -> float:
        return self.sign * self.rho


def initial_u(f: SignFunction, x: float) -> float:
    if f == LIOUVILLE:
        return 1 / (2 * math.sqrt(x / ZETA2))
    if f == ONE:
        return math.sqrt(ZETA2 / x)
    return 1 / (2 * math.sqrt(x))


def _h(f, x, u, sign, rel=REL_EPS):
    return eval_psi_at_u(f, 1, u, sign, auto_truncation(1 / u, 1, rel)) - x


def _monotone_scan(f, x, lo, hi, sign):
    us = np.linspace(lo, hi, SAMPLE_POINTS)
    tr = auto_truncation(1 / lo, 1, SAMPLE_REL_EPS)
    vals = _kernels.series_at_many(weighted(f, 1, tr.M), us, sign) - x
    changes = [(float(us[i]), float(us[i + 1])) for i in range(len(us) - 1) if (vals[i] > 0) != (vals[i + 1] > 0)]
    if np.any(np.diff(vals) >= 0) or len(changes) > 1:
        raise AmbiguousSolutionError(
            f"Psi_(1) not strictly monotone on bracket [{lo:.6g}, {hi:.6g}] for f={f}, x={x}", changes
        )


def _solve(f: SignFunction, x: float, sign: int) -> SaddleSolution:
    u0 = initial_u(f, x)
    lo_lim, hi_lim = u0 / 64, u0 * 64
    h0 = _h(f, x, u0, sign)
    if h0 == 0:
        lo = hi = u0
    elif h0 > 0:
        # Psi_(1) too large: move outward (larger u, smaller radius)
        lo, hlo = u0, h0
        hi = u0
        while True:
            hi = min(2 * hi, hi_lim)
            hhi = _h(f, x, hi, sign)
            if hhi > hlo:
                raise AmbiguousSolutionError(f"non-monotone expansion at u={hi:.6g}")
            if hhi <= 0:
                break
            if hi >= hi_lim:
                raise NoSolutionError(f"no sign change in [{lo_lim:.6g}, {hi_lim:.6g}] for f={f}, x={x}")
            lo, hlo = hi, hhi
    else:
        hi, hhi = u0, h0
        lo = u0
        while True:
            lo = max(lo / 2, lo_lim)
            hlo = _h(f, x, lo, sign)
            if hlo < hhi:
                raise AmbiguousSolutionError(f"non-monotone expansion at u={lo:.6g}")
            if hlo >= 0:
                break
            if lo <= lo_lim:
                raise NoSolutionError(f"no sign change in [{lo_lim:.6g}, {hi_lim:.6g}] for f={f}, x={x}")
            hi, hhi = lo, hlo
    bracket = (lo, hi)
    if hi > lo:
        _monotone_scan(f, x, lo, hi, sign)
    a, b = lo, hi
    # the looser tail only misjudges the sign within ~1e-8 relative of the root
    while b - a > 1e-6 * b:
        mid = 0.5 * (a + b)
        if _h(f, x, mid, sign, SAMPLE_REL_EPS) > 0:
            a = mid
        else:
            b = mid
    u = 0.5 * (a + b)
    for _ in range(8):
        tr = auto_truncation(1 / u, 3)
        h = eval_psi_at_u(f, 1, u, sign, tr) - x
        if abs(h) <= 1e-13 * x:
            break
        u += h / eval_psi_at_u(f, 2, u, sign, tr)
    tr = auto_truncation(1 / u, 3)
    psi = tuple(eval_psi_at_u(f, j, u, sign, tr) for j in range(4))
    residual = abs(psi[1] - x)
    if residual > RESIDUAL_TOL * x:
        raise ConsistencyError(f"saddle residual {residual:.3g} exceeds {RESIDUAL_TOL}*x at x={x}")
    return SaddleSolution(f, float(x), sign, math.exp(-u), 1 / u, u, psi, tr, residual, bracket)


@lru_cache(maxsize=65536)
def _solve_cached(f: SignFunction, x: float, sign: int) -> SaddleSolution:
    return _solve(f, x, sign)


def solve_saddle(f: SignFunction, x: float, sign: int = 1) -> SaddleSolution:
    """Solve ``Psi_(1)(sign * rho) = x`` for ``rho`` in (0, 1), ``f`` in {Mobius, Liouville}."""
    if f not in (MOBIUS, LIOUVILLE):
        raise InvalidArgument("solve_saddle supports f in {mu, lambda}")
    return solve_saddle_any(f, x, sign)


def solve_saddle_any(f: SignFunction, x: float, sign: int = 1) -> SaddleSolution:
    """Solver without the restriction on ``f`` (used internally, e.g. for One)."""
    if sign not in (1, -1):
        raise InvalidArgument("sign must be +1 or -1")
    if not x >= MIN_X:
        raise InvalidArgument(f"x must be >= {MIN_X:g} (uniqueness not guaranteed below)")
    return _solve_cached(f, float(x), sign)


def ordinary_derivatives(f: SignFunction, solution: SaddleSolution, jmax: int = 3) -> list[float]:
    """``[Psi^(1), ..., Psi^(jmax)]`` at ``sign * rho`` via signed first-kind Stirling numbers."""
    if not 1 <= jmax <= 3:
        raise InvalidArgument("jmax must be in 1..3")
    _, s1 = stirling_tables(jmax)
    z = solution.point
    return [sum(s1[j][k] * solution.psi[k] for k in range(1, j + 1)) / z**j for j in range(1, jmax + 1)]


def weighted_from_ordinary(z: float, derivs: list[float]) -> list[float]:
    """Inverse conversion ``Psi_(j) = sum_k S2(j, k) z^k Psi^(k)``; returns ``Psi_(1..len)``."""
    jmax = len(derivs)
    S2, _ = stirling_tables(jmax)
    return [sum(S2[j][k] * z**k * derivs[k - 1] for k in range(1, j + 1)) for j in range(1, jmax + 1)]
