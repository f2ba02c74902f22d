"""Two-term asymptotic estimates for p(n, mu) and p(n, lambda), and relation checks.

Quantities of size exp(sqrt(n)) are carried as :class:`LogScaleNumber`.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import InvalidArgument, OutOfRange
from .exactpartitions import PartitionTable, cached_table
from .numtheory import LIOUVILLE, MOBIUS, ONE, SignFunction
from .saddle import ZETA2, ordinary_derivatives, solve_saddle

KAPPA = math.pi * math.sqrt(2 / 3)
MIN_N = 100


@dataclass(frozen=True)
class LogScaleNumber:
    """``sign * exp(log_abs)``; ``log_abs`` is ignored when ``sign == 0``."""

    sign: int
    log_abs: float = 0.0

    @classmethod
    def zero(cls) -> "LogScaleNumber":
        return cls(0, float("-inf"))

    @classmethod
    def from_int(cls, n: int) -> "LogScaleNumber":
        if n == 0:
            return cls.zero()
        a = abs(n)
        shift = max(0, a.bit_length() - 64)
        # top 64 bits carry ~19 digits, far more than a double keeps
        return cls(1 if n > 0 else -1, math.log(a >> shift) + shift * math.log(2))

    @classmethod
    def from_float(cls, x: float) -> "LogScaleNumber":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def __neg__(self) -> "LogScaleNumber":
        return LogScaleNumber(-self.sign, self.log_abs)

    def __add__(self, other: "LogScaleNumber") -> "LogScaleNumber":
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        hi, lo = (self, other) if self.log_abs >= other.log_abs else (other, self)
        d = lo.log_abs - hi.log_abs  # <= 0
        if hi.sign == lo.sign:
            return LogScaleNumber(hi.sign, hi.log_abs + math.log1p(math.exp(d)))
        if d == 0:
            return LogScaleNumber.zero()
        return LogScaleNumber(hi.sign, hi.log_abs + math.log1p(-math.exp(d)))

    def __sub__(self, other: "LogScaleNumber") -> "LogScaleNumber":
        return self + (-other)

    def __mul__(self, other: "LogScaleNumber") -> "LogScaleNumber":
        if self.sign == 0 or other.sign == 0:
            return LogScaleNumber.zero()
        return LogScaleNumber(self.sign * other.sign, self.log_abs + other.log_abs)

    def ratio(self, other: "LogScaleNumber") -> float:
        if other.sign == 0:
            raise ZeroDivisionError("ratio to zero")
        if self.sign == 0:
            return 0.0
        return self.sign * other.sign * math.exp(self.log_abs - other.log_abs)

    def to_float(self) -> float:
        return 0.0 if self.sign == 0 else self.sign * math.exp(self.log_abs)

    def __lt__(self, other: "LogScaleNumber") -> bool:
        return (self - other).sign < 0

    def __le__(self, other: "LogScaleNumber") -> bool:
        return (self - other).sign <= 0


def _check_f(f: SignFunction) -> None:
    if f not in (MOBIUS, LIOUVILLE):
        raise InvalidArgument("asymptotic formulas are available for f in {mu, lambda}")


def _check_n(n: int) -> None:
    if int(n) != n or n < MIN_N:
        raise InvalidArgument(f"n must be an integer >= {MIN_N}")


def _log_term(sol, n: int) -> float:
    # rho^-n Phi(+-rho) / sqrt(2 pi Psi_(2))
    return sol.psi[0] + n * sol.u - 0.5 * math.log(2 * math.pi * sol.psi[2])


def estimate_terms(f: SignFunction, n: int) -> tuple[LogScaleNumber, LogScaleNumber]:
    _check_f(f)
    _check_n(n)
    plus = solve_saddle(f, n, 1)
    minus = solve_saddle(f, n, -1)
    return LogScaleNumber(1, _log_term(plus, n)), LogScaleNumber(1, _log_term(minus, n))


def combine(term_plus: LogScaleNumber, term_minus: LogScaleNumber, n: int) -> LogScaleNumber:
    return term_plus + term_minus if n % 2 == 0 else term_plus - term_minus


def estimate(f: SignFunction, n: int) -> LogScaleNumber:
    tp, tm = estimate_terms(f, n)
    return combine(tp, tm, n)


@dataclass(frozen=True)
class EstimateReport:
    n: int
    f: SignFunction
    term_plus: LogScaleNumber
    term_minus: LogScaleNumber
    estimate: LogScaleNumber
    exact_log: LogScaleNumber | None = None
    ratio: float | None = None
    uncertainty: LogScaleNumber | None = None  # odd n only

    CSV_HEADER = ("n", "f", "log_term_plus", "log_term_minus", "sign", "log_estimate", "log_exact", "ratio")

    def csv_row(self) -> tuple:
        ex = None if self.exact_log is None or self.exact_log.sign == 0 else self.exact_log.log_abs
        return (
            self.n,
            self.f.descriptor,
            self.term_plus.log_abs,
            self.term_minus.log_abs,
            self.estimate.sign,
            self.estimate.log_abs if self.estimate.sign else None,
            ex,
            self.ratio,
        )


def report(f: SignFunction, n: int, table: PartitionTable | None = None) -> EstimateReport:
    tp, tm = estimate_terms(f, n)
    est = combine(tp, tm, n)
    if table is None:
        return EstimateReport(n, f, tp, tm, est)
    ex = LogScaleNumber.from_int(table[n])
    ratio = est.ratio(ex) if ex.sign else None
    return EstimateReport(n, f, tp, tm, est, ex, ratio)


def calibrate_odd_constant(reports: Sequence[EstimateReport]) -> float:
    """Median of ``|ratio - 1| n^(1/5)`` over the even-n reports."""
    vals = [abs(r.ratio - 1) * r.n**0.2 for r in reports if r.n % 2 == 0 and r.ratio is not None]
    if not vals:
        raise InvalidArgument("calibration needs at least one even n with an exact value")
    return statistics.median(vals)


def compare_exact(f: SignFunction, n_list: Iterable[int], table: PartitionTable | None = None) -> list[EstimateReport]:
    """Join estimates with exact values.

    Odd-n reports get ``uncertainty = (term_plus + term_minus) C n^(-1/5)``,
    with ``C`` calibrated on the even n of the same call (or on n + 1).
    """
    _check_f(f)
    n_list = [int(n) for n in n_list]
    if not n_list:
        return []
    top = max(n_list)
    if table is None:
        table = cached_table(f, top + 1)
    elif table.f != f:
        raise InvalidArgument(f"table is for f={table.f}, not {f}")
    if table.N < top:
        raise OutOfRange(f"exact table stops at N={table.N} < {top}")
    reports = [report(f, n, table) for n in n_list]
    odd = [r for r in reports if r.n % 2]
    if not odd:
        return reports
    even = [r for r in reports if r.n % 2 == 0]
    if not even:
        if table.N < top + 1:
            raise OutOfRange("odd-n calibration needs the table to cover n + 1")
        even = [report(f, r.n + 1, table) for r in odd]
    C = calibrate_odd_constant(even)
    out = []
    for r in reports:
        if r.n % 2:
            unc = (r.term_plus + r.term_minus) * LogScaleNumber(1, math.log(C) - 0.2 * math.log(r.n)) if C > 0 else LogScaleNumber.zero()
            r = replace(r, uncertainty=unc)
        out.append(r)
    return out


def _zeta_factor(f: SignFunction) -> float:
    return ZETA2 if f == LIOUVILLE else 1.0


def relations_report(f: SignFunction, x_list: Iterable[float]) -> list[dict]:
    """Normalised saddle quantities; each ratio tends to 1 as x grows."""
    _check_f(f)
    z = _zeta_factor(f)
    rows = []
    for x in x_list:
        if x < MIN_N:
            raise InvalidArgument(f"x must be >= {MIN_N}")
        for sign in (1, -1):
            sol = solve_saddle(f, x, sign)
            half = 0.5 * math.sqrt(z * x)
            row = {
                "x": float(x),
                "sign": "+" if sign > 0 else "-",
                "X": sol.X,
                "ratio_X": sol.X / (2 * math.sqrt(x / z)),
                "ratio_neglogrho": x * sol.u / half,
                "ratio_psi0": sol.psi[0] / half,
            }
            ords = ordinary_derivatives(f, sol, 3)
            for j in (1, 2, 3):
                target = math.factorial(j) * 2 ** (j - 1) * x ** ((j + 1) / 2) * z ** ((1 - j) / 2)
                row[f"ratio_psi{j}"] = sol.psi[j] / target
                row[f"ratio_ord{j}"] = sign**j * ords[j - 1] / target
            rows.append(row)
    return rows


RELATIONS_HEADER = (
    "x", "sign", "X", "ratio_X", "ratio_neglogrho", "ratio_psi0",
    "ratio_psi1", "ratio_ord1", "ratio_psi2", "ratio_ord2", "ratio_psi3", "ratio_ord3",
)


def hardy_ramanujan_check(f: SignFunction, k_list: Iterable[int], table: PartitionTable | None = None) -> list[dict]:
    """``log p(2k, f)`` normalised by ``sqrt(2k)`` (mu), ``sqrt(zeta(2) 2k)`` (lambda), ``kappa sqrt(2k)`` (One)."""
    k_list = [int(k) for k in k_list]
    if f not in (MOBIUS, LIOUVILLE, ONE):
        raise InvalidArgument("hardy_ramanujan_check supports f in {one, mu, lambda}")
    top = 2 * max(k_list)
    if table is None:
        table = cached_table(f, top)
    if table.N < top:
        raise OutOfRange(f"exact table stops at N={table.N} < {top}")
    norm = {MOBIUS: 1.0, LIOUVILLE: math.sqrt(ZETA2), ONE: KAPPA}[f]
    rows = []
    for k in k_list:
        n = 2 * k
        v = table[n]
        ratio = math.log(v) / (norm * math.sqrt(n)) if v > 0 else None
        rows.append({"n": n, "f": f.descriptor, "positive": v > 0, "ratio": ratio})
    return rows
