"""Arc decomposition of [0, 1) and numerical checks of Psi(rho e(alpha)) on each arc type.

Radii are always ``rho = exp(-1/X)``; the starred family reuses the same X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arcconstants import ZETA2, v_constant, w_constant
from .errors import InvalidArgument, PrecisionError
from .exactpartitions import weight_coeffs
from .numtheory import LIOUVILLE, MOBIUS, MOBIUS_SQUARED, ONE, SignFunction, exp_sums
from .saddle import auto_truncation, eval_psi_complex, eval_psi_real, solve_saddle_any, truncation_for

GOLDEN = (math.sqrt(5) - 1) / 2
KAPPA = math.pi * math.sqrt(2 / 3)

# the split of the circle between the plus and the starred integrals
A_PLUS = ((0.0, 0.25), (0.75, 1.0))
A_STAR = ((0.25, 0.75),)


@dataclass(frozen=True)
class ArcParams:
    f: SignFunction
    X: float
    Q: float
    eta: float

    @property
    def rho(self) -> float:
        return math.exp(-1 / self.X)

    @property
    def disjoint(self) -> bool:
        """Major arcs are pairwise disjoint once ``X > 2 Q^2``."""
        return self.X > 2 * self.Q**2


def arc_params(f: SignFunction, X: float) -> ArcParams:
    if f not in (MOBIUS, LIOUVILLE):
        raise InvalidArgument("arc parameters are defined for f in {mu, lambda}")
    if not X > 1:
        raise InvalidArgument("X must exceed 1")
    Q = X ** (2 / 5) if f == MOBIUS else X ** (1 / 3)
    eta = 1 / (X * math.log(X) ** 0.25)
    return ArcParams(f, float(X), Q, eta)


@dataclass(frozen=True)
class ArcLabel:
    kind: str  # Principal | PrincipalStar | Major | Minor
    q: int | None = None
    a: int | None = None
    beta: float | None = None


def _convergents(x: Fraction, qmax: float):
    """Continued-fraction convergents and semiconvergents of ``x`` with denominator <= qmax."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        if a == 0 and q0 <= qmax:
            yield p0, q0  # the convergent 0/1
        for t in range(1, a + 1):
            pt, qt = t * p1 + p0, t * q1 + q0
            if qt > qmax:
                return
            if t == a or 2 * t >= a:
                yield pt, qt
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        num, den = den, r


def _major_candidate(alpha: float, params: ArcParams):
    qmax = math.floor(params.Q)
    best = None
    if params.disjoint:
        cands = _convergents(Fraction(alpha), qmax)
    else:
        cands = ((round(q * alpha), q) for q in range(1, qmax + 1))
    for a, q in cands:
        if math.gcd(a, q) != 1:
            continue
        beta = alpha - a / q
        if abs(beta) <= params.Q / (q * params.X) and (best is None or q < best[1]):
            best = (a, q, beta)
    return best


def classify(alpha: float, params: ArcParams) -> ArcLabel:
    if not 0 <= alpha < 1:
        raise InvalidArgument("alpha must lie in [0, 1)")
    if alpha <= params.eta:
        return ArcLabel("Principal", 1, 0, alpha)
    if 1 - alpha <= params.eta:
        return ArcLabel("Principal", 1, 1, alpha - 1)
    if abs(alpha - 0.5) <= params.eta:
        return ArcLabel("PrincipalStar", 2, 1, alpha - 0.5)
    hit = _major_candidate(alpha, params)
    if hit is None:
        return ArcLabel("Minor")
    a, q, beta = hit
    return ArcLabel("Major", q, a, beta)


def in_plus_family(alpha: float) -> bool:
    return alpha < 0.25 or alpha >= 0.75


def _psi(params: ArcParams, alphas, j: int = 0) -> np.ndarray:
    tr = auto_truncation(params.X, j)
    return np.atleast_1d(eval_psi_complex(params.f, j, params.rho, np.asarray(alphas, dtype=float), tr))


def arc_constant(f: SignFunction, q: int) -> float:
    return float(v_constant(q)) if f == MOBIUS else ZETA2 * float(w_constant(q))


def kronecker(count: int, start: int = 1) -> np.ndarray:
    """Deterministic low-discrepancy points ``frac(k * golden)``."""
    k = np.arange(start, start + count, dtype=np.float64)
    return np.mod(k * GOLDEN, 1.0)


@dataclass
class ScanRow:
    alpha: float
    arc_kind: str
    q: int | None
    a: int | None
    beta: float | None
    re_psi: float
    im_psi: float
    residual: float

    HEADER = ("alpha", "arc_kind", "q", "a", "beta", "re_psi", "im_psi", "residual")

    def as_tuple(self) -> tuple:
        return (self.alpha, self.arc_kind, self.q, self.a, self.beta, self.re_psi, self.im_psi, self.residual)


# ---------------------------------------------------------------- major arcs


@dataclass
class ResidualReport:
    X: float
    q: int
    a: int
    constant: float
    rows: list = field(repr=False)
    max: float = 0.0
    median: float = 0.0


def major_arc_residual(params: ArcParams, q: int, a: int, beta_grid: Sequence[float]) -> ResidualReport:
    """``|Psi(rho e(a/q + beta)) - C(q) X / (1 - 2 pi i X beta)| / X`` on a grid of beta."""
    if q < 1 or not (0 <= a < q or (a, q) == (1, 1)) or math.gcd(a, q) != 1:
        raise InvalidArgument("need 0 <= a < q with (a, q) = 1")
    if q > params.Q:
        raise InvalidArgument(f"q={q} exceeds Q={params.Q:.6g}")
    width = params.Q / (q * params.X)
    betas = np.asarray(beta_grid, dtype=float)
    if np.any(np.abs(betas) > width * (1 + 1e-12)):
        raise InvalidArgument(f"|beta| must be <= Q/(qX) = {width:.6g}")
    C = arc_constant(params.f, q)
    X = params.X
    alphas = np.mod(a / q + betas, 1.0)
    psi = _psi(params, alphas)
    main = C * X / (1 - 2j * math.pi * X * betas)
    res = np.abs(psi - main) / X
    rows = [
        ScanRow(float(al), "Major", q, a, float(b), float(p.real), float(p.imag), float(r))
        for al, b, p, r in zip(alphas, betas, psi, res)
    ]
    return ResidualReport(X, q, a, C, rows, float(res.max()), float(np.median(res)))


# ---------------------------------------------------------------- minor arcs


def adversarial_points(params: ArcParams, qmax: int = 12, factor: float = 1.001) -> list[float]:
    """Points just outside the major arcs of small denominator (and just outside the principal arcs)."""
    pts = []
    for q in range(1, min(qmax, math.floor(params.Q)) + 1):
        w = factor * params.Q / (q * params.X)
        for a in range(q + 1):
            if math.gcd(a, q) != 1:
                continue
            for s in (-1, 1):
                x = a / q + s * w
                if 0 <= x < 1:
                    pts.append(x)
    return sorted(set(pts))


@dataclass
class MinorScan:
    X: float
    rows: list = field(repr=False)
    max: float
    median: float
    q90: float
    psi_rho_over_X: float


def minor_arc_scan(params: ArcParams, sample_count: int = 256) -> MinorScan:
    if sample_count < 10:
        raise InvalidArgument("sample_count must be >= 10")
    chosen: list[tuple[float, ArcLabel]] = []
    for x in adversarial_points(params):
        lab = classify(x, params)
        if lab.kind == "Minor":
            chosen.append((x, lab))
    chosen = chosen[: sample_count // 4]
    k = 1
    while len(chosen) < sample_count:
        for x in kronecker(4 * sample_count, k):
            lab = classify(float(x), params)
            if lab.kind == "Minor":
                chosen.append((float(x), lab))
                if len(chosen) == sample_count:
                    break
        k += 4 * sample_count
        if k > 400 * sample_count:
            break
    alphas = np.array([c[0] for c in chosen])
    psi = _psi(params, alphas)
    vals = np.abs(psi) / params.X
    rows = [
        ScanRow(float(al), "Minor", None, None, None, float(p.real), float(p.imag), float(v))
        for al, p, v in zip(alphas, psi, vals)
    ]
    psi_rho = eval_psi_real(params.f, 0, params.rho, auto_truncation(params.X, 0))
    return MinorScan(
        params.X, rows, float(vals.max()), float(np.median(vals)), float(np.quantile(vals, 0.9)), psi_rho / params.X
    )


# ---------------------------------------------------------------- non-principal inequality


@dataclass
class InequalitySample:
    alpha: float
    family: str  # "plus" or "star"
    re_psi: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.re_psi <= self.bound


@dataclass
class InequalityReport:
    X: float
    samples: list = field(repr=False)
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def _family_points(params: ArcParams, family: str, count: int) -> list[float]:
    eta = params.eta
    if family == "plus":
        keep = lambda x: in_plus_family(x) and min(x, 1 - x) > eta  # noqa: E731
        edge = [eta * 1.0001, 1 - eta * 1.0001, 2 * eta, 1 - 2 * eta, 0.25 - 1e-9, 0.75]
    else:
        keep = lambda x: 0.25 <= x < 0.75 and abs(x - 0.5) > eta  # noqa: E731
        edge = [0.5 - eta * 1.0001, 0.5 + eta * 1.0001, 0.5 - 2 * eta, 0.5 + 2 * eta, 0.25, 0.75 - 1e-9]
    adv = [x for x in edge + adversarial_points(params) if keep(x)]
    # centres of small-denominator major arcs inside the family
    for q in range(3, min(12, math.floor(params.Q)) + 1):
        adv += [a / q for a in range(1, q) if math.gcd(a, q) == 1 and keep(a / q)]
    adv = sorted(set(adv))[: count // 2]
    pts = list(adv)
    k = 1
    while len(pts) < count:
        for x in kronecker(2 * count, k):
            x = float(x)
            if keep(x):
                pts.append(x)
                if len(pts) == count:
                    break
        k += 2 * count
    return pts


def nonprincipal_inequality_check(params: ArcParams, sample_count: int = 256) -> InequalityReport:
    """``Re Psi(rho e(alpha)) <= (1 - 1/log X) Psi(+-rho)`` on both non-principal families."""
    if params.X < 1e3:
        raise InvalidArgument("the non-principal inequality is checked for X >= 1000")
    tr = auto_truncation(params.X, 0)
    factor = 1 - 1 / math.log(params.X)
    samples = []
    for family, sign in (("plus", 1), ("star", -1)):
        pts = _family_points(params, family, sample_count)
        bound = factor * eval_psi_real(params.f, 0, sign * params.rho, tr)
        psi = _psi(params, pts)
        samples += [InequalitySample(x, family, float(p.real), bound) for x, p in zip(pts, psi)]
    return InequalityReport(params.X, samples, [s for s in samples if not s.ok])


# ---------------------------------------------------------------- principal arcs


@dataclass
class TaylorReport:
    X: float
    betas: list
    w: list  # complex w(beta); None at beta = 0
    max_abs_w: float

    @property
    def passed(self) -> bool:
        return self.max_abs_w <= 1.05


def principal_taylor_check(params: ArcParams, beta_list: Sequence[float]) -> TaylorReport:
    """The third-order remainder coefficient ``w(beta)`` implied by the Taylor identity."""
    betas = [float(b) for b in beta_list]
    if any(abs(b) > params.eta * (1 + 1e-12) for b in betas):
        raise InvalidArgument(f"|beta| must be <= eta = {params.eta:.6g}")
    tr = auto_truncation(params.X, 3)
    d = [eval_psi_real(params.f, j, params.rho, tr) for j in range(4)]
    psi = _psi(params, np.mod(betas, 1.0)) if betas else []
    ws = []
    for b, p in zip(betas, psi):
        if b == 0:
            ws.append(None)
            continue
        quad = d[0] + 2j * math.pi * b * d[1] - 2 * math.pi**2 * b * b * d[2]
        ws.append(complex((p - quad) / (8 / 3 * math.pi**3 * abs(b) ** 3 * d[3])))
    mags = [abs(w) for w in ws if w is not None]
    return TaylorReport(params.X, betas, ws, max(mags) if mags else 0.0)


@dataclass
class FormulaReport:
    X: float
    j: int
    sign: int
    ratios: list
    deviation: float  # max |ratio - 1|


def principal_formula_check(params: ArcParams, j: int, beta_grid: Sequence[float], sign: int = 1) -> FormulaReport:
    """``Psi_(j)(+-rho e(beta))`` against ``(j!/4) c_f (X / (1 - 2 pi i X beta))^(j+1)``."""
    if not 0 <= j <= 3:
        raise InvalidArgument("j must be in 0..3")
    betas = np.asarray(beta_grid, dtype=float)
    if np.any(np.abs(betas) > params.eta * (1 + 1e-12)):
        raise InvalidArgument(f"|beta| must be <= eta = {params.eta:.6g}")
    X = params.X
    shift = 0.0 if sign > 0 else 0.5
    psi = _psi(params, np.mod(betas + shift, 1.0), j)
    cf = ZETA2 if params.f == LIOUVILLE else 1.0
    main = math.factorial(j) / 4 * cf * (X / (1 - 2j * math.pi * X * betas)) ** (j + 1)
    ratios = psi / main
    return FormulaReport(X, j, sign, [complex(r) for r in ratios], float(np.max(np.abs(ratios - 1))))


# ---------------------------------------------------------------- exponential-sum diagnostics


def default_theta_grid(count: int = 64) -> np.ndarray:
    return kronecker(count)


def _log_ratio_table(f: SignFunction, t_list, theta_grid, A: float) -> list[dict]:
    thetas = np.asarray(theta_grid, dtype=float)
    rows = []
    for t in t_list:
        t = int(t)
        s = np.abs(exp_sums(f, t, thetas))
        i = int(np.argmax(s))
        rows.append({"t": t, "theta": float(thetas[i]), "sup_abs": float(s[i]), "ratio": float(s[i] * math.log(t) ** A / t)})
    return rows


def davenport_ratio(t_list: Iterable[int], theta_grid=None, A: float = 2.0) -> list[dict]:
    """``sup_theta |S_mu(t, theta)| (log t)^A / t`` over the grid."""
    return _log_ratio_table(MOBIUS, t_list, default_theta_grid() if theta_grid is None else theta_grid, A)


def bateman_chowla_ratio(t_list: Iterable[int], theta_grid=None, A: float = 2.0) -> list[dict]:
    """Liouville analogue of :func:`davenport_ratio`."""
    return _log_ratio_table(LIOUVILLE, t_list, default_theta_grid() if theta_grid is None else theta_grid, A)


def brudern_minor_sup(X: float, sample_count: int = 128) -> dict:
    """``sup |S_{mu^2}(X, theta)| Q / X`` over sampled minor-arc theta, ``Q = X^(2/5)``."""
    params = arc_params(MOBIUS, X)
    pts = [x for x in adversarial_points(params) if classify(x, params).kind == "Minor"][: sample_count // 4]
    k = 1
    while len(pts) < sample_count:
        for x in kronecker(4 * sample_count, k):
            if classify(float(x), params).kind == "Minor":
                pts.append(float(x))
                if len(pts) == sample_count:
                    break
        k += 4 * sample_count
    t = int(X)
    s = np.abs(exp_sums(MOBIUS_SQUARED, t, pts))
    i = int(np.argmax(s))
    at_zero = float(np.abs(exp_sums(MOBIUS_SQUARED, t, [0.0]))[0])
    return {
        "X": float(X),
        "Q": params.Q,
        "theta": pts[i],
        "sup_ratio": float(s[i] * params.Q / X),
        "ratio_at_zero": at_zero * params.Q / X,
    }


# ---------------------------------------------------------------- contour quadrature


@dataclass(frozen=True)
class ContourResult:
    n: int
    f: SignFunction
    value: int
    raw: float
    distance: float
    X: float
    G: int
    aliasing_bound: float  # from |p(m, f)| <= p(m, 1)
    aliasing_estimate: float  # from the observed growth of |p(m, f)|


def _contour_X(f: SignFunction, n: int) -> float:
    if n == 0:
        return 2.0
    if n >= 100:
        return solve_saddle_any(f, n, 1).X
    if f == ONE:
        return max(2.0, math.sqrt(6 * n) / math.pi)
    return max(2.0, 2 * math.sqrt(n))


# growth constants c with |p(m, f)| <= exp(c sqrt m) for every m <= 10^4 (exact tables)
GROWTH = {"One": KAPPA, "Mobius": 1.25, "Liouville": 1.45}


def _aliasing_bound(n: int, G: int, X: float, c: float = KAPPA) -> float:
    """``sum_{j >= 1} exp(c sqrt(n + jG)) rho^(jG)``; rigorous for ``c = kappa``."""
    total = 0.0
    for j in range(1, 1000):
        term = math.exp(c * math.sqrt(n + j * G) - j * G / X)
        total += term
        if term < 1e-30 * max(total, 1e-300):
            break
    return total


def contour_report(f: SignFunction, n: int) -> ContourResult:
    """Trapezoid rule for the Cauchy integral of ``Phi(z) z^(-n-1)`` on ``|z| = rho``.

    ``Psi`` on the grid comes from one FFT of the coefficients folded mod G;
    everything runs in extended precision.
    """
    if n < 0 or int(n) != n:
        raise InvalidArgument("n must be a nonnegative integer")
    if n > 300:
        raise InvalidArgument("contour quadrature supports n <= 300")
    n = int(n)
    X = _contour_X(f, n)
    G = 1 << math.ceil(math.log2(max(8 * n, 8 * X * math.log(X), 16)))
    M = truncation_for(X, 0, 1e-22).M
    wc = weight_coeffs(f, M)
    b = (wc.even + wc.odd).astype(np.longdouble)
    m = np.arange(M + 1, dtype=np.longdouble)
    m[0] = 1
    X_ld = np.longdouble(X)
    coef = b / m * np.exp(-m / X_ld)
    coef[0] = 0
    folded = np.zeros(G, dtype=np.longdouble)
    np.add.at(folded, np.arange(M + 1) % G, coef)
    psi = np.fft.ifft(folded.astype(np.clongdouble)) * G  # Psi(rho e(k/G))
    phi = np.exp(psi)
    coeff = np.fft.fft(phi)[n % G] / G
    raw = coeff.real * np.exp(np.longdouble(n) / X_ld)
    value = int(np.rint(raw))
    distance = float(abs(raw - value))
    result = ContourResult(n, f, value, float(raw), distance, X, G, _aliasing_bound(n, G, X), _aliasing_bound(n, G, X, GROWTH.get(f.tag, KAPPA)))
    if distance > 0.25:
        raise PrecisionError(f"contour value {float(raw)!r} is {distance:.3g} from the nearest integer")
    return result


def contour_estimate(f: SignFunction, n: int) -> int:
    return contour_report(f, n).value
