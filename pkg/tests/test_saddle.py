import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedpartitions.errors import AmbiguousSolutionError, InvalidArgument, NoSolutionError, TruncationError
from signedpartitions.numtheory import LIOUVILLE, MOBIUS, ONE
from signedpartitions import saddle
from signedpartitions.saddle import (
    ZETA2,
    eval_psi_complex,
    eval_psi_real,
    eval_psi_split,
    ordinary_derivatives,
    solve_saddle,
    truncation_for,
    weighted_from_ordinary,
)


def test_truncation_monotone_in_eps():
    Ms = [truncation_for(500.0, 1, eps).M for eps in (1e-14, 1e-10, 1e-6, 1e-2)]
    assert Ms == sorted(Ms, reverse=True)


def test_truncation_small_X_and_errors():
    tr = truncation_for(1.0, 0, 1e-12)
    assert tr.certified and math.isfinite(tr.M)
    with pytest.raises(InvalidArgument):
        truncation_for(100.0, 0, 0.0)
    with pytest.raises(InvalidArgument):
        truncation_for(0.5, 0, 1e-3)


def test_truncation_self_certifies():
    X = 100.0
    tr = truncation_for(X, 0, 1e-12)
    assert tr.certified and tr.tail_bound <= 1e-12
    # recomputation with 2M changes the value by at most eps
    rho = math.exp(-1 / X)
    a = eval_psi_real(MOBIUS, 0, rho, tr)
    big = saddle.SeriesTruncation(2 * tr.M, tr.eps, True, X, 0)
    b = eval_psi_real(MOBIUS, 0, rho, big)
    assert abs(a - b) <= 1e-12


@pytest.mark.parametrize("f", [MOBIUS, LIOUVILLE, ONE], ids=lambda f: f.descriptor)
@pytest.mark.parametrize("j", [0, 1, 2, 3])
@pytest.mark.parametrize("rho", [0.9, 0.99, 0.999])
def test_doubling_M_stays_within_eps(f, j, rho):
    X = -1 / math.log(rho)
    tr = truncation_for(X, j)
    big = saddle.SeriesTruncation(2 * tr.M, tr.eps, True, X, j)
    for pt in (rho, -rho):
        a = eval_psi_real(f, j, pt, tr)
        b = eval_psi_real(f, j, pt, big)
        assert abs(a - b) <= tr.eps + 1e-15 * abs(a) * 10


def test_uncertified_truncation_refused():
    tr = truncation_for(10.0, 0, 1e-6)
    with pytest.raises(TruncationError):
        eval_psi_real(MOBIUS, 0, math.exp(-1 / 1000), tr)
    with pytest.raises(TruncationError):
        eval_psi_real(MOBIUS, 2, math.exp(-1 / 10), tr)


def test_one_at_half_matches_log_product():
    ref = -math.fsum(math.log(1 - 2.0**-n) for n in range(1, 80))
    assert eval_psi_real(ONE, 0, 0.5) == pytest.approx(ref, abs=1e-12)


def test_small_rho_leading_term():
    for f in (MOBIUS, LIOUVILLE, ONE):
        assert eval_psi_real(f, 0, 1e-6) == pytest.approx(1e-6, rel=1e-5)


def test_complex_against_direct_log_product():
    r, a = 0.3, 0.1
    z = r * np.exp(2j * np.pi * a)
    ref = -sum(np.log(1 - z**n) for n in range(1, 200))
    assert abs(eval_psi_complex(ONE, 0, r, a) - ref) <= 1e-10


@given(st.floats(0.05, 0.95), st.floats(0, 1))
def test_conjugate_symmetry(r, a):
    v = eval_psi_complex(MOBIUS, 0, r, a)
    w = eval_psi_complex(MOBIUS, 0, r, (1 - a) % 1.0)
    assert abs(v - w.conjugate()) <= 1e-9 * max(1, abs(v))


def test_half_turn_is_negative_point():
    r = 0.97
    v = eval_psi_complex(LIOUVILLE, 0, r, 0.5)
    assert abs(v.imag) < 1e-9
    assert v.real == pytest.approx(eval_psi_real(LIOUVILLE, 0, -r), rel=1e-12)
    assert eval_psi_complex(LIOUVILLE, 1, r, 0.0).real == pytest.approx(eval_psi_real(LIOUVILLE, 1, r), rel=1e-12)


def test_split_parts():
    r, a = 0.7, 0.2
    p0, p1 = eval_psi_split(MOBIUS, r, a)
    assert abs(p0 + p1 - eval_psi_complex(MOBIUS, 0, r, a)) <= 1e-12
    q0, _ = eval_psi_split(MOBIUS, r, a + 0.5)
    assert abs(p0 - q0) <= 1e-12  # Psi_0 is even


def test_odd_part_small_at_saddle_scale():
    X = 1000.0
    rho = math.exp(-1 / X)
    p0, p1 = eval_psi_split(MOBIUS, rho, 0.0)
    assert abs(p1.real) / X < 0.05 * abs(p0.real) / X


@pytest.mark.parametrize("rho", [0.9, 0.99, 0.999])
def test_finite_difference_derivative(rho):
    h = 1e-6 * (1 - rho)
    d = (eval_psi_real(MOBIUS, 0, rho + h) - eval_psi_real(MOBIUS, 0, rho - h)) / (2 * h)
    assert d == pytest.approx(eval_psi_real(MOBIUS, 1, rho) / rho, rel=1e-6)


def test_psi1_increasing_in_rho():
    rs = np.linspace(0.99, 0.999, 64)
    v = [eval_psi_real(MOBIUS, 1, r) for r in rs]
    assert all(b > a for a, b in zip(v, v[1:]))


@pytest.mark.parametrize("f", [MOBIUS, LIOUVILLE], ids=lambda f: f.descriptor)
@pytest.mark.parametrize("sign", [1, -1])
def test_solver_contract(f, sign):
    sol = solve_saddle(f, 1e4, sign)
    assert abs(sol.psi[1] - 1e4) <= 1e-10 * 1e4
    assert sol.rho == math.exp(-1 / sol.X)
    assert 0 < sol.rho < 1
    lo, hi = sol.bracket
    assert lo <= sol.u <= hi


def test_solver_ratios_at_million():
    m = solve_saddle(MOBIUS, 1e6, 1)
    assert 0.9 < m.X / (2 * math.sqrt(1e6)) < 1.1
    lam = solve_saddle(LIOUVILLE, 1e6, 1)
    assert 0.9 < lam.X / (2 * math.sqrt(1e6 / ZETA2)) < 1.1


def test_solver_errors(monkeypatch):
    with pytest.raises(InvalidArgument):
        solve_saddle(MOBIUS, 50, 1)
    with pytest.raises(InvalidArgument):
        solve_saddle(ONE, 1e3, 1)
    with pytest.raises(InvalidArgument):
        solve_saddle(MOBIUS, 1e3, 0)
    # an initial guess far from the root leaves no sign change in the allowed range
    monkeypatch.setattr(saddle, "initial_u", lambda f, x: 1e-6)
    with pytest.raises(NoSolutionError):
        saddle._solve(MOBIUS, 1234.5, 1)


def test_ambiguous_reported(monkeypatch):
    real = saddle._kernels.series_at_many

    def bumpy(c, us, sign):
        out = real(c, us, sign)
        if len(us) == saddle.SAMPLE_POINTS:
            out = out.copy()
            out[10] = out[40]  # break monotonicity
        return out

    monkeypatch.setattr(saddle._kernels, "series_at_many", bumpy)
    with pytest.raises(AmbiguousSolutionError) as exc:
        saddle._solve(MOBIUS, 4321.0, 1)
    assert isinstance(exc.value.sign_changes, list)


def test_stirling_conversions():
    sol = solve_saddle(MOBIUS, 2e3, 1)
    d1, d2, d3 = ordinary_derivatives(MOBIUS, sol, 3)
    z = sol.point
    assert z * d1 == pytest.approx(sol.psi[1], rel=1e-14)
    assert z * z * d2 == pytest.approx(sol.psi[2] - sol.psi[1], rel=1e-12)
    back = weighted_from_ordinary(z, [d1, d2, d3])
    for j in range(3):
        assert back[j] == pytest.approx(sol.psi[j + 1], rel=1e-10)


def test_round_trip_at_point_nine():
    rho = 0.9
    psi = [eval_psi_real(LIOUVILLE, j, rho) for j in range(4)]
    fake = saddle.SaddleSolution(LIOUVILLE, psi[1], 1, rho, -1 / math.log(rho), -math.log(rho), tuple(psi), None)
    back = weighted_from_ordinary(rho, ordinary_derivatives(LIOUVILLE, fake, 3))
    for j in range(3):
        assert back[j] == pytest.approx(psi[j + 1], rel=1e-10)


def test_ratio_trend_principal_values():
    # Psi_(j)(rho) 4 / (j! X^(j+1)) -> 1 (mu) and -> zeta(2) (lambda)
    prev = None
    for X in (1e2, 1e3, 1e4):
        rho = math.exp(-1 / X)
        dev = max(abs(eval_psi_real(MOBIUS, j, rho) * 4 / (math.factorial(j) * X ** (j + 1)) - 1) for j in range(4))
        devl = max(
            abs(eval_psi_real(LIOUVILLE, j, rho) * 4 / (math.factorial(j) * ZETA2 * X ** (j + 1)) - 1) for j in range(4)
        )
        if prev is not None:
            assert dev < prev[0] and devl < prev[1]
        prev = (dev, devl)


def test_mu_minus_point_dominates():
    # observed: for mu the value at -rho exceeds the value at +rho near rho = 1
    for rho in (0.9, 0.99, 0.999, 0.9999):
        assert eval_psi_real(MOBIUS, 0, -rho) > eval_psi_real(MOBIUS, 0, rho)
