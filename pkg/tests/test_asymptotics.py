import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedpartitions.asymptotics import (
    RELATIONS_HEADER,
    LogScaleNumber,
    combine,
    compare_exact,
    estimate,
    estimate_terms,
    hardy_ramanujan_check,
    relations_report,
)
from signedpartitions.errors import InvalidArgument, OutOfRange
from signedpartitions.exactpartitions import cached_table, exact_table
from signedpartitions.numtheory import LIOUVILLE, MOBIUS, MOBIUS_SQUARED, ONE
from signedpartitions.saddle import ZETA2

finite = st.floats(-1e6, 1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-300 or x == 0)


@given(finite, finite)
def test_logscale_add_matches_float(a, b):
    s = (LogScaleNumber.from_float(a) + LogScaleNumber.from_float(b)).to_float()
    assert s == pytest.approx(a + b, rel=1e-9, abs=1e-9 * (abs(a) + abs(b)))


@given(finite, finite)
def test_logscale_mul_and_order(a, b):
    x, y = LogScaleNumber.from_float(a), LogScaleNumber.from_float(b)
    assert (x * y).to_float() == pytest.approx(a * b, rel=1e-9)
    if abs(a - b) > 1e-9 * (abs(a) + abs(b)):
        assert (x < y) == (a < b)


@given(st.integers(-(10**400), 10**400))
def test_logscale_from_int(n):
    v = LogScaleNumber.from_int(n)
    if n == 0:
        assert v.sign == 0
    else:
        assert v.sign == (1 if n > 0 else -1)
        # ln of the exact integer: compare via digits for huge values
        ref = math.log(abs(n)) if abs(n) < 10**300 else math.log10(abs(n)) * math.log(10)
        assert v.log_abs == pytest.approx(ref, rel=1e-14, abs=1e-12)


def test_logscale_huge_and_zero():
    a = LogScaleNumber(1, 1e5)
    assert (a - a).sign == 0
    assert (a + a).log_abs == pytest.approx(1e5 + math.log(2))
    assert LogScaleNumber.zero().ratio(a) == 0.0
    with pytest.raises(ZeroDivisionError):
        a.ratio(LogScaleNumber.zero())


def test_combine_parity():
    p, m = LogScaleNumber(1, 10.0), LogScaleNumber(1, 9.0)
    assert combine(p, m, 200).log_abs > 10.0
    assert combine(p, m, 201).log_abs < 10.0
    assert combine(m, p, 201).sign == -1


@pytest.mark.parametrize("f", [MOBIUS, LIOUVILLE], ids=lambda f: f.descriptor)
def test_estimate_parity_structure(f):
    tp, tm = estimate_terms(f, 1000)
    assert estimate(f, 1000).log_abs > max(tp.log_abs, tm.log_abs)
    odd = estimate(f, 1001)
    tp1, tm1 = estimate_terms(f, 1001)
    assert odd.log_abs <= (tp1 + tm1).log_abs


def test_term_sizes_at_ten_thousand():
    n = 10**4
    tp, tm = estimate_terms(MOBIUS, n)
    assert 0.8 < tp.log_abs / math.sqrt(n) < 1.05
    assert tm.log_abs > tp.log_abs  # the -rho term dominates for mu
    tp, tm = estimate_terms(LIOUVILLE, n)
    assert 0.8 < tp.log_abs / math.sqrt(ZETA2 * n) < 1.05
    assert tm.log_abs > tp.log_abs


def test_estimate_domain():
    with pytest.raises(InvalidArgument):
        estimate(MOBIUS, 99)
    with pytest.raises(InvalidArgument):
        estimate(ONE, 1000)
    with pytest.raises(InvalidArgument):
        estimate(MOBIUS, 150.5)


@pytest.mark.parametrize("f", [MOBIUS, LIOUVILLE], ids=lambda f: f.descriptor)
def test_compare_exact_small(f):
    table = exact_table(f, 1200)
    reps = compare_exact(f, [1000, 1001, 1100, 1200], table)
    for r in reps:
        assert r.exact_log.log_abs == pytest.approx(math.log(abs(table[r.n])), rel=1e-14)
        if r.n % 2 == 0:
            assert r.ratio > 0 and abs(r.ratio - 1) < 0.02
            assert r.uncertainty is None
        else:
            assert r.uncertainty is not None
    assert len(reps[0].csv_row()) == len(reps[0].CSV_HEADER)


def test_compare_exact_odd_only_and_errors():
    table = exact_table(MOBIUS, 600)
    reps = compare_exact(MOBIUS, [501, 503], table)
    assert all(r.uncertainty.sign == 1 for r in reps)
    with pytest.raises(OutOfRange):
        compare_exact(MOBIUS, [700], table)
    with pytest.raises(InvalidArgument):
        compare_exact(MOBIUS, [500], exact_table(LIOUVILLE, 600))


def test_n5000_ratio_window():
    table = cached_table(MOBIUS, 5000)
    (r,) = compare_exact(MOBIUS, [5000], table)
    assert 0.99 < r.ratio < 1.01


@pytest.mark.parametrize("f", [MOBIUS, LIOUVILLE], ids=lambda f: f.descriptor)
def test_relations_self_consistent(f):
    rows = relations_report(f, [1e3, 1e5])
    assert set(rows[0]) == set(RELATIONS_HEADER)
    for sign in "+-":
        a, b = [r for r in rows if r["sign"] == sign]
        for key in ("ratio_X", "ratio_psi1", "ratio_psi2"):
            assert abs(b[key] - 1) < abs(a[key] - 1) + 1e-12
        # -log rho X = 1 exactly
        assert a["X"] * (a["ratio_neglogrho"] * 0.5 * math.sqrt((ZETA2 if f == LIOUVILLE else 1) * a["x"]) / a["x"]) == pytest.approx(1)
    with pytest.raises(InvalidArgument):
        relations_report(f, [50])


def test_hardy_ramanujan_small():
    table = exact_table(ONE, 200)
    (row,) = hardy_ramanujan_check(ONE, [100], table)
    assert row["positive"] and row["ratio"] == pytest.approx(0.79971751, abs=1e-7)
    rows = hardy_ramanujan_check(MOBIUS, [1, 2, 4, 5], exact_table(MOBIUS, 10))
    assert [r["positive"] for r in rows] == [False, False, False, True]
    with pytest.raises(OutOfRange):
        hardy_ramanujan_check(MOBIUS, [100], exact_table(MOBIUS, 10))
    with pytest.raises(InvalidArgument):
        hardy_ramanujan_check(MOBIUS_SQUARED, [1])
