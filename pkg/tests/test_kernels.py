import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from signedpartitions import _kernels

BACKENDS = sorted(_kernels.IMPLEMENTATIONS)
floats = st.floats(-1e6, 1e6, allow_nan=False)


def test_numba_available_and_selected():
    assert "numba" in _kernels.IMPLEMENTATIONS
    assert _kernels.BACKEND in ("numba", "numpy")


@given(arrays(np.float64, st.integers(0, 200), elements=floats))
def test_compensated_sum_backends_agree(w):
    ref = math.fsum(w.tolist())
    for name in BACKENDS:
        got = _kernels.IMPLEMENTATIONS[name]["compensated_sum"](w)
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-6)


@given(arrays(np.float64, st.integers(0, 200), elements=floats))
def test_alternating_sum_backends_agree(w):
    ref = math.fsum(x if i % 2 == 0 else -x for i, x in enumerate(w.tolist()))
    for name in BACKENDS:
        got = _kernels.IMPLEMENTATIONS[name]["alternating_sum"](w)
        assert got == pytest.approx(ref, rel=1e-12, abs=1e-6)


def test_compensated_sum_cancellation():
    w = np.array([1e16, 1.0, -1e16, 1.0])
    for name in BACKENDS:
        assert _kernels.IMPLEMENTATIONS[name]["compensated_sum"](w) == 2.0


@given(
    arrays(np.float64, st.integers(2, 120), elements=st.floats(-10, 10)),
    arrays(np.float64, st.integers(1, 5), elements=st.floats(0, 1)),
)
def test_phase_sums_backends_agree(w, alphas):
    m = np.arange(len(w))
    for a_idx, a in enumerate(alphas):
        z = np.exp(2j * np.pi * m[1:] * a)
        ref = np.sum(w[1:] * z)
        for name in BACKENDS:
            re, im = _kernels.IMPLEMENTATIONS[name]["phase_sums"](w, alphas)
            assert re[a_idx] == pytest.approx(ref.real, abs=1e-8)
            assert im[a_idx] == pytest.approx(ref.imag, abs=1e-8)


@given(
    arrays(np.float64, st.integers(2, 150), elements=st.floats(-100, 100)),
    st.lists(st.floats(0.01, 3), min_size=1, max_size=4),
    st.sampled_from([1, -1]),
)
def test_series_backends_agree(c, us, sign):
    us = np.array(us)
    m = np.arange(len(c))
    for k, u in enumerate(us):
        ref = math.fsum((c[1:] * (sign ** m[1:]) * np.exp(-m[1:] * u)).tolist())
        for name in BACKENDS:
            got = _kernels.IMPLEMENTATIONS[name]["series_at_many"](c, us, sign)[k]
            assert got == pytest.approx(ref, rel=1e-12, abs=1e-9)


@given(arrays(np.int64, st.integers(1, 80), elements=st.integers(-1, 1)))
def test_weight_coeffs_backends_agree(fv):
    fv = fv.copy()
    fv[0] = 0
    n = len(fv) - 1
    outs = [_kernels.IMPLEMENTATIONS[name]["weight_coeffs"](fv, n) for name in BACKENDS]
    # direct divisor-sum definition
    b0 = [0] * (n + 1)
    b1 = [0] * (n + 1)
    for m in range(1, n + 1):
        for d in range(1, m + 1):
            if m % d == 0:
                if (m // d) % 2:
                    b1[m] += d * int(fv[d])
                else:
                    b0[m] += d * int(fv[d]) ** 2
    for e, o in outs:
        assert e.tolist() == b0
        assert o.tolist() == b1


def test_env_flag_selects_numpy(monkeypatch):
    import importlib

    monkeypatch.setenv("SPN_DISABLE_NUMBA", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "numpy"
        assert mod.phase_sums is mod._np_phase_sums
    finally:
        monkeypatch.delenv("SPN_DISABLE_NUMBA")
        importlib.reload(_kernels)
