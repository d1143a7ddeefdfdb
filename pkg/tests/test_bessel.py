import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import reference_table, series_j
from spinchain import kernels
from spinchain.bessel import MAX_ORDER, bessel_j, bessel_row

XS = [0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 120.0]
orders = st.integers(min_value=-150, max_value=150)
args = st.floats(min_value=0.0, max_value=150.0, allow_nan=False)


def test_examples():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert bessel_j(0, 1.0) == pytest.approx(0.765197686558, abs=1e-12)
    assert bessel_j(-1, 1.0) == pytest.approx(-0.440050585745, abs=1e-12)
    np.testing.assert_array_equal(bessel_row(4, 0.0).values, [1, 0, 0, 0, 0])
    np.testing.assert_allclose(bessel_row(2, 1.0).values, [0.765197686558, 0.440050585745, 0.114903484932], atol=1e-12)
    np.testing.assert_allclose(bessel_row(0, 5.0).values, [-0.177596771314], atol=1e-12)


@pytest.mark.parametrize("x", XS)
def test_row_matches_frozen_table(x):
    ref = np.array(reference_table()[x])
    assert np.abs(bessel_row(200, x).values - ref).max() < 1e-12


@pytest.mark.parametrize("n,x", [(0, 0.5), (7, 2.0), (30, 10.0), (49, 50.0), (120, 120.0), (200, 120.0), (3, 120.0)])
def test_single_order_matches_series(n, x):
    assert bessel_j(n, x) == pytest.approx(series_j(n, x), abs=1e-12)
    assert bessel_j(-n, x) == pytest.approx(series_j(-n, x), abs=1e-12)


def test_argument_beyond_default_start():
    # x far above the order; the recurrence start has to follow x
    assert bessel_j(2, 300.0) == pytest.approx(series_j(2, 300.0), abs=1e-12)


def test_tiny_argument_and_huge_order():
    assert bessel_j(1, 5e-324) == 0.0
    assert bessel_j(0, 5e-324) == 1.0
    assert bessel_j(1, 1e-9) == pytest.approx(5e-10, rel=1e-12)
    assert bessel_j(5000, 3.0) == 0.0


def test_errors():
    with pytest.raises(ValueError):
        bessel_j(1, float("nan"))
    with pytest.raises(ValueError):
        bessel_j(1, float("inf"))
    with pytest.raises(ValueError):
        bessel_j(MAX_ORDER + 1, 1.0)
    with pytest.raises(TypeError):
        bessel_j(1.5, 1.0)
    with pytest.raises(ValueError):
        bessel_row(-1, 1.0)


def test_row_is_read_only():
    row = bessel_row(5, 1.0)
    with pytest.raises(ValueError):
        row.values[0] = 2.0


def test_row_call_and_take_cover_negative_and_out_of_range_orders():
    row = bessel_row(10, 3.0)
    assert row(-3) == pytest.approx(-row(3))
    assert row(15) == pytest.approx(series_j(15, 3.0), abs=1e-15)
    np.testing.assert_allclose(row.signed(-4, 4), [series_j(n, 3.0) for n in range(-4, 5)], atol=1e-14)


def test_negative_argument_parity():
    for n in range(6):
        assert bessel_j(n, -2.5) == pytest.approx((-1) ** n * bessel_j(n, 2.5), abs=0)


@settings(max_examples=60, deadline=None)
@given(n=orders, x=args)
def test_parity(n, x):
    assert bessel_j(-n, x) == (-1) ** (n % 2) * bessel_j(n, x)


@settings(max_examples=60, deadline=None)
@given(x=args)
def test_normalization_and_sum_of_squares(x):
    J = bessel_row(int(x) + 60, x).values
    assert abs(J[0] + 2 * J[2::2].sum() - 1.0) < 1e-10
    assert abs(J[0] ** 2 + 2 * (J[1:] ** 2).sum() - 1.0) < 1e-10


@settings(max_examples=60, deadline=None)
@given(x=st.floats(min_value=0.05, max_value=150.0), n=st.integers(1, 150))
def test_recurrence_residual(x, n):
    J = bessel_row(n + 1, x)
    assert abs(J(n - 1) + J(n + 1) - 2 * n / x * J(n)) < 1e-10 * max(1.0, 2 * n / x)


@settings(max_examples=40, deadline=None)
@given(x=st.floats(0.0, 40.0), y=st.floats(0.0, 40.0), n=st.integers(-20, 20))
def test_addition_rule(x, y, n):
    # J_n(x + y) = sum_k J_k(x) J_{n-k}(y)
    reach = int(x + y) + 60
    jx, jy = bessel_row(reach + abs(n), x), bessel_row(reach + abs(n), y)
    total = math.fsum(jx(k) * jy(n - k) for k in range(-reach, reach + 1))
    assert abs(total - bessel_j(n, x + y)) < 1e-10


@pytest.mark.parametrize("backend", ["python", "cython"])
def test_backends_agree_with_table(backend):
    if backend == "cython" and kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    ref = np.array(reference_table()[10.0])
    assert np.abs(kernels.bessel_row_values(200, 10.0, backend=backend) - ref).max() < 1e-12
