import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohr_rogosinski.harness import SampleSpec, sample_bounded_function
from bohr_rogosinski.series import (
    TruncatedSeries,
    binomial_row,
    disk_automorphism,
    from_coefficients,
    mobius_coeffs,
    multiply,
    schwarz_pick_bound,
)


def long_division(num, den, terms):
    """Power-series quotient num/den by schoolbook long division."""
    num = list(num) + [0.0] * terms
    out = []
    for n in range(terms):
        q = num[n] / den[0]
        out.append(q)
        for j, d in enumerate(den):
            if n + j < len(num):
                num[n + j] -= q * d
    return out


@pytest.mark.parametrize("a,sign,N,expected", [
    (0.0, 1, 3, [0, 1, 0, 0]),
    (0.5, 1, 3, [0.5, 0.75, -0.375, 0.1875]),
    (0.5, -1, 2, [0.5, -0.75, -0.375]),
])
def test_mobius_examples(a, sign, N, expected):
    f = mobius_coeffs(a, sign, N)
    np.testing.assert_allclose(f.coeffs, expected, atol=1e-15)
    assert len(f) == f.order + 1 == N + 1


@pytest.mark.parametrize("a", [0.0, 0.2, 0.5, 0.9])
@pytest.mark.parametrize("sign", [1, -1])
def test_mobius_matches_long_division(a, sign):
    oracle = long_division([a, sign], [1.0, sign * a], 12)
    np.testing.assert_allclose(mobius_coeffs(a, sign, 11).coeffs, oracle, atol=1e-14)


@pytest.mark.parametrize("a", [0.0, 0.3, 0.7, 0.99])
def test_coefficient_law(a):
    f = mobius_coeffs(a, 1, 64)
    n = np.arange(1, 65)
    np.testing.assert_allclose(np.abs(f.coeffs[1:]), (1 - a * a) * a ** (n - 1.0), rtol=1e-13, atol=0)
    assert f.coeffs[0] == a


def test_mobius_rejects_bad_input():
    with pytest.raises(ValueError):
        mobius_coeffs(1.0)
    with pytest.raises(ValueError):
        mobius_coeffs(-0.1)
    with pytest.raises(ValueError):
        mobius_coeffs(0.5, 1, 0)


def test_mobius_tail_formula():
    a, N = 0.5, 10
    f = mobius_coeffs(a, 1, N)
    for r in (0.1, 0.4, 0.9):
        assert f.tail_bound(r) == pytest.approx((1 - a * a) * a ** N * r ** (N + 1) / (1 - a * r), rel=1e-14)
    # the tail really bounds what was dropped
    long = mobius_coeffs(a, 1, 400)
    dropped = np.sum(np.abs(long.coeffs[N + 1:]) * 0.9 ** np.arange(N + 1, 401))
    assert dropped <= f.tail_bound(0.9) * (1 + 1e-12)


def test_eval_examples():
    f = mobius_coeffs(0.5, 1, 64)
    assert f.evaluate(0) == 0.5
    assert abs(f.evaluate(0.2) - 0.7 / 1.1) < 1e-12
    with pytest.raises(ValueError):
        f.evaluate(1.0)
    with pytest.raises(ValueError):
        f.evaluate(0.6 + 0.8j)


def test_eval_matches_closed_form_complex():
    c, rot = 0.4 - 0.5j, np.exp(0.3j)
    f = disk_automorphism(c, rot, 256)
    for z in (0.3j, -0.5 + 0.2j, 0.7):
        exact = rot * (c + z) / (1 + np.conj(c) * z)
        assert abs(f.evaluate(z) - exact) < 1e-12


def test_derivative_examples():
    f = mobius_coeffs(0.5, 1, 64)
    z = 0.1 + 0.2j
    assert f.eval_derivative(0, z) == f.evaluate(z)
    assert f.eval_derivative(1, 0) == pytest.approx(0.75)
    for a in (0.3, 0.5, 0.8):
        assert mobius_coeffs(a, 1, 64).eval_derivative(2, 0).real == pytest.approx(-a * (1 - a * a))
    with pytest.raises(ValueError):
        f.eval_derivative(1, 1.0)


@pytest.mark.parametrize("k", [1, 2, 3, 6])
def test_derivative_closed_form(k):
    a, z = 0.6, 0.35 - 0.1j
    f = mobius_coeffs(a, 1, 256)
    exact = (1 - a * a) * (-a) ** (k - 1) / (1 + a * z) ** (k + 1)
    assert abs(f.eval_derivative(k, z) - exact) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 59), st.floats(0, 0.85), st.floats(0, 2 * math.pi))
def test_derivative_finite_difference(index, rho, theta):
    f = sample_bounded_function(SampleSpec(count=60), index)
    z = rho * np.exp(1j * theta)
    h = 1e-6
    fd = (f.evaluate(z + h) - f.evaluate(z - h)) / (2 * h)
    d = f.eval_derivative(1, z)
    assert abs(fd - d) <= 1e-6 * max(1.0, abs(d))


def test_binomials_match_exact():
    for k in (0, 1, 5, 40, 128):
        row = binomial_row(k, 256)
        for n in (k, k + 1, 100, 256):
            if n >= k:
                assert row[n] == pytest.approx(math.comb(n, k), rel=1e-12)
        assert np.all(row[:k] == 0)


def test_compose_power_examples():
    ident = from_coefficients([0, 1])
    np.testing.assert_array_equal(ident.compose_power(3).coeffs, [0, 0, 0, 1])
    f = mobius_coeffs(0.5, 1, 2)
    np.testing.assert_allclose(f.compose_power(2).coeffs, [0.5, 0, 0.75, 0, -0.375])
    assert f.compose_power(1) is f
    with pytest.raises(ValueError):
        f.compose_power(0)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_compose_power_dilation_and_tail(m):
    f = mobius_coeffs(0.7, 1, 40)
    fm = f.compose_power(m)
    assert fm.order == m * f.order
    rmax = 0.9 ** (1 / m)
    for z in rmax * np.exp(1j * np.linspace(0, 2 * np.pi, 7)):
        assert abs(fm.evaluate(z) - f.evaluate(z ** m)) < 1e-12
    for r in (0.2, 0.5, 0.9):
        assert fm.tail_bound(r) == pytest.approx(f.tail_bound(r ** m), rel=1e-12, abs=0)


def test_majorant_examples():
    f = mobius_coeffs(0.5, 1, 256)
    maj = f.majorant_sum(0.2, 2)
    assert maj.value == pytest.approx(0.75 * 0.5 * 0.04 / 0.9, abs=1e-15)
    assert maj.rigorous and maj.upper >= maj.value
    assert f.majorant_sum(0.0, 1).value == 0.0
    assert from_coefficients([1.0]).majorant_sum(0.3, 0).value == 1.0
    with pytest.raises(ValueError):
        f.majorant_sum(1.0)


def test_majorant_closed_form_grid():
    grid = np.round(np.arange(0.1, 1.0, 0.1), 10)
    for a in grid:
        f = mobius_coeffs(a, 1, 256)
        for r in grid:
            maj = f.majorant_sum(r, 1)
            closed = (1 - a * a) * r / (1 - a * r)
            assert abs(maj.value - closed) <= f.tail_bound(r) + 1e-12
            assert maj.upper >= closed - 1e-12


def test_raw_series_is_not_rigorous():
    f = from_coefficients([0.1, 0.2, 0.3])
    assert not f.rigorous
    assert f.tail_bound(0.5) == math.inf
    maj = f.majorant_sum(0.5, 0)
    assert not maj.rigorous and maj.upper == maj.value


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.99), st.integers(1, 50), st.lists(st.floats(0, 0.99), min_size=2, max_size=6))
def test_tail_bound_monotone(a, N, rs):
    f = mobius_coeffs(a, 1, N)
    assert f.tail_bound(0.0) == 0.0
    rs = sorted(rs)
    tails = [f.tail_bound(r) for r in rs]
    assert all(x <= y for x, y in zip(tails, tails[1:]))


@pytest.mark.parametrize("k", [1, 2, 5])
def test_derivative_tail_bounds_dropped_terms(k):
    a, N, rho = 0.9, 30, 0.6
    short, long = mobius_coeffs(a, 1, N), mobius_coeffs(a, 1, 600)
    for theta in (0.0, 1.0, 2.5):
        w = rho * np.exp(1j * theta)
        err = abs(long.eval_derivative(k, w) - short.eval_derivative(k, w))
        assert err <= short.derivative_tail_bound(k, rho)


def test_taylor_moduli_matches_eval_derivative():
    f = disk_automorphism(0.3 + 0.4j, 1j, 64)
    angles = np.linspace(0, 2 * np.pi, 5)
    mod = f.taylor_moduli(0.4, angles)
    for i, t in enumerate(angles):
        w = 0.4 * np.exp(1j * t)
        for k in (0, 1, 2, 7):
            assert mod[i, k] == pytest.approx(abs(f.eval_derivative(k, w)), rel=1e-11, abs=1e-15)


def test_multiply_is_cauchy_product():
    f, g = mobius_coeffs(0.3, 1, 20), mobius_coeffs(0.6, -1, 20)
    p = multiply(f, g, 20)
    z = 0.4 + 0.1j
    assert abs(p.evaluate(z) - f.evaluate(z) * g.evaluate(z)) < 1e-9


def test_series_immutable():
    f = mobius_coeffs(0.5, 1, 4)
    with pytest.raises(ValueError):
        f.coeffs[0] = 1.0
    with pytest.raises(ValueError):
        TruncatedSeries([0.0, np.nan])


def test_schwarz_pick_examples():
    for a in (0.0, 0.4, 0.9):
        assert schwarz_pick_bound(a, 0.0, 1) == pytest.approx(1 - a * a)
    for r in (0.1, 0.5, 0.8):
        assert schwarz_pick_bound(0.3, r, 1) == pytest.approx((1 - 0.09) / (1 - r * r))
        assert schwarz_pick_bound(1.0, r, 3) == 0.0
    with pytest.raises(ValueError):
        schwarz_pick_bound(0.5, 1.0, 1)


def test_schwarz_pick_sampled_validity():
    spec = SampleSpec(count=500)
    points = np.concatenate([[0], 0.8 * np.exp(2j * np.pi * np.arange(8) / 8),
                             0.4 * np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)])
    for i in range(spec.count):
        f = sample_bounded_function(spec, i)
        fz = np.abs(f.evaluate(points))
        for k in range(1, 6):
            d = np.abs(f.eval_derivative(k, points))
            bound = [schwarz_pick_bound(min(v, 1.0), abs(z), k) for v, z in zip(fz, points)]
            assert np.all(d <= np.array(bound) + 1e-9), (i, k)
