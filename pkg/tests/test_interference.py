import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bievolve import interference as itf
from bievolve.exceptions import CapExceededError, InvalidInputError, UndefinedWidthError


def gaussian_binomial(m, n, x):
    """q-Pascal recursion at q = exp(-ix); independent of both library routes."""
    q = cmath.exp(-1j * x)
    big_n = m + n
    row = [1.0 + 0j]
    for size in range(1, big_n + 1):
        new = [1.0 + 0j] * (size + 1)
        for k in range(1, size):
            new[k] = row[k - 1] + q**k * row[k]
        row = new
    return row[n]


def test_frozen_value_two_two():
    # 1 + q + 2q^2 + q^3 + q^4 at x = 0.3, computed by hand-expanded polynomial
    expected = 4.5899754416923 - 3.140171149046119j
    assert abs(itf.eval_closed_form(2, 2, 0.3) - expected) <= 1e-12


def test_frozen_value_five_three():
    expected = 1.2777976839568441 + 1.0937863851632474j
    assert abs(itf.eval_closed_form(5, 3, 2.0) - expected) <= 1e-12
    assert abs(gaussian_binomial(5, 3, 2.0) - expected) <= 1e-12


def test_single_path_is_one():
    for x in (0.0, 0.3, math.pi, 7.1):
        assert itf.eval_closed_form(0, 5, x) == 1
        assert itf.eval_closed_form(5, 0, x) == 1


def test_one_one_is_two_cos():
    for x in np.linspace(-3, 3, 13):
        assert abs(itf.eval_closed_form(1, 1, x) - (1 + cmath.exp(-1j * x))) <= 1e-14


def test_zero_at_pi_for_one_one():
    # fl(pi) is not pi, so the exact zero shows up as ~1e-16
    assert abs(itf.eval_closed_form(1, 1, math.pi)) <= 1e-15


def test_closed_form_matches_q_pascal(rng):
    for m in range(9):
        for n in range(9):
            for x in rng.uniform(-math.pi, math.pi, 5):
                ref = gaussian_binomial(m, n, x)
                assert abs(itf.eval_closed_form(m, n, x) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_oracle_matches_q_pascal(rng):
    for m, n in [(3, 4), (6, 2), (5, 5)]:
        for x in rng.uniform(-math.pi, math.pi, 3):
            ref = gaussian_binomial(m, n, x)
            assert abs(itf.eval_nested_sum_oracle(m, n, x) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_oracle_cap():
    with pytest.raises(CapExceededError):
        itf.eval_nested_sum_oracle(20, 20, 0.1, cap=1000)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(0, 12), n=st.integers(0, 12), x=st.floats(-20, 20))
def test_symmetry(m, n, x):
    a = itf.eval_closed_form(m, n, x)
    b = itf.eval_closed_form(n, m, x)
    assert abs(a - b) <= 1e-11 * max(abs(a), 1e-300) + 1e-300


@settings(max_examples=60, deadline=None)
@given(m=st.integers(0, 12), n=st.integers(0, 12), x=st.floats(-10, 10))
def test_periodicity(m, n, x):
    a = itf.eval_closed_form(m, n, x)
    b = itf.eval_closed_form(m, n, x + 2 * math.pi)
    assert abs(a - b) <= 1e-11 * abs(a) + 1e-13


@pytest.mark.parametrize("q", range(2, 13))
@pytest.mark.parametrize("m,n", [(3, 3), (4, 7), (12, 5), (6, 6)])
def test_continuous_through_singular_points(q, m, n):
    x0 = 2 * math.pi / q
    limit = itf.eval_closed_form(m, n, x0)
    for d in (1e-9, -1e-9):
        near = itf.eval_closed_form(m, n, x0 + d)
        assert abs(near - limit) <= 1e-5 * max(abs(limit), 1.0)
    for d in (1e-6, -1e-6, 1e-9, 0.0):
        near = itf.eval_closed_form(m, n, x0 + d)
        assert abs(near - gaussian_binomial(m, n, x0 + d)) <= 1e-9 * max(abs(near), 1.0)


def test_q_lucas_zero_at_root_of_unity():
    # [5 choose 2] vanishes at a primitive fifth root of unity
    assert abs(itf.eval_closed_form(3, 2, 2 * math.pi / 5)) <= 1e-14


@pytest.mark.parametrize("m,n", [(400, 100), (1800, 200), (7600, 400), (1000, 1000)])
def test_peak_log_modulus(m, n):
    expected = math.log(math.comb(m + n, n))
    assert abs(itf.closed_form_log(m, n, 0.0)[0] - expected) <= 1e-10
    assert abs(itf.eval_modulus_product(m, n, 0.0) - expected) <= 1e-10


def test_modulus_product_matches_closed_form(rng):
    for m, n in [(40, 10), (100, 30), (7, 7)]:
        for x in rng.uniform(-0.5, 0.5, 5):
            assert abs(itf.eval_modulus_product(m, n, x) - itf.closed_form_log(m, n, x)[0]) <= 1e-9


def test_peak_width_frozen():
    assert math.isclose(itf.peak_width(400, 100), 0.0010943513103291655, rel_tol=1e-14)
    assert math.isclose(itf.peak_width(7600, 400), 3.141207992822953e-05, rel_tol=1e-14)
    with pytest.raises(UndefinedWidthError):
        itf.peak_width(0, 5)


def test_quadratic_approx():
    w = itf.peak_width(400, 100)
    assert itf.quadratic_approx_normalized(400, 100, 0.0) == 1.0
    assert itf.quadratic_approx_normalized(400, 100, w) <= 1e-12
    assert itf.quadratic_approx_normalized(400, 100, 2 * w) == 0.0
    assert math.isclose(itf.quadratic_approx(10, 5, 0.0), math.comb(15, 5), rel_tol=1e-12)
    assert itf.quadratic_approx(7600, 400, 0.0) == math.inf or itf.quadratic_approx(7600, 400, 0.0) > 1e300


def test_quadratic_close_to_exact_near_peak():
    w = itf.peak_width(400, 100)
    for x in np.linspace(-0.25 * w, 0.25 * w, 21):
        exact = math.exp(itf.closed_form_log(400, 100, x)[0] - math.log(math.comb(500, 100)))
        assert abs(exact - itf.quadratic_approx_normalized(400, 100, x)) <= 0.02


def test_input_validation():
    with pytest.raises(InvalidInputError):
        itf.eval_closed_form(-1, 2, 0.1)
    with pytest.raises(InvalidInputError):
        itf.eval_closed_form(1.5, 2, 0.1)
    with pytest.raises(InvalidInputError):
        itf.eval_closed_form(1, 2, math.nan)


def test_profile_ordering_independent_of_threads():
    xs = np.linspace(-0.003, 0.003, 101)
    serial = itf.interference_profile(400, 100, xs, normalize=True)
    threaded = itf.interference_profile(400, 100, xs, normalize=True, n_jobs=4)
    assert np.array_equal(serial.value, threaded.value)
    assert np.array_equal(serial.norm_abs, threaded.norm_abs)
    assert serial.width == itf.peak_width(400, 100)


def test_profile_normalized_peak():
    prof = itf.interference_profile(7600, 400, [0.0], normalize=True)
    assert abs(prof.norm_abs[0] - 1.0) <= 1e-10
    raw = itf.interference_profile(7600, 400, [0.0])
    assert raw.value[0] == math.inf or abs(raw.value[0]) > 1e300


def test_phase_argument():
    assert itf.phase_argument(2.0, 3.0) == 12.0
    assert itf.reduce_phase(2 * math.pi + 0.5) == pytest.approx(0.5)
