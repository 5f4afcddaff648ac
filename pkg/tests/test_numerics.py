import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chiralchain.numerics import (
    DomainError,
    NumericalConsistencyError,
    antisymmetric_from_upper,
    entropy_bits,
    kink_detect,
    linear_fit,
    local_maxima,
    pfaffian,
    power_law_fit,
    second_difference,
)

from conftest import random_antisymmetric


def test_pfaffian_2x2_is_upper_entry():
    assert pfaffian([[0, 3.5], [-3.5, 0]]) == pytest.approx(3.5)


def test_pfaffian_4x4_closed_form():
    a, b, c, d, e, f = 1.3, -0.7, 2.1, 0.4, -1.9, 0.25
    m = antisymmetric_from_upper(
        [[0, a, b, c], [0, 0, d, e], [0, 0, 0, f], [0, 0, 0, 0]]
    )
    assert abs(pfaffian(m) - (a * f - b * e + c * d)) < 1e-12


def test_pfaffian_of_empty_matrix_is_one():
    assert pfaffian(np.zeros((0, 0))) == 1


def test_pfaffian_identity_blocks():
    j = np.kron(np.eye(3), np.array([[0, 1], [-1, 0]]))
    assert pfaffian(j) == pytest.approx(1.0)


@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from([2, 4, 6, 8, 10]))
def test_pfaffian_squared_is_determinant(seed, n):
    rng = np.random.default_rng(seed)
    a = random_antisymmetric(rng, n)
    pf = pfaffian(a)
    det = np.linalg.det(a)
    assert abs(pf**2 - det) <= 1e-8 * max(1.0, abs(det))


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_pfaffian_congruence(seed):
    # pf(B A B^T) = det(B) pf(A)
    rng = np.random.default_rng(seed)
    a = random_antisymmetric(rng, 6)
    b = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    lhs = pfaffian(b @ a @ b.T)
    rhs = np.linalg.det(b) * pfaffian(a)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))


def test_pfaffian_singular_matrix_is_zero():
    a = np.zeros((4, 4))
    a[0, 1], a[1, 0] = 1.0, -1.0
    assert pfaffian(a) == 0


def test_pfaffian_rejects_odd_and_symmetric():
    with pytest.raises(DomainError):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(DomainError):
        pfaffian(np.ones((2, 2)))


def test_pfaffian_leaves_input_untouched(rng):
    a = random_antisymmetric(rng, 6)
    before = a.copy()
    pfaffian(a)
    assert np.array_equal(a, before)


def test_antisymmetric_from_upper_ignores_lower_triangle():
    m = antisymmetric_from_upper(np.arange(9.0).reshape(3, 3))
    assert np.allclose(m, -m.T)
    assert m[0, 1] == 1 and m[1, 0] == -1


def test_linear_fit_exact_line():
    xs = np.linspace(0, 3, 7)
    fit = linear_fit(xs, 2.5 * xs - 1.0)
    assert fit.slope == pytest.approx(2.5)
    assert fit.intercept == pytest.approx(-1.0)
    assert fit.r2 == pytest.approx(1.0)


def test_linear_fit_window_and_errors():
    xs = np.arange(10.0)
    ys = np.where(xs < 5, xs, 100.0)
    fit = linear_fit(xs, ys, window=(0, 5))
    assert fit.slope == pytest.approx(1.0)
    assert fit.window == (0, 5)
    with pytest.raises(DomainError):
        linear_fit(xs, ys, window=(4, 20))
    with pytest.raises(DomainError):
        linear_fit(np.ones(4), np.arange(4.0))


@given(
    st.floats(min_value=0.1, max_value=3.0),
    st.floats(min_value=0.01, max_value=100.0),
)
def test_power_law_fit_recovers_exponent(exponent, amp):
    xs = np.arange(4, 65, dtype=float)
    fit = power_law_fit(xs, amp * xs**-exponent)
    assert fit.exponent == pytest.approx(exponent, abs=1e-9)
    assert fit.intercept == pytest.approx(amp, rel=1e-9)


def test_power_law_fit_rejects_nonpositive():
    with pytest.raises(DomainError):
        power_law_fit([1, 2, 3], [1, 0, 1])


def test_second_difference_of_parabola_nonuniform():
    xs = np.array([0.0, 0.3, 1.0, 1.2, 2.5])
    assert np.allclose(second_difference(xs, 3 * xs**2 + xs), 6.0)


def test_kink_detect_finds_corner():
    xs = np.linspace(-1, 1, 201)
    ys = np.abs(xs - 0.3)
    assert kink_detect(xs, ys) == pytest.approx(0.3, abs=0.01)


def test_kink_detect_guards():
    with pytest.raises(DomainError):
        kink_detect([0, 1, 2, 3], [0, 1, 2, 3])
    with pytest.raises(DomainError):
        kink_detect([0, 1, 1, 2, 3], [0, 0, 0, 0, 0])


def test_local_maxima():
    assert list(local_maxima([0, 2, 1, 3, 3, 0, 5])) == [1, 3]


def test_entropy_bits():
    assert entropy_bits([0.5, 0.5]) == pytest.approx(1.0)
    assert entropy_bits([1.0, 0.0, -1e-12]) == 0.0
    with pytest.raises(NumericalConsistencyError):
        entropy_bits([1.1, -0.1])
