import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lib.errors import NumericalError, ShapeError, SizeError
from lib.numerics import (
    eig_spectrum,
    frob_residual,
    group_eigenvalues,
    hermitian_sqrt,
    kron,
    kron_all,
    kron_power,
    null_space,
    numerical_rank,
    partial_trace,
    relative_residual,
)

small = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)


def square(size):
    return arrays(np.float64, (size, size), elements=small)


def test_kron_index_convention():
    a = np.array([[1, 2], [3, 4]])
    b = np.array([[0, 1], [1, 0]])
    result = kron(a, b)
    assert result.shape == (4, 4)
    assert result[1, 2] == a[0, 1] * b[1, 0]
    assert result[3, 0] == a[1, 0] * b[1, 0]


@settings(max_examples=30, deadline=None)
@given(square(2), square(3), square(2))
def test_kron_is_associative(a, b, c):
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_kron_respects_size_cap():
    with pytest.raises(SizeError):
        kron(np.eye(4), np.eye(4), cap=100)
    with pytest.raises(SizeError):
        kron_power(np.eye(2), 10, cap=1000)


def test_kron_rejects_non_finite():
    with pytest.raises(ShapeError):
        kron(np.array([[np.nan]]), np.eye(2))


def test_small_worked_examples():
    np.testing.assert_array_equal(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    np.testing.assert_allclose(partial_trace(np.eye(4), [2, 2], 0), 2 * np.eye(2))
    assert frob_residual(np.diag([3, 0]), np.diag([0, 4])) == pytest.approx(5.0)


@settings(max_examples=30, deadline=None)
@given(square(6), st.integers(min_value=0, max_value=1))
def test_partial_trace_preserves_trace(matrix, site):
    reduced = partial_trace(matrix, [2, 3], site)
    assert reduced.shape == ((3, 3) if site == 0 else (2, 2))
    np.testing.assert_allclose(np.trace(reduced), np.trace(matrix), atol=1e-9)


def test_partial_trace_of_product_state():
    a = np.diag([0.25, 0.75])
    b = np.array([[0.5, 0.1j], [-0.1j, 0.5]])
    c = np.eye(3) / 3
    rho = kron_all([a, b, c])
    np.testing.assert_allclose(partial_trace(rho, [2, 2, 3], 1), kron(a, c), atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [2, 2, 3], 0), kron(b, c), atol=1e-14)


def test_partial_trace_checks_shape():
    with pytest.raises(ShapeError):
        partial_trace(np.eye(5), [2, 2], 0)
    with pytest.raises(ShapeError):
        partial_trace(np.eye(4), [2, 2], 2)


def test_eig_spectrum_hermitian_and_general():
    spectrum = eig_spectrum(np.array([[2, 1], [1, 2]]))
    np.testing.assert_allclose(np.sort(spectrum['eigenvalues'].real), [1, 3], atol=1e-12)
    rotation = eig_spectrum(np.array([[0, -1], [1, 0]]))
    np.testing.assert_allclose(sorted(rotation['eigenvalues'].imag), [-1, 1], atol=1e-12)
    with pytest.raises(ShapeError):
        eig_spectrum(np.ones((2, 3)))


def test_null_space_and_rank():
    system = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    kernel = null_space(system)
    assert kernel.shape == (3, 1)
    np.testing.assert_allclose(system @ kernel, 0, atol=1e-12)
    assert numerical_rank(system) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_hermitian_sqrt():
    matrix = np.array([[2.0, 0.5], [0.5, 1.0]])
    root = hermitian_sqrt(matrix)
    np.testing.assert_allclose(root @ root, matrix, atol=1e-12)
    inverse = hermitian_sqrt(matrix, inverse=True)
    np.testing.assert_allclose(inverse @ matrix @ inverse, np.eye(2), atol=1e-12)
    with pytest.raises(NumericalError):
        hermitian_sqrt(np.diag([1.0, 0.0]))


def test_group_eigenvalues_and_residual():
    groups = group_eigenvalues(np.array([1.0, 0.0, 1.0 + 1e-12, 0.0]), 1e-9)
    assert sorted(len(group) for group in groups) == [2, 2]
    assert relative_residual(np.eye(2), np.eye(2)) == 0.0
