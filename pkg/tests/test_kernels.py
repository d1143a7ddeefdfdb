import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinchain import kernels

BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_jacobi_matches_lapack(backend, n):
    rng = np.random.default_rng(n)
    h = random_hermitian(rng, n)
    w, v = kernels.jacobi_eigh(h, backend=backend)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(h @ v, v * w, atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_jacobi_degenerate_and_diagonal(backend):
    h = np.diag([1.0, 1.0, -2.0, 0.0]).astype(complex)
    w, v = kernels.jacobi_eigh(h, backend=backend)
    np.testing.assert_allclose(w, [-2, 0, 1, 1])
    np.testing.assert_allclose(np.abs(v.conj().T @ v), np.eye(4), atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_backends_agree(seed):
    if len(BACKENDS) < 2:
        return
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, 4)
    wp = kernels.jacobi_eigh(h, backend="python")[0]
    wc = kernels.jacobi_eigh(h, backend="cython")[0]
    np.testing.assert_allclose(wp, wc, atol=1e-13)
    x = float(rng.uniform(0, 150))
    np.testing.assert_allclose(
        kernels.bessel_row_values(160, x, backend="python"),
        kernels.bessel_row_values(160, x, backend="cython"),
        atol=1e-15,
    )


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.bessel_row_values(3, 1.0, backend="fortran")


@pytest.mark.parametrize("backend", BACKENDS)
def test_batched_jacobi_matches_single(backend):
    rng = np.random.default_rng(3)
    hs = np.array([random_hermitian(rng, 4) for _ in range(5)])
    w, v = kernels.jacobi_eigh_many(hs, backend=backend)
    for k in range(5):
        np.testing.assert_allclose(w[k], kernels.jacobi_eigh(hs[k], backend=backend)[0], atol=1e-13)
        np.testing.assert_allclose(hs[k] @ v[k], v[k] * w[k], atol=1e-12)
    w0, v0 = kernels.jacobi_eigh_many(np.zeros((0, 4, 4)), backend=backend)
    assert w0.shape == (0, 4)
