"""Backend selection for the numeric kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise
the pure-Python twin in ``_kernels_py`` takes over.  Setting the
environment variable ``SPINCHAIN_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from . import _kernels_py

_impl = _kernels_py
BACKEND = "python"

if os.environ.get("SPINCHAIN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py


def bessel_row_values(n_max: int, x: float, backend=None) -> np.ndarray:
    """J_0(x)..J_{n_max}(x) as a float64 array (``x >= 0``)."""
    impl = _select(backend)
    if impl is _kernels_py:
        out = [0.0] * (n_max + 1)
        impl.bessel_row(n_max, float(x), out)
        return np.asarray(out, dtype=np.float64)
    out = np.empty(n_max + 1, dtype=np.float64)
    impl.bessel_row(n_max, float(x), out)
    return out


def jacobi_eigh(h, backend=None, tol: float = 1.0e-15):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix."""
    impl = _select(backend)
    h = np.asarray(h, dtype=np.complex128)
    n = h.shape[0]
    if impl is _kernels_py:
        a = [[complex(h[i, j]) for j in range(n)] for i in range(n)]
        v = [[0j] * n for _ in range(n)]
        impl.jacobi_eigh(a, v, tol)
        w = np.array([a[i][i].real for i in range(n)])
        vecs = np.array(v, dtype=np.complex128)
    else:
        a = np.ascontiguousarray(h.copy())
        vecs = np.empty((n, n), dtype=np.complex128)
        impl.jacobi_eigh(a, vecs, tol)
        w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], vecs[:, order]


def jacobi_eigh_many(hs, backend=None, tol: float = 1.0e-15):
    """Batched :func:`jacobi_eigh` for an array of shape (k, n, n)."""
    impl = _select(backend)
    hs = np.asarray(hs, dtype=np.complex128)
    if impl is _kernels_py:
        pairs = [jacobi_eigh(h, backend="python", tol=tol) for h in hs]
        k, n = hs.shape[0], hs.shape[1]
        if not pairs:
            return np.zeros((0, n)), np.zeros((0, n, n), dtype=np.complex128)
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])
    a = np.ascontiguousarray(hs.copy())
    vecs = np.empty_like(a)
    impl.jacobi_eigh_many(a, vecs, tol)
    w = np.diagonal(a, axis1=1, axis2=2).real.copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    return w, vecs


def _select(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {backend!r}")
