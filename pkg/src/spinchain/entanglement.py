"""Two-site concurrence: Wootters' general procedure and the closed forms.

All 4x4 matrices use the basis (uu, ud, du, dd) with the first label on
site ``i`` and the second on site ``j``.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .magnon import (
    Family,
    InitialState,
    OneMagnonField,
    b2_elements,
    _row,
    _check_time,
)

# sigma_y (x) sigma_y
_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]],
    dtype=complex,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """Time-reversed matrix (sigma_y x sigma_y) rho^* (sigma_y x sigma_y)."""
    return _YY @ np.conj(rho) @ _YY


def check_density_matrix(rho, check_trace: bool = True) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    if check_trace and abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    return rho


def wootters_concurrence(rho, check_trace: bool = True) -> float:
    """max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) for eigenvalues of rho rho~.

    ``sqrt(rho) rho~ sqrt(rho)`` is Hermitian with the same spectrum.  It
    factors as ``tau^H tau`` with ``tau = sqrt(rho)^* Y sqrt(rho)``, so the
    square roots of the eigenvalues are the singular values of ``tau``.
    Those are read off the Hermitian dilation ``[[0, tau], [tau^H, 0]]``
    (eigenvalues +-sigma) to avoid taking square roots of rounding noise.
    Set ``check_trace=False`` for unnormalized inputs.
    """
    rho = check_density_matrix(rho, check_trace)
    w, V = kernels.jacobi_eigh(rho)
    if w[0] < -PSD_TOL * max(1.0, w[-1]):
        raise ValueError(f"density matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    sqrt_rho = (V * np.sqrt(w)) @ V.conj().T
    tau = np.conj(sqrt_rho) @ _YY @ sqrt_rho
    dilation = np.zeros((8, 8), dtype=complex)
    dilation[:4, 4:] = tau
    dilation[4:, :4] = tau.conj().T
    sig = kernels.jacobi_eigh(dilation)[0][4:][::-1]
    sig = np.clip(sig, 0.0, None)
    c = sig[0] - sig[1] - sig[2] - sig[3]
    return float(min(max(c, 0.0), 1.0))


def wootters_concurrence_many(rhos, check_trace: bool = True) -> np.ndarray:
    """Concurrence of a stack of 4x4 matrices, shape (k, 4, 4).

    Same construction as :func:`wootters_concurrence`, with the Jacobi
    solves batched in one kernel call.
    """
    rhos = np.asarray(rhos, dtype=complex)
    if rhos.ndim != 3 or rhos.shape[1:] != (4, 4):
        raise ValueError(f"expected shape (k, 4, 4), got {rhos.shape}")
    if not np.all(np.isfinite(rhos)):
        raise ValueError("density matrix has non-finite entries")
    if rhos.shape[0] == 0:
        return np.zeros(0)
    if np.abs(rhos - rhos.conj().transpose(0, 2, 1)).max() > HERMITIAN_TOL:
        raise ValueError("density matrix is not Hermitian")
    if check_trace and np.abs(np.trace(rhos, axis1=1, axis2=2) - 1.0).max() > TRACE_TOL:
        raise ValueError("density matrix trace is not 1")
    w, V = kernels.jacobi_eigh_many(rhos)
    if np.any(w[:, 0] < -PSD_TOL * np.maximum(1.0, w[:, -1])):
        raise ValueError("density matrix is not positive semidefinite")
    w = np.clip(w, 0.0, None)
    sqrt_rho = (V * np.sqrt(w)[:, None, :]) @ V.conj().transpose(0, 2, 1)
    tau = np.conj(sqrt_rho) @ _YY @ sqrt_rho
    dilation = np.zeros((len(rhos), 8, 8), dtype=complex)
    dilation[:, :4, 4:] = tau
    dilation[:, 4:, :4] = tau.conj().transpose(0, 2, 1)
    sig = np.clip(kernels.jacobi_eigh_many(dilation)[0][:, 4:][:, ::-1], 0.0, None)
    c = sig[:, 0] - sig[:, 1] - sig[:, 2] - sig[:, 3]
    return np.clip(c, 0.0, 1.0)


def concurrence_one_magnon(phi_i: complex, phi_j: complex) -> float:
    """2 |phi_i^* phi_j| for a state with at most one down spin."""
    return 2.0 * abs(phi_i) * abs(phi_j)


def concurrence_unentangled(i: int, j: int, l: int, T: float, beta2: float) -> float:
    if not 0.0 <= beta2 <= 1.0:
        raise ValueError("beta2 must lie in [0, 1]")
    J = _row(_check_time(T), max(abs(i - l), abs(j - l)))
    return 2.0 * beta2 * abs(J(i - l) * J(j - l))


def concurrence_b1(i: int, j: int, state: InitialState, T: float) -> float:
    state.require(Family.B1)
    field = OneMagnonField.from_state(state, T)
    return concurrence_one_magnon(field(i), field(j))


def concurrence_b1_lm(s: int, T: float) -> float:
    """C_lm for the maximally entangled B1 pair at separation s = l - m."""
    J = _row(_check_time(T), abs(s))
    j0, js = J(0), J(s)
    if s % 2 == 0:
        sign = -1.0 if (s // 2) % 2 else 1.0
        return (j0 + sign * js) ** 2
    return j0 * j0 + js * js


def build_rho_one_magnon(phi_i: complex, phi_j: complex) -> np.ndarray:
    """Two-site matrix of a pure one-magnon state with amplitudes phi_i, phi_j."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0 - abs(phi_i) ** 2 - abs(phi_j) ** 2
    rho[1, 1] = abs(phi_j) ** 2
    rho[2, 2] = abs(phi_i) ** 2
    rho[1, 2] = np.conj(phi_i) * phi_j
    rho[2, 1] = phi_i * np.conj(phi_j)
    return rho


def build_rho_unentangled(i: int, j: int, l: int, T: float, beta2: float) -> np.ndarray:
    """Two-site matrix of the unentangled family with the alpha-beta
    coherences dropped (the magnon sector alone, weighted by |beta|^2)."""
    field = OneMagnonField([(l, 1.0)], T)
    rho = beta2 * build_rho_one_magnon(field(i), field(j))
    rho[0, 0] = 1.0 - beta2 * (abs(field(i)) ** 2 + abs(field(j)) ** 2)
    return rho


def build_rho_b1(i: int, j: int, state: InitialState, T: float) -> np.ndarray:
    state.require(Family.B1)
    field = OneMagnonField.from_state(state, T)
    return build_rho_one_magnon(field(i), field(j))


def build_rho_b2(i: int, j: int, state: InitialState, T: float, u_mode: str = "exact") -> np.ndarray:
    """Two-site matrix of the B2 family from the u, v, w1, w2, z elements.

    With ``u_mode="paper_approx"`` (u = 1) the trace exceeds one; the
    matrix is still positive semidefinite.
    """
    e = b2_elements(i, j, state, T, u_mode)
    a2 = abs(state.alpha) ** 2
    b2 = abs(state.beta) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = a2 + b2 * e.u
    rho[1, 1] = b2 * e.w2
    rho[2, 2] = b2 * e.w1
    rho[3, 3] = b2 * e.v
    rho[1, 2] = b2 * e.z
    rho[2, 1] = b2 * np.conj(e.z)
    rho[3, 0] = np.conj(state.alpha) * state.beta * e.phi
    rho[0, 3] = np.conj(rho[3, 0])
    return rho


def concurrence_b2(i: int, j: int, state: InitialState, T: float, u_mode: str = "paper_approx") -> float:
    """Positive part of the two X-state branches.

    C = max(0, 2(|b|^2 |z| - |b| sqrt(v) sqrt(|a|^2 + |b|^2 u)),
               2(|a b phi| - |b|^2 sqrt(w1 w2)))
    """
    e = b2_elements(i, j, state, T, u_mode)
    a, b = abs(state.alpha), abs(state.beta)
    coherence = 2.0 * (b * b * abs(e.z) - b * math.sqrt(e.v) * math.sqrt(a * a + b * b * e.u))
    pair = 2.0 * (a * b * abs(e.phi) - b * b * math.sqrt(max(e.w1 * e.w2, 0.0)))
    return max(0.0, coherence, pair)
