"""State-recovery fidelities, Bloch-sphere averages and first-peak analysis.

Single-site fidelities recover ``alpha|up> + beta|down>`` a distance ``r``
from the launch site (``l`` for the unentangled family, ``m`` for the Bell
families).  Pair fidelities recover the Bell code on the pair translated
by ``r``, i.e. on sites (l + r, m + r).  ``s = l - m`` throughout.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .magnon import U_MODES, Family, InitialState, _check_time, _row, eta, lattice_phase

HBAR_EV_S = 6.582119569e-16

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class QuadratureError(ArithmeticError):
    """Bloch-sphere quadrature did not converge under node doubling."""


def _bessels(T: float, *orders: int):
    J = _row(_check_time(T), max(abs(n) for n in orders))
    return [J(n) for n in orders]


def _parity(r: int) -> float:
    return -1.0 if r % 2 else 1.0


# -- unentangled ------------------------------------------------------------


def fid_site_unentangled(r: int, T: float, alpha2, dephased: bool = True):
    """Fidelity of the code recovered at site l + r.

    ``dephased=True`` drops the alpha-beta coherence of the reduced matrix;
    ``dephased=False`` keeps it, which is the exact single-site value.
    """
    alpha2 = np.asarray(alpha2, dtype=float)
    if np.any((alpha2 < 0) | (alpha2 > 1)):
        raise ValueError("alpha2 must lie in [0, 1]")
    (jr,) = _bessels(T, r)
    beta2 = 1.0 - alpha2
    f = alpha2 + beta2 * (beta2 - alpha2) * jr * jr
    if not dephased:
        f = f + 2.0 * alpha2 * beta2 * (lattice_phase(r) * jr).real
    return f if f.ndim else float(f)


def fid_avg_unentangled(r: int, T: float, dephased: bool = True) -> float:
    """1/2 + J_r^2/6 (dephased); the exact average adds cos(pi r/2) J_r / 3."""
    (jr,) = _bessels(T, r)
    f = 0.5 + jr * jr / 6.0
    if not dephased:
        f += lattice_phase(r).real * jr / 3.0
    return f


# -- B1 -----------------------------------------------------------------------


def fid_site_b1(r: int, state: InitialState, T: float) -> float:
    state.require(Family.B1)
    return site_fidelity_b1(r, state.separation, T, state.alpha, state.beta)


def site_fidelity_b1(r: int, s: int, T: float, alpha, beta):
    """|a|^2 + (|b|^2 - |a|^2) |phi_{m+r}|^2, vectorized over the code."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    jrs, jr = _bessels(T, r - s, r)
    phi = beta * lattice_phase(r - s) * jrs + alpha * lattice_phase(r) * jr
    a2, b2 = np.abs(alpha) ** 2, np.abs(beta) ** 2
    f = a2 + (b2 - a2) * np.abs(phi) ** 2
    return f if f.ndim else float(f)


def fid_avg_b1(r: int, s: int, T: float) -> float:
    jrs, jr = _bessels(T, r - s, r)
    return 0.5 + (jrs * jrs - jr * jr) / 6.0


def pairfid_b1(r: int, s: int, T: float, alpha, beta, form: str = "paper"):
    """Fidelity of the B1 code recovered on (l + r, m + r).

    ``form="paper"``: |2 a b J_r + a^2 i^s J_{r+s} + b^2 i^-s J_{r-s}|^2.
    ``form="exact"``: the overlap Tr(rho_code rho_ij) of the evolved state,
    |J_r + a^* b i^-s J_{r-s} + a b^* i^s J_{r+s}|^2.  The two agree for
    real a = b but not in general (the paper form is not 1 at T = 0).
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    jr, jp, jm = _bessels(T, r, r + s, r - s)
    ps, ms = lattice_phase(s), lattice_phase(-s)
    if form == "paper":
        amp = 2.0 * alpha * beta * jr + alpha**2 * ps * jp + beta**2 * ms * jm
    elif form == "exact":
        amp = jr + np.conj(alpha) * beta * ms * jm + alpha * np.conj(beta) * ps * jp
    else:
        raise ValueError("form must be 'paper' or 'exact'")
    g = np.abs(amp) ** 2
    return g if g.ndim else float(g)


def pairfid_avg_b1(r: int, s: int, T: float, form: str = "paper") -> float:
    """(J_{r-s}^2 + J_{r+s}^2)/3 + 2 J_r^2/3 (paper form); the exact overlap
    averages to J_r^2 + (J_{r-s}^2 + J_{r+s}^2)/6."""
    jr, jp, jm = _bessels(T, r, r + s, r - s)
    if form == "paper":
        return (jm * jm + jp * jp) / 3.0 + 2.0 * jr * jr / 3.0
    if form == "exact":
        return jr * jr + (jm * jm + jp * jp) / 6.0
    raise ValueError("form must be 'paper' or 'exact'")


# -- B2 -----------------------------------------------------------------------


def fid_site_b2(r: int, state: InitialState, T: float) -> float:
    state.require(Family.B2)
    i = state.m + r
    occ = eta(i, i, state.l, state.m, T).real
    a2 = abs(state.alpha) ** 2
    b2 = abs(state.beta) ** 2
    return a2 + b2 * (b2 - a2) * occ


def site_fidelity_b2(r: int, s: int, T: float, alpha, beta):
    """Vectorized over the code; the down-spin occupancy of site m + r is
    J_{r-s}^2 + J_r^2."""
    jrs, jr = _bessels(T, r - s, r)
    a2 = np.abs(np.asarray(alpha, dtype=complex)) ** 2
    b2 = np.abs(np.asarray(beta, dtype=complex)) ** 2
    f = a2 + b2 * (b2 - a2) * (jrs * jrs + jr * jr)
    return f if np.ndim(f) else float(f)


def fid_avg_b2(r: int, s: int, T: float) -> float:
    jrs, jr = _bessels(T, r - s, r)
    return 0.5 + (jrs * jrs + jr * jr) / 6.0


def _b2_pair(r: int, s: int, T: float):
    """Pair amplitude X (times (-1)^r) and both-up occupancy u on (l+r, m+r)."""
    jr, jp, jm = _bessels(T, r, r + s, r - s)
    x = jr * jr - jm * jp
    u = 1.0 - (jr * jr + jp * jp) - (jm * jm + jr * jr) + x * x
    return x, u


def pairfid_b2(r: int, s: int, T: float, alpha, beta, u_mode: str = "paper_approx"):
    """|a|^2 + |b|^4 |phi|^2 + |a b|^2 (phi + phi^*) with u ~ 1, or the exact
    leading term |a|^4 + |a|^2 |b|^2 u."""
    if u_mode not in U_MODES:
        raise ValueError(f"u_mode must be one of {U_MODES}")
    a2 = np.abs(np.asarray(alpha, dtype=complex)) ** 2
    b2 = np.abs(np.asarray(beta, dtype=complex)) ** 2
    x, u = _b2_pair(r, s, T)
    phi = _parity(r) * x
    lead = a2 if u_mode == "paper_approx" else a2 * a2 + a2 * b2 * u
    g = lead + b2 * b2 * phi * phi + 2.0 * a2 * b2 * phi
    return g if np.ndim(g) else float(g)


def pairfid_avg_b2(r: int, s: int, T: float, u_mode: str = "paper_approx") -> float:
    """1/2 + X (X + (-1)^r) / 3 with X = J_r^2 - J_{r-s} J_{r+s}.

    This exceeds 1 near r = 0, T = 0 because u ~ 1 there is wrong; the
    exact form is 1/3 + u/6 + X^2/3 + (-1)^r X/3.
    """
    if u_mode not in U_MODES:
        raise ValueError(f"u_mode must be one of {U_MODES}")
    x, u = _b2_pair(r, s, T)
    if u_mode == "paper_approx":
        return 0.5 + x * (x + _parity(r)) / 3.0
    return 1.0 / 3.0 + u / 6.0 + x * x / 3.0 + _parity(r) * x / 3.0


# -- averaging and peaks --------------------------------------------------------


def _bloch_nodes(n_theta: int, n_phi: int):
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    y, wy = np.polynomial.legendre.leggauss(n_phi)
    theta = np.arccos(x)
    phi = math.pi * (y + 1.0)
    alpha = np.cos(theta / 2)[:, None] * np.ones_like(phi)[None, :]
    beta = np.sin(theta / 2)[:, None] * np.exp(1j * phi)[None, :]
    # dOmega = d(cos theta) dphi; the phi map contributes a factor pi
    weights = np.outer(wx, wy) * math.pi / (4.0 * math.pi)
    return alpha, beta, weights


def _integrate(f, n_theta, n_phi):
    alpha, beta, w = _bloch_nodes(n_theta, n_phi)
    try:
        vals = np.asarray(f(alpha, beta), dtype=float)
        if vals.shape != alpha.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([[f(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(alpha, beta)], dtype=float)
    return float(np.sum(w * vals))


def bloch_average(f: Callable, n_theta: int = 64, n_phi: int = 64, rtol: float = 1e-8) -> float:
    """(1/4 pi) * integral of f(alpha, beta) over the Bloch sphere.

    ``f`` is tried once on arrays of nodes and falls back to pointwise calls.
    The result is checked against a run with doubled node counts.
    """
    coarse = _integrate(f, n_theta, n_phi)
    fine = _integrate(f, 2 * n_theta, 2 * n_phi)
    if abs(fine - coarse) > rtol * max(abs(fine), 1e-300):
        raise QuadratureError(f"Bloch average not converged: {coarse!r} vs {fine!r}")
    return coarse


@dataclass
class FidelityCurve:
    """Samples of a fidelity against T.

    ``evaluate`` (optional) is the underlying function of T; peak
    refinement uses it when present.
    """

    r: int
    s: int
    family: Family
    T: np.ndarray
    values: np.ndarray
    evaluate: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        self.T = np.asarray(self.T, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.T.shape != self.values.shape:
            raise ValueError("T and values must have the same length")
        if np.any(np.diff(self.T) <= 0):
            raise ValueError("T must be strictly increasing")


def _golden_max(f, a: float, b: float, tol: float):
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def first_maximum(curve: FidelityCurve, tol: float = 1e-4, noise: float = 1e-12):
    """Location and value of the first interior local maximum, or None.

    The sampled curve is scanned with a three-point test.  A candidate must
    rise more than ``noise`` above every earlier sample, so rounding jitter
    on a flat stretch is not taken for a peak.  The bracket is then refined
    by golden-section search on ``curve.evaluate`` (or by a parabola through
    the three samples when no function is attached).
    """
    t, v = curve.T, curve.values
    floor = v[0]
    for k in range(1, len(v) - 1):
        floor = min(floor, v[k - 1])
        if v[k - 1] < v[k] >= v[k + 1] and v[k] - floor > noise:
            break
    else:
        return None
    if curve.evaluate is not None:
        tc, peak = _golden_max(curve.evaluate, float(t[k - 1]), float(t[k + 1]), tol)
        if peak < v[k]:
            return float(t[k]), float(v[k])
        return float(tc), float(peak)
    denom = v[k - 1] - 2 * v[k] + v[k + 1]
    h = t[k + 1] - t[k]
    shift = 0.0 if denom == 0 else 0.5 * h * (v[k - 1] - v[k + 1]) / denom
    return float(t[k] + shift), float(v[k] - 0.25 * (v[k - 1] - v[k + 1]) * shift / h)


def timescale_seconds(K_ev: float) -> float:
    """tau = hbar / K for a coupling given in eV."""
    K_ev = float(K_ev)
    if not math.isfinite(K_ev) or K_ev <= 0.0:
        raise ValueError("coupling must be a positive number of eV")
    return HBAR_EV_S / K_ev


# -- curves ------------------------------------------------------------------


def time_grid(t_max: float = 120.0, steps: int = 600) -> np.ndarray:
    """``steps`` equal intervals on [0, t_max] (steps + 1 points)."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    return np.linspace(0.0, t_max, steps + 1)


def thread_count() -> int:
    raw = os.environ.get("SPINCHAIN_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def evaluate_grid(func: Callable[[float], float], Ts) -> np.ndarray:
    """Map ``func`` over the grid; order-preserving, optionally threaded."""
    Ts = [float(t) for t in Ts]
    n = thread_count()
    if n == 1 or len(Ts) < 2:
        return np.array([func(t) for t in Ts])
    with ThreadPoolExecutor(max_workers=n) as pool:
        return np.array(list(pool.map(func, Ts)))


def average_fidelity_fn(family, r: int, s: int = 0, dephased: bool = True) -> Callable[[float], float]:
    family = Family(family)
    if family is Family.UNENTANGLED:
        return lambda T: fid_avg_unentangled(r, T, dephased)
    if family is Family.B1:
        return lambda T: fid_avg_b1(r, s, T)
    return lambda T: fid_avg_b2(r, s, T)


def average_pair_fidelity_fn(family, r: int, s: int, u_mode: str = "paper_approx", form: str = "paper"):
    family = Family(family)
    if family is Family.B1:
        return lambda T: pairfid_avg_b1(r, s, T, form)
    if family is Family.B2:
        return lambda T: pairfid_avg_b2(r, s, T, u_mode)
    raise ValueError("pair fidelity is defined for the b1 and b2 families")


def fidelity_curve(family, r: int, s: int = 0, Ts=None, dephased: bool = True) -> FidelityCurve:
    """Bloch-averaged single-site fidelity sampled on ``Ts``."""
    Ts = time_grid() if Ts is None else np.asarray(Ts, dtype=float)
    fn = average_fidelity_fn(family, r, s, dephased)
    return FidelityCurve(r, s, Family(family), Ts, evaluate_grid(fn, Ts), fn)


def pair_fidelity_curve(family, r: int, s: int, Ts=None, u_mode: str = "paper_approx", form: str = "paper") -> FidelityCurve:
    Ts = time_grid() if Ts is None else np.asarray(Ts, dtype=float)
    fn = average_pair_fidelity_fn(family, r, s, u_mode, form)
    return FidelityCurve(r, s, Family(family), Ts, evaluate_grid(fn, Ts), fn)
