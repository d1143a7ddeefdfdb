"""Closed-form magnon propagation on the infinite XY chain.

Time is dimensionless, ``T = K t / hbar``.  The uniform field only adds a
global phase per magnon sector and is dropped here.  With ``i**k`` the
lattice phase,

    one magnon from site l:   phi_n(T)  = i**(n-l) J_{n-l}(T)
    two magnons from (l, m):  phi_ij(T) = i**(i+j-l-m) (J_{i-l} J_{j-m} - J_{i-m} J_{j-l})

The two-magnon amplitude is a Slater determinant (the XY chain maps to
free fermions), hence antisymmetric in (i, j).  The amplitude of the
spin configuration with down spins at {i, j} is ``pair_amplitude``, which
is symmetric and carries the ordering sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bessel import BesselRow, bessel_row

# Sites further than T + WINDOW_PAD from a source carry |J| < 1e-16.
WINDOW_PAD = 40

U_MODES = ("paper_approx", "exact")

_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_PHASE_ARRAY = np.array(_PHASES)


def lattice_phase(k: int) -> complex:
    """``i**k`` = exp(i pi k / 2), exact for integer k."""
    return _PHASES[k % 4]


class Family(str, Enum):
    UNENTANGLED = "unentangled"
    B1 = "b1"
    B2 = "b2"


@dataclass(frozen=True)
class InitialState:
    """Code amplitudes and sites of one of the three initial families.

    * ``UNENTANGLED``: site ``l`` holds ``alpha|up> + beta|down>``.
    * ``B1``: sites (l, m) hold ``alpha|up down> + beta|down up>``, i.e. the
      magnon sits on ``l`` with amplitude ``beta`` and on ``m`` with ``alpha``.
    * ``B2``: sites (l, m) hold ``alpha|up up> + beta|down down>``.
    """

    kind: Family
    alpha: complex
    beta: complex
    l: int
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Family(self.kind))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm!r}")
        if self.kind is not Family.UNENTANGLED:
            if self.m is None:
                raise ValueError(f"{self.kind.value} state needs a second site m")
            if self.m == self.l:
                raise ValueError("code sites l and m must differ")

    @classmethod
    def unentangled(cls, l=0, alpha=1 / math.sqrt(2), beta=1 / math.sqrt(2)):
        return cls(Family.UNENTANGLED, alpha, beta, l)

    @classmethod
    def b1(cls, l, m, alpha=1 / math.sqrt(2), beta=1 / math.sqrt(2)):
        return cls(Family.B1, alpha, beta, l, m)

    @classmethod
    def b2(cls, l, m, alpha=1 / math.sqrt(2), beta=1 / math.sqrt(2)):
        return cls(Family.B2, alpha, beta, l, m)

    @property
    def separation(self) -> int:
        """s = l - m (0 for the unentangled family)."""
        return 0 if self.m is None else self.l - self.m

    def require(self, kind: Family) -> None:
        if self.kind is not kind:
            raise ValueError(f"expected a {kind.value} state, got {self.kind.value}")


def _check_time(T) -> float:
    T = float(T)
    if not math.isfinite(T) or T < 0.0:
        raise ValueError(f"T must be finite and non-negative, got {T}")
    return T


def _row(T: float, reach: int = 0) -> BesselRow:
    return bessel_row(int(math.ceil(T)) + WINDOW_PAD + max(reach, 0), T)


class OneMagnonField:
    """phi_n(T) for a magnon launched as a superposition over source sites.

    ``sources`` is a sequence of ``(site, coefficient)``.
    """

    def __init__(self, sources, T: float):
        self.sources = tuple((int(s), complex(c)) for s, c in sources)
        self.T = _check_time(T)
        span = max(s for s, _ in self.sources) - min(s for s, _ in self.sources)
        self._j = _row(self.T, span)

    @classmethod
    def from_state(cls, state: InitialState, T: float) -> "OneMagnonField":
        if state.kind is Family.UNENTANGLED:
            return cls([(state.l, 1.0)], T)
        state.require(Family.B1)
        return cls([(state.l, state.beta), (state.m, state.alpha)], T)

    def __call__(self, n: int) -> complex:
        return sum(c * lattice_phase(n - s) * self._j(n - s) for s, c in self.sources)

    def window(self):
        """Sites and amplitudes covering all non-negligible weight."""
        pad = int(math.ceil(self.T)) + WINDOW_PAD
        lo = min(s for s, _ in self.sources) - pad
        hi = max(s for s, _ in self.sources) + pad
        sites = np.arange(lo, hi + 1)
        return sites, np.array([self(int(n)) for n in sites])

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.window()[1]) ** 2))


class TwoMagnonField:
    """phi_ij(T) for two magnons launched from sites (l, m)."""

    def __init__(self, l: int, m: int, T: float):
        if l == m:
            raise ValueError("two-magnon sources must differ")
        self.l, self.m = int(l), int(m)
        self.T = _check_time(T)
        self._j = _row(self.T, abs(self.l - self.m))

    @classmethod
    def from_state(cls, state: InitialState, T: float) -> "TwoMagnonField":
        state.require(Family.B2)
        return cls(state.l, state.m, T)

    def __call__(self, i: int, j: int) -> complex:
        l, m, J = self.l, self.m, self._j
        det = J(i - l) * J(j - m) - J(i - m) * J(j - l)
        return lattice_phase(i + j - l - m) * det

    def column(self, i: int, ns) -> np.ndarray:
        """phi_{i n} for an array of n."""
        ns = np.asarray(ns, dtype=np.int64)
        l, m, J = self.l, self.m, self._j
        det = J(i - l) * J.take(ns - m) - J(i - m) * J.take(ns - l)
        return _PHASE_ARRAY[(i + ns - l - m) % 4] * det

    def pair_amplitude(self, i: int, j: int) -> complex:
        """Amplitude of the configuration with down spins at {i, j}."""
        if i == j:
            return 0.0j
        sign = 1 if (i - j) * (self.l - self.m) > 0 else -1
        return sign * self(i, j)

    def window(self) -> range:
        pad = int(math.ceil(self.T)) + WINDOW_PAD
        return range(min(self.l, self.m) - pad, max(self.l, self.m) + pad + 1)

    def norm2(self) -> float:
        sites = list(self.window())
        total = 0.0
        for a, i in enumerate(sites):
            for j in sites[:a]:
                total += abs(self(i, j)) ** 2
        return total


def phi_unentangled(n: int, l: int, T: float) -> complex:
    """One-magnon propagator i**(n-l) J_{n-l}(T) from site l."""
    return OneMagnonField([(l, 1.0)], T)(n)


def phi_b1(n: int, state: InitialState, T: float) -> complex:
    """beta i**(n-l) J_{n-l}(T) + alpha i**(n-m) J_{n-m}(T)."""
    state.require(Family.B1)
    return OneMagnonField.from_state(state, T)(n)


def phi_b2(i: int, j: int, state: InitialState, T: float) -> complex:
    state.require(Family.B2)
    if i == j:
        raise ValueError("phi_ij is defined for i != j")
    return TwoMagnonField.from_state(state, T)(i, j)


def eta(i: int, j: int, l: int, m: int, T: float) -> complex:
    """sum_n phi_in^* phi_jn over the whole line, via the addition rule."""
    J = _row(_check_time(T), max(abs(i - l), abs(j - l), abs(i - m), abs(j - m)))
    return lattice_phase(j - i) * (J(i - l) * J(j - l) + J(i - m) * J(j - m))


def zeta(i: int, j: int, field: TwoMagnonField) -> complex:
    """Finite sum over sites strictly between j and i of phi_in^* phi_jn."""
    if i <= j:
        raise ValueError(f"zeta needs i > j, got i={i}, j={j}")
    ns = np.arange(j + 1, i)
    return complex(np.vdot(field.column(i, ns), field.column(j, ns)))


def z_offdiag(i: int, j: int, l: int, m: int, T: float) -> complex:
    """<s_j^+ s_i^-> in the two-magnon state, eta_ij - 2 zeta_ij."""
    field = TwoMagnonField(l, m, T)
    return eta(i, j, l, m, T) - 2.0 * zeta(i, j, field)


@dataclass(frozen=True)
class B2MatrixElements:
    """Two-site occupancies and coherences in the two-magnon state.

    ``u``, ``v``: both sites up / both down; ``w1``: i down, j up;
    ``w2``: i up, j down; ``z`` = <s_j^+ s_i^->; ``phi``: amplitude of the
    configuration with both i and j down.
    """

    u: float
    v: float
    w1: float
    w2: float
    z: complex
    phi: complex
    u_mode: str


def b2_elements(i: int, j: int, state: InitialState, T: float, u_mode: str = "exact") -> B2MatrixElements:
    state.require(Family.B2)
    if u_mode not in U_MODES:
        raise ValueError(f"u_mode must be one of {U_MODES}, got {u_mode!r}")
    if i <= j:
        raise ValueError(f"b2_elements needs i > j, got i={i}, j={j}")
    l, m = state.l, state.m
    field = TwoMagnonField(l, m, T)
    phi = field.pair_amplitude(i, j)
    v = abs(phi) ** 2
    eta_ii = eta(i, i, l, m, T).real
    eta_jj = eta(j, j, l, m, T).real
    z = eta(i, j, l, m, T) - 2.0 * zeta(i, j, field)
    u = 1.0 if u_mode == "paper_approx" else 1.0 - eta_ii - eta_jj + v
    return B2MatrixElements(u=u, v=v, w1=eta_ii - v, w2=eta_jj - v, z=z, phi=phi, u_mode=u_mode)
