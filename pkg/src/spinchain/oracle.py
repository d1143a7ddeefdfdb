"""Exact evolution of a finite Heisenberg chain in the 0-, 1- and 2-magnon sectors.

    H = Kz sum s^z_i s^z_{i+1} - (K/2) sum (s^+_i s^-_{i+1} + h.c.) - B sum s^z_i - E_F

with E_F the energy of the all-up state, so |F> has energy zero.  Total
S^z is conserved, so each sector is diagonalized on its own and evolved
exactly by its eigendecomposition.  This is the ground truth every closed
form in the package is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .entanglement import wootters_concurrence
from .magnon import Family, InitialState

MAX_TWO_MAGNON_SITES = 64
BOUNDARIES = ("periodic", "open")
MODES = ("full", "dephased")


@dataclass(frozen=True)
class ChainConfig:
    N: int
    K: float = 1.0
    Kz: float = 0.0
    B: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 4:
            raise ValueError(f"need an integer N >= 4, got {self.N}")
        for name in ("K", "Kz", "B"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")

    @property
    def bonds(self) -> list[tuple[int, int]]:
        b = [(i, i + 1) for i in range(self.N - 1)]
        if self.boundary == "periodic":
            b.append((self.N - 1, 0))
        return b


@dataclass
class SectorState:
    """Normalized amplitudes on the ``n_down`` sector.

    The full state is ``sum(weight * amplitudes)`` over sectors; ``basis``
    lists the down-spin positions of each basis vector in lexicographic order.
    """

    n_down: int
    basis: tuple[tuple[int, ...], ...]
    amplitudes: np.ndarray
    weight: complex = 1.0

    def full_amplitudes(self) -> np.ndarray:
        return self.weight * self.amplitudes


@dataclass
class ChainState:
    config: ChainConfig
    T: float
    sectors: dict[int, SectorState] = field(default_factory=dict)

    @property
    def ferro_amplitude(self) -> complex:
        """Scalar amplitude on the all-up state."""
        s = self.sectors.get(0)
        return 0.0j if s is None else complex(s.weight * s.amplitudes[0])

    def amplitude(self, downs) -> complex:
        downs = tuple(sorted(downs))
        s = self.sectors.get(len(downs))
        if s is None:
            return 0.0j
        idx = _basis_index(self.config.N, len(downs))[downs]
        return complex(s.weight * s.amplitudes[idx])

    def norm2(self) -> float:
        return float(sum(abs(s.weight) ** 2 * np.vdot(s.amplitudes, s.amplitudes).real for s in self.sectors.values()))

    def sector_population(self, n_down: int) -> float:
        s = self.sectors.get(n_down)
        if s is None:
            return 0.0
        return float(abs(s.weight) ** 2 * np.vdot(s.amplitudes, s.amplitudes).real)


@lru_cache(maxsize=None)
def sector_basis(N: int, n_down: int) -> tuple[tuple[int, ...], ...]:
    if n_down not in (0, 1, 2):
        raise ValueError(f"only 0, 1 and 2 down spins are supported, got {n_down}")
    return tuple(combinations(range(N), n_down))


@lru_cache(maxsize=None)
def _basis_index(N: int, n_down: int) -> dict:
    return {c: k for k, c in enumerate(sector_basis(N, n_down))}


def build_sector_hamiltonian(config: ChainConfig, n_down: int) -> np.ndarray:
    """Dense real-symmetric H on the ``n_down`` sector, ferromagnet at zero."""
    if n_down == 2 and config.N > MAX_TWO_MAGNON_SITES:
        raise ValueError(f"two-magnon sector limited to N <= {MAX_TWO_MAGNON_SITES}")
    basis = sector_basis(config.N, n_down)
    index = _basis_index(config.N, n_down)
    bonds = config.bonds
    e_ferro = config.Kz * len(bonds) / 4.0 - config.B * config.N / 2.0
    h = np.zeros((len(basis), len(basis)))
    for k, downs in enumerate(basis):
        d = set(downs)
        zz = sum(0.25 if ((a in d) == (b in d)) else -0.25 for a, b in bonds)
        sz = config.N / 2.0 - len(d)
        h[k, k] = config.Kz * zz - config.B * sz - e_ferro
        for a, b in bonds:
            if (a in d) != (b in d):
                moved = tuple(sorted((d - {a, b}) | ({b} if a in d else {a})))
                h[index[moved], k] += -0.5 * config.K
    return h


@lru_cache(maxsize=64)
def _spectrum(config: ChainConfig, n_down: int):
    return np.linalg.eigh(build_sector_hamiltonian(config, n_down))


def _initial_sectors(config: ChainConfig, state: InitialState) -> dict[int, tuple[complex, np.ndarray]]:
    N = config.N
    sites = [state.l] if state.m is None else [state.l, state.m]
    for s in sites:
        if not 0 <= s < N:
            raise ValueError(f"site {s} outside chain of {N} sites")

    def unit(n_down, downs):
        v = np.zeros(len(sector_basis(N, n_down)), dtype=complex)
        v[_basis_index(N, n_down)[tuple(sorted(downs))]] = 1.0
        return v

    out = {}
    if state.kind is Family.UNENTANGLED:
        out[0] = (state.alpha, unit(0, ()))
        out[1] = (state.beta, unit(1, (state.l,)))
    elif state.kind is Family.B1:
        # magnon on l with beta, on m with alpha
        out[1] = (1.0, state.beta * unit(1, (state.l,)) + state.alpha * unit(1, (state.m,)))
    else:
        out[0] = (state.alpha, unit(0, ()))
        out[2] = (state.beta, unit(2, (state.l, state.m)))
    return out


def evolve(config: ChainConfig, initial: InitialState, T: float, dimensionless: bool = True) -> ChainState:
    """Exact state at time T (in units of hbar/K when ``dimensionless``)."""
    T = float(T)
    if not math.isfinite(T) or T < 0:
        raise ValueError("T must be finite and non-negative")
    t = T / config.K if dimensionless else T
    out = ChainState(config, T)
    for n_down, (weight, a0) in _initial_sectors(config, initial).items():
        if weight == 0:
            continue
        w, V = _spectrum(config, n_down)
        amps = V @ (np.exp(-1j * w * t) * (V.T @ a0))
        out.sectors[n_down] = SectorState(n_down, sector_basis(config.N, n_down), amps, complex(weight))
    return out


@lru_cache(maxsize=4096)
def _local_maps(N: int, n_down: int, sites: tuple[int, ...]):
    """Local configuration index (up=0, down=1, first site most significant)
    and an integer environment key for every basis vector of the sector."""
    basis = sector_basis(N, n_down)
    idx = np.zeros(len(basis), dtype=np.int64)
    env = np.zeros(len(basis), dtype=np.int64)
    for k, downs in enumerate(basis):
        loc = 0
        for s in sites:
            loc = 2 * loc + (1 if s in downs else 0)
        rest = [d for d in downs if d not in sites]
        # distinct keys for {}, {d} and {d1 < d2}
        if len(rest) == 1:
            key = 1 + rest[0]
        elif len(rest) == 2:
            key = 1 + N + rest[0] * N + rest[1]
        else:
            key = 0
        idx[k], env[k] = loc, key
    return idx, env


@lru_cache(maxsize=4096)
def _grouping(N: int, n_downs: tuple[int, ...], sites: tuple[int, ...], mode: str):
    """Local index and environment row of every amplitude, sectors
    concatenated in ``n_downs`` order.  In "dephased" mode equal
    environments of different sectors stay separate rows."""
    idx, env = [], []
    for n_down in n_downs:
        i, e = _local_maps(N, n_down, sites)
        idx.append(i)
        env.append(e + (0 if mode == "full" else n_down * 4 * (1 + N) ** 2))
    keys, rows = np.unique(np.concatenate(env), return_inverse=True)
    return np.concatenate(idx), rows, len(keys)


def _reduced(state: ChainState, sites: tuple[int, ...], mode: str) -> np.ndarray:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    for s in sites:
        if not 0 <= s < state.config.N:
            raise ValueError(f"site {s} outside chain")
    if len(set(sites)) != len(sites):
        raise ValueError("sites must be distinct")
    n_downs = tuple(sorted(state.sectors))
    idx, rows, n_rows = _grouping(state.config.N, n_downs, tuple(sites), mode)
    amps = np.concatenate([state.sectors[n].weight * state.sectors[n].amplitudes for n in n_downs])
    M = np.zeros((n_rows, 2 ** len(sites)), dtype=complex)
    np.add.at(M, (rows, idx), amps)
    return M.T @ M.conj()


def reduced_rho_1(state: ChainState, site: int, mode: str = "full") -> np.ndarray:
    """2x2 reduced matrix of one site, basis (up, down)."""
    return _reduced(state, (site,), mode)


def reduced_rho_2(state: ChainState, i: int, j: int, mode: str = "full") -> np.ndarray:
    """4x4 reduced matrix of sites (i, j), basis (uu, ud, du, dd) with i first."""
    return _reduced(state, (i, j), mode)


def oracle_fidelity(state: ChainState, code, sites, mode: str = "full") -> float:
    """<code| rho |code> on one site (len-2 code) or a pair (len-4 code)."""
    code = np.asarray(code, dtype=complex)
    if np.ndim(sites) == 0:
        sites = (int(sites),)
    sites = tuple(int(s) for s in sites)
    if code.shape != (2 ** len(sites),):
        raise ValueError("code length must be 2 for one site, 4 for a pair")
    rho = _reduced(state, sites, mode)
    return float(np.vdot(code, rho @ code).real)


def oracle_concurrence(state: ChainState, i: int, j: int, mode: str = "full") -> float:
    return wootters_concurrence(reduced_rho_2(state, i, j, mode))


def site_code(alpha, beta) -> np.ndarray:
    """alpha|up> + beta|down>."""
    return np.array([alpha, beta], dtype=complex)


def pair_code(kind: Family, alpha, beta) -> np.ndarray:
    """The two-site code of a Bell family, translated onto (i, j) = (l+r, m+r)."""
    kind = Family(kind)
    if kind is Family.B1:
        return np.array([0, alpha, beta, 0], dtype=complex)
    if kind is Family.B2:
        return np.array([alpha, 0, 0, beta], dtype=complex)
    raise ValueError("pair codes exist only for the b1 and b2 families")
