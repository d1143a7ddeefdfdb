"""Closed forms against the finite-chain oracle, one time point at a time.

Only sites whose wrap-around distance on the ring makes the image terms
negligible are compared: for a source c and a site n the first image sits
at distance N - |n - c|, and |J_d(T)| <= (T/2)^d / d!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import entanglement as ent
from . import fidelity as fid
from .magnon import Family, InitialState, OneMagnonField, TwoMagnonField
from .oracle import (
    ChainConfig,
    evolve,
    oracle_fidelity,
    pair_code,
    reduced_rho_2,
    site_code,
)


def bessel_tail_bound(d: int, T: float) -> float:
    """Upper bound on |J_d(T)| for d >= 0."""
    if d <= 0:
        return 1.0
    if T == 0.0:
        return 0.0
    return math.exp(d * math.log(T / 2.0) - math.lgamma(d + 1.0))


def interior_sites(state: InitialState, N: int, T: float, bound: float) -> list[int]:
    """Sites whose image terms are below ``bound``, for every source."""
    sources = [state.l] if state.m is None else [state.l, state.m]
    out = []
    for n in range(N):
        if all(bessel_tail_bound(N - abs(n - c), T) < bound for c in sources):
            out.append(n)
    return out


@dataclass
class Deviation:
    """Largest |closed form - oracle| per quantity at one time point."""

    T: float
    values: dict

    @property
    def worst(self) -> float:
        return max(self.values.values())


def _max(old, new):
    return max(old, float(new))


def _spread(a, b) -> float:
    if len(a) == 0:
        return 0.0
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


def _translations(state: InitialState, sites: list[int]):
    """Shifts r for which the translated code sites stay inside ``sites``."""
    ss = set(sites)
    if state.m is None:
        return [n - state.l for n in sites]
    return [n - state.m for n in sites if n in ss and n + state.separation in ss]


def compare_at(config: ChainConfig, state: InitialState, T: float, sites: list[int]) -> Deviation:
    """Deviations of every closed form from the oracle at time T."""
    cs = evolve(config, state, T)
    a, b = state.alpha, state.beta
    dev = {}
    pairs = [(i, j) for i in sites for j in sites if i > j]

    if state.kind in (Family.UNENTANGLED, Family.B1):
        field = OneMagnonField.from_state(state, T)
        phi = {n: field(n) for n in sites}
        weight = b if state.kind is Family.UNENTANGLED else 1.0
        amp = 0.0
        for n in sites:
            amp = _max(amp, abs(weight * phi[n] - cs.amplitude((n,))))
        if state.kind is Family.UNENTANGLED:
            amp = _max(amp, abs(cs.ferro_amplitude - a))
        dev["amplitude"] = amp

        # the magnon part of the unentangled family is weighted by |beta|^2
        w2 = abs(b) ** 2 if state.kind is Family.UNENTANGLED else 1.0
        closed_c, deph, full = [], [], []
        rho_dev = 0.0
        for i, j in pairs:
            closed_rho = w2 * ent.build_rho_one_magnon(phi[i], phi[j])
            closed_rho[0, 0] = 1.0 - w2 * (abs(phi[i]) ** 2 + abs(phi[j]) ** 2)
            closed_c.append(w2 * ent.concurrence_one_magnon(phi[i], phi[j]))
            deph.append(reduced_rho_2(cs, i, j, "dephased"))
            full.append(reduced_rho_2(cs, i, j, "full"))
            rho_dev = _max(rho_dev, np.abs(deph[-1] - closed_rho).max())
        conc = _spread(ent.wootters_concurrence_many(deph), closed_c)
        conc_full = _spread(ent.wootters_concurrence_many(full), closed_c)
        dev["rho_dephased"] = rho_dev
        dev["concurrence"] = conc
        dev["concurrence_full"] = conc_full

        site_dev = site_full = pair_dev = 0.0
        code1 = site_code(a, b)
        for r in _translations(state, sites):
            if state.kind is Family.UNENTANGLED:
                n = state.l + r
                f_deph = fid.fid_site_unentangled(r, T, abs(a) ** 2, dephased=True)
                f_full = fid.fid_site_unentangled(r, T, abs(a) ** 2, dephased=False)
                site_dev = _max(site_dev, abs(oracle_fidelity(cs, code1, n, "dephased") - f_deph))
                site_full = _max(site_full, abs(oracle_fidelity(cs, code1, n, "full") - f_full))
            else:
                n = state.m + r
                f = fid.fid_site_b1(r, state, T)
                site_dev = _max(site_dev, abs(oracle_fidelity(cs, code1, n, "dephased") - f))
                g = fid.pairfid_b1(r, state.separation, T, a, b, form="exact")
                got = oracle_fidelity(cs, pair_code(Family.B1, a, b), (state.l + r, state.m + r), "full")
                pair_dev = _max(pair_dev, abs(got - g))
        dev["site_fidelity"] = site_dev
        if state.kind is Family.UNENTANGLED:
            dev["site_fidelity_full"] = site_full
        else:
            dev["pair_fidelity"] = pair_dev
        return Deviation(T, dev)

    state.require(Family.B2)
    field = TwoMagnonField.from_state(state, T)
    amp = abs(cs.ferro_amplitude - a)
    for i, j in pairs:
        amp = _max(amp, abs(b * field.pair_amplitude(i, j) - cs.amplitude((i, j))))
    dev["amplitude"] = amp

    rho_dev = 0.0
    rhos, paper_rhos, closed, closed_paper = [], [], [], []
    for i, j in pairs:
        rhos.append(reduced_rho_2(cs, i, j, "full"))
        rho_dev = _max(rho_dev, np.abs(rhos[-1] - ent.build_rho_b2(i, j, state, T, "exact")).max())
        closed.append(ent.concurrence_b2(i, j, state, T, "exact"))
        paper_rhos.append(ent.build_rho_b2(i, j, state, T, "paper_approx"))
        closed_paper.append(ent.concurrence_b2(i, j, state, T, "paper_approx"))
    conc = _spread(ent.wootters_concurrence_many(rhos), closed)
    conc_paper = _spread(ent.wootters_concurrence_many(paper_rhos, check_trace=False), closed_paper)
    dev["rho_exact"] = rho_dev
    dev["concurrence"] = conc
    dev["concurrence_paper_form"] = conc_paper

    site_dev = pair_dev = 0.0
    for r in _translations(state, sites):
        f = fid.fid_site_b2(r, state, T)
        site_dev = _max(site_dev, abs(oracle_fidelity(cs, site_code(a, b), state.m + r, "full") - f))
        g = fid.pairfid_b2(r, state.separation, T, a, b, u_mode="exact")
        got = oracle_fidelity(cs, pair_code(Family.B2, a, b), (state.l + r, state.m + r), "full")
        pair_dev = _max(pair_dev, abs(got - g))
    dev["site_fidelity"] = site_dev
    dev["pair_fidelity"] = pair_dev
    return Deviation(T, dev)


def compare_curve(config: ChainConfig, state: InitialState, Ts, tol: float = 1e-8, max_sites: int | None = None):
    """Deviations on a T grid.  Sites are chosen at the largest T."""
    Ts = [float(t) for t in Ts]
    sites = interior_sites(state, config.N, max(Ts), 1e-2 * tol)
    if max_sites is not None and len(sites) > max_sites:
        centre = state.l if state.m is None else (state.l + state.m) / 2
        sites = sorted(sorted(sites, key=lambda n: (abs(n - centre), n))[:max_sites])
    if not sites:
        raise ValueError("no interior sites: increase N or reduce T")
    return sites, [compare_at(config, state, T, sites) for T in Ts]
