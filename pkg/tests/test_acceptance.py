"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from oracles import reference_table, series_j
from spinchain import fidelity as fid
from spinchain.bessel import bessel_j, bessel_row
from spinchain.compare import compare_curve
from spinchain.entanglement import concurrence_b1_lm, concurrence_unentangled
from spinchain.magnon import Family, InitialState
from spinchain.oracle import ChainConfig, evolve, oracle_fidelity, pair_code

pytestmark = pytest.mark.acceptance


def report(log, name, ok, detail):
    log.append((name, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def worst(devs, keys=None):
    out = {}
    for d in devs:
        for k, v in d.values.items():
            if keys is None or k in keys:
                out[k] = max(out.get(k, 0.0), v)
    return out


def test_1_bessel_kernel(acceptance_log):
    table = reference_table()
    t0 = time.perf_counter()
    err = max(abs(bessel_j(n, x) - table[x][n]) for x in table for n in range(201))
    norm = max(abs(r[0] + 2 * r[2::2].sum() - 1.0) for r in (bessel_row(int(x) + 60, x).values for x in table))
    add = 0.0
    for x, y in [(0.5, 1.0), (2.0, 5.0), (10.0, 50.0), (50.0, 70.0)]:
        reach = int(x + y) + 60
        jx, jy = bessel_row(reach + 10, x), bessel_row(reach + 10, y)
        for n in (-7, 0, 3, 10):
            s = math.fsum(jx(k) * jy(n - k) for k in range(-reach, reach + 1))
            add = max(add, abs(s - bessel_j(n, x + y)))
    elapsed = time.perf_counter() - t0
    # live spot check of the frozen table against the series
    live = max(abs(series_j(n, x) - table[x][n]) for x in table for n in (0, 1, 37, 120, 200))
    ok = err <= 1e-12 and norm <= 1e-10 and add <= 1e-10 and live <= 1e-15 and elapsed < 1.0
    report(
        acceptance_log,
        "1 bessel kernel",
        ok,
        f"max err {err:.1e} (tol 1e-12), normalization {norm:.1e}, addition {add:.1e} (tol 1e-10), {elapsed:.2f} s",
    )
    assert ok


def test_2_one_magnon_oracle(acceptance_log):
    Ts = np.arange(0.0, 8.0 + 1e-9, 0.5)
    keys = {"amplitude", "concurrence", "concurrence_full", "site_fidelity", "pair_fidelity", "rho_dephased"}
    t0 = time.perf_counter()
    results = {}
    for state in (InitialState.unentangled(20, 0.6, 0.8j), InitialState.b1(21, 20, 0.6, 0.8 * np.exp(0.7j))):
        sites, devs = compare_curve(ChainConfig(41), state, Ts, tol=1e-8)
        results[state.kind.value] = (len(sites), worst(devs, keys))
    elapsed = time.perf_counter() - t0
    dev = max(max(w.values()) for _, w in results.values())
    ok = dev <= 1e-8 and elapsed < 5.0
    sizes = ", ".join(f"{k}: {n} sites" for k, (n, _) in results.items())
    report(acceptance_log, "2 one-magnon oracle", ok, f"max dev {dev:.1e} (tol 1e-8), {sizes}, {elapsed:.2f} s")
    assert ok


def test_3_two_magnon_oracle(acceptance_log):
    Ts = np.arange(0.0, 4.0 + 1e-9, 0.5)
    t0 = time.perf_counter()
    per_s = {}
    for s in (1, 2, 3):
        m = 14
        state = InitialState.b2(m + s, m, 0.6, 0.8 * np.exp(0.3j))
        _, devs = compare_curve(ChainConfig(31), state, Ts, tol=1e-8)
        per_s[s] = worst(devs)
    elapsed = time.perf_counter() - t0
    dev = max(max(w.values()) for w in per_s.values())
    # information only: the u ~ 1 concurrence against the exact chain
    state = InitialState.b2(16, 14)
    from spinchain.entanglement import concurrence_b2
    from spinchain.oracle import oracle_concurrence

    cs = evolve(ChainConfig(31), state, 3.5)
    approx_gap = abs(concurrence_b2(16, 14, state, 3.5, "paper_approx") - oracle_concurrence(cs, 16, 14))
    ok = dev <= 1e-8 and elapsed < 60.0
    report(
        acceptance_log,
        "3 two-magnon oracle",
        ok,
        f"max dev {dev:.1e} (tol 1e-8) over amplitude, exact-u matrix, concurrence (exact u vs oracle, "
        f"u~1 vs Wootters), fidelities; u~1 vs oracle gap at T=3.5 is {approx_gap:.3f} (info); {elapsed:.1f} s",
    )
    assert ok


def test_4_first_maxima(acceptance_log):
    t0 = time.perf_counter()
    Ts = fid.time_grid(120.0, 600)
    un = fid.fidelity_curve("unentangled", 100, Ts=Ts)
    b1 = fid.fidelity_curve("b1", 100, 25, Ts=Ts)
    b2 = fid.fidelity_curve("b2", 100, 25, Ts=Ts)
    t_un = fid.first_maximum(un)[0]
    t_b1 = fid.first_maximum(b1)[0]
    t_b2 = fid.first_maximum(b2)[0]
    dominates = bool(np.all(b2.values >= un.values))
    elapsed = time.perf_counter() - t0
    ok = 96 <= t_un <= 104 and 71 <= t_b1 <= 79 and 71 <= t_b2 <= 79 and dominates and elapsed < 2.0
    report(
        acceptance_log,
        "4 first maxima",
        ok,
        f"T_c unentangled {t_un:.2f}, b1 {t_b1:.2f}, b2 {t_b2:.2f}; b2 >= unentangled everywhere: {dominates}; {elapsed:.2f} s",
    )
    assert ok


def envelope_exponent(f, t_lo=50.0, t_hi=200.0, dt=0.01):
    """Slope of log(local maxima) against log(T)."""
    Ts = np.arange(t_lo, t_hi, dt)
    v = np.array([f(t) for t in Ts])
    peaks = np.where((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1
    if len(peaks) < 5:
        peaks = np.arange(0, len(Ts), 50)
    slope, icpt = np.polyfit(np.log(Ts[peaks]), np.log(v[peaks]), 1)
    return slope, math.exp(icpt)


def test_5_asymptotics(acceptance_log):
    beta2 = 0.5
    ratios = []
    for r in range(1, 5):
        c = concurrence_unentangled(r, 0, 0, 0.01, beta2)
        ratios.append(c * math.factorial(r) / (2 * beta2 * (0.01 / 2) ** r))
    slope, pref = envelope_exponent(lambda t: concurrence_unentangled(1, 0, 0, t, beta2))
    b1_slope, _ = envelope_exponent(lambda t: concurrence_b1_lm(1, t))
    ok = all(0.99 <= x <= 1.01 for x in ratios) and -1.1 <= slope <= -0.9
    report(
        acceptance_log,
        "5 asymptotics",
        ok,
        f"small-T ratios {', '.join(f'{x:.5f}' for x in ratios)}; envelope exponent {slope:.3f}, "
        f"prefactor {pref:.4f} vs 2|b|^2/pi = {2 * beta2 / math.pi:.4f}; b1 C_lm exponent {b1_slope:.3f} (info)",
    )
    assert ok


def test_6_bloch_average_identity(acceptance_log):
    rng = np.random.default_rng(20240601)
    dev = 0.0
    for _ in range(20):
        r = int(rng.integers(-10, 11))
        s = int(rng.integers(1, 9))
        T = float(rng.uniform(0.0, 30.0))
        pairs = [
            (lambda a, b: fid.fid_site_unentangled(r, T, np.abs(a) ** 2), fid.fid_avg_unentangled(r, T)),
            (lambda a, b: fid.site_fidelity_b1(r, s, T, a, b), fid.fid_avg_b1(r, s, T)),
            (lambda a, b: fid.pairfid_b1(r, s, T, a, b), fid.pairfid_avg_b1(r, s, T)),
            (lambda a, b: fid.site_fidelity_b2(r, s, T, a, b), fid.fid_avg_b2(r, s, T)),
            (lambda a, b: fid.pairfid_b2(r, s, T, a, b), fid.pairfid_avg_b2(r, s, T)),
        ]
        for f, closed in pairs:
            dev = max(dev, abs(fid.bloch_average(f) - closed))
    ok = dev <= 1e-8
    report(acceptance_log, "6 bloch-average identity", ok, f"max |quadrature - closed form| {dev:.1e} over 20 draws x 5 averages")
    assert ok


def test_7_pair_fidelity_artifact(acceptance_log):
    s = 3
    approx = fid.pairfid_avg_b2(0, s, 0.0, "paper_approx")
    exact = fid.pairfid_avg_b2(0, s, 0.0, "exact")
    m = 6
    cfg = ChainConfig(13)

    def oracle_g(alpha, beta):
        alpha, beta = np.broadcast_arrays(np.asarray(alpha, dtype=complex), np.asarray(beta, dtype=complex))
        out = np.empty(alpha.shape)
        for idx in np.ndindex(alpha.shape):
            a, b = alpha[idx], beta[idx]
            cs = evolve(cfg, InitialState.b2(m + s, m, a, b), 0.0)
            out[idx] = oracle_fidelity(cs, pair_code(Family.B2, a, b), (m + s, m))
        return out

    oracle_avg = fid.bloch_average(oracle_g, 6, 4)
    ok = abs(approx - 7 / 6) <= 1e-12 and abs(oracle_avg - 1.0) <= 1e-10 and abs(exact - 1.0) <= 1e-10
    report(
        acceptance_log,
        "7 averaged b2 pair fidelity at r=0, T=0",
        ok,
        f"u~1 form {approx:.12f} (7/6), exact-u form {exact:.12f}, oracle average {oracle_avg:.12f}",
    )
    assert ok


def test_timescale_note(acceptance_log):
    tau = fid.timescale_seconds(0.01)
    ok = f"{tau:.0e}" == "7e-14" and 1e-14 < tau < 1e-12
    report(acceptance_log, "note timescale", ok, f"tau(K=0.01 eV) = {tau:.3e} s, order 1e-13 s")
    assert ok
