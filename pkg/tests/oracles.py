"""Independent reference values for the tests.

Nothing here imports ``spinchain``: Bessel values come from the power
series in extended precision, propagators are rebuilt from those.
"""

import json
import math
from functools import lru_cache
from pathlib import Path

import mpmath

DATA = Path(__file__).with_name("data")


@lru_cache(maxsize=None)
def series_j(n: int, x: float) -> float:
    """J_n(x) = sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!).

    The alternating terms peak near e^x, so the working precision grows
    with x to keep 40 good digits after cancellation.
    """
    sign = 1
    if n < 0:
        n = -n
        sign = -1 if n % 2 else 1
    with mpmath.workdps(40 + int(abs(x))):
        h = mpmath.mpf(x) / 2
        term = h**n / mpmath.factorial(n)
        total = term
        k = 0
        # terms shrink once k > x/2; stop when they are far below the sum
        while True:
            k += 1
            term *= -h * h / (k * (k + n))
            total += term
            if k > x and abs(term) < mpmath.mpf(10) ** -45 * max(abs(total), mpmath.mpf(10) ** -300):
                break
        return sign * float(total)


def reference_table():
    """Frozen table for n = 0..200, computed at 40 digits and stored to 25
    (see data/make_bessel_reference.py)."""
    raw = json.loads((DATA / "bessel_reference.json").read_text(encoding="utf-8"))
    return {float(x): [float(v) for v in vals] for x, vals in raw["values"].items()}


def phase(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


def phi1(n, l, T):
    return phase(n - l) * series_j(n - l, T)


def phi2(i, j, l, m, T):
    J = lambda k: series_j(k, T)
    return phase(i + j - l - m) * (J(i - l) * J(j - m) - J(i - m) * J(j - l))


def zeta_brute(i, j, l, m, T):
    return sum(phi2(i, n, l, m, T).conjugate() * phi2(j, n, l, m, T) for n in range(j + 1, i))


def free_fermion_two_particle_energies(N: int, K: float = 1.0):
    """E_q1 + E_q2 for distinct momenta.  Two fermions on a ring pick up
    an antiperiodic boundary, so q = 2 pi (k + 1/2) / N."""
    qs = [2 * math.pi * (k + 0.5) / N for k in range(N)]
    e = [-K * math.cos(q) for q in qs]
    return sorted(e[a] + e[b] for a in range(N) for b in range(a + 1, N))
