"""Regenerate bessel_reference.json from mpmath at 40 significant digits.

    python tests/data/make_bessel_reference.py
"""

import json
from pathlib import Path

import mpmath

XS = ["0.5", "1", "2", "5", "10", "50", "120"]
N_MAX = 200


def main():
    mpmath.mp.dps = 40
    table = {x: [mpmath.nstr(mpmath.besselj(n, mpmath.mpf(x)), 25) for n in range(N_MAX + 1)] for x in XS}
    out = {"dps": 40, "n_max": N_MAX, "values": table}
    path = Path(__file__).with_name("bessel_reference.json")
    path.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
