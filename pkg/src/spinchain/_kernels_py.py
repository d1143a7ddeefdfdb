"""Pure-Python versions of the hot kernels.

These mirror ``_ckernels.pyx`` line for line and are used whenever the
compiled extension is unavailable (or ``SPINCHAIN_PURE_PYTHON=1``).
"""

import math

# Rescale threshold for the downward recurrence; keeps the unnormalized
# values far away from overflow.
_BIG = 1.0e250
_SMALL_X = 1.0e-6


def miller_start(n_max, x):
    """Starting order for the downward recurrence."""
    top = max(n_max, int(math.ceil(x)))
    return top + int(math.ceil(10.0 * math.sqrt(top))) + 40


def bessel_row(n_max, x, out):
    """Fill ``out[0..n_max]`` with J_0(x)..J_{n_max}(x) for ``x >= 0``."""
    for k in range(n_max + 1):
        out[k] = 0.0
    if x == 0.0:
        out[0] = 1.0
        return
    if x < _SMALL_X:
        # Two-term power series is exact to double precision here.
        h = 0.5 * x
        h2 = h * h
        lead = 1.0
        for k in range(n_max + 1):
            if k > 0:
                lead *= h / k
                if lead == 0.0:
                    break
            out[k] = lead * (1.0 - h2 / (k + 1) + h2 * h2 / (2.0 * (k + 1) * (k + 2)))
        return

    start = miller_start(n_max, x)
    two_over_x = 2.0 / x
    j_next = 0.0
    j_cur = 1.0e-30
    norm = 0.0
    for k in range(start, 0, -1):
        # j_cur holds J_k, j_next holds J_{k+1}
        if k <= n_max:
            out[k] = j_cur
        if k % 2 == 0:
            norm += 2.0 * j_cur
        j_prev = k * two_over_x * j_cur - j_next
        j_next = j_cur
        j_cur = j_prev
        if abs(j_cur) > _BIG:
            j_cur /= _BIG
            j_next /= _BIG
            norm /= _BIG
            for q in range(k, n_max + 1):
                out[q] /= _BIG
    out[0] = j_cur
    norm += j_cur
    scale = 1.0 / norm
    for k in range(n_max + 1):
        out[k] *= scale


def jacobi_eigh(a, v, tol=1.0e-15, max_sweeps=60):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    ``a`` is overwritten in place; on return its diagonal holds the
    eigenvalues and the columns of ``v`` the eigenvectors.  Both are
    nested lists (or any 2-D indexable of Python complex).  Returns the
    number of sweeps used.
    """
    n = len(a)
    for i in range(n):
        for j in range(n):
            v[i][j] = 1.0 + 0.0j if i == j else 0.0j
    for i in range(n):
        a[i][i] = complex(a[i][i].real, 0.0)

    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += abs(a[i][j]) ** 2
    if scale == 0.0:
        return 0
    thresh = (tol * tol) * scale

    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += abs(a[p][q]) ** 2
        if off <= thresh:
            return sweep - 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p][p].real
                aqq = a[q][q].real
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # Columns: A <- A G, with G[p,p]=c, G[q,q]=c,
                # G[p,q]=s*phase, G[q,p]=-s*conj(phase)
                sp = s * phase
                spc = sp.conjugate()
                for k in range(n):
                    akp = a[k][p]
                    akq = a[k][q]
                    a[k][p] = c * akp - spc * akq
                    a[k][q] = sp * akp + c * akq
                    vkp = v[k][p]
                    vkq = v[k][q]
                    v[k][p] = c * vkp - spc * vkq
                    v[k][q] = sp * vkp + c * vkq
                # Rows: A <- G^H A
                for k in range(n):
                    apk = a[p][k]
                    aqk = a[q][k]
                    a[p][k] = c * apk - sp * aqk
                    a[q][k] = spc * apk + c * aqk
                a[p][q] = 0.0j
                a[q][p] = 0.0j
                a[p][p] = complex(a[p][p].real, 0.0)
                a[q][q] = complex(a[q][q].real, 0.0)
    return max_sweeps
