"""Numba-compiled stepping loops.

The per-step work of a banded scheme is a handful of O(n*N) dot products;
at desk-scale N the numpy dispatch overhead of a per-step Python loop
would dominate and mask the linear scaling, so the whole stepping loop is
fused here. Nonlinear terms are restricted to the structured kinds the
benchmarks need; anything else goes through the generic Python path in
``timestep``. No fastmath: accumulation order is fixed ascending, so runs
are bit-reproducible.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NL_NONE = 0
NL_CONVECTIVE = 1  # -u * (D1 u)
NL_CUBIC = 2       # -u**3


@njit(cache=True)
def banded_matvec(weights, members, u, out):
    N, n = weights.shape
    for i in range(N):
        acc = 0.0
        for j in range(n):
            acc += weights[i, j] * u[members[i, j]]
        out[i] = acc


@njit(cache=True)
def run_linear(weights, members, u0, steps, pin, pin_lo, pin_hi):
    N = u0.shape[0]
    u = u0.copy()
    buf = np.empty(N)
    for _ in range(steps):
        banded_matvec(weights, members, u, buf)
        if pin:
            buf[0] = pin_lo
            buf[N - 1] = pin_hi
        u, buf = buf, u
    return u


@njit(cache=True)
def _nonlinear(kind, d1w, members, u, out, tmp):
    N = u.shape[0]
    if kind == NL_NONE:
        for i in range(N):
            out[i] = 0.0
    elif kind == NL_CONVECTIVE:
        banded_matvec(d1w, members, u, tmp)
        for i in range(N):
            out[i] = -u[i] * tmp[i]
    else:
        for i in range(N):
            out[i] = -u[i] * u[i] * u[i]


@njit(cache=True)
def run_etdrk4(
    w_full, w_alpha, w_beta, w_gamma, w_half, w_p1h,
    d1w, members, kind, u0, steps, pin, pin_lo, pin_hi,
):
    """Fused four-stage exponential Runge-Kutta loop.

    w_full/w_half are the full- and half-step linear rows; w_p1h is the
    raw (dt/2)*phi_1 row at the half step; w_alpha/beta/gamma are the
    precomposed final-combination rows (dt folded in). Dirichlet values
    are pinned after every stage and step when ``pin`` is set.
    """
    N = u0.shape[0]
    u = u0.copy()
    n0 = np.empty(N)
    n1 = np.empty(N)
    n2 = np.empty(N)
    n3 = np.empty(N)
    wh_u = np.empty(N)
    a = np.empty(N)
    b = np.empty(N)
    c = np.empty(N)
    t1 = np.empty(N)
    t2 = np.empty(N)
    tmp = np.empty(N)
    for _ in range(steps):
        _nonlinear(kind, d1w, members, u, n0, tmp)
        banded_matvec(w_half, members, u, wh_u)

        banded_matvec(w_p1h, members, n0, t1)
        for i in range(N):
            a[i] = wh_u[i] + t1[i]
        if pin:
            a[0] = pin_lo
            a[N - 1] = pin_hi
        _nonlinear(kind, d1w, members, a, n1, tmp)

        banded_matvec(w_p1h, members, n1, t1)
        for i in range(N):
            b[i] = wh_u[i] + t1[i]
        if pin:
            b[0] = pin_lo
            b[N - 1] = pin_hi
        _nonlinear(kind, d1w, members, b, n2, tmp)

        banded_matvec(w_half, members, a, t1)
        for i in range(N):
            t2[i] = 2.0 * n2[i] - n0[i]
        banded_matvec(w_p1h, members, t2, tmp)
        for i in range(N):
            c[i] = t1[i] + tmp[i]
        if pin:
            c[0] = pin_lo
            c[N - 1] = pin_hi
        _nonlinear(kind, d1w, members, c, n3, tmp)

        banded_matvec(w_full, members, u, t1)
        banded_matvec(w_alpha, members, n0, t2)
        for i in range(N):
            t1[i] += t2[i]
        for i in range(N):
            tmp[i] = n1[i] + n2[i]
        banded_matvec(w_beta, members, tmp, t2)
        for i in range(N):
            t1[i] += t2[i]
        banded_matvec(w_gamma, members, n3, t2)
        for i in range(N):
            u[i] = t1[i] + t2[i]
        if pin:
            u[0] = pin_lo
            u[N - 1] = pin_hi
    return u
