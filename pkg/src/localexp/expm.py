"""Dense matrix exponentials and scalar phi functions.

Local operators built from one-sided stencils are strongly non-normal, so
the exponential is computed by Pade scaling-and-squaring (scipy's
Al-Mohy/Higham implementation, degree-13 class) rather than by
eigendecomposition. A truncated-series evaluation is kept as an
independent cross-check oracle for the test suite.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .errors import NoConvergence, NonFinite

# Below this radius the phi recursion loses digits to cancellation and the
# Taylor series converges in a handful of terms.
PHI_SERIES_RADIUS = 0.5


def expm(a) -> np.ndarray:
    """exp(A) for a square real matrix, with finiteness guards.

    The matrix is diagonally balanced first (an exact power-of-two
    similarity): operators on strongly clustered stencils have transient
    humps that overflow the squaring phase even when exp(A) itself is
    representable.
    """
    A = np.asarray(a, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NonFinite(f"expected a square matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise NonFinite("matrix exponential input contains NaN/Inf")
    B, D = scipy.linalg.matrix_balance(A, permute=False)
    d = np.diag(D)
    E = scipy.linalg.expm(B) * (d[:, None] / d[None, :])
    if not np.isfinite(E).all():
        raise NonFinite("matrix exponential overflowed")
    return E


def expm_taylor_oracle(a, tol: float = 1e-16, max_terms: int = 200) -> np.ndarray:
    """Plain-series exp(A), for cross-checking expm in tests only."""
    A = np.asarray(a, dtype=float)
    n = A.shape[0]
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, max_terms + 1):
        term = term @ A / k
        result = result + term
        if np.abs(term).max() <= tol * max(1.0, np.abs(result).max()):
            return result
    raise NoConvergence(f"exp series did not converge in {max_terms} terms")


def phi_scalar(j: int, z):
    """phi_j(z): phi_0 = e^z, phi_(j+1)(z) = (phi_j(z) - 1/j!)/z.

    Uses the recursion for |z| >= 0.5 and the Taylor series
    sum_m z^m/(m+j)! below it, where the recursion would cancel
    catastrophically. Accepts real or complex z.
    """
    if not 0 <= j <= 8:
        raise ValueError(f"phi order must be in [0, 8], got {j}")
    if j == 0:
        return np.exp(z)
    if abs(z) >= PHI_SERIES_RADIUS:
        phi = np.exp(z)
        for i in range(j):
            phi = (phi - 1.0 / math.factorial(i)) / z
        return phi
    acc = 1.0 / math.factorial(j)
    term = acc
    m = 0
    while True:
        m += 1
        term = term * z / (m + j)
        acc = acc + term
        if abs(term) < 1e-18 * max(1.0, abs(acc)):
            return acc
