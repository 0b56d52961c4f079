"""Finite-difference differentiation matrices on arbitrary node sets.

Weights come from Fornberg's one-pass recursion (SIAM Rev. 40, 1998),
which stays well conditioned on clustered nodes; a Vandermonde solve is
used only as a test oracle. Matrices built here are exact on polynomials
of degree n-1, which is what makes their exponentials exact local
propagators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DuplicateNodes, OrderTooHigh


@dataclass(frozen=True)
class LinearOperatorSpec:
    """Constant-coefficient linear operator: sum of c_k * d^k/dx^k terms.

    The order-0 term is the scalar reaction coefficient.
    """

    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        terms = tuple((int(k), float(c)) for k, c in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("operator needs at least one term")
        orders = [k for k, _ in terms]
        if len(set(orders)) != len(orders):
            raise ValueError("derivative orders must be distinct")
        if min(orders) < 0:
            raise ValueError("derivative orders must be >= 0")

    @property
    def max_order(self) -> int:
        return max(k for k, _ in self.terms)

    @property
    def reaction(self) -> float:
        """Coefficient of the order-0 term (0 if absent)."""
        for k, c in self.terms:
            if k == 0:
                return c
        return 0.0


@dataclass(frozen=True)
class DiffMatrix:
    """Dense n x n matrix approximating the k-th derivative at every node."""

    order: int
    nodes: np.ndarray
    entries: np.ndarray


def fornberg_weights(z: float, nodes, max_order: int) -> np.ndarray:
    """Weight table for derivatives at ``z`` from samples at ``nodes``.

    Row k of the returned (max_order+1, n) array holds weights w with
    sum(w * f(nodes)) ~ f^(k)(z), exact for polynomials of degree <= n-1.
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    if not 0 <= max_order <= n - 1:
        raise OrderTooHigh(f"derivative order {max_order} needs > {max_order} nodes, got {n}")
    if n > 1:
        spread = float(x.max() - x.min())
        if np.min(np.diff(np.sort(x))) <= 1e-14 * spread:
            raise DuplicateNodes("two stencil nodes coincide within 1e-14 of the spread")

    c = np.zeros((max_order + 1, n))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - z
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def diff_matrix(nodes, k: int) -> DiffMatrix:
    """Differentiation matrix D^(k): row i differentiates at nodes[i]."""
    x = np.asarray(nodes, dtype=float)
    n = x.size
    if not 1 <= k <= n - 1:
        raise OrderTooHigh(f"order {k} not representable on {n} nodes")
    entries = np.empty((n, n))
    for i in range(n):
        entries[i] = fornberg_weights(x[i], x, k)[k]
    return DiffMatrix(order=k, nodes=x, entries=entries)


def local_operator(nodes, spec: LinearOperatorSpec) -> np.ndarray:
    """Dense local operator c_0*I + sum_k c_k*D^(k) on the given nodes."""
    x = np.asarray(nodes, dtype=float)
    n = x.size
    if spec.max_order > n - 1:
        raise OrderTooHigh(f"operator order {spec.max_order} not representable on {n} nodes")
    L = np.zeros((n, n))
    k_max = spec.max_order
    if k_max > 0:
        for i in range(n):
            table = fornberg_weights(x[i], x, k_max)
            for k, c in spec.terms:
                if k > 0:
                    L[i] += c * table[k]
    c0 = spec.reaction
    if c0 != 0.0:
        L[np.diag_indices(n)] += c0
    return L
