"""Diagnostics: spectral footprints, stability scans, norms, conservation.

The footprint of a weight row is its action on discrete Fourier modes,
G(k) = sum_j w_j exp(i k o_j h); |G| measures dissipation and arg G the
phase (dispersion) against the exact shift. Stability boundaries are
measured empirically by bounded-growth trials because one-sided rows make
the assembled operator non-normal, where the transient matters more than
the symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch
from .grid import Grid, Stencil, Topology
from .harvest import assemble_global
from .localop import LinearOperatorSpec


@dataclass(frozen=True)
class SpectralFootprint:
    wavenumbers: np.ndarray
    amplification: np.ndarray  # complex G(k)
    dissipation: np.ndarray    # |G(k)|
    dispersion: np.ndarray     # arg G(k) - exact phase


@dataclass(frozen=True)
class StabilityBoundary:
    """Largest stable dt per stencil size under the scan protocol."""

    n_values: tuple[int, ...]
    dt_star: tuple[float, ...]
    dt_grid: tuple[float, ...]
    stable: tuple[tuple[bool, ...], ...]  # [i_n][i_dt]


def spectral_footprint(
    row_weights,
    offsets,
    h: float,
    num_k: int,
    shift: float = 0.0,
) -> SpectralFootprint:
    """Evaluate the symbol of one weight row on [0, pi/h].

    ``shift`` is the exact per-step displacement a*dt an advective row is
    supposed to realize; the dispersion column is arg G relative to the
    exact phase exp(-i*k*shift).
    """
    w = np.asarray(row_weights, dtype=float)
    o = np.asarray(offsets, dtype=float)
    if w.shape != o.shape:
        raise DimensionMismatch("weights and offsets must have matching length")
    k = np.linspace(0.0, np.pi / h, num_k)
    G = np.exp(1j * np.outer(k, o * h)) @ w.astype(complex)
    dispersion = np.angle(G * np.exp(1j * k * shift))
    return SpectralFootprint(
        wavenumbers=k, amplification=G, dissipation=np.abs(G), dispersion=dispersion
    )


def scan_stability(
    grid: Grid,
    stencils: list[Stencil],
    spec: LinearOperatorSpec,
    dt_grid,
    steps: int = 500,
    growth_tol: float = 10.0,
    seed: int = 12345,
) -> StabilityBoundary:
    """Classify each dt by running linear steps from a seeded random field.

    A dt is stable when the final max-norm stays at or below growth_tol
    starting from a unit max-norm field; dt_star is the largest stable dt.
    """
    dt_grid = tuple(float(dt) for dt in dt_grid)
    rng = np.random.default_rng(seed)
    u0 = rng.standard_normal(grid.size)
    u0 /= np.abs(u0).max()
    n = stencils[0].n
    flags = []
    dt_star = 0.0
    for dt in dt_grid:
        prop = assemble_global(grid, stencils, spec, dt)
        u = kernels.run_linear(prop.weights, prop.members, u0, steps, False, 0.0, 0.0)
        ok = bool(np.isfinite(u).all() and np.abs(u).max() <= growth_tol)
        flags.append(ok)
        if ok and dt > dt_star:
            dt_star = dt
    return StabilityBoundary(
        n_values=(n,), dt_star=(dt_star,), dt_grid=dt_grid, stable=(tuple(flags),)
    )


def merge_boundaries(parts: list[StabilityBoundary]) -> StabilityBoundary:
    """Stack single-n scans (shared dt grid) into one boundary table."""
    base = parts[0].dt_grid
    for p in parts[1:]:
        if p.dt_grid != base:
            raise DimensionMismatch("boundaries must share one dt grid")
    return StabilityBoundary(
        n_values=sum((p.n_values for p in parts), ()),
        dt_star=sum((p.dt_star for p in parts), ()),
        dt_grid=base,
        stable=sum((p.stable for p in parts), ()),
    )


def wrapped_advdiff_solution(
    x,
    t: float,
    a: float,
    nu: float,
    beta: float = 10.0,
    x0: float = np.pi,
    period: float = 2.0 * np.pi,
    K: int = 2,
):
    """Periodically wrapped Gaussian solution of u_t + a u_x = nu u_xx.

    Sum of the infinite-domain solution over 2K+1 periodic images; K=2
    already reaches machine precision for the benchmark parameters.
    """
    x = np.asarray(x, dtype=float)
    d = 1.0 + 4.0 * beta * nu * t
    acc = np.zeros_like(x)
    for m in range(-K, K + 1):
        acc += np.exp(-beta * (x - x0 - a * t + m * period) ** 2 / d)
    return acc / np.sqrt(d)


def norms(u, ref) -> dict:
    """Error norms of u against ref: max-norm, 2-norm, and relative forms."""
    u = np.asarray(u, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if u.shape != ref.shape:
        raise DimensionMismatch("vectors must have equal length")
    diff = u - ref
    l_inf = float(np.abs(diff).max())
    l_2 = float(np.sqrt(np.sum(diff**2)))
    ref_inf = float(np.abs(ref).max())
    ref_2 = float(np.sqrt(np.sum(ref**2)))
    return {
        "l_inf": l_inf,
        "l_2": l_2,
        "l_inf_rel": l_inf / ref_inf if ref_inf > 0 else l_inf,
        "l_2_rel": l_2 / ref_2 if ref_2 > 0 else l_2,
    }


def clenshaw_curtis_weights(N: int) -> np.ndarray:
    """Quadrature weights for N Chebyshev-Gauss-Lobatto points on [-1, 1],
    ordered to match ascending nodes."""
    m = N - 1
    theta = np.pi * np.arange(1, m) / m
    v = np.ones(m - 1)
    if m % 2 == 0:
        w0 = 1.0 / (m**2 - 1)
        for k in range(1, m // 2):
            v -= 2.0 * np.cos(2.0 * k * theta) / (4.0 * k**2 - 1)
        v -= np.cos(m * theta) / (m**2 - 1)
    else:
        w0 = 1.0 / m**2
        for k in range(1, (m - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta) / (4.0 * k**2 - 1)
    w = np.empty(N)
    w[0] = w[-1] = w0
    w[1:-1] = 2.0 * v / m
    return w


def conserved_quantities(u, grid: Grid) -> dict:
    """Mass integral of |u| and energy integral of u^2 over the domain.

    Periodic grids use the rectangle rule (spectrally accurate there);
    Chebyshev grids use Clenshaw-Curtis weights.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.size,):
        raise DimensionMismatch("field length must match the grid")
    if grid.topology is Topology.PERIODIC_UNIFORM:
        w = np.full(grid.size, grid.spacing)
    else:
        w = clenshaw_curtis_weights(grid.size) * 0.5 * (grid.x_max - grid.x_min)
    return {
        "mass_l1": float(w @ np.abs(u)),
        "energy_l2": float(w @ u**2),
    }
