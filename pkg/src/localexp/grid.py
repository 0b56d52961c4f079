"""1D computational grids and stencil selection.

Two grid families are supported: uniform periodic grids (the right endpoint
is excluded, node j sits at ``x_min + j*h``) and non-periodic
Chebyshev-Gauss-Lobatto grids, stored sorted ascending. Every node is
assigned a stencil of ``n`` contiguous nodes; the position of the target
node inside its stencil decides which row of the local propagator is
harvested later.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidGrid, StencilTooLarge


class Topology(Enum):
    PERIODIC_UNIFORM = "periodic-uniform"
    NON_PERIODIC = "non-periodic"


class StencilPolicy(Enum):
    CENTERED = "centered"
    ONE_SIDED_UPWIND = "upwind"


@dataclass(frozen=True)
class Grid:
    """Immutable 1D grid: sorted nodes, domain interval, topology."""

    nodes: np.ndarray
    x_min: float
    x_max: float
    topology: Topology

    def __post_init__(self):
        nodes = np.ascontiguousarray(np.asarray(self.nodes, dtype=float))
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise InvalidGrid("grid needs at least two nodes")
        gaps = np.diff(nodes)
        if np.any(gaps <= 0):
            raise InvalidGrid("grid nodes must be strictly increasing")
        if self.x_max <= self.x_min:
            raise InvalidGrid("degenerate domain interval")
        if self.topology is Topology.PERIODIC_UNIFORM:
            h = (self.x_max - self.x_min) / nodes.size
            if np.any(np.abs(gaps - h) > 1e-14 * abs(h) * nodes.size):
                raise InvalidGrid("periodic grid must be uniform")

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def h_min(self) -> float:
        """Smallest node gap, used for CFL bookkeeping."""
        return float(np.min(np.diff(self.nodes)))

    @property
    def spacing(self) -> float:
        """Uniform gap ``(x_max - x_min)/N`` (periodic grids only)."""
        if self.topology is not Topology.PERIODIC_UNIFORM:
            raise InvalidGrid("spacing is only defined for uniform periodic grids")
        return (self.x_max - self.x_min) / self.size


@dataclass(frozen=True)
class Stencil:
    """Index window feeding one node's update.

    ``members`` lists n contiguous node indices (with modular wraparound on
    periodic grids) and ``members[target_row] == target``.
    """

    target: int
    members: np.ndarray
    target_row: int

    def __post_init__(self):
        members = np.ascontiguousarray(np.asarray(self.members, dtype=np.int64))
        members.setflags(write=False)
        object.__setattr__(self, "members", members)
        if len(set(members.tolist())) != members.size:
            raise InvalidGrid("stencil members must be distinct")
        if not (0 <= self.target_row < members.size):
            raise InvalidGrid("target_row out of range")
        if members[self.target_row] != self.target:
            raise InvalidGrid("members[target_row] must equal target")

    @property
    def n(self) -> int:
        return self.members.size

    @property
    def offsets(self) -> np.ndarray:
        """Signed index offsets relative to the target (contiguous window)."""
        return np.arange(self.n, dtype=np.int64) - self.target_row


def make_periodic_grid(N: int, x_min: float, x_max: float) -> Grid:
    """Uniform periodic grid on [x_min, x_max) with node j = x_min + j*h."""
    if N < 3:
        raise InvalidGrid(f"periodic grid needs N >= 3, got {N}")
    if x_max <= x_min:
        raise InvalidGrid("degenerate domain interval")
    h = (x_max - x_min) / N
    nodes = x_min + h * np.arange(N)
    return Grid(nodes=nodes, x_min=x_min, x_max=x_max, topology=Topology.PERIODIC_UNIFORM)


def make_chebyshev_grid(N: int, x_min: float, x_max: float) -> Grid:
    """N Chebyshev-Gauss-Lobatto points mapped onto [x_min, x_max], ascending.

    Nodes are generated in the sine form so the set is exactly symmetric
    about the midpoint; the endpoints are pinned to x_min/x_max exactly.
    """
    if N < 3:
        raise InvalidGrid(f"Chebyshev grid needs N >= 3, got {N}")
    if x_max <= x_min:
        raise InvalidGrid("degenerate domain interval")
    m = N - 1
    j = np.arange(N)
    ref = -np.sin((m - 2 * j) * np.pi / (2 * m))  # == -cos(j*pi/m), antisymmetric
    nodes = 0.5 * (x_min + x_max) + 0.5 * (x_max - x_min) * ref
    nodes[0] = x_min
    nodes[-1] = x_max
    return Grid(nodes=nodes, x_min=x_min, x_max=x_max, topology=Topology.NON_PERIODIC)


def select_stencils(
    grid: Grid,
    n: int,
    policy: StencilPolicy,
    upwind_sign: int = 1,
) -> list[Stencil]:
    """Assign an n-node stencil to every grid node.

    Centered stencils take the window centered on the target (odd n), with
    wraparound on periodic grids and window clamping at non-periodic
    boundaries (the window slides until it fits; the harvested row follows
    the target position). One-sided upwind stencils end at the target for
    positive wave speed and start at it for negative speed.
    """
    N = grid.size
    if n > N:
        raise StencilTooLarge(f"stencil size {n} exceeds grid size {N}")
    if n < 1:
        raise StencilTooLarge("stencil size must be positive")
    if policy is StencilPolicy.CENTERED and n % 2 == 0 and n != N:
        raise InvalidGrid("centered stencils require odd n")

    periodic = grid.topology is Topology.PERIODIC_UNIFORM
    stencils = []
    for t in range(N):
        if policy is StencilPolicy.CENTERED:
            row = (n - 1) // 2
        elif upwind_sign >= 0:
            row = n - 1
        else:
            row = 0
        start = t - row
        if periodic:
            members = (start + np.arange(n)) % N
        else:
            start = min(max(start, 0), N - n)
            members = start + np.arange(n)
            row = t - start
        stencils.append(Stencil(target=t, members=members, target_row=row))
    return stencils
