"""Weight harvesting: local propagators, phi-function blocks, banded assembly.

The update rule for one node is a row of exp(dt*L_n), where L_n is the
dense local operator on that node's stencil. Exponentiating the block
companion matrix

    [L  I  0 ...]
    [0  0  I ...]
    [...        ]

yields, in its first block row, the linear propagator together with
dt^j * phi_j(dt*L) for j = 1..s-1, so one matrix exponential harvests
every weight vector an exponential integrator needs. Rows are harvested
in coordinates local to the target node (target at 0), which makes rows
on uniform periodic grids literally identical and lets a single harvest
serve the whole grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .expm import expm
from .grid import Grid, Stencil, Topology
from .localop import LinearOperatorSpec, local_operator


@dataclass(frozen=True)
class PhiWeightSet:
    """Weight rows harvested for one node at one time step.

    ``w_phi[j-1]`` is the raw block-row extraction and therefore carries
    the dt^j factor of the augmented exponential; scheme code composes its
    coefficients against these raw vectors instead of dividing them out.
    """

    delta_t: float
    w_lin: np.ndarray
    w_phi: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class BandedPropagator:
    """Global N x N operator stored as per-node weight rows plus stencils."""

    weights: np.ndarray  # (N, n)
    members: np.ndarray  # (N, n) int64
    periodic: bool
    delta_t: float

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.weights, dtype=float))
        m = np.ascontiguousarray(np.asarray(self.members, dtype=np.int64))
        if w.shape != m.shape or w.ndim != 2:
            raise DimensionMismatch("weights and members must share an (N, n) shape")
        w.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "members", m)

    @property
    def N(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.weights.shape[1]


def harvest_propagator(L_n: np.ndarray, delta_t: float, target_row: int) -> np.ndarray:
    """Row ``target_row`` of exp(delta_t * L_n)."""
    L = np.asarray(L_n, dtype=float)
    n = L.shape[0]
    if not 0 <= target_row < n:
        raise DimensionMismatch(f"target row {target_row} out of range for n={n}")
    return expm(delta_t * L)[target_row].copy()


def build_augmented(L_n: np.ndarray, s: int) -> np.ndarray:
    """Block companion matrix of size sn x sn: L in (0,0), identities above
    the diagonal, zeros elsewhere."""
    if not 1 <= s <= 6:
        raise ValueError(f"augmentation depth must be in [1, 6], got {s}")
    L = np.asarray(L_n, dtype=float)
    n = L.shape[0]
    A = np.zeros((s * n, s * n))
    A[:n, :n] = L
    for i in range(s - 1):
        block = A[i * n:(i + 1) * n, (i + 1) * n:(i + 2) * n]
        block[np.diag_indices(n)] = 1.0
    return A


def harvest_phi_weights(
    L_n: np.ndarray,
    delta_t: float,
    s: int,
    target_row: int,
    frozen_rows=(),
) -> PhiWeightSet:
    """Harvest the linear row and the raw dt^j*phi_j rows in one exponential.

    Rows listed in ``frozen_rows`` are zeroed across the whole first block
    row (operator and forcing alike), holding those nodes constant in the
    local evolution; their harvested linear row degenerates to a unit
    vector and their phi rows to zero.
    """
    L = np.asarray(L_n, dtype=float)
    n = L.shape[0]
    if not 0 <= target_row < n:
        raise DimensionMismatch(f"target row {target_row} out of range for n={n}")
    A = build_augmented(L, s)
    for j in frozen_rows:
        A[j, :] = 0.0
    E = expm(delta_t * A)
    w_lin = E[target_row, :n].copy()
    w_phi = tuple(E[target_row, j * n:(j + 1) * n].copy() for j in range(1, s))
    return PhiWeightSet(delta_t=delta_t, w_lin=w_lin, w_phi=w_phi)


def _local_coordinates(grid: Grid, stencil: Stencil) -> np.ndarray:
    """Stencil node coordinates relative to the target node.

    Periodic windows are unwrapped through the signed index offsets, so a
    member across the seam sits at a negative/positive multiple of h.
    """
    if grid.topology is Topology.PERIODIC_UNIFORM:
        return stencil.offsets * grid.spacing
    return grid.nodes[stencil.members] - grid.nodes[stencil.target]


def _harvest_rows(grid, stencils, spec, delta_t, s, frozen_nodes=()):
    """Per-stencil PhiWeightSets with exact-match caching on the local
    coordinates, so uniform periodic grids harvest once.

    ``frozen_nodes`` lists global node indices held constant (pinned
    Dirichlet values): their rows of the local operator are zeroed, so
    the local evolution keeps them fixed and the harvested row for a
    frozen node is a unit vector.
    """
    frozen = frozenset(int(i) for i in frozen_nodes)
    cache: dict = {}
    rows = []
    for st in stencils:
        coords = _local_coordinates(grid, st)
        frozen_local = tuple(
            j for j, g in enumerate(st.members.tolist()) if g in frozen
        )
        key = (coords.tobytes(), st.target_row, spec.terms, delta_t, s, frozen_local)
        hit = cache.get(key)
        if hit is None:
            L = local_operator(coords, spec)
            hit = harvest_phi_weights(L, delta_t, s, st.target_row, frozen_rows=frozen_local)
            cache[key] = hit
        rows.append(hit)
    return rows


def assemble_global(
    grid: Grid,
    stencils: list[Stencil],
    spec: LinearOperatorSpec,
    delta_t: float,
    frozen_nodes=(),
) -> BandedPropagator:
    """Assemble the banded linear propagator for one time step."""
    rows = _harvest_rows(grid, stencils, spec, delta_t, s=1, frozen_nodes=frozen_nodes)
    weights = np.array([r.w_lin for r in rows])
    members = np.array([st.members for st in stencils])
    return BandedPropagator(
        weights=weights,
        members=members,
        periodic=grid.topology is Topology.PERIODIC_UNIFORM,
        delta_t=delta_t,
    )


def assemble_global_phi(
    grid: Grid,
    stencils: list[Stencil],
    spec: LinearOperatorSpec,
    delta_t: float,
    s: int,
    frozen_nodes=(),
) -> list[BandedPropagator]:
    """Banded operators [exp, dt*phi_1, ..., dt^(s-1)*phi_(s-1)]."""
    rows = _harvest_rows(grid, stencils, spec, delta_t, s, frozen_nodes=frozen_nodes)
    members = np.array([st.members for st in stencils])
    periodic = grid.topology is Topology.PERIODIC_UNIFORM
    out = [
        BandedPropagator(
            weights=np.array([r.w_lin for r in rows]),
            members=members,
            periodic=periodic,
            delta_t=delta_t,
        )
    ]
    for j in range(s - 1):
        out.append(
            BandedPropagator(
                weights=np.array([r.w_phi[j] for r in rows]),
                members=members,
                periodic=periodic,
                delta_t=delta_t,
            )
        )
    return out


def apply(prop: BandedPropagator, u: np.ndarray) -> np.ndarray:
    """Banded matrix-vector product: out[i] = sum_j w[i,j] * u[members[i,j]].

    Accumulation runs in fixed ascending member order, so results are
    deterministic. Complex inputs are supported (spectral diagnostics).
    """
    u = np.asarray(u)
    if u.shape != (prop.N,):
        raise DimensionMismatch(f"expected a vector of length {prop.N}, got shape {u.shape}")
    return np.einsum("ij,ij->i", prop.weights, u[prop.members])


def combine(props: list[BandedPropagator], coeffs) -> BandedPropagator:
    """Linear combination of banded operators sharing one stencil layout."""
    base = props[0]
    weights = np.zeros_like(base.weights)
    for p, c in zip(props, coeffs):
        if p.members is not base.members and not np.array_equal(p.members, base.members):
            raise DimensionMismatch("cannot combine operators with different stencils")
        weights = weights + c * p.weights
    return BandedPropagator(
        weights=weights, members=base.members, periodic=base.periodic, delta_t=base.delta_t
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def weight_table_json(stencils: list[Stencil], rows: list[PhiWeightSet]) -> str:
    """JSON dump of a harvested weight table, 17 significant digits.

    One record per node: member indices, the linear row, and the raw
    dt^j*phi_j rows.
    """
    if len(stencils) != len(rows):
        raise DimensionMismatch("one weight set per stencil required")
    parts = ["{"]
    parts.append(f'"delta_t": {_fmt(rows[0].delta_t)}, ')
    parts.append(f'"N": {len(stencils)}, "n": {stencils[0].n}, ')
    parts.append(f'"s": {len(rows[0].w_phi) + 1}, "nodes": [')
    records = []
    for st, r in zip(stencils, rows):
        members = ", ".join(str(int(m)) for m in st.members)
        w_lin = ", ".join(_fmt(w) for w in r.w_lin)
        phis = ", ".join("[" + ", ".join(_fmt(w) for w in v) + "]" for v in r.w_phi)
        records.append(
            f'{{"index": {st.target}, "target_row": {st.target_row}, '
            f'"members": [{members}], "w_lin": [{w_lin}], "w_phi": [{phis}]}}'
        )
    parts.append(", ".join(records))
    parts.append("]}")
    return "".join(parts)
