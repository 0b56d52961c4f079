"""Banded exponential time integrators from local matrix exponentials.

Exponentiating the dense operator of a small stencil and harvesting the
target node's row yields time-integration weights that are exact on the
stencil's polynomial space; assembled globally they form banded
propagators with per-step O(n*N) cost. An augmented block exponential
extends the same harvest to the phi-function rows that exponential
integrators for semi-linear problems need.
"""

from .errors import (
    DimensionMismatch,
    DuplicateNodes,
    InvalidConfig,
    InvalidGrid,
    LocalExpError,
    NoConvergence,
    NonFinite,
    NotWarmedUp,
    OrderTooHigh,
    StencilTooLarge,
)
from .expm import expm, expm_taylor_oracle, phi_scalar
from .grid import (
    Grid,
    Stencil,
    StencilPolicy,
    Topology,
    make_chebyshev_grid,
    make_periodic_grid,
    select_stencils,
)
from .harvest import (
    BandedPropagator,
    PhiWeightSet,
    apply,
    assemble_global,
    assemble_global_phi,
    build_augmented,
    combine,
    harvest_phi_weights,
    harvest_propagator,
    weight_table_json,
)
from .localop import DiffMatrix, LinearOperatorSpec, diff_matrix, fornberg_weights, local_operator
from .timestep import (
    Boundary,
    SchemeConfig,
    SemiLinearProblem,
    SimulationResult,
    StepperState,
    assemble_derivative,
    etd_multistep_step,
    etdrk4_step,
    run,
    step_linear,
)

__version__ = "0.1.0"

__all__ = [
    "BandedPropagator",
    "Boundary",
    "DiffMatrix",
    "DimensionMismatch",
    "DuplicateNodes",
    "Grid",
    "InvalidConfig",
    "InvalidGrid",
    "LinearOperatorSpec",
    "LocalExpError",
    "NoConvergence",
    "NonFinite",
    "NotWarmedUp",
    "OrderTooHigh",
    "PhiWeightSet",
    "SchemeConfig",
    "SemiLinearProblem",
    "SimulationResult",
    "Stencil",
    "StencilPolicy",
    "StencilTooLarge",
    "StepperState",
    "Topology",
    "apply",
    "assemble_derivative",
    "assemble_global",
    "assemble_global_phi",
    "build_augmented",
    "combine",
    "diff_matrix",
    "etd_multistep_step",
    "etdrk4_step",
    "expm",
    "expm_taylor_oracle",
    "fornberg_weights",
    "harvest_phi_weights",
    "harvest_propagator",
    "local_operator",
    "make_chebyshev_grid",
    "make_periodic_grid",
    "phi_scalar",
    "run",
    "select_stencils",
    "step_linear",
    "weight_table_json",
]
