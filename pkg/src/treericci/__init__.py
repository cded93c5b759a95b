"""Ricci matrices of trees and the spectral effect of repeated leaf attachment."""
from .asymptotics import (
    AsymptoticsReport,
    asymptotics,
    compression,
    convergence_diagnostics,
    degenerate_coefficient,
    first_order_coefficient,
    lambda_infinity,
    lambda_sequence,
    tail_check,
)
from .eigen import (
    BlockUpperTriangular,
    nonsym_eigen_triangular,
    sym_eigen,
    top_pair_symmetrizable,
)
from .growth import (
    OneStepAnalysis,
    one_step_guarantee,
    rayleigh_difference,
    sharp_criterion,
    theta,
)
from .reduction import (
    OrbitPartition,
    ReducedSystem,
    dirichlet_branch_matrix,
    orbit_partition,
    reduced_matrix,
    reduced_system,
    reduction_oracle_check,
)
from .ricci import (
    einstein_check,
    lambda_max,
    lly_curvature,
    quadratic_form,
    ricci_matrix,
    schrodinger_split,
)
from .tree import (
    Tree,
    attach_leaves,
    branch_decomposition,
    build_tree,
    parse_tree,
    read_tree,
)

__version__ = "0.1.0"
