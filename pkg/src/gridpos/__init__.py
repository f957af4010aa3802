"""gridpos: exact combinatorics of grid point sets and flat incidences.

Library + CLI for counting flat-incident point tuples in integer grids,
classifying their degeneracy, searching for extremal flat-avoiding sets,
running randomized thin-out constructions, and verifying additive
(B_g-style) equation properties, all in exact integer/rational arithmetic.
"""

__version__ = "0.1.0"

from .additive import (
    Dissection,
    EquationSpec,
    PhiTable,
    SolutionTuple,
    bg_check,
    check_cs,
    dissect,
    find_nontrivial_solution,
    is_trivial_solution,
    multifold_bound,
    phi,
    sigma_preimages,
    stratified_phi,
    sum_profile,
    verify_eq5,
)
from .census import (
    CensusReport,
    ContainerParams,
    DegreeProfile,
    SumIndex,
    build_sum_index,
    census,
    classify_pair,
    compute_delta,
    container_params,
    count_colliding_pairs,
    degree_profile,
    supersaturation_trend,
)
from .constructions import (
    DeletionConfig,
    DeletionReport,
    count_flat_tuples,
    deletion_construct,
    moment_curve,
    run_deletion_trials,
)
from .kernels import BACKEND
from .points import PointSet, dump_points, full_grid, load_points, parse_points, write_points
from .rank import TupleClass, TupleKind, affine_rank, classify_tuple, lies_on_flat
from .search import (
    SearchConfig,
    SearchResult,
    greedy_general_position,
    max_general_position_subset,
    max_grid_set,
)
