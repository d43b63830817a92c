"""Dimer models on the cylinder graph and their kernels."""
from .beads import beads_kernel_arc, beads_kernel_infinite, beads_kernel_segment, c_infinity, cylinder_jump_kernel
from .exact import ExactKasteleyn, abs_det_by_output, exact_kasteleyn
from .graph import (
    EDGE_TYPES, JUMP, NO_STONE, STAY, VERTEX_CAP, CylinderGraph, Edge, GaugeAssignment, Matching,
    MatchingEnumeration, build_kasteleyn_W, enumerate_by_output, enumerate_matchings,
)
from .kernels import (
    FiniteKernel, KasteleynSolution, default_gauge, finite_kernel_closed, finite_kernel_exact,
    finite_kernel_table, gauge_interval, jump_density, limit_kernel, limit_kernel_table, solve_kasteleyn,
    stone_correlation,
)
from .poisson import enumerate_mirrored, mirrored_graph, path_weights, poissonization_check, poissonized_target
