"""Fault-tolerant graph spanners.

Constructions (greedy, oversampling conversion), the knapsack-cover covering
LP with its separation oracle, threshold-rounding approximations, exhaustive
fault-set verification, and a round-synchronous message-passing simulator
with padded decompositions. The heavy lifting lives in the C++ core.
"""

from ._core import (  # noqa: F401
    ApproxReport,
    ApproxResult,
    BudgetError,
    Cluster,
    DemandFlows,
    DistConvertResult,
    DistFt2Report,
    DistFt2Result,
    Edge,
    FractionalSolution,
    FtVerifyResult,
    Graph,
    InputError,
    LllReport,
    LllResult,
    OptimumResult,
    ParseError,
    Partition,
    Path2,
    SimTrace,
    SolveError,
    Spanner,
    SpannerMeta,
    StretchReport,
    approx_ft2,
    brute_optimum_ft2,
    circulant_graph,
    complete_graph,
    default_decomposition_radius,
    default_iterations,
    directed_arcs,
    distributed_ft2,
    distributed_ft_convert,
    exact_optimum_ft2,
    ft_greedy,
    gap_fixture,
    gnp_graph,
    greedy_spanner,
    grid_graph,
    length2_paths,
    lll_round,
    make_spanner,
    padded_decomposition,
    path_graph,
    petersen_graph,
    read_graph,
    remove_vertices,
    shortest_path_dist,
    solution_json,
    solve_lp,
    verify_ft,
    verify_ft2_char,
    verify_stretch,
    vertex_padded,
    write_graph,
)

__version__ = "0.1.0"
