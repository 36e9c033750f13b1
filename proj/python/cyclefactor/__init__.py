"""Constructive 2-factor embedding in sparse pseudorandom graphs."""

from cyclefactor._core import (
    CycleFamilySpec,
    DiscrepancyReport,
    Embedding,
    FlexVerification,
    Graph,
    LambdaEstimate,
    PipelineError,
    RamanujanGraph,
    Template,
    balanced_signs,
    bipartite_double_cover,
    bipartite_matching,
    brute_triangle_factor,
    build_lps_graph,
    build_random_template,
    build_template,
    check_discrepancy,
    connect_pairs,
    degree_preserving_partition,
    edge_count_between,
    embed_long_cycles,
    embed_short_cycles,
    embed_two_factor,
    estimate_lambda,
    find_book_cycle,
    find_connecting_path,
    find_template_prime,
    greedy_long_path,
    is_prime,
    legendre,
    plan_segment_budget,
    sample_gnp,
    verify_embedding,
)

__all__ = [
    "CycleFamilySpec", "DiscrepancyReport", "Embedding", "FlexVerification", "Graph",
    "LambdaEstimate", "PipelineError", "RamanujanGraph", "Template", "balanced_signs",
    "bipartite_double_cover", "bipartite_matching", "brute_triangle_factor", "build_lps_graph",
    "build_random_template", "build_template", "check_discrepancy", "connect_pairs",
    "degree_preserving_partition", "edge_count_between", "embed_long_cycles",
    "embed_short_cycles", "embed_two_factor", "estimate_lambda", "find_book_cycle",
    "find_connecting_path", "find_template_prime", "greedy_long_path", "is_prime", "legendre",
    "plan_segment_budget", "sample_gnp", "verify_embedding",
]
