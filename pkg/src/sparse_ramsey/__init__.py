"""Sparse graph orderings, random-graph checks, greedy embeddings and small Ramsey numbers."""

from .bounds import BoundParams, mainstep_parameters, ramsey_bound_general, ramsey_bound_grr, ramsey_bound_main
from .coloring import BLUE, RED, TwoColoring
from .embedding import (
    DrcParams,
    EmbedFailure,
    Embedding,
    SparsityParams,
    check_sparse,
    dependent_random_choice,
    goodset_greedy_embed,
    grr_greedy_embed,
    multipartite_greedy_embed,
    nested_subsets,
    proper_coloring,
    sparsity_transform,
    validate_embedding,
)
from .graph import (
    Graph,
    build_graph,
    common_neighborhood,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    density_between,
    multi_density,
    path_graph,
    read_graph,
    write_graph,
)
from .ramsey import RamseyResult, Unknown, find_mono_copy, ramsey_exact, ramsey_lower_search
from .random_graphs import (
    PropertyReport,
    RandomGraphSpec,
    arrangeability_witness,
    check_density_between_large_sets,
    check_small_subgraph_density,
    closure_F,
    cool_ordering,
    count_high_degree,
    count_k23_pairs,
    random_degenerate_graph,
    sample_gnp,
)
from .sparseness import (
    LightVertexWitness,
    PeelFailure,
    SparsenessCertificate,
    VertexOrdering,
    degeneracy_ordering,
    exact_min_arrangeability,
    find_light_vertex,
    measure_certificate,
    peel_ordering,
)

__version__ = "0.1.0"
