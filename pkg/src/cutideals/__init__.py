"""Cut ideals of graphs.

Cuts of a graph, the monomial map they generate, constructive quadratic
generating sets for K4-minor-free (series-parallel) graphs, a brute-force
fiber-connectivity oracle, and a marginal-preserving table sampler.
"""

from .algebra import (
    Binomial,
    ExponentVector,
    GeneratingSet,
    Monomial,
    binomial,
    binomial_in_kernel,
    enumerate_fiber,
    generating_set,
    height,
    monomial,
    phi_image,
    sort_by_height,
)
from .cuts import (
    canonical_cut,
    cut_from_vertex_list,
    cut_to_vertex_list,
    enumerate_cuts,
    glue_cuts,
    restrict_cut,
    separates,
)
from .errors import FiberCapExceeded, InputError, K4MinorError
from .gluing import (
    GlueResult,
    GluingSpec,
    MoveSequence,
    base_generators,
    build_F1_F2,
    build_F3,
    build_F4,
    find_move_sequence,
    glue_nonadjacent,
    lift_edge_gluing,
    lift_series,
    normalize_sequence,
    prune_generating_set,
    quadratic_basis_sp,
)
from .graphs import (
    Graph,
    SPLeaf,
    SPParallel,
    SPSeries,
    SPTree,
    Subgraph,
    add_edge,
    compose_sp_tree,
    contract_edge,
    delete_vertex,
    induced_subgraph,
    is_connected,
    is_k4_minor_free,
    k4_minor_certificate,
    parse_graph,
    sp_decompose,
    sp_tree_from_json,
    sp_tree_to_json,
)
from .oracle import (
    BACKWARD,
    FORWARD,
    FiberGraph,
    GenerationCheck,
    MarkovBasisReport,
    MoveApplication,
    apply_move,
    build_fiber_graph,
    fiber_graph_connected,
    generates_up_to_degree,
    is_slow_varying,
    markov_basis_up_to_degree,
    quadratic_kernel_binomials,
)
from .sampling import (
    CutTable,
    MarginalVector,
    cut_table,
    marginals,
    markov_step,
    parse_counts,
    sample_fiber,
)

__version__ = "0.1.0"
