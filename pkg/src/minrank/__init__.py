"""Index coding and network coding by rank-minimizing matrix completion.

Public surface: graph generators and file I/O, pattern matrices, the
coloring heuristics, the projection solvers, the encoder/decoder, the
network reduction pipeline, and the benchmark harness.
"""

from .bench import (
    CSV_HEADER,
    EmptyHistogramError,
    ExperimentSpec,
    Family,
    Method,
    ResultRow,
    dumps_csv,
    histogram,
    read_rows,
    run_experiment,
    savings_vs_multicast,
    savings_vs_uncoded,
    write_csv,
)
from .codec import (
    DecodingError,
    IndexCode,
    MessageVector,
    RankExtractionError,
    SideInfoVector,
    aggregate_error,
    build_pattern_matrix,
    decode,
    decode_all,
    encode,
    error_bound,
    extract_encoder,
    make_index_code,
    side_info_vector,
)
from .coloring import (
    CliqueCover,
    LdgMatrix,
    greedy_clique_cover,
    greedy_coloring_number,
    ldg,
)
from .graph import (
    GraphKind,
    SideInfoGraph,
    complement,
    dumps_graph,
    exact_clique_cover,
    gen_directed_er,
    gen_directed_regular,
    gen_three_clique_coverable,
    gen_undirected_er,
    independence_number,
    load_graph,
    loads_graph,
    save_graph,
    undirected_subgraph,
)
from .netcode import (
    UNKNOWN_MESSAGE,
    ExtractionError,
    ICInstance,
    InconsistentCodeError,
    NetworkCode,
    NetworkSpec,
    Receiver,
    UnitEdge,
    Unknown,
    UnsupportedTopologyError,
    evaluate_code,
    extract_network_code,
    format_network,
    format_network_code,
    load_network,
    parse_network,
    reduce_to_index_coding,
    save_network,
    solve_network,
    split_capacities,
)
from .pattern import ONE, STAR, ZERO, PatternMatrix
from .rankmin import (
    AttemptRecord,
    SolverConfig,
    SolverOutcome,
    Variant,
    altmin_attempt,
    ap_attempt,
    dirap_attempt,
    dump_matrix,
    dumps_matrix,
    load_matrix,
    loads_matrix,
    nuclear_norm_floor_check,
    numerical_rank,
    project_C_svd,
    project_Cprime,
    project_D,
    solve,
    spectral_norm,
    sweep,
)

__version__ = "0.1.0"
