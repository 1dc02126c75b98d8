"""Edge-fault (EF) and Menger-type edge-fault (MEF) tolerance of regular graphs."""

from .faultsim import FaultProfile, SimConfig, build_fault_profile, enumerate_level, sample_level
from .graph import (
    Graph,
    GraphError,
    build_graph,
    connectivity_oracle_matrix,
    edge_connectivity,
    independence_number,
    is_connected,
    min_edge_cut,
    remove_edges,
)
from .menger import is_f_strongly_menger, is_strongly_menger, is_strongly_menger_by_cut_enumeration
from .tolerance import BoundParams, build_curve, combine, corollary_limit, upper_bound
from .topologies import GraphSpec, ary_cube, circulant, hypercube, materialize, mobius_cube, parse_spec, random_regular

__version__ = "0.1.0"
