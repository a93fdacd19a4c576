"""Query-cost simulation of search-based graph algorithms in the matrix and array models."""

from .graphmodel import (INF, ArrayOracle, ContractViolation, MatrixOracle, QueryLedger, load,
                         save, validate)
from .minfind import find_d_smallest, find_d_types, find_smallest_of_types
from .qprimitives import CostModel, Mode, find_minimum, search_bounded, search_expected, search_highconf
from .spanning import (Disconnected, Forest, bipartite_test, connectivity_array, connectivity_matrix,
                       mst_boruvka, spanning_forest)
from .sssp import ShortestPathTree, sssp
from .strongconn import NotStronglyConnected, strongconn_array, strongconn_matrix

__version__ = "0.1.0"

__all__ = [
    "INF", "ArrayOracle", "ContractViolation", "CostModel", "Disconnected", "Forest",
    "MatrixOracle", "Mode", "NotStronglyConnected", "QueryLedger", "ShortestPathTree",
    "bipartite_test", "connectivity_array", "connectivity_matrix", "find_d_smallest",
    "find_d_types", "find_minimum", "find_smallest_of_types", "load", "mst_boruvka",
    "save", "search_bounded", "search_expected", "search_highconf", "spanning_forest",
    "sssp", "strongconn_array", "strongconn_matrix", "validate",
]
