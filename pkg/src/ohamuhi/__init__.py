"""Disjoint and overlapping community detection on large undirected graphs."""

from .graph import Graph, GraphError, from_edges, load_edge_list
from .dss import SimilarityMap, dss_fixed_point, local_cosine

__version__ = "0.1.0"
