"""Exact facet enumeration for cut polytopes of graphs.

Cut polytopes and cut cones, their restricted symmetry groups (graph
automorphisms plus switchings), and complete facet enumeration up to
symmetry by the adjacency decomposition method, all in exact integer and
rational arithmetic.
"""

__version__ = "0.1.0"
