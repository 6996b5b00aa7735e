"""Computational toolkit for the ee-Turán density of the 3-uniform K5."""

from turanforge import constructions, embedk5, holes, io, quasirandom, reduced
from turanforge._accel import backend_name
from turanforge.certificate import Certificate, Method, Verdict
from turanforge.hypercore import Graph, Hypergraph3, contains_clique, edge_density, induced, link_graph
from turanforge.reduced import Bicolouring, CherrySet, Orientation, ReducedHypergraph, Transversal

__version__ = "0.1.0"

__all__ = [
    "Bicolouring",
    "Certificate",
    "CherrySet",
    "Graph",
    "Hypergraph3",
    "Method",
    "Orientation",
    "ReducedHypergraph",
    "Transversal",
    "Verdict",
    "backend_name",
    "constructions",
    "embedk5",
    "holes",
    "io",
    "quasirandom",
    "reduced",
    "contains_clique",
    "edge_density",
    "induced",
    "link_graph",
]
