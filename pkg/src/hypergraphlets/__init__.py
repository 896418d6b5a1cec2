"""Approximate counting of small connected induced sub-hypergraphs.

The pipeline: split the hypergraph by edge size (splitter), build rooted
treelet counters bottom-up with color coding (treelets, buildup), sample
colorful connected vertex sets proportionally to spanning-tree weight
(sampler), and turn sample frequencies into per-shape count estimates
keyed by canonical form (canonlab).  exact provides brute-force ground
truth; hardlab holds the worst-case reductions.
"""

from .hypercore import (
    Graph,
    Hypergraph,
    Hypergraphlet,
    HypergraphError,
    gaifman,
    induced_sub,
    is_connected_induced,
    parse_hypergraph,
    section_sub,
    serialize_hypergraph,
)

__all__ = [
    "Graph",
    "Hypergraph",
    "Hypergraphlet",
    "HypergraphError",
    "gaifman",
    "induced_sub",
    "is_connected_induced",
    "parse_hypergraph",
    "section_sub",
    "serialize_hypergraph",
]

__version__ = "0.1.0"
