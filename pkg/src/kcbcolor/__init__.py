"""Online graph coloring against adversaries that keep few connected components."""

from .adversaries import (
    CbipTree,
    Clique,
    FF3Colorable1CB,
    FFBipartite2CB,
    Forest,
    UniversalLayered,
    cbip_tree_adversary,
    clique_adversary,
    ff_3colorable_1cb,
    ff_bipartite_2cb,
    forest_adversary,
    universal_layered_adversary,
)
from .algorithms import CBIP, FirstFit, SeededBaseline, make_colorer
from .graph_core import ComponentTracker, OnlineGraph, PresentationStep, add_vertex
from .harness import run_matchup, sweep, verify_trace
from .trace import AdversaryMove, MatchupTrace, play

__version__ = "0.1.0"

__all__ = [
    "AdversaryMove", "CBIP", "CbipTree", "Clique", "ComponentTracker", "FF3Colorable1CB",
    "FFBipartite2CB", "FirstFit", "Forest", "MatchupTrace", "OnlineGraph", "PresentationStep",
    "SeededBaseline", "UniversalLayered", "add_vertex", "cbip_tree_adversary", "clique_adversary",
    "ff_3colorable_1cb", "ff_bipartite_2cb", "forest_adversary", "make_colorer", "play",
    "run_matchup", "sweep", "universal_layered_adversary", "verify_trace",
]
