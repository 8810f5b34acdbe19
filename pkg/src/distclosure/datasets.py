"""Bundled example graphs."""

from importlib import resources

from .graphs import DistanceGraph
from .io_formats import read_edgelist


def toy_network() -> DistanceGraph:
    """Ten-node unit-weight benchmark network with three communities.

    Two four-node groups share node 1 as a bridge vertex and a third group
    hangs off the bridge edge between nodes 2 and 3.  All present edges have
    distance 1; absent edges are +inf.
    """
    ref = resources.files("distclosure").joinpath("data/toy_network.tsv")
    with resources.as_file(ref) as path:
        return read_edgelist(path)
