"""Signless-Laplacian gradient dynamics on graphs.

Spectra (numeric and closed form) of Q = A + D, stability of the flow
x' = -(aI + 2bQ)x, principal-window simulation, and neighbourhood rigidity
measures for explaining the shape of the principal eigenvector.
"""
from .errors import (
    DegenerateWindowError,
    EdgeListParseError,
    InvalidParameterError,
    NumericalFailureError,
)
from .graph import Graph, build_family, barabasi_albert, parse_edge_list, serialize_edge_list
from .spectral import SpectralDecomposition, decompose_graph, eigendecompose, signless_laplacian
from .dynamics import PotentialParams, simulate, system_spectrum, principal_window
from .metrics import RigidityParams, compare_with_eigenvector, rigidity, rigidity_tilde

__version__ = "0.1.0"
