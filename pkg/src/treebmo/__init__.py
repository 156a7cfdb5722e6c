"""Exact-arithmetic Calderon-Zygmund geometry, BMO and atomic Hardy norms
on weighted homogeneous trees, with certified enumeration cutoffs and
brute-force oracles for every truncated supremum.
"""

from .tree import Tree, Vertex, Window, ORIGIN  # noqa: F401
from .sets import AdmissibleTrapezoid, CZSet, GeneralTrapezoid  # noqa: F401

__version__ = "0.1.0"
