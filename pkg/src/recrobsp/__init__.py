"""Exact toolkit for recoverable robust shortest paths on acyclic digraphs."""

from .model import (
    Arc,
    Budget,
    CycleError,
    Digraph,
    Instance,
    InvalidPathError,
    Path,
    PathOverflowError,
    RecoveryRule,
    Scenario,
    enumerate_st_paths,
    path_cost,
    topological_order,
    validate_instance,
)
from .rational import Rat, rat, rat_str

__version__ = "0.1.0"
