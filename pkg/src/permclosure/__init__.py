"""Fractional closures of permutation groups and Cayley isomorphism checks."""

from .errors import *  # noqa: F401,F403
from .perm_core import (  # noqa: F401
    OrbitPartition,
    Permutation,
    PermGroup,
    group_generate,
    left_regular_representation,
    orbits,
    parse_group,
    symmetric_group,
)
from .blocks import BlockSystem, all_block_systems, normal_block_systems  # noqa: F401
from .closures import closedness, closure_32, closure_52, is_52_closed  # noqa: F401
from .objects import Digraph, automorphism_group, cayley_digraph, isomorphism  # noqa: F401
from .ci import is_ci_digraph_direct, is_ci_object  # noqa: F401

__version__ = "0.1.0"
