"""Exact affine Weyl group combinatorics.

Simultaneous cores, alcove lattice points, quadratic size statistics and their
moments, Ehrhart fits, and generating functions, all over exact rational
arithmetic.  See the ``corelab`` command line tool for the batch interface.
"""

from corelab.rootsys import RootSystem, RootSystemType, build_root_system

__all__ = ["RootSystem", "RootSystemType", "build_root_system"]
__version__ = "0.1.0"
