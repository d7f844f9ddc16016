"""Filtered and limiting cylindrical contact homology of the links S^3/G.

Every finite nontrivial subgroup G of SU(2) is covered: cyclic, binary
dihedral and the three binary polyhedral groups. The exact pipeline runs
groups -> orbifold -> reeb -> homotopy -> homology; ``mckay`` and
``morse_lab`` provide independent cross-checks.
"""

from .groups import GroupSpec, enumerate_group, conjugacy_classes

__all__ = ["GroupSpec", "enumerate_group", "conjugacy_classes"]
__version__ = "0.1.0"
