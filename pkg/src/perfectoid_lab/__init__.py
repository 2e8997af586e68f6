"""perfectoid-lab: exact arithmetic for truncated Witt vectors over perfect
Laurent-series fields, the tilting correspondence at finite precision, Gauss
norms and overconvergent subrings, and certified (phi, Gamma)-module descent.
"""

__version__ = "0.1.0"
