"""Spines of the Picard modular groups SU(2,1;O) for O = Z[i] and Z[zeta], and
integral cohomology of their congruence subgroups."""

__version__ = "0.1.0"
