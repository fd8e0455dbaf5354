"""Splitting Equivalence - DR, PR, ADMM, Chambolle-Pock and Dykstra iterations and their correspondences."""

__version__ = "1.0.0"
