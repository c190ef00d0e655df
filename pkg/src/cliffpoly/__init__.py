"""Clifford-polytope tools for the depolarizing-noise threshold of Clifford+1-qubit circuits."""

from .polytope import THETA_HAT

__all__ = ["THETA_HAT"]
