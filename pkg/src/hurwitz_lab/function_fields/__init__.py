"""Finite fields, hyperelliptic Jacobians and class-group statistics."""

from .field import FiniteField, gf
from .curves import Curve, Jacobian, jacobian_structure, zeta_class_number, enumerate_monic_squarefree
from .cohen_lenstra import count_surjections, mu_cohen_lenstra, cl_statistics

__all__ = [
    "FiniteField", "gf", "Curve", "Jacobian", "jacobian_structure", "zeta_class_number",
    "enumerate_monic_squarefree", "count_surjections", "mu_cohen_lenstra", "cl_statistics",
]
