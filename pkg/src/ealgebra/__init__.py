"""Exact-arithmetic engine for Lie algebroid calculus on a polynomial chart."""

from .exact import BasePoly, Q, koszul_sign, kernel_basis, rank
from .sections import GradedSection, Multigrade, section_mul
from .algebroid import (
    AlgebroidChart,
    Connection,
    contract,
    curvature,
    e_de_rham,
    lie_derivative,
    schouten,
    torsion,
    torsion_free,
    validate_chart,
    wedge,
)

__version__ = "0.1.0"
