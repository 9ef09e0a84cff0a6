"""Exact operator algebra and the symbolic derivation checks."""
from .bessel import BesselExpr, order_shift, rewrite_bessel
from .operators import D, ONE, DiffOperator, OperatorMatrix, compose, right_remainder
from .ring import I, CoeffPoly, GaussQ, const, ez, sym
