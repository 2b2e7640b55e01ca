"""Exact dyadic (2-adic) relative pose: pixel encoding, Hensel lifting, n-point solvers."""

from .padic import PadicNorm, TruncatedPadic, digits, from_integer, invert_unit, valuation

__version__ = "0.1.0"

__all__ = ["PadicNorm", "TruncatedPadic", "digits", "from_integer", "invert_unit", "valuation"]
