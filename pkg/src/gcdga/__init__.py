"""Exact differential Gerstenhaber algebras of invariant generalized complex structures."""

from .scalars import GaussianRational, gq
from .exterior import Multivector, wedge, contract

__all__ = ["GaussianRational", "gq", "Multivector", "wedge", "contract"]
