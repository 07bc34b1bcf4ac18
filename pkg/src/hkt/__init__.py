"""Invariant Hermitian, HKT and hyper-Hermitian geometry on Lie algebras, in exact arithmetic."""
from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__"]
