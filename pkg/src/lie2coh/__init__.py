"""Cohomology of strict Lie 2-algebras with 2-vector-space coefficients, extensions from
2-cocycles, homological-algebra audits and numeric van Est certification."""

__version__ = "0.1.0"
