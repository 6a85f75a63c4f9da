"""Exact Hochschild cohomology of finite linear categories and finite sites."""

__version__ = "0.1.0"
