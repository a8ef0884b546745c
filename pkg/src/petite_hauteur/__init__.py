"""Canonical heights on split semi-abelian varieties and equidistribution of small points."""

__version__ = "0.1.0"
