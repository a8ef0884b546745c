"""Elliptic curves over Q: group law, canonical heights, torsion and uniformization."""

from .analytic import (
    LatticeCase,
    PeriodLattice,
    elliptic_log,
    periods,
    point_from_z,
    torus_coords,
    weierstrass_p,
)
from .curve import (
    INFINITY,
    EllipticCurve,
    RationalPoint,
    add,
    curve_from_coefficients,
    linear_combination,
    mul,
    neg,
    parse_curve,
    parse_point,
    point,
    sub,
)
from .division import division_polynomial, exact_order_polynomial, torsion_x_orbit
from .height import CanonicalHeightResult, is_torsion, naive_height_x, neron_tate

__all__ = [
    "INFINITY", "CanonicalHeightResult", "EllipticCurve", "LatticeCase", "PeriodLattice",
    "RationalPoint", "add", "curve_from_coefficients", "division_polynomial", "elliptic_log",
    "exact_order_polynomial", "is_torsion", "linear_combination", "mul", "naive_height_x",
    "neg", "neron_tate", "parse_curve", "parse_point", "periods", "point", "point_from_z",
    "sub", "torsion_x_orbit", "torus_coords", "weierstrass_p",
]
