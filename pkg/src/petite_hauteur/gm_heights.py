"""Heights on the multiplicative group and the canonical metric on P^1."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath

from . import _intpoly as ip
from .errors import InfiniteDistance, InvalidPolynomial, InvalidProjectivePoint
from .polyroots import (
    DEFAULT_PRECISION,
    ComplexRootSet,
    Irreducibility,
    IrreducibilityVerdict,
    IntPolynomial,
    complex_roots,
    irreducibility_heuristic,
    normalize_primitive,
)


class ReducibleOrbitWarning(UserWarning):
    """The polynomial is not known to be irreducible; heights are factor averages."""


@dataclass(frozen=True)
class AlgebraicOrbit:
    poly: IntPolynomial
    roots: ComplexRootSet
    irreducibility: IrreducibilityVerdict

    @property
    def degree(self) -> int:
        return self.poly.degree


def make_orbit(poly, precision_bits: int = DEFAULT_PRECISION, prime_budget: int = 5) -> AlgebraicOrbit:
    """Orbit of a polynomial given as IntPolynomial or ascending coefficients."""
    if not isinstance(poly, IntPolynomial):
        poly = normalize_primitive(poly)
    else:
        poly = normalize_primitive(poly.coeffs)
    if poly.degree < 1:
        raise InvalidPolynomial("an orbit needs degree at least 1")
    roots = complex_roots(poly, precision_bits)
    verdict = irreducibility_heuristic(poly, prime_budget)
    return AlgebraicOrbit(poly, roots, verdict)


@dataclass(frozen=True)
class HeightBreakdown:
    """Weil height of a root split into archimedean and finite parts (nats)."""

    total: mpmath.mpf
    archimedean: mpmath.mpf
    finite: mpmath.mpf
    degree: int


def _archimedean_sum(orbit: AlgebraicOrbit):
    with mpmath.workprec(orbit.roots.precision_bits + 32):
        acc = mpmath.mpf(0)
        for z in orbit.roots:
            r = abs(z)
            if r > 1:
                acc += mpmath.log(r)
        return acc


def mahler_measure(orbit: AlgebraicOrbit) -> mpmath.mpf:
    """log|a_d| + sum log max(1, |z_i|)."""
    with mpmath.workprec(orbit.roots.precision_bits + 32):
        return mpmath.log(abs(orbit.poly.leading)) + _archimedean_sum(orbit)


def weil_height(orbit: AlgebraicOrbit) -> HeightBreakdown:
    if orbit.irreducibility.status is not Irreducibility.IRREDUCIBLE:
        warnings.warn(
            f"{orbit.poly} is {orbit.irreducibility.status.value}; the height is the "
            "degree-weighted average over its factors",
            ReducibleOrbitWarning,
            stacklevel=2,
        )
    d = orbit.degree
    with mpmath.workprec(orbit.roots.precision_bits + 32):
        arch = _archimedean_sum(orbit) / d
        fin = mpmath.log(abs(orbit.poly.leading)) / d
        return HeightBreakdown(arch + fin, arch, fin, d)


def distance_to_compact(z) -> float:
    """d(z) = (1/2)|log|z||, the distance of z to the unit circle in log scale."""
    r = abs(z)
    if r == 0:
        raise InfiniteDistance("0 is not a point of the multiplicative group")
    if isinstance(r, mpmath.mpf):
        return abs(mpmath.log(r)) / 2
    return abs(math.log(r)) / 2


@dataclass(frozen=True)
class RadialCheck:
    count_far: int
    bound: float
    holds: bool
    alpha: float


def chebyshev_radial_check(orbit: AlgebraicOrbit, alpha: float) -> RadialCheck:
    """#{conjugates with d(x) >= alpha} against degree * h / alpha.

    The sum of d over the conjugates is at most the Mahler measure, because
    x and 1/x have the same height.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    count = 0
    for z in orbit.roots:
        if abs(z) == 0 or distance_to_compact(z) >= alpha:
            count += 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleOrbitWarning)
        h = weil_height(orbit).total
    bound = float(orbit.degree * h / alpha)
    return RadialCheck(count, bound, count <= bound, alpha)


# ---------------------------------------------------------------------------
# canonical metric on O(1) of P^1


def _check_projective(t, u):
    if t == 0 and u == 0:
        raise InvalidProjectivePoint("[0:0] is not a point of P^1")


def _log_abs(v):
    r = abs(v)
    return math.log(r) if r else -math.inf


def canonical_norm_closed(t, u) -> float:
    """|u| / max(|t|, |u|)."""
    _check_projective(t, u)
    at, au = abs(t), abs(u)
    return float(au / max(at, au))


@dataclass(frozen=True)
class CanonicalNormSample:
    t: complex
    u: complex
    closed_value: float
    limit_value: float
    stage_n: int
    log_closed: float
    log_limit: float

    @property
    def log_error(self) -> float:
        if self.log_closed == -math.inf:
            return 0.0  # u = 0: both norms vanish
        return abs(self.log_limit - self.log_closed)


def canonical_norm_limit(t, u, n: int) -> CanonicalNormSample:
    """|u| / (|t|^(2n) + |u|^(2n))^(1/(2n)), evaluated in log scale."""
    _check_projective(t, u)
    if n < 1:
        raise ValueError("n must be at least 1")
    lt, lu = _log_abs(t), _log_abs(u)
    top = max(lt, lu)
    low = min(lt, lu)
    log_closed = lu - top
    # log(|t|^2n + |u|^2n) = 2n top + log1p(exp(-2n (top - low)))
    gap = math.log1p(math.exp(2 * n * (low - top))) / (2 * n) if low > -math.inf else 0.0
    log_limit = log_closed - gap
    return CanonicalNormSample(
        complex(t), complex(u), canonical_norm_closed(t, u), math.exp(log_limit), n, log_closed, log_limit
    )


def smoothing_correction(t, u) -> float:
    """log((|t|^2 + |u|^2) / (2 max(|t|^2, |u|^2))), in [-log 2, 0]."""
    _check_projective(t, u)
    at, au = abs(t), abs(u)
    ratio = min(at, au) / max(at, au)
    return math.log1p(float(ratio) ** 2) - math.log(2)


def graeffe(p: IntPolynomial) -> IntPolynomial:
    """Polynomial whose roots are the squares of the roots of p (exact)."""
    if p.degree < 1:
        raise InvalidPolynomial("degree must be at least 1")
    prod = ip.mul(p.coeffs, ip.negate_variable(p.coeffs))
    if p.degree % 2:
        prod = tuple(-c for c in prod)
    return normalize_primitive(prod[0::2])
