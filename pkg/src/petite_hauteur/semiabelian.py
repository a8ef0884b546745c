"""Invariants of the compactified split semi-abelian variety E x Gm^t.

The extension class is given by points q_1..q_t of E(Q).  The height of the
compactification and its absolute minimum are explicit combinations of
Neron-Tate heights of q = q_1 + ... + q_t and of q - (t+1) q_i.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .elliptic.curve import EllipticCurve, RationalPoint, add, linear_combination, mul, sub
from .elliptic.height import DEFAULT_TOLERANCE, CanonicalHeightResult, neron_tate
from .errors import PointNotOnCurve
from .gm_heights import AlgebraicOrbit, ReducibleOrbitWarning, weil_height


@dataclass(frozen=True)
class SemiAbelianDatum:
    curve: EllipticCurve
    q: tuple

    def __post_init__(self):
        if len(self.q) < 1:
            raise ValueError("at least one extension point is required")
        for P in self.q:
            if not self.curve.contains(P):
                raise PointNotOnCurve(f"{P} is not on [{self.curve}]")
        object.__setattr__(self, "q", tuple(self.q))

    @property
    def t(self) -> int:
        return len(self.q)

    def total(self) -> RationalPoint:
        return linear_combination(self.curve, [1] * self.t, self.q)


@dataclass(frozen=True)
class GBarInvariants:
    hhat_gbar: float
    hhat_error: float
    mu_gbar: float
    mu_error: float
    h_q: float
    h_terms: tuple
    t: int
    converged: bool = True

    @property
    def isotrivial(self) -> bool:
        """hhat_gbar vanishes within its error bound."""
        return abs(self.hhat_gbar) <= max(self.hhat_error, 0.0) + 1e-12


@lru_cache(maxsize=4096)
def _height(E: EllipticCurve, P: RationalPoint, tolerance: float) -> CanonicalHeightResult:
    return neron_tate(E, P, tolerance)


def _terms(datum: SemiAbelianDatum, tolerance):
    E, t = datum.curve, datum.t
    q = datum.total()
    hq = _height(E, q, tolerance)
    terms = [_height(E, sub(E, q, mul(E, t + 1, qi)), tolerance) for qi in datum.q]
    return hq, terms


def gbar_height(datum: SemiAbelianDatum, tolerance: float = DEFAULT_TOLERANCE) -> GBarInvariants:
    t = datum.t
    hq, terms = _terms(datum, tolerance)
    scale = 1.0 / ((t + 1) * (t + 2))
    hhat = -scale * (hq.value + sum(r.value for r in terms))
    hhat_err = scale * (hq.error_bound + sum(r.error_bound for r in terms))
    values = [hq.value] + [r.value for r in terms]
    mu = -max(values)
    mu_err = max([hq.error_bound] + [r.error_bound for r in terms])
    converged = hq.converged and all(r.converged for r in terms)
    return GBarInvariants(hhat, hhat_err, mu, mu_err, hq.value,
                          tuple(r.value for r in terms), t, converged)


def gbar_height_alt(datum: SemiAbelianDatum, tolerance: float = DEFAULT_TOLERANCE,
                    with_error: bool = False):
    """-(1/(t+2)) ((t+1) sum h(q_i) - h(q)), the same invariant after expanding by quadraticity."""
    E, t = datum.curve, datum.t
    hq = _height(E, datum.total(), tolerance)
    hs = [_height(E, qi, tolerance) for qi in datum.q]
    value = -((t + 1) * sum(r.value for r in hs) - hq.value) / (t + 2)
    if not with_error:
        return value
    err = ((t + 1) * sum(r.error_bound for r in hs) + hq.error_bound) / (t + 2)
    return value, err


def height_pairing(E: EllipticCurve, P: RationalPoint, Q: RationalPoint,
                   tolerance: float = DEFAULT_TOLERANCE, with_error: bool = False):
    """<P, Q> = (h(P+Q) - h(P) - h(Q)) / 2."""
    a, b, c = (_height(E, R, tolerance) for R in (add(E, P, Q), P, Q))
    value = (a.value - b.value - c.value) / 2
    if not with_error:
        return value
    return value, (a.error_bound + b.error_bound + c.error_bound) / 2


def gram_matrix(E: EllipticCurve, points: Sequence[RationalPoint], tolerance: float = DEFAULT_TOLERANCE):
    """Pairing matrix and the matching entrywise error bounds."""
    n = len(points)
    G = [[0.0] * n for _ in range(n)]
    err = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                r = _height(E, points[i], tolerance)
                v, e = r.value, r.error_bound
            else:
                v, e = height_pairing(E, points[i], points[j], tolerance, with_error=True)
            G[i][j] = G[j][i] = v
            err[i][j] = err[j][i] = e
    return G, err


def generalized_height(datum: SemiAbelianDatum, n: Sequence[int], tolerance: float = DEFAULT_TOLERANCE,
                       with_error: bool = False):
    """((sum n)/(t+1))^2 hhat(Gbar) - h(r) for the bundle with weights n_0..n_t.

    r = sum_{i>=1} c_i q_i with c_i = n_i - (sum n)/(t+1) lives in E(Q) (x) R,
    so h(r) is the quadratic form c^T G c of the pairing matrix G.
    """
    t = datum.t
    if len(n) != t + 1:
        raise ValueError(f"expected {t + 1} weights, got {len(n)}")
    S = sum(n)
    c = [Fraction(n[i]) - Fraction(S, t + 1) for i in range(1, t + 1)]
    G, err = gram_matrix(datum.curve, datum.q, tolerance)
    h_r = sum(float(c[i] * c[j]) * G[i][j] for i in range(t) for j in range(t))
    h_r_err = sum(abs(float(c[i] * c[j])) * err[i][j] for i in range(t) for j in range(t))
    inv = gbar_height(datum, tolerance)
    factor = float(Fraction(S, t + 1) ** 2)
    value = factor * inv.hhat_gbar - h_r
    if not with_error:
        return value
    return value, factor * inv.hhat_error + h_r_err


@dataclass(frozen=True)
class SplitPoint:
    """A point (z, t_1..t_t) of E x Gm^t: a rational point and t algebraic orbits."""

    curve: EllipticCurve
    abelian_part: RationalPoint
    toric_parts: tuple

    def __post_init__(self):
        if not self.curve.contains(self.abelian_part):
            raise PointNotOnCurve(f"{self.abelian_part} is not on [{self.curve}]")
        object.__setattr__(self, "toric_parts", tuple(self.toric_parts))


def normalized_height_point(x: SplitPoint, tolerance: float = DEFAULT_TOLERANCE,
                            with_error: bool = False):
    """Neron-Tate height of the abelian part plus Weil heights of the toric coordinates."""
    r = _height(x.curve, x.abelian_part, tolerance)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleOrbitWarning)
        toric = sum(float(weil_height(o).total) for o in x.toric_parts)
    value = r.value + toric
    if not with_error:
        return value
    return value, r.error_bound
