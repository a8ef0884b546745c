"""Naive and canonical (Neron-Tate) heights of rational points.

The canonical height is the limit of 4^-n h_x(2^n P) where h_x is the
logarithmic height of the x-coordinate.  The doubling map is iterated on the
coprime pair (X : Z) with x = X/Z.  The default method never forms the huge
integers: the common factor removed at each doubling divides the resultant of
the two doubling forms (which is disc(E)^2), so it can be read off residues
modulo a fixed power of that resultant, while log|X| and log|Z| are carried in
high-precision floating point.  ``method="exact"`` keeps the full integers and
serves as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath

from .. import _intpoly as ip
from ..errors import PointNotOnCurve, UndefinedNaiveHeight
from .curve import EllipticCurve, RationalPoint, add

DEFAULT_TOLERANCE = 1e-5
DEFAULT_DEPTH = 14
# the envelope is estimated from observed jumps, so never trust fewer than this many
MIN_DEPTH = 6
TORSION_SEARCH = 16


@dataclass(frozen=True)
class CanonicalHeightResult:
    value: float
    error_bound: float
    depth: int
    increments: tuple = field(default=())
    converged: bool = True
    envelope: float = 0.0  # C_est; error_bound = (4/3) C_est 4^-depth


def naive_height_x(P: RationalPoint) -> float:
    """log max(|p|, |q|) for x(P) = p/q in lowest terms."""
    if P.is_infinity:
        raise UndefinedNaiveHeight("the point at infinity has no x-coordinate")
    x = P.x
    return math.log(max(abs(x.numerator), abs(x.denominator)))


def is_torsion(E: EllipticCurve, P: RationalPoint) -> bool:
    """Exact search for n <= 16 with nP = O (covers every rational torsion order)."""
    Q = P
    for _ in range(TORSION_SEARCH):
        if Q.is_infinity:
            return True
        Q = add(E, Q, P)
    return Q.is_infinity


def _doubling_forms(E: EllipticCurve):
    # x(2P) = F(x)/G(x), ascending coefficients in x
    F = (-E.b8, -2 * E.b6, -E.b4, 0, 1)
    G = (E.b6, 2 * E.b4, E.b2, 4)
    return F, G


@lru_cache(maxsize=256)
def _doubling_resultant(E: EllipticCurve) -> int:
    F, G = _doubling_forms(E)
    return abs(ip.form_resultant(F, G, 4, 4))


def _hom_eval(coeffs, X, Z, deg):
    # sum c_i X^i Z^(deg-i)
    total = 0
    zp = 1
    powers = [1]
    for _ in range(deg):
        zp *= Z
        powers.append(zp)
    xp = 1
    for i in range(deg + 1):
        c = coeffs[i] if i < len(coeffs) else 0
        if c:
            total += c * xp * powers[deg - i]
        xp *= X
    return total


def _raw_heights_exact(E, P, depth):
    """h_x(2^n P) for n = 0..depth with full integer arithmetic."""
    F, G = _doubling_forms(E)
    X, Z = gmpy2.mpz(P.x.numerator), gmpy2.mpz(P.x.denominator)
    hs = []
    for n in range(depth + 1):
        hs.append(float(gmpy2.log(max(abs(X), abs(Z)))))
        if n == depth:
            break
        Xn, Zn = _hom_eval(F, X, Z, 4), _hom_eval(G, X, Z, 4)
        g = gmpy2.gcd(Xn, Zn)
        X, Z = Xn // g, Zn // g
        if Z == 0:
            raise ArithmeticError("point became the origin: torsion")
    return hs


def _log_abs_mpz(v):
    return mpmath.log(abs(mpmath.mpf(int(v)))) if v else mpmath.ninf


def _raw_heights_modular(E, P, depth, prec=320):
    """h_x(2^n P) for n = 0..depth from residues modulo a power of disc(E)^2."""
    F, G = _doubling_forms(E)
    R = _doubling_resultant(E)
    modulus = gmpy2.mpz(R) ** (depth + 2)
    X, Z = gmpy2.mpz(P.x.numerator), gmpy2.mpz(P.x.denominator)
    with mpmath.workprec(prec):
        x = mpmath.mpf(int(X)) / int(Z)
        logX, logZ = _log_abs_mpz(X), _log_abs_mpz(Z)
        Xr, Zr = X % modulus, Z % modulus
        hs = []
        for n in range(depth + 1):
            hs.append(float(max(logX, logZ)))
            if n == depth:
                break
            Fr = _hom_eval(F, Xr, Zr, 4) % modulus
            Gr = _hom_eval(G, Xr, Zr, 4) % modulus
            g = gmpy2.gcd(gmpy2.gcd(Fr, Gr), R)
            fx = ip.evaluate(F, x)
            gx = ip.evaluate(G, x)
            if gx == 0:
                raise ArithmeticError("point became the origin: torsion")
            lg = mpmath.log(int(g))
            logX, logZ = 4 * logZ + mpmath.log(abs(fx)) - lg, 4 * logZ + mpmath.log(abs(gx)) - lg
            x = fx / gx
            modulus //= g
            Xr, Zr = (Fr // g) % modulus, (Gr // g) % modulus
    return hs


def neron_tate(E: EllipticCurve, P: RationalPoint, tolerance: float = DEFAULT_TOLERANCE,
               max_depth: int = DEFAULT_DEPTH, method: str = "modular") -> CanonicalHeightResult:
    """Canonical height by telescoping s_n = 4^-n h_x(2^n P).

    Stops at the first n with |s_n - s_(n-1)| < tolerance/4 and
    error bound <= tolerance; otherwise returns s at ``max_depth`` with
    ``converged=False``.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if not E.contains(P):
        raise PointNotOnCurve(f"{P} is not on [{E}]")
    if is_torsion(E, P):
        return CanonicalHeightResult(0.0, 0.0, 0, (), True, 0.0)
    if method == "exact":
        hs = _raw_heights_exact(E, P, max_depth)
    elif method == "modular":
        hs = _raw_heights_modular(E, P, max_depth)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _telescope(hs, tolerance, max_depth)


def _telescope(hs, tolerance, max_depth):
    s = [h / 4.0 ** n for n, h in enumerate(hs)]
    increments = []
    jump = 0.0
    for n in range(1, len(hs)):
        increments.append(s[n] - s[n - 1])
        jump = max(jump, abs(hs[n] - 4 * hs[n - 1]))
        envelope = 4 * jump
        bound = (4.0 / 3.0) * envelope / 4.0 ** n
        if n >= min(MIN_DEPTH, max_depth) and abs(increments[-1]) < tolerance / 4 and bound <= tolerance:
            return CanonicalHeightResult(max(s[n], 0.0), bound, n, tuple(increments), True, envelope)
    n = len(hs) - 1
    envelope = 4 * jump
    bound = (4.0 / 3.0) * envelope / 4.0 ** n
    return CanonicalHeightResult(max(s[n], 0.0), bound, n, tuple(increments), bound <= tolerance
                                 and abs(increments[-1]) < tolerance / 4, envelope)
