"""Division polynomials and the x-coordinates of torsion points."""

from __future__ import annotations

from functools import lru_cache

from .. import _intpoly as ip
from ..polyroots import DEFAULT_PRECISION, ComplexRootSet, IntPolynomial, complex_roots, normalize_primitive
from .curve import EllipticCurve


def _x_parts(E: EllipticCurve, n: int) -> dict:
    """f_m for m <= n, where psi_m = f_m for odd m and psi_m = psi_2 f_m for even m."""
    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    B = E.two_torsion_cubic()
    B2 = ip.mul(B, B)
    f = {
        0: (),
        1: (1,),
        2: (1,),
        3: ip.trim((b8, 3 * b6, 3 * b4, b2, 3)),
        4: ip.trim((b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2)),
    }

    def get(m):
        if m in f:
            return f[m]
        k = m // 2
        if m % 2:
            if k % 2 == 0:
                r = ip.sub(ip.mul(B2, ip.mul(get(k + 2), ip.power(get(k), 3))),
                           ip.mul(get(k - 1), ip.power(get(k + 1), 3)))
            else:
                r = ip.sub(ip.mul(get(k + 2), ip.power(get(k), 3)),
                           ip.mul(B2, ip.mul(get(k - 1), ip.power(get(k + 1), 3))))
        else:
            r = ip.mul(get(k), ip.sub(ip.mul(get(k + 2), ip.power(get(k - 1), 2)),
                                      ip.mul(get(k - 2), ip.power(get(k + 1), 2))))
        f[m] = r
        return r

    get(n)
    return f


@lru_cache(maxsize=64)
def division_polynomial(E: EllipticCurve, N: int) -> IntPolynomial:
    """The x-only part of psi_N: psi_N itself for odd N, psi_N / psi_2 for even N.

    For N = 2 the x-only part is 1; the 2-torsion x-coordinates are the roots
    of :meth:`EllipticCurve.two_torsion_cubic`.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    return IntPolynomial(_x_parts(E, N)[N])


def _points_polynomial(E, N):
    # x-coordinates of E[N] minus the origin, one per {P, -P}
    poly = division_polynomial(E, N).coeffs
    if N % 2 == 0:
        poly = ip.mul(poly, E.two_torsion_cubic())
    return poly


@lru_cache(maxsize=64)
def exact_order_polynomial(E: EllipticCurve, N: int) -> IntPolynomial:
    """Primitive polynomial whose roots are x(P) for the points of exact order N."""
    if N < 2:
        raise ValueError("N must be at least 2")
    poly = _points_polynomial(E, N)
    for d in range(2, N):
        if N % d == 0:
            poly = ip.exact_quotient(poly, exact_order_polynomial(E, d).coeffs)
    return normalize_primitive(poly)


def torsion_x_orbit(E: EllipticCurve, N: int, precision_bits: int = DEFAULT_PRECISION,
                    analytic_seeds: bool = True) -> ComplexRootSet:
    """Certified roots of the exact-order-N polynomial.

    The x-coordinates of N-torsion are badly conditioned in the monomial basis
    once N grows, so by default the iteration starts from p((a w1 + b w2)/N);
    the polishing and residual certification are the usual ones.
    """
    poly = exact_order_polynomial(E, N)
    seeds = None
    if analytic_seeds:
        from .analytic import periods, torsion_points_analytic

        seeds = torsion_points_analytic(E, N, periods(E, precision_bits))
    return complex_roots(poly, precision_bits, initial=seeds)
