"""Complex uniformization of E(C): periods, the Weierstrass function, elliptic logarithms.

Conventions: with X = x + b2/12 and Y = 2y + a1 x + a3 the curve becomes
Y^2 = 4X^3 - g2 X - g3, and z is the integral of the invariant differential
dx/(2y + a1 x + a3), so that (X, Y) = (p(z), p'(z)).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

from ..errors import PointNotOnCurve, PrecisionFailure
from ..polyroots import DEFAULT_PRECISION
from .curve import EllipticCurve, RationalPoint


class LatticeCase(Enum):
    THREE_REAL_ROOTS = "ThreeRealRoots"
    ONE_REAL_ROOT = "OneRealRoot"


@dataclass(frozen=True)
class PeriodLattice:
    """Basis (omega1, omega2) with omega1 > 0 real and Im(omega2/omega1) > 0."""

    omega1: mpmath.mpf
    omega2: mpmath.mpc
    case_tag: LatticeCase
    e: tuple  # roots of 4X^3 - g2 X - g3 in the shifted coordinate
    shift: mpmath.mpf  # b2/12
    precision_bits: int = DEFAULT_PRECISION

    @property
    def tau(self):
        with mpmath.workprec(self.precision_bits + 20):
            return self.omega2 / self.omega1

    def area(self):
        with mpmath.workprec(self.precision_bits):
            return abs(mpmath.im(mpmath.conj(self.omega1) * self.omega2))


def _cubic_roots(E: EllipticCurve, prec):
    # roots of 4x^3 + b2 x^2 + 2 b4 x + b6
    with mpmath.workprec(prec):
        return mpmath.polyroots([4, E.b2, 2 * E.b4, E.b6], maxsteps=200, extraprec=2 * prec)


def _agm(a, b):
    value = mpmath.agm(a, b)
    if not mpmath.isfinite(value) or value == 0:
        raise PrecisionFailure("AGM did not converge to a nonzero limit")
    return value


def periods(E: EllipticCurve, precision_bits: int = DEFAULT_PRECISION) -> PeriodLattice:
    prec = precision_bits + 32
    with mpmath.workprec(prec):
        shift = mpmath.mpf(E.b2) / 12
        roots = _cubic_roots(E, prec)
        if E.discriminant > 0:
            e1, e2, e3 = sorted((mpmath.re(r) for r in roots), reverse=True)
            w1 = mpmath.pi / _agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
            w2 = mpmath.mpc(0, 1) * mpmath.pi / _agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
            case = LatticeCase.THREE_REAL_ROOTS
            es = (e1, e2, e3)
        else:
            real = min(roots, key=lambda r: abs(mpmath.im(r)))
            e1 = mpmath.re(real)
            others = [r for r in roots if r is not real]
            others.sort(key=lambda r: mpmath.im(r), reverse=True)
            a = 3 * e1 + mpmath.mpf(E.b2) / 4
            b = mpmath.sqrt(3 * e1 * e1 + mpmath.mpf(E.b2) / 2 * e1 + mpmath.mpf(E.b4) / 2)
            w1 = 2 * mpmath.pi / _agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b + a))
            w2 = w1 / 2 + mpmath.mpc(0, 1) * mpmath.pi / _agm(2 * mpmath.sqrt(b), mpmath.sqrt(2 * b - a))
            case = LatticeCase.ONE_REAL_ROOT
            es = (mpmath.mpc(e1), others[0], others[1])
        es = tuple(e + shift for e in es)
        if not (w1 > 0 and mpmath.im(w2) > 0):
            raise PrecisionFailure("period computation produced a degenerate basis")
        return PeriodLattice(+w1, mpmath.mpc(w2), case, es, shift, precision_bits)


def _reduced_basis(lattice: PeriodLattice):
    """Gauss-reduced basis (w1, w2) of the same lattice with Im(w2/w1) > 0."""
    w1, w2 = mpmath.mpc(lattice.omega1), mpmath.mpc(lattice.omega2)
    while True:
        if abs(w2) < abs(w1):
            w1, w2 = w2, -w1
        m = mpmath.nint(mpmath.re(w2 / w1))
        if m == 0:
            break
        w2 -= m * w1
        if abs(w2) >= abs(w1):
            break
    if mpmath.im(w2 / w1) < 0:
        w2 = -w2
    return w1, w2


def _series_setup(z, lattice):
    w1, w2 = _reduced_basis(lattice)
    tau = w2 / w1
    s = z / w1
    # center z: |Im(s)| <= Im(tau)/2 and |Re| <= 1/2
    k = mpmath.nint(mpmath.im(s) / mpmath.im(tau))
    s -= k * tau
    s -= mpmath.nint(mpmath.re(s))
    q = mpmath.expjpi(2 * tau)
    u = mpmath.expjpi(2 * s)
    return w1, q, u, s


def _terms_needed(q, prec):
    return int(prec / max(1.0, -float(mpmath.log(abs(q), 2)))) + 3


def weierstrass_p(z, lattice: PeriodLattice):
    """p(z) and p'(z) for the lattice, via the q-expansion in the reduced basis."""
    with mpmath.workprec(lattice.precision_bits + 40):
        w1, q, u, s = _series_setup(mpmath.mpc(z), lattice)
        if abs(s) < mpmath.mpf(2) ** (-(lattice.precision_bits // 2)):
            raise ZeroDivisionError("p has a pole at lattice points")
        n_terms = _terms_needed(q, lattice.precision_bits + 40)
        c = 2j * mpmath.pi / w1

        def F(v):
            return v / (1 - v) ** 2

        def G(v):
            return v * (1 + v) / (1 - v) ** 3

        p = mpmath.mpf(1) / 12 + F(u)
        dp = G(u)
        qn = mpmath.mpc(1)
        for _ in range(n_terms):
            qn *= q
            p += F(qn * u) + F(qn / u) - 2 * F(qn)
            dp += G(qn * u) - G(qn / u)
        return c * c * p, c ** 3 * dp


def _on_curve_residual(X, Y, lattice):
    e1, e2, e3 = lattice.e
    rhs = 4 * (X - e1) * (X - e2) * (X - e3)
    return abs(Y * Y - rhs) / max(1, abs(X) ** 3)


def _to_mpc(v):
    if isinstance(v, Fraction):
        return mpmath.mpc(mpmath.mpf(v.numerator) / v.denominator)
    return mpmath.mpc(v)


def reduce_mod_lattice(z, lattice: PeriodLattice):
    """Representative u omega1 + v omega2 with u, v in [0, 1)."""
    u, v = torus_coords(z, lattice)
    with mpmath.workprec(lattice.precision_bits + 20):
        return u * lattice.omega1 + v * lattice.omega2


def elliptic_log(E: EllipticCurve, point, lattice: PeriodLattice, residual_tol: float = 1e-20):
    """z in the fundamental parallelogram with (x(z), y(z)) = point.

    ``point`` is None for the origin, a pair (x, y) of complex numbers, or a
    RationalPoint.
    """
    if isinstance(point, RationalPoint):
        point = None if point.is_infinity else (point.x, point.y)
    if point is None:
        return mpmath.mpc(0)
    prec = lattice.precision_bits
    with mpmath.workprec(prec + 40):
        x, y = _to_mpc(point[0]), _to_mpc(point[1])
        X = x + lattice.shift
        Y = 2 * y + E.a1 * x + E.a3
        if _on_curve_residual(X, Y, lattice) > residual_tol:
            raise PointNotOnCurve("complex point does not satisfy the curve equation")
        e1, e2, e3 = lattice.e
        if abs(Y) < mpmath.mpf(2) ** (-(prec // 3)) * max(1, abs(X)):
            # 2-torsion: the nearest half period
            z = _half_period(X, lattice)
            return reduce_mod_lattice(z, lattice)
        z = mpmath.elliprf(X - e1, X - e2, X - e3)
        z = _fix_branch(z, X, Y, lattice)
        return reduce_mod_lattice(z, lattice)


def _half_period(X, lattice):
    w1, w2 = lattice.omega1, lattice.omega2
    halves = [w1 / 2, w2 / 2, (w1 + w2) / 2]
    return min(halves, key=lambda h: abs(weierstrass_p(h, lattice)[0] - X))


def _fix_branch(z, X, Y, lattice):
    tol = mpmath.mpf(2) ** (-(lattice.precision_bits // 2)) * max(1, abs(X), abs(Y))
    candidates = [z]
    p, dp = weierstrass_p(z, lattice)
    if abs(p - X) > tol:
        # principal branch of the symmetric integral missed; Newton on p(z) = X
        z = _newton_p(z, X, lattice)
        p, dp = weierstrass_p(z, lattice)
        if abs(p - X) > tol:
            raise PrecisionFailure("elliptic logarithm did not converge")
    if abs(dp - Y) <= abs(dp + Y):
        return z
    return -z


def _newton_p(z, X, lattice, steps=200):
    for _ in range(steps):
        p, dp = weierstrass_p(z, lattice)
        if dp == 0:
            break
        step = (p - X) / dp
        z -= step
        if abs(step) < mpmath.mpf(2) ** (-lattice.precision_bits):
            break
    return z


def point_from_z(E: EllipticCurve, z, lattice: PeriodLattice):
    """(x, y) on the original model for a non-lattice z."""
    with mpmath.workprec(lattice.precision_bits + 40):
        P, dP = weierstrass_p(z, lattice)
        x = P - lattice.shift
        y = (dP - E.a1 * x - E.a3) / 2
        return x, y


def torus_coords(z, lattice: PeriodLattice):
    """(u, v) in [0, 1)^2 with z = u omega1 + v omega2 modulo the lattice."""
    with mpmath.workprec(lattice.precision_bits + 20):
        s = mpmath.mpc(z) / lattice.omega1
        tau = lattice.omega2 / lattice.omega1
        v = mpmath.im(s) / mpmath.im(tau)
        u = mpmath.re(s) - v * mpmath.re(tau)
        u -= mpmath.floor(u)
        v -= mpmath.floor(v)
        eps = mpmath.mpf(2) ** (-(lattice.precision_bits // 2))
        if u > 1 - eps:
            u = mpmath.mpf(0)
        if v > 1 - eps:
            v = mpmath.mpf(0)
        return u, v


def torsion_points_analytic(E: EllipticCurve, N: int, lattice: PeriodLattice):
    """x(z) for z = (a omega1 + b omega2)/N of exact order N, one per pair {z, -z}."""
    from math import gcd

    xs = []
    seen = set()
    with mpmath.workprec(lattice.precision_bits + 40):
        for a in range(N):
            for b in range(N):
                if (a, b) == (0, 0) or gcd(gcd(a, b), N) != 1:
                    continue
                key = min((a, b), ((-a) % N, (-b) % N))
                if key in seen:
                    continue
                seen.add(key)
                z = (a * lattice.omega1 + b * lattice.omega2) / N
                xs.append(weierstrass_p(z, lattice)[0] - lattice.shift)
    return xs
