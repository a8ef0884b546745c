"""Long Weierstrass curves over Z and their exact rational points."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import ParseError, PointNotOnCurve, SingularCurve


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int = field(init=False, repr=False)
    b4: int = field(init=False, repr=False)
    b6: int = field(init=False, repr=False)
    b8: int = field(init=False, repr=False)
    c4: int = field(init=False, repr=False)
    c6: int = field(init=False, repr=False)
    discriminant: int = field(init=False, repr=False)

    def __post_init__(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        for name, value in (("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8),
                            ("c4", c4), ("c6", c6), ("discriminant", disc)):
            object.__setattr__(self, name, value)

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def two_torsion_cubic(self):
        """Coefficients (ascending) of 4x^3 + b2 x^2 + 2 b4 x + b6 = (2y + a1 x + a3)^2."""
        return (self.b6, 2 * self.b4, self.b2, 4)

    def contains(self, P: "RationalPoint") -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x ** 3 + a2 * x * x + a4 * x + a6

    def __str__(self):
        return ",".join(str(a) for a in self.ainvs)


def curve_from_coefficients(a1, a2, a3, a4, a6) -> EllipticCurve:
    E = EllipticCurve(int(a1), int(a2), int(a3), int(a4), int(a6))
    if E.discriminant == 0:
        raise SingularCurve(f"[{E}] has discriminant 0")
    return E


@dataclass(frozen=True)
class RationalPoint:
    """A point of E(Q); ``x is None`` encodes the point at infinity."""

    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        if self.is_infinity:
            return "inf"
        return f"{_frac(self.x)},{_frac(self.y)}"


INFINITY = RationalPoint()


def point(x, y) -> RationalPoint:
    return RationalPoint(Fraction(x), Fraction(y))


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _require(E, *points):
    for P in points:
        if not E.contains(P):
            raise PointNotOnCurve(f"{P} is not on [{E}]")


def neg(E: EllipticCurve, P: RationalPoint) -> RationalPoint:
    _require(E, P)
    if P.is_infinity:
        return P
    return RationalPoint(P.x, -P.y - E.a1 * P.x - E.a3)


def _add(E, P, Q):
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-x1 ** 3 + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return RationalPoint(x3, y3)


def add(E: EllipticCurve, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    _require(E, P, Q)
    return _add(E, P, Q)


def sub(E: EllipticCurve, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    return add(E, P, neg(E, Q))


def mul(E: EllipticCurve, n: int, P: RationalPoint) -> RationalPoint:
    """[n]P by double-and-add."""
    _require(E, P)
    if n < 0:
        return neg(E, mul(E, -n, P))
    result, base = INFINITY, P
    while n:
        if n & 1:
            result = _add(E, result, base)
        n >>= 1
        if n:
            base = _add(E, base, base)
    return result


def linear_combination(E: EllipticCurve, coeffs, points) -> RationalPoint:
    total = INFINITY
    for c, P in zip(coeffs, points):
        total = _add(E, total, mul(E, c, P))
    return total


# ---------------------------------------------------------------------------
# text formats


def parse_curve(text: str) -> EllipticCurve:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 5:
        raise ParseError(f"curve must be 'a1,a2,a3,a4,a6', got {text!r}")
    try:
        return curve_from_coefficients(*(int(p) for p in parts))
    except ValueError as exc:
        if isinstance(exc, SingularCurve):
            raise
        raise ParseError(f"bad curve coefficients {text!r}") from None


def _parse_rational(tok: str) -> Fraction:
    tok = tok.strip()
    try:
        if "/" in tok:
            num, den = tok.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}") from None


def parse_point(text: str) -> RationalPoint:
    text = text.strip()
    if text.lower() == "inf":
        return INFINITY
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"point must be 'x_num/x_den,y_num/y_den' or 'inf', got {text!r}")
    return RationalPoint(_parse_rational(parts[0]), _parse_rational(parts[1]))
