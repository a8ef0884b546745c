"""Integer polynomials and certified complex roots.

An algebraic number is represented by its primitive minimal polynomial and
the multiset of its complex roots, which is the computational stand-in for a
Galois orbit.  Roots come from a simultaneous Aberth-Ehrlich iteration run
first in double precision (log-scaled so that huge coefficients do not
overflow) and then polished in MPFR arithmetic to the requested precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import gmpy2
import mpmath
import numpy as np

from . import _intpoly as ip
from .errors import ConvergenceFailure, InvalidPolynomial, ParseError, RequiresSquarefree

DEFAULT_PRECISION = 256
SIEVE_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73)


@dataclass(frozen=True)
class IntPolynomial:
    """Primitive integer polynomial, coefficients in ascending degree order."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] == 0:
            raise InvalidPolynomial("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x):
        return ip.evaluate(self.coeffs, x)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(ip.derivative(self.coeffs) or (0,)) if self.degree else IntPolynomial((1,))

    def reciprocal(self) -> "IntPolynomial":
        """x^d p(1/x), normalized."""
        return normalize_primitive(ip.reciprocal(self.coeffs))

    def negate_variable(self) -> "IntPolynomial":
        """p(-x), normalized."""
        return normalize_primitive(ip.negate_variable(self.coeffs))

    def one_norm(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
            else:
                coef = f"{c:+d}" + ("*" if mono else "")
            terms.append(coef + mono)
        s = " ".join(terms)
        return s[1:] if s.startswith("+") else s


def normalize_primitive(coeffs: Iterable[int]) -> IntPolynomial:
    """Content-free, positive-leading form; zero roots (trailing zeros) are kept."""
    raw = ip.trim(int(c) for c in coeffs)
    if not raw:
        raise InvalidPolynomial("the zero polynomial has no roots to speak of")
    return IntPolynomial(ip.primitive(raw))


def parse_polynomials(text: str) -> list:
    """Parse the line format: ascending whitespace-separated integers, '#' comments."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            coeffs = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        out.append(normalize_primitive(coeffs))
    return out


def format_polynomial(p: IntPolynomial) -> str:
    return " ".join(str(c) for c in p.coeffs)


# ---------------------------------------------------------------------------
# squarefreeness and irreducibility


def _squarefree_mod(coeffs, p):
    f = ip.mod_p(coeffs, p)
    if f[-1] == 0:
        return None
    g = ip.gcd_p(f, ip.derivative_p(f, p), p)
    return len(g) == 1


def is_squarefree(p: IntPolynomial) -> bool:
    """True iff gcd(p, p') is constant over Q.

    A squarefree reduction modulo a prime not dividing the leading
    coefficient certifies squarefreeness over Q; otherwise fall back to the
    exact primitive remainder sequence.
    """
    if p.degree < 1:
        raise InvalidPolynomial("degree must be at least 1")
    if p.degree == 1:
        return True
    for ell in (1000003, 1000033, 1000037):
        if _squarefree_mod(p.coeffs, ell):
            return True
    return len(ip.gcd_poly(p.coeffs, ip.derivative(p.coeffs))) == 1


class Irreducibility(enum.Enum):
    IRREDUCIBLE = "Irreducible"
    REDUCIBLE = "Reducible"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: Irreducibility
    witness: object = None

    def __str__(self):
        return self.status.value


def _small_divisors(n, limit=10**10):
    n = abs(n)
    if n == 0 or n > limit:
        return None
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_root(coeffs):
    """A primitive linear factor of coeffs, or None; ``complete`` says whether the search was exhaustive."""
    if coeffs[0] == 0:
        return (0, 1), True
    num = _small_divisors(coeffs[0])
    den = _small_divisors(coeffs[-1])
    if num is None or den is None:
        return None, False
    d = len(coeffs) - 1
    for q in den:
        for r in num:
            for s in (r, -r):
                # q x - s divides iff q^d f(s/q) == 0
                acc, qpow = coeffs[d], 1
                for c in reversed(coeffs[:d]):
                    qpow *= q
                    acc = acc * s + c * qpow
                if acc == 0:
                    return ip.primitive((-s, q)), True
    return None, True


def _cyclotomic(m):
    # Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}
    num, den = (1,), (1,)
    for d in range(1, m + 1):
        if m % d:
            continue
        mu = _mobius(m // d)
        poly = (-1,) + (0,) * (d - 1) + (1,)
        if mu == 1:
            num = ip.mul(num, poly)
        elif mu == -1:
            den = ip.mul(den, poly)
    return ip.exact_quotient(num, den)


def _mobius(n):
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def _cyclotomic_order(coeffs):
    """m with coeffs == Phi_m, or None."""
    d = len(coeffs) - 1
    if coeffs[-1] != 1 or abs(coeffs[0]) != 1:
        return None
    # phi(m) = d forces m <= 2 d^2 (crudely) and in practice m is small
    for m in range(1, max(7, 6 * d) + 1):
        if _totient(m) == d and _cyclotomic(m) == tuple(coeffs):
            return m
    return None


def _totient(m):
    result, n, k = m, m, 2
    while k * k <= n:
        if n % k == 0:
            while n % k == 0:
                n //= k
            result -= result // k
        k += 1
    if n > 1:
        result -= result // n
    return result


def _cyclotomic_factor(coeffs, max_order=60):
    d = len(coeffs) - 1
    ell = 1000003
    f = ip.mod_p(coeffs, ell)
    for m in range(1, max_order + 1):
        phi = _cyclotomic(m)
        if len(phi) - 1 >= d:
            continue
        if len(ip.polymod_p(f, ip.mod_p(phi, ell), ell)) == 0:
            try:
                ip.exact_quotient(coeffs, phi)
            except ArithmeticError:
                continue
            return phi
    return None


def irreducibility_heuristic(p: IntPolynomial, prime_budget: int = 5) -> IrreducibilityVerdict:
    """Factor-degree sieve over good primes plus exact small-factor searches.

    The attainable degrees of a rational factor must be subset sums of the
    factor degrees modulo every good prime; if the intersection over the
    sieved primes is {0, deg p}, p is irreducible.
    """
    coeffs = p.coeffs
    d = p.degree
    if d == 1:
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE)
    root, complete = _rational_root(coeffs)
    if root is not None:
        return IrreducibilityVerdict(Irreducibility.REDUCIBLE, IntPolynomial(root))
    if complete and d <= 3:
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, "no rational root")
    order = _cyclotomic_order(coeffs)
    if order is not None:
        # Phi_12 and friends are reducible modulo every prime, so the sieve alone cannot see this
        return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, f"cyclotomic polynomial Phi_{order}")
    phi = _cyclotomic_factor(coeffs)
    if phi is not None:
        return IrreducibilityVerdict(Irreducibility.REDUCIBLE, IntPolynomial(phi))
    full = (1 << d) - 1 | (1 << d)
    attainable = full
    evidence = {}
    for ell in SIEVE_PRIMES:
        if len(evidence) >= prime_budget:
            break
        if coeffs[-1] % ell == 0 or not _squarefree_mod(coeffs, ell):
            continue
        degs = ip.distinct_degree_factorization(ip.mod_p(coeffs, ell), ell)
        evidence[ell] = tuple(degs)
        sums = 1
        for e in degs:
            sums |= sums << e
        attainable &= sums
        if attainable == (1 | 1 << d):
            return IrreducibilityVerdict(Irreducibility.IRREDUCIBLE, evidence)
    return IrreducibilityVerdict(Irreducibility.UNKNOWN, evidence)


def cauchy_bound(p: IntPolynomial) -> float:
    if p.degree < 1:
        raise InvalidPolynomial("degree must be at least 1")
    lead = abs(p.leading)
    top = max(abs(c) for c in p.coeffs[:-1])
    return 1.0 + top / lead


# ---------------------------------------------------------------------------
# Aberth-Ehrlich root finding


@dataclass(frozen=True)
class ComplexRootSet:
    roots: tuple
    residuals: tuple
    precision_bits: int
    poly: IntPolynomial = field(repr=False, default=None)

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def as_array(self) -> np.ndarray:
        return np.array([complex(z) for z in self.roots], dtype=np.complex128)


def _newton_polygon_start(log_abs, support, degree, offset=0.4):
    """Initial iterates on circles whose radii come from the upper convex hull of (i, log|a_i|)."""
    pts = list(zip(support, log_abs))
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    starts = []
    placed = 0
    for (i0, y0), (i1, y1) in zip(hull, hull[1:]):
        n = i1 - i0
        radius = math.exp((y0 - y1) / n)
        for j in range(n):
            angle = 2 * math.pi * j / n + 2 * math.pi * placed / degree + offset
            starts.append(radius * complex(math.cos(angle), math.sin(angle)))
        placed += n
    return np.array(starts, dtype=np.complex128)


def _log_scaled_newton(z, log_abs, sign, support):
    """Newton corrections p/p' and a cancellation estimate, evaluated in log scale."""
    logz = np.log(z)
    expo = log_abs[None, :] + support[None, :] * logz[:, None]
    top = expo.real.max(axis=1)
    terms = sign[None, :] * np.exp(expo - top[:, None])
    s0 = terms.sum(axis=1)
    s1 = (terms * support[None, :]).sum(axis=1)
    mag = np.abs(terms).sum(axis=1)
    safe = np.where(s1 == 0, 1e-300, s1)
    corr = z * s0 / safe
    cond = np.log2(np.maximum(mag, 1e-300) * np.maximum(np.abs(z), 1e-300) / np.abs(safe))
    return corr, cond


def _aberth_sums(z):
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    return inv.sum(axis=1)


def _float_phase(coeffs, max_iter=600):
    support = np.array([i for i, c in enumerate(coeffs) if c], dtype=np.float64)
    log_abs = np.array([math.log(abs(c)) for c in coeffs if c], dtype=np.float64)
    sign = np.array([1.0 if c > 0 else -1.0 for c in coeffs if c], dtype=np.float64)
    degree = len(coeffs) - 1
    z = _newton_polygon_start(log_abs.tolist(), support.astype(int).tolist(), degree)
    cond = np.zeros(degree)
    done = np.zeros(degree, dtype=bool)
    for _ in range(max_iter):
        corr, cond = _log_scaled_newton(z, log_abs, sign, support)
        w = corr / (1.0 - corr * _aberth_sums(z))
        w = np.where(np.isfinite(w), w, 0.0)
        w[done] = 0.0
        z = z - w
        # stop once the correction is inside the double-precision evaluation noise
        floor = np.maximum(1e-14, np.exp2(np.minimum(cond, 60.0) - 50.0))
        done |= np.abs(w) <= floor * np.maximum(np.abs(z), 1e-30)
        if done.all():
            break
    corr, cond = _log_scaled_newton(z, log_abs, sign, support)
    return z, cond


def _to_mpc(z):
    def conv(x):
        m, e = x.as_mantissa_exp()
        return mpmath.mpf((int(m), int(e)))

    return mpmath.mpc(conv(z.real), conv(z.imag))


def _from_mpf(x):
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    value = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
    return -value if sign else value


def _horner(mcoeffs, z):
    val = mcoeffs[-1]
    der = gmpy2.mpc(0)
    for c in reversed(mcoeffs[:-1]):
        der = der * z + val
        val = val * z + c
    return val, der


def complex_roots(p: IntPolynomial, precision_bits: int = DEFAULT_PRECISION,
                  max_sweeps: int = 40, check_squarefree: bool = True,
                  initial=None) -> ComplexRootSet:
    """All complex roots of a squarefree integer polynomial.

    Iterates until the largest Aberth correction is below
    2^(-precision_bits/2), then certifies every residual |p(z)| against
    2^(-precision_bits/4) times the coefficient 1-norm.  For |z| > 1 the same
    test is applied to x^d p(1/x) at 1/z, i.e. the bound picks up |z|^d.

    ``initial`` optionally supplies d starting approximations (any numbers
    mpmath accepts); the double-precision phase is then skipped.  Useful when
    the roots are known analytically but the polynomial is too ill-conditioned
    for double precision.
    """
    if p.degree < 1:
        raise InvalidPolynomial("degree must be at least 1")
    if check_squarefree and not is_squarefree(p):
        raise RequiresSquarefree(f"{p} has repeated roots")
    coeffs = p.coeffs
    zero_roots = 0
    while coeffs[zero_roots] == 0:
        zero_roots += 1
    core = coeffs[zero_roots:]
    target = gmpy2.mpfr(2) ** (-(precision_bits // 2))

    roots = []
    if initial is not None:
        if len(initial) != p.degree:
            raise InvalidPolynomial(f"expected {p.degree} initial approximations, got {len(initial)}")
        wp = 2 * precision_bits + 64
        with gmpy2.context(gmpy2.get_context(), precision=wp):
            seeds = [gmpy2.mpc(_from_mpf(mpmath.re(v)), _from_mpf(mpmath.im(v))) for v in initial]
        roots = _polish(coeffs, seeds, wp, target, max_sweeps)
        zero_roots = 0
    elif len(core) > 1:
        approx, cond = _float_phase(core)
        extra = int(max(0.0, float(np.nanmax(cond)))) if len(cond) else 0
        wp = precision_bits + 64 + min(extra, 4 * precision_bits)
        roots = _polish(core, approx, wp, target, max_sweeps)
    with gmpy2.context(gmpy2.get_context(), precision=precision_bits + 64):
        roots = [gmpy2.mpc(0)] * zero_roots + roots

    with gmpy2.context(gmpy2.get_context(), precision=precision_bits + 128):
        mco = [gmpy2.mpc(c) for c in coeffs]
        residuals = [abs(_horner(mco, z)[0]) for z in roots]
        tol = gmpy2.mpfr(2) ** (-(precision_bits / 4)) * p.one_norm()
        # outside the unit disk the test is applied to the reciprocal polynomial at 1/z
        d = p.degree
        bad = [r for r, z in zip(residuals, roots) if r > tol * max(1, abs(z)) ** d]
        with mpmath.workprec(precision_bits + 64):
            out = [_to_mpc(z) for z in roots]
        if bad:
            raise ConvergenceFailure(
                f"{len(bad)} residual(s) above tolerance for degree {p.degree}", best=out)
        _check_vieta(coeffs, roots, precision_bits, out)
    order = sorted(range(len(out)), key=lambda k: (out[k].real, out[k].imag))
    return ComplexRootSet(
        roots=tuple(out[k] for k in order),
        residuals=tuple(mpmath.mpf(str(residuals[k])) for k in order),
        precision_bits=precision_bits,
        poly=p,
    )


def _polish(core, approx, wp, target, max_sweeps):
    z_float = np.array([complex(v) for v in approx], dtype=np.complex128)
    best = None
    with gmpy2.context(gmpy2.get_context(), precision=wp):
        mco = [gmpy2.mpc(c) for c in core]
        z = [v if isinstance(v, type(gmpy2.mpc(0))) else gmpy2.mpc(complex(v)) for v in approx]
        last = None
        for _ in range(max_sweeps):
            sums = _aberth_sums(z_float)
            biggest = gmpy2.mpfr(0)
            for k in range(len(z)):
                val, der = _horner(mco, z[k])
                if der == 0:
                    continue
                corr = val / der
                w = corr / (1 - corr * gmpy2.mpc(complex(sums[k])))
                z[k] -= w
                a = abs(w)
                if a > biggest:
                    biggest = a
            z_float = np.array([complex(v) for v in z], dtype=np.complex128)
            best = z
            if biggest < target:
                return z
            if last is not None and biggest > last / 2 and biggest < gmpy2.mpfr(2) ** -40:
                # rounding floor reached before the target: widen the working precision
                wp += 128
                gmpy2.get_context().precision = wp
                mco = [gmpy2.mpc(c) for c in core]
                z = [gmpy2.mpc(v) for v in z]
            last = biggest
    with mpmath.workprec(wp):
        best = [_to_mpc(v) for v in best]
    raise ConvergenceFailure("Aberth polishing did not reach the target correction", best=best)


def _check_vieta(coeffs, roots, precision_bits, out):
    d = len(coeffs) - 1
    tol = gmpy2.mpfr(2) ** (-(precision_bits / 4))
    total = sum(roots, gmpy2.mpc(0))
    expected = gmpy2.mpfr(-coeffs[d - 1]) / coeffs[d]
    if abs(total - expected) > d * tol * max(1, abs(expected)):
        raise ConvergenceFailure("root sum disagrees with -a_{d-1}/a_d", best=out)
    prod = gmpy2.mpc(1)
    for z in roots:
        prod *= z
    expected = gmpy2.mpfr((-1) ** d * coeffs[0]) / coeffs[d]
    if abs(prod - expected) > d * tol * max(1, abs(expected)):
        raise ConvergenceFailure("root product disagrees with (-1)^d a_0/a_d", best=out)
