"""Galois-orbit measures of small points and their equidistribution diagnostics.

Angles and torus coordinates are measured in turns, so every measure lives on
[0, 1)^d.  Characters are integer vectors k acting by x -> exp(2 pi i k.x).
"""

from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np

from .elliptic.analytic import elliptic_log, periods, torus_coords
from .elliptic.curve import EllipticCurve
from .elliptic.division import torsion_x_orbit
from .errors import InsufficientSampling
from .gm_heights import (
    AlgebraicOrbit,
    ReducibleOrbitWarning,
    chebyshev_radial_check,
    make_orbit,
    weil_height,
)
from .polyroots import DEFAULT_PRECISION

RADIAL_GRID = (0.5, 0.1, 0.02)
SUBGROUP_THRESHOLD = 1 - 1e-9


class SupportKind(enum.Enum):
    CIRCLE = "Circle"
    TORUS2 = "Torus2"
    PRODUCT = "ProductCircleTorus"  # coordinates (u, v, theta)


_DIMENSION = {SupportKind.CIRCLE: 1, SupportKind.TORUS2: 2, SupportKind.PRODUCT: 3}


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniform probability measure on finitely many atoms of [0, 1)^d."""

    support_kind: SupportKind
    atoms: np.ndarray
    radii: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=np.float64)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        if len(atoms) < 1:
            raise ValueError("a measure needs at least one atom")
        if atoms.shape[1] != _DIMENSION[self.support_kind]:
            raise ValueError(f"{self.support_kind.value} atoms need {_DIMENSION[self.support_kind]} coordinates")
        atoms = np.mod(atoms, 1.0)
        atoms[atoms >= 1.0] = 0.0
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)

    def __len__(self):
        return len(self.atoms)


@dataclass(frozen=True)
class WeylReport:
    max_char: int
    values: dict
    max_modulus: float
    mixed_max: Optional[float] = None
    certificate: Optional[tuple] = None  # a character with modulus 1: the orbit sits in its kernel

    def as_pairs(self):
        return [(k, v) for k, v in self.values.items()]


# ---------------------------------------------------------------------------
# generators


def gen_kummer(a: int, n: int, precision_bits: int = DEFAULT_PRECISION) -> AlgebraicOrbit:
    """Orbit of x^n - a; its height is (log a)/n when the polynomial is irreducible."""
    if a < 2 or n < 1:
        raise ValueError("need a >= 2 and n >= 1")
    return make_orbit((-a,) + (0,) * (n - 1) + (1,), precision_bits)


def gen_trinomial(n: int, precision_bits: int = DEFAULT_PRECISION) -> AlgebraicOrbit:
    """Orbit of x^n - x - 1."""
    if n < 2:
        raise ValueError("need n >= 2")
    return make_orbit((-1, -1) + (0,) * (n - 2) + (1,), precision_bits)


def gen_cyclotomic(N: int) -> EmpiricalMeasure:
    """Primitive N-th roots of unity, as angles k/N."""
    if N < 1:
        raise ValueError("need N >= 1")
    ks = [k for k in range(N) if math.gcd(k, N) == 1]
    return EmpiricalMeasure(SupportKind.CIRCLE, np.array(ks, dtype=np.float64) / N)


def coupled_cyclotomic(N: int, M: int) -> EmpiricalMeasure:
    """Galois orbit of (zeta_N, zeta_M): images of the units modulo lcm(N, M)."""
    if N < 2 or M < 2:
        raise ValueError("need N, M >= 2")
    L = N * M // math.gcd(N, M)
    pairs = sorted({(a % N, a % M) for a in range(L) if math.gcd(a, L) == 1})
    atoms = np.array([(j / N, k / M) for j, k in pairs], dtype=np.float64)
    return EmpiricalMeasure(SupportKind.TORUS2, atoms)


def orbit_to_measure(orbit: AlgebraicOrbit) -> EmpiricalMeasure:
    """Angles arg(z)/2pi of the nonzero conjugates; moduli kept in ``radii``."""
    angles, radii = [], []
    zeros = 0
    for z in orbit.roots:
        if z == 0:
            zeros += 1
            continue
        angles.append(float(mpmath.arg(z)) / (2 * math.pi))
        radii.append(float(abs(z)))
    if zeros:
        warnings.warn(f"{zeros} root(s) at 0 dropped: not points of Gm", RuntimeWarning, stacklevel=2)
    return EmpiricalMeasure(SupportKind.CIRCLE, np.array(angles), np.array(radii))


def torsion_measure(E: EllipticCurve, N: int, precision_bits: int = DEFAULT_PRECISION) -> EmpiricalMeasure:
    """Points of exact order N as torus coordinates (u, v); each x-root gives the pair +-P."""
    if N < 2:
        raise ValueError("need N >= 2")
    lattice = periods(E, precision_bits)
    roots = torsion_x_orbit(E, N, precision_bits)
    atoms = []
    with mpmath.workprec(precision_bits + 40):
        for x in roots:
            Y = mpmath.sqrt(4 * x ** 3 + E.b2 * x ** 2 + 2 * E.b4 * x + E.b6)
            y = (Y - E.a1 * x - E.a3) / 2
            z = elliptic_log(E, (x, y), lattice)
            u, v = torus_coords(z, lattice)
            atoms.append((float(u), float(v)))
            if N != 2:
                u2, v2 = torus_coords(-z, lattice)
                atoms.append((float(u2), float(v2)))
    atoms.sort()
    return EmpiricalMeasure(SupportKind.TORUS2, np.array(atoms))


def product_measure(torus: EmpiricalMeasure, circle: EmpiricalMeasure) -> EmpiricalMeasure:
    """All pairs (torus atom, circle atom), the surrogate for joint orbits on E x Gm."""
    if torus.support_kind is not SupportKind.TORUS2 or circle.support_kind is not SupportKind.CIRCLE:
        raise ValueError("expected a Torus2 and a Circle measure")
    a = np.repeat(torus.atoms, len(circle), axis=0)
    b = np.tile(circle.atoms, (len(torus), 1))
    return EmpiricalMeasure(SupportKind.PRODUCT, np.hstack([a, b]))


# ---------------------------------------------------------------------------
# character sums and discrepancy


def _characters(dim: int, K: int):
    """One representative per pair {k, -k} of nonzero vectors with |k|_inf <= K."""
    if dim == 1:
        return [(k,) for k in range(1, K + 1)]
    out = []
    for k in itertools.product(range(-K, K + 1), repeat=dim):
        first = next((c for c in k if c), 0)
        if first > 0:
            out.append(k)
    return out


def _moduli(atoms: np.ndarray, chars) -> np.ndarray:
    C = np.array(chars, dtype=np.float64)
    # chunk over atoms to bound memory for product measures
    total = np.zeros(len(C), dtype=np.complex128)
    for start in range(0, len(atoms), 8192):
        phase = atoms[start:start + 8192] @ C.T
        total += np.exp(2j * np.pi * phase).sum(axis=0)
    return np.minimum(np.abs(total) / len(atoms), 1.0)


def _key(k):
    return k[0] if len(k) == 1 else tuple(int(c) for c in k)


def weyl_sums(m: EmpiricalMeasure, K: int) -> WeylReport:
    """|mean of exp(2 pi i k.x)| over the atoms for every nonzero character up to sign."""
    if K < 1:
        raise ValueError("K must be at least 1")
    chars = _characters(m.atoms.shape[1], K)
    mods = _moduli(m.atoms, chars)
    values = {_key(k): float(v) for k, v in zip(chars, mods)}
    return WeylReport(K, values, float(mods.max()))


def independence_experiment(m: EmpiricalMeasure, K: int) -> WeylReport:
    """Joint character sums on a two-factor measure.

    Besides the overall maximum this reports the maximum over mixed characters
    (nonzero on both factors) and, when some character has modulus 1, that
    character as a certificate that the orbit lies in a proper subgroup.
    """
    if m.support_kind is SupportKind.CIRCLE:
        raise ValueError("independence needs a product measure")
    report = weyl_sums(m, K)
    split = 1 if m.support_kind is SupportKind.TORUS2 else 2
    mixed = [v for k, v in report.values.items() if any(k[:split]) and any(k[split:])]
    certificate = None
    for k, v in report.values.items():
        if v >= SUBGROUP_THRESHOLD:
            certificate = k
            break
    return WeylReport(report.max_char, report.values, report.max_modulus,
                      max(mixed) if mixed else 0.0, certificate)


def star_discrepancy_circle(m: EmpiricalMeasure) -> float:
    """sup over arcs I of |m(I) - |I||, from the sorted angles.

    With x_(1) <= ... <= x_(N): D = 1/N + max(x_(i) - i/N) - min(x_(i) - i/N).
    """
    if m.support_kind is not SupportKind.CIRCLE:
        raise ValueError("discrepancy is defined here for circle measures")
    x = np.sort(m.atoms[:, 0])
    N = len(x)
    diff = x - np.arange(1, N + 1) / N
    return float(min(1.0, 1.0 / N + diff.max() - diff.min()))


# ---------------------------------------------------------------------------
# harmonic extension off the unit circle


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients c_n for n = -N..N, stored at index n + N."""

    coefficients: np.ndarray
    N: int

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.N:
            return 0j
        return complex(self.coefficients[n + self.N])

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)


def poisson_extension(f_samples, N: int) -> FourierSeries:
    """Fourier coefficients |n| <= N from equally spaced samples f(2 pi j / len)."""
    f = np.asarray(f_samples, dtype=np.float64)
    if len(f) <= 2 * N:
        raise InsufficientSampling(f"{len(f)} samples cannot resolve |n| <= {N} without aliasing")
    c = np.fft.fft(f) / len(f)
    coeffs = np.array([c[n % len(f)] for n in range(-N, N + 1)], dtype=np.complex128)
    return FourierSeries(coeffs, N)


def poisson_eval(series: FourierSeries, r: float, theta: float) -> float:
    """Sum of c_n min(r, 1/r)^|n| e^(i n theta): harmonic inside and outside the circle."""
    if r <= 0:
        raise ValueError("r must be positive")
    rho = min(r, 1.0 / r)
    n = series.indices
    return float(np.real(np.sum(series.coefficients * rho ** np.abs(n) * np.exp(1j * n * theta))))


def poisson_mass_coefficients(series: FourierSeries) -> np.ndarray:
    """-|n| c_n, the Fourier coefficients of the Laplacian mass on the unit circle."""
    return -np.abs(series.indices) * series.coefficients


# ---------------------------------------------------------------------------
# reports


def _radial(orbit):
    out = []
    for alpha in RADIAL_GRID:
        chk = chebyshev_radial_check(orbit, alpha)
        out.append((alpha, chk.count_far, chk.bound))
    return out


def orbit_report(family: str, params: dict, orbit: AlgebraicOrbit, K: int) -> dict:
    m = orbit_to_measure(orbit)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ReducibleOrbitWarning)
        h = float(weil_height(orbit).total)
    return {
        "family": family,
        "params": params,
        "height": h,
        "weyl": weyl_sums(m, K).as_pairs(),
        "discrepancy": star_discrepancy_circle(m),
        "radial": _radial(orbit),
        "atoms": len(m),
        "irreducibility": orbit.irreducibility.status.value,
    }


def measure_report(family: str, params: dict, m: EmpiricalMeasure, K: int, height=0.0) -> dict:
    if m.support_kind is SupportKind.CIRCLE:
        rep = weyl_sums(m, K)
        disc = star_discrepancy_circle(m)
    else:
        rep = independence_experiment(m, K)
        disc = None
    out = {
        "family": family,
        "params": params,
        "height": height,
        "weyl": rep.as_pairs(),
        "discrepancy": disc,
        "radial": [],
        "atoms": len(m),
        "max_modulus": rep.max_modulus,
    }
    if rep.mixed_max is not None:
        out["mixed_max"] = rep.mixed_max
        out["subgroup_certificate"] = rep.certificate
    return out
