import pytest

from petite_hauteur.elliptic import curve_from_coefficients

LEHMER = (1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1)


@pytest.fixture(scope="session")
def e37():
    """y^2 + y = x^3 - x, rank 1 generated by (0, 0)."""
    return curve_from_coefficients(0, 0, 1, -1, 0)


@pytest.fixture(scope="session")
def e389():
    """y^2 + y = x^3 + x^2 - 2x, rank 2."""
    return curve_from_coefficients(0, 1, 1, -2, 0)


@pytest.fixture(scope="session")
def e_cm():
    """y^2 = x^3 - 4x (square period lattice)."""
    return curve_from_coefficients(0, 0, 0, -4, 0)
