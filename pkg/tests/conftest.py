import pytest

from k3bn import DivClass, GramLattice, QuasiPolarization
from k3bn.lattice import hyperbolic_plane


@pytest.fixture
def U():
    return hyperbolic_plane()


@pytest.fixture
def ef(U):
    return U.basis(0), U.basis(1)


@pytest.fixture
def u_pol(U, ef):
    e, f = ef
    return QuasiPolarization(U, e + f)


def rank_one(two_g_minus_2: int) -> tuple[GramLattice, QuasiPolarization]:
    lat = GramLattice(((two_g_minus_2,),))
    return lat, QuasiPolarization(lat, DivClass((1,)))


def u_plus_root() -> tuple[GramLattice, tuple[DivClass, DivClass, DivClass]]:
    """U + <-2>: basis e, f, R with R a (-2)-class orthogonal to e and f."""
    lat = GramLattice(((0, 1, 0), (1, 0, 0), (0, 0, -2)))
    return lat, (lat.basis(0), lat.basis(1), lat.basis(2))


def u_plus_two_roots():
    lat = GramLattice(
        (
            (0, 1, 0, 0),
            (1, 0, 0, 0),
            (0, 0, -2, 0),
            (0, 0, 0, -2),
        )
    )
    return lat, (lat.basis(0), lat.basis(1), lat.basis(2), lat.basis(3))
