from hypothesis import given
from hypothesis import strategies as st

from k3bn import DivClass, MukaiVector, mukai_pairing, simple_bound_holds
from k3bn.lattice import hyperbolic_plane

vectors = st.builds(
    MukaiVector,
    st.integers(-30, 30),
    st.tuples(st.integers(-30, 30), st.integers(-30, 30)).map(DivClass),
    st.integers(-30, 30),
)


def test_structure_sheaf_pairing(U):
    v = MukaiVector(1, U.zero(), 1)
    assert mukai_pairing(U, v, v) == -2


def test_point_pairing(U):
    v = MukaiVector(1, U.zero(), 1)
    w = MukaiVector(0, U.zero(), 1)
    assert mukai_pairing(U, v, w) == -1


def test_rank_two_example(U, ef):
    e, f = ef
    w = MukaiVector(2, -(e + f), 1)
    assert mukai_pairing(U, w, w) == -2
    assert simple_bound_holds(U, w)


def test_simple_bound_examples(U):
    assert simple_bound_holds(U, MukaiVector(1, U.zero(), 1))
    assert not simple_bound_holds(U, MukaiVector(2, U.zero(), 1))


@given(v=vectors)
def test_self_pairing_expansion(v):
    U = hyperbolic_plane()
    assert mukai_pairing(U, v, v) == U.square(v.c1) - 2 * v.r * v.s


@given(v=vectors)
def test_bound_iff_self_pairing(v):
    U = hyperbolic_plane()
    assert simple_bound_holds(U, v) == (mukai_pairing(U, v, v) >= -2)


@given(u=vectors, v=vectors, w=vectors)
def test_pairing_additive(u, v, w):
    U = hyperbolic_plane()
    assert mukai_pairing(U, u + v, w) == mukai_pairing(U, u, w) + mukai_pairing(U, v, w)


@given(u=vectors, w=vectors)
def test_pairing_symmetric(u, w):
    U = hyperbolic_plane()
    assert mukai_pairing(U, u, w) == mukai_pairing(U, w, u)
