import itertools

import pytest
from hypothesis import given, settings, strategies as st

from partialbases.topology import (
    FinitePoset,
    SimplicialComplex,
    chain_add,
    chain_join,
    complex_join,
    face_poset,
    full_simplex,
    homology,
    is_spherical,
    octahedron,
    poset_join,
    push_forward,
    rp2_six_vertex,
    simplex_boundary,
    simply_connected,
    subdivision_chain,
    tag_chain,
    torus_seven_vertex,
)


@st.composite
def complexes(draw, max_vertices=8, max_facet=4):
    nv = draw(st.integers(1, max_vertices))
    facets = draw(
        st.lists(st.sets(st.integers(0, nv - 1), min_size=1, max_size=max_facet), max_size=10)
    )
    return SimplicialComplex(range(nv), facets)


def betti(K, top=4):
    h = homology(K)
    return [(h.rank(k), h.torsion(k)) for k in range(-1, top)]


class TestGolden:
    def test_sphere_boundaries(self):
        h = homology(simplex_boundary(2))
        assert h.rank(1) == 1 and h.nonzero_degrees() == [1]
        h = homology(simplex_boundary(3))
        assert h.rank(2) == 1 and h.nonzero_degrees() == [2]

    def test_octahedron(self):
        h = homology(octahedron())
        assert h.nonzero_degrees() == [2] and h.rank(2) == 1

    def test_rp2(self):
        h = homology(rp2_six_vertex())
        assert h.rank(1) == 0 and h.torsion(1) == (2,)
        assert h.is_zero(2) and h.is_zero(0)

    def test_torus(self):
        h = homology(torus_seven_vertex())
        assert h.rank(1) == 2 and h.rank(2) == 1 and h.torsion(1) == ()

    def test_simplex_and_empty(self):
        assert homology(full_simplex(3)).nonzero_degrees() == []
        empty = SimplicialComplex([])
        assert homology(empty).rank(-1) == 1

    def test_two_points(self):
        assert homology(SimplicialComplex(["p", "q"])).rank(0) == 1


class TestConstructions:
    def test_order_complex_of_chain(self):
        P = FinitePoset("abc", [("a", "b"), ("b", "c")])
        K = P.order_complex()
        assert K.facets() == [("a", "b", "c")]

    def test_face_poset(self):
        X = face_poset(simplex_boundary(2))
        assert len(X) == 6
        assert X.less((0,), (0, 1)) and not X.less((0,), (1, 2))
        assert X.dimension() == 1

    def test_joins(self):
        s0 = SimplicialComplex([0, 1])
        square = complex_join(s0, s0)
        assert len(square.facets()) == 4 and homology(square).rank(1) == 1
        P = poset_join(FinitePoset([0, 1]), FinitePoset([0, 1]))
        assert P.homology().rank(1) == 1

    def test_links(self):
        K = octahedron()
        L = K.link([0])
        assert len(L.vertices) == 4 and homology(L).rank(1) == 1
        P = FinitePoset("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
        assert set(P.link("b").elements) == {"a", "c"}
        assert set(P.upper("a").elements) == {"b", "c", "d"}
        assert set(P.lower("c").elements) == {"a", "b"}

    def test_opposite(self):
        P = FinitePoset("abc", [("a", "b"), ("a", "c")])
        Q = P.opposite()
        assert Q.less("b", "a") and not Q.less("a", "b")
        assert P.height("b") == 1 and Q.height("a") == 1

    def test_cycle_rejected(self):
        with pytest.raises(ValueError):
            FinitePoset("ab", [("a", "b"), ("b", "a")])

    def test_json_round_trip(self):
        K = rp2_six_vertex()
        assert SimplicialComplex.from_json(K.to_json()).f_vector() == K.f_vector()
        P = face_poset(simplex_boundary(2))
        Q = FinitePoset.from_json(P.to_json())
        assert sorted(map(repr, Q.relations())) == sorted(map(repr, P.relations()))


class TestSpherical:
    @pytest.mark.parametrize(
        "K,n,expected",
        [
            (octahedron(), 2, "yes"),
            (simplex_boundary(3), 2, "yes"),
            (simplex_boundary(2), 1, "yes"),
            (rp2_six_vertex(), 2, "no"),
            (torus_seven_vertex(), 2, "no"),
            (SimplicialComplex(range(4), [(0, 1), (2, 3)]), 1, "no"),
        ],
    )
    def test_examples(self, K, n, expected):
        assert is_spherical(K, n) == expected

    def test_simply_connected(self):
        assert simply_connected(octahedron()) is True
        assert simply_connected(simplex_boundary(3)) is True
        # a circle is never certified; the search only proves triviality
        assert simply_connected(simplex_boundary(2)) is not True


class TestChainOperators:
    def test_subdivision_edge(self):
        lam = subdivision_chain({("u", "v"): 1})
        assert lam == {(("u",), ("u", "v")): 1, (("v",), ("u", "v")): -1}

    def test_subdivision_is_chain_map(self):
        K = simplex_boundary(2)
        Kp = face_poset(K).order_complex()
        for k in range(0, 2):
            for s in K.simplices(k):
                c = {s: 1}
                assert subdivision_chain(K.boundary(c)) == Kp.boundary(subdivision_chain(c))

    def test_subdivision_preserves_fundamental_class(self):
        K = octahedron()
        z = K.cycle_basis(2)[0]
        Kp = face_poset(K).order_complex()
        lz = subdivision_chain(z)
        assert not Kp.boundary(lz) and lz

    def test_push_forward_degenerate(self):
        K = simplex_boundary(2)
        out = push_forward({(0, 1): 1, (1, 2): 1}, lambda v: 0 if v < 2 else 2, K.orient)
        assert out == {(0, 2): 1}


@settings(max_examples=200, deadline=None)
@given(complexes())
def test_d_squared_and_euler(K):
    cc = K.chain_complex()
    assert cc.d_squared_zero()
    h = homology(K)
    assert K.reduced_euler_characteristic() == sum((-1) ** k * h.rank(k) for k in range(-1, K.dimension + 1))


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6, max_facet=3))
def test_subdivision_invariance(K):
    assert betti(K) == betti(face_poset(K).order_complex())


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=6, max_facet=3))
def test_opposite_poset_same_homology(K):
    P = face_poset(K)
    assert P.homology() == P.opposite().homology()


@settings(max_examples=40, deadline=None)
@given(complexes(max_vertices=5, max_facet=3), complexes(max_vertices=4, max_facet=2))
def test_join_leibniz(K1, K2):
    J = complex_join(K1, K2)
    for s, t in itertools.product(K1.simplices(), K2.simplices()):
        a, b = {s: 1}, {t: 1}
        lhs = J.boundary(chain_join(tag_chain(a, 0), tag_chain(b, 1)))
        sign = (-1) ** len(s)
        rhs = chain_add(
            chain_join(tag_chain(K1.boundary(a), 0), tag_chain(b, 1)),
            chain_join(tag_chain(a, 0), tag_chain(K2.boundary(b), 1)),
            coefs=[1, sign],
        )
        assert lhs == rhs
