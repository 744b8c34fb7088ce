import random

import pytest

from partialbases.instances import (
    constant_map,
    four_points_two_fibers,
    generate_instances,
    graph_over_two_chain,
    identity_instance,
    polygon,
    random_poset_map,
    run_instance,
    run_suite,
)
from partialbases.quillen import (
    PosetMap,
    PreconditionError,
    _remark_identity,
    check_link_epimorphism,
    check_link_monotone,
    check_spherical_map,
    check_union_monotone,
    face_poset_map,
    fiber,
    mapping_cylinder,
    theorem47_basis,
    theorem47_decomposition,
    verify_basis_against_snf,
)
from partialbases.topology import FinitePoset, SimplicialComplex, face_poset, octahedron, simplex_boundary


class TestPosetMaps:
    def test_order_violation(self):
        X = FinitePoset("ab", [("a", "b")])
        Y = FinitePoset("uv", [("u", "v")])
        with pytest.raises(ValueError):
            PosetMap(X, Y, {"a": "v", "b": "u"})

    def test_missing_value(self):
        with pytest.raises(ValueError):
            PosetMap(FinitePoset("ab"), FinitePoset("u"), {"a": "u"})

    def test_fiber_and_cylinder(self):
        X = FinitePoset("abc", [("a", "c"), ("b", "c")])
        Y = FinitePoset("uv", [("u", "v")])
        f = PosetMap(X, Y, {"a": "u", "b": "u", "c": "v"})
        assert set(fiber(f, "u").elements) == {"a", "b"}
        assert len(fiber(f, "v")) == 3
        M = mapping_cylinder(f)
        assert len(M) == 5 and M.less(("X", "a"), ("Y", "u")) and not M.less(("X", "c"), ("Y", "u"))

    def test_json_round_trip(self):
        f = four_points_two_fibers().f
        g = PosetMap.from_json(f.to_json())
        assert all(g(x) == f(x) for x in f.source.elements)


class TestSphericalMaps:
    def test_identity_on_circle(self):
        K = simplex_boundary(2)
        X = face_poset(K)
        f = PosetMap(X, X, {x: x for x in X.elements})
        rep = check_spherical_map(f, 1)
        assert rep.verdict == "pass" and all(rep.side_checks().values())

    def test_unhit_witness(self):
        inst = four_points_two_fibers()
        Y = FinitePoset(["y1", "y2", "y3"])
        f = PosetMap(inst.f.source, Y, dict(inst.f.assignment))
        rep = check_spherical_map(f, 0)
        assert rep.unhit == ["y3"] and not rep.side_checks()["surjective"]

    def test_non_spherical_target_fiber(self):
        # the triangle over a point: the fiber is a circle, not 0-spherical
        K = simplex_boundary(2)
        f = face_poset_map(K, FinitePoset(["*"]), lambda s: "*")
        assert check_spherical_map(f, 0).verdict == "fail"


class TestDecomposition:
    def test_four_points(self):
        dec = theorem47_decomposition(four_points_two_fibers().f, 0)
        assert dec["holds"] and dec["total"] == 3 and dec["rank_target"] == 1

    def test_antichain_identity(self):
        X = FinitePoset(["p", "q", "r"])
        f = PosetMap(X, X, {x: x for x in X.elements})
        dec = theorem47_decomposition(f, 0)
        assert dec["holds"] and dec["rank_source"] == 2 and all(s["product"] == 0 for s in dec["summands"])

    def test_graph_over_two_chain(self):
        f = graph_over_two_chain([(0, 1), (1, 2), (2, 0)])
        dec = theorem47_decomposition(f, 1)
        assert dec["holds"] and dec["rank_source"] == 1
        # link monotonicity fails here, so no basis is produced
        K = SimplicialComplex([0, 1, 2], [(0, 1), (1, 2), (2, 0)])
        assert not check_link_monotone(f, K)["holds"]
        with pytest.raises(PreconditionError):
            theorem47_basis(f, K, 1)


class TestBasis:
    def test_four_points(self):
        inst = four_points_two_fibers()
        cert = theorem47_basis(inst.f, inst.K, 0)
        assert cert.unimodular and cert.epimorphism and cert.remark_holds
        assert len(cert.gammas) == 1 and len(cert.products) == 2
        assert verify_basis_against_snf(cert, inst.K)

    @pytest.mark.parametrize("K,n", [(polygon(4), 1), (octahedron(), 2), (simplex_boundary(3), 2)])
    def test_identity_maps(self, K, n):
        inst = identity_instance(K, "id")
        cert = theorem47_basis(inst.f, inst.K, n)
        assert cert.unimodular and cert.remark_holds and cert.epimorphism

    def test_constant_map_on_points(self):
        inst = constant_map(SimplicialComplex(["p", "q", "r"]))
        cert = theorem47_basis(inst.f, inst.K, 0)
        assert cert.gammas == [] and len(cert.products) == 2 and cert.unimodular

    def test_remark_detects_mutation(self):
        inst = four_points_two_fibers()
        cert = theorem47_basis(inst.f, inst.K, 0)
        M = mapping_cylinder(inst.f)
        p = cert.products[0]
        x = inst.f.preimage(p["y"])[0]
        ftil = lambda tau: inst.f(inst.K.sort(x + tau))  # noqa: E731
        assert _remark_identity(inst.f, inst.K, M, p["y"], 0, p["alpha"], p["beta"], p["chain"], ftil)
        negated = {s: -c for s, c in p["chain"].items()}
        assert not _remark_identity(inst.f, inst.K, M, p["y"], 0, p["alpha"], p["beta"], negated, ftil)


class TestHypotheses:
    def test_union_monotone_violation(self):
        K = SimplicialComplex([0, 1], [(0, 1)])
        Y = FinitePoset(["lo", "hi"], [("lo", "hi")])
        f = face_poset_map(K, Y, lambda s: "lo" if len(s) == 1 else "hi")
        assert not check_union_monotone(f, K)["holds"]

    def test_union_monotone_identity(self):
        K = octahedron()
        X = face_poset(K)
        assert check_union_monotone(PosetMap(X, X, {x: x for x in X.elements}), K)["holds"]

    def test_epimorphism_image_not_above(self):
        K = SimplicialComplex([0, 1], [(0, 1)])
        f = face_poset_map(K, FinitePoset(["*"]), lambda s: "*")
        res = check_link_epimorphism(f, K, 1)
        assert not res["holds"] and res["witness"]["reason"] == "image not above f(s)"

    def test_non_face_poset_rejected(self):
        inst = four_points_two_fibers()
        with pytest.raises(PreconditionError):
            theorem47_basis(inst.f, SimplicialComplex(["p1", "p2"]), 0)


class TestInstances:
    def test_generator_is_seeded(self):
        a = [i.name for i in generate_instances(20, seed=3)]
        b = [i.name for i in generate_instances(20, seed=3)]
        assert a == b

    def test_small_suite(self):
        res = run_suite(count=15, seed=1)
        assert res["admissible"] == 15 and res["passed"] == 15

    def test_records_carry_side_checks(self):
        rec = run_instance(identity_instance(polygon(5), "pentagon"))
        assert rec["pass"] and rec["side_checks"] == {"height_bound": True, "surjective": True, "dimensions": True}


def test_mapping_cylinder_homotopy_type():
    rng = random.Random(7)
    for _ in range(25):
        f = random_poset_map(rng)
        assert mapping_cylinder(f).homology() == f.target.homology()
