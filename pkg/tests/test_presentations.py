import pytest

from partialbases.autos import SignedPerm, Swap, Transvection, Whitehead
from partialbases.presentations import (
    THEOREM_FAMILIES,
    ParameterError,
    RelationInstance,
    check_relation,
    enumerate_relations,
    first_difference,
    generator_legal,
    realize_word,
    verify_presentation,
)

M = lambda a, b: Transvection("M", a, b)  # noqa: E731


def count(theorem, n, l, family):
    return sum(1 for _ in enumerate_relations(theorem, n, l, [family]))


def test_instance_counts():
    assert count("2.5", 2, 0, "S1") == 8
    assert count("2.11", 3, 0, "T2_11_6") == 24
    assert count("2.5", 2, 0, "S0") == 64


def test_S3_example():
    # [M_{b,a^-1}, M_{c,b^-1}] = M_{c,a}
    inst = RelationInstance("2.5", "S3", ((M(2, -1), 1), (M(3, -2), 1), (M(2, -1), -1), (M(3, -2), -1)), ((M(3, 1), 1),), ())
    assert check_relation(inst, 3)


def test_R5_example():
    # (A;a) followed by the transposition of a and b as the R5 instance at n=2
    insts = [i for i in enumerate_relations("2.1", 2, 0, ["R5"])]
    assert insts and all(check_relation(i, 2) for i in insts)


def test_mutated_instance_fails():
    # commutator of M_{a,b} and M_{b,a} violates the side conditions of S2 and is not trivial
    bad = RelationInstance("2.5", "S2", ((M(1, 2), 1), (M(2, 1), 1), (M(1, 2), -1), (M(2, 1), -1)), (), ())
    assert not check_relation(bad, 2)
    diff = first_difference(bad, 2)
    assert diff is not None


def test_every_S2_instance_respects_side_conditions():
    for inst in enumerate_relations("2.5", 3, 1, ["S2"]):
        sc = dict(inst.side_conditions)
        assert abs(sc["b"]) != abs(sc["c"]) and abs(sc["a"]) != abs(sc["d"]) and sc["a"] != sc["c"]


def test_relator_is_trivial_iff_relation_holds():
    for inst in list(enumerate_relations("2.9", 3, 0))[:50]:
        assert realize_word(inst.relator(), 3).is_identity() == check_relation(inst, 3)


@pytest.mark.parametrize(
    "theorem,n,l",
    [("2.1", 2, 0), ("2.4", 3, 1), ("2.5", 3, 1), ("2.7", 3, 1), ("2.9", 3, 0), ("2.10", 3, 0), ("2.11", 4, 1)],
)
def test_presentations_small(theorem, n, l):
    report = verify_presentation(theorem, n, l)
    assert report.passed, report.failures[:3]
    assert all(report.counts[f] > 0 for f in THEOREM_FAMILIES[theorem] if f != "S2" or n - l >= 2)


def test_derived_families_rank_two():
    report = verify_presentation("2.1", 2, 0, ["R8", "R9", "R10"])
    assert report.passed and report.instances > 0


def test_generator_legality():
    assert generator_legal(Whitehead.of([1, 2], 2), "2.1", 2, 0)
    assert not generator_legal(Whitehead.of([1, 2], 2), "2.4", 2, 1)
    assert generator_legal(Whitehead.of([1, 2], 1), "2.4", 2, 1)
    assert generator_legal(M(2, 1), "2.5", 2, 1)
    assert not generator_legal(M(1, 2), "2.5", 2, 1)
    assert not generator_legal(SignedPerm((-1, 2)), "2.7", 2, 0)
    assert generator_legal(SignedPerm((-1, -2)), "2.7", 2, 0)
    assert generator_legal(Swap(2, 3), "2.11", 3, 1)
    assert not generator_legal(Swap(1, 2), "2.11", 3, 1)
    assert not generator_legal(SignedPerm((2, 1, 3)), "2.11", 3, 0)


@pytest.mark.parametrize(
    "theorem,n,l", [("2.11", 3, 1), ("2.11", 2, 0), ("2.1", 3, 1), ("9.9", 2, 0), ("2.5", 2, 3)]
)
def test_parameter_errors(theorem, n, l):
    with pytest.raises(ParameterError):
        list(enumerate_relations(theorem, n, l))


def test_unknown_family():
    with pytest.raises(ParameterError):
        list(enumerate_relations("2.5", 2, 0, ["R1"]))


def test_large_table_guard():
    with pytest.raises(ParameterError):
        next(enumerate_relations("2.1", 5, 0, ["R7"]))
