import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from partialbases.autos import (
    Automorphism,
    NotInvertible,
    SignedPerm,
    Swap,
    Transvection,
    Whitehead,
    abelianization,
    certify,
    compose,
    fixes_prefix,
    from_token,
    identity_auto,
    inverse_by_reduction,
    invert_auto,
    is_special,
    lambda_moves,
    make_E,
    make_M,
    make_w,
    make_whitehead,
    omega,
    omega_fixing,
    parse_token,
    realize,
    whitehead_apply,
    whitehead_apply_word,
    whitehead_generators,
)
from partialbases.freegroup import parse_word, reduce
from partialbases.intlinalg import matmul

A, B, C = 1, 2, 3


def w(text, n=2):
    return parse_word(text, n)


def img(phi, i):
    return phi.images[i - 1]


class TestWhiteheadTable:
    def test_examples(self):
        assert whitehead_apply(Whitehead.of([A, B], B), A) == (A, B)
        assert whitehead_apply(Whitehead.of([-A, -B], -B), A) == (B, A)
        assert whitehead_apply(Whitehead.of([A, B, -B], A), B) == (-A, B, A)

    def test_malformed(self):
        with pytest.raises(ValueError):
            Whitehead.of([B], A)
        with pytest.raises(ValueError):
            Whitehead.of([A, -A], A)

    @pytest.mark.parametrize("n", [2, 3])
    def test_five_cases_partition(self, n):
        # each letter falls in exactly one row of the action table
        for t in lambda_moves(n):
            a = t.a
            for x in [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]:
                rows = [
                    x in (a, -a),
                    x not in (a, -a) and t.contains(x) and not t.contains(-x),
                    x not in (a, -a) and t.contains(-x) and not t.contains(x),
                    x not in (a, -a) and t.contains(x) and t.contains(-x),
                    x not in (a, -a) and not t.contains(x) and not t.contains(-x),
                ]
                assert sum(rows) == 1
                expected = [(x,), (x, a), (-a, x), (-a, x, a), (x,)][rows.index(True)]
                assert t.apply_letter(x) == expected

    def test_word_action_reduces(self):
        t = Whitehead.of([A, B, -B], A)
        assert whitehead_apply_word(t, w("b a")) == w("a^-1 b a a")


class TestNamedGenerators:
    def test_E_M(self):
        assert img(make_E(A, B, 2), A) == w("a b") and img(make_E(A, B, 2), B) == w("b")
        assert img(make_M(A, B, 2), A) == w("b a")
        assert make_E(A, B, 2) == make_M(-A, -B, 2)

    def test_E_M_as_whitehead(self):
        assert make_E(A, B, 2) == make_whitehead([A, B], B, 2)
        assert make_M(A, B, 2) == make_whitehead([-A, -B], -B, 2)

    def test_w(self):
        s = make_w(A, B, 2)
        assert img(s, A) == w("b^-1") and img(s, B) == w("a")
        assert compose(compose(s, s), compose(s, s)).is_identity()
        rhs = compose(make_M(-B, -A, 2), compose(make_M(-A, B, 2), make_M(B, A, 2)))
        assert s == rhs

    def test_compose_examples(self):
        phi = make_E(A, B, 2)
        assert compose(phi, identity_auto(2)) == phi
        assert compose(make_M(A, B, 2), make_M(A, -B, 2)).is_identity()
        ab = compose(make_E(A, B, 3), make_E(A, C, 3))
        ba = compose(make_E(A, C, 3), make_E(A, B, 3))
        # direct substitution: E_ab(E_ac(a)) = E_ab(a c) = a b c
        assert img(ab, A) == parse_word("a b c", 3)
        assert img(ba, A) == parse_word("a c b", 3)

    def test_inverses(self):
        assert invert_auto(make_E(A, B, 2)) == make_E(A, -B, 2)
        t = Whitehead.of([A, B, -B], A)
        assert invert_auto(from_token(t, 2)) == from_token(Whitehead.of([-A, B, -B], -A), 2)
        assert invert_auto(make_w(A, B, 2)) == make_w(A, -B, 2)

    def test_special_and_prefix(self):
        assert is_special(make_E(A, B, 2))
        assert not is_special(from_token(SignedPerm((2, 1)), 2))
        assert fixes_prefix(make_M(3, 1, 3), 2)
        assert not fixes_prefix(make_M(1, 3, 3), 2)


class TestOmega:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_order(self, n):
        perms = omega(n)
        assert len(perms) == 2**n * math.factorial(n) == len(set(perms))

    def test_fixing(self):
        assert len(omega_fixing(3, 1)) == 8
        assert len(omega_fixing(3, 1, special=True)) == 4
        assert all(s.sign_det() == 1 for s in omega_fixing(3, 0, special=True))

    def test_lambda_count(self):
        for n in (2, 3):
            assert len(lambda_moves(n)) == 2 * n * 4 ** (n - 1)
        assert len(whitehead_generators(2)) == 16 + 8


class TestTokens:
    @pytest.mark.parametrize("text", ["E(1,-2)", "M(2,1)", "w(1,2)", "W(1,2,-3;1)", "P(2,-1,3)"])
    def test_round_trip(self, text):
        assert str(parse_token(text)) == text

    def test_bad_token(self):
        with pytest.raises(ValueError):
            parse_token("Q(1,2)")

    def test_realize_order(self):
        # (t1, t2) means t1 o t2
        t1, t2 = Transvection("E", A, B), Transvection("M", B, A)
        assert realize((t1, t2), 2) == compose(from_token(t1, 2), from_token(t2, 2))


@st.composite
def autos(draw, n=3, max_len=5):
    gens = whitehead_generators(n)
    toks = draw(st.lists(st.sampled_from(gens), min_size=0, max_size=max_len))
    return realize(tuple(toks), n)


class TestProperties:
    @settings(max_examples=60)
    @given(autos(), autos())
    def test_abelianization_homomorphism(self, phi, psi):
        assert abelianization(compose(phi, psi)) == matmul(abelianization(phi), abelianization(psi))

    @settings(max_examples=60)
    @given(autos(), autos(), st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=6))
    def test_apply_respects_composition(self, phi, psi, raw):
        word = reduce(raw, 3)
        assert compose(phi, psi)(word) == phi(psi(word))

    @settings(max_examples=60)
    @given(autos())
    def test_inverse_by_reduction(self, phi):
        inv = inverse_by_reduction(phi)
        assert compose(phi, inv).is_identity() and compose(inv, phi).is_identity()
        assert inv == invert_auto(phi)
        assert realize(inv.factorization, 3) == inv

    @settings(max_examples=40)
    @given(autos())
    def test_certify_round_trip(self, phi):
        bare = Automorphism(3, phi.raw)
        c = certify(bare)
        assert c == phi and realize(c.factorization, 3) == phi

    @settings(max_examples=40)
    @given(autos())
    def test_json_round_trip(self, phi):
        assert Automorphism.from_json(phi.to_json()) == phi


def test_not_invertible():
    with pytest.raises(NotInvertible):
        inverse_by_reduction(Automorphism(2, [(1, 1), (2,)]))


def test_json_rejects_wrong_factorization():
    data = make_E(A, B, 2).to_json()
    data["factorization"] = ["M(1,2)"]
    with pytest.raises(ValueError):
        Automorphism.from_json(data)


def test_perm_compose_matches_automorphisms():
    for s, t in itertools.product(omega(2), repeat=2):
        assert from_token(s.compose(t), 2) == compose(from_token(s, 2), from_token(t, 2))


def test_swap_as_perm():
    assert from_token(Swap(A, B).as_perm(2), 2) == make_w(A, B, 2)
