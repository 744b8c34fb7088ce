import pytest
from hypothesis import given, strategies as st

from partialbases.freegroup import (
    RankError,
    Word,
    all_reduced_words,
    format_word,
    generator,
    identity,
    invert,
    multiply,
    parse_tuple,
    parse_word,
    reduce,
    total_length,
    word_from_json,
    word_to_json,
)

N = 3
letters = st.sampled_from([1, -1, 2, -2, 3, -3])
raw_words = st.lists(letters, max_size=12)
words = raw_words.map(lambda r: reduce(r, N))


def w(text, n=N):
    return parse_word(text, n)


class TestExamples:
    def test_reduce(self):
        assert reduce([1, -1, 2], 2).letters == (2,)
        assert reduce([], 2).letters == ()
        assert reduce([1, 2, -2, 1], 2).letters == (1, 1)

    def test_multiply(self):
        assert multiply(w("a b"), w("b^-1 c")) == w("a c")
        assert multiply(w("a b"), identity(N)) == w("a b")
        assert multiply(w("a b"), w("b^-1 a^-1")).is_identity()

    def test_invert(self):
        assert invert(w("a b")) == w("b^-1 a^-1")
        assert invert(identity(N)) == identity(N)
        assert invert(w("a^-1")) == w("a")

    def test_total_length(self):
        assert total_length([w("a"), w("b")]) == 2
        assert total_length([w("a b"), w("b^-1")]) == 3
        assert total_length([]) == 0

    def test_rank_mismatch(self):
        with pytest.raises(RankError):
            multiply(generator(1, 2), generator(1, 3))
        with pytest.raises(RankError):
            parse_word("c", 2)

    def test_unreduced_rejected(self):
        with pytest.raises(ValueError):
            Word((1, -1), 2)


class TestSyntax:
    def test_aliases_and_v_notation(self):
        assert w("v1 v2^-1 v3") == w("a b^-1 c")
        assert w("a^3").letters == (1, 1, 1)
        assert w("a^-2").letters == (-1, -1)
        assert w("e").is_identity()
        assert parse_word("v5", 5).letters == (5,)

    def test_bad_token(self):
        with pytest.raises(ValueError):
            parse_word("a*b", 2)

    def test_tuple_is_comma_separated(self):
        t = parse_tuple("a b a^-1 b^-1", 2)
        assert len(t) == 1 and len(t[0]) == 4
        assert len(parse_tuple("a b, b", 2)) == 2

    def test_format_round_trip(self):
        for raw in all_reduced_words(2, 3):
            word = Word(raw, 2)
            assert parse_word(format_word(word), 2) == word
        assert format_word(Word((5, -1), 5)) == "v5 v1^-1"

    def test_json_round_trip(self):
        x = w("a b^-1 c")
        assert word_from_json(word_to_json(x), N) == x


class TestEnumeration:
    @pytest.mark.parametrize("n,L", [(1, 4), (2, 4), (3, 3)])
    def test_counts(self, n, L):
        got = all_reduced_words(n, L)
        expected = 1 + sum(2 * n * (2 * n - 1) ** (k - 1) for k in range(1, L + 1))
        assert len(got) == expected == len(set(got))

    def test_shortlex_order(self):
        got = all_reduced_words(2, 3)
        keys = [Word(x, 2).sort_key() for x in got]
        assert keys == sorted(keys)


class TestProperties:
    @given(raw_words)
    def test_reduce_idempotent(self, raw):
        once = reduce(raw, N)
        assert reduce(once.letters, N) == once

    @given(words, words, words)
    def test_associative(self, u, v, x):
        assert multiply(multiply(u, v), x) == multiply(u, multiply(v, x))

    @given(words, words)
    def test_invert_antihomomorphism(self, u, v):
        assert invert(multiply(u, v)) == multiply(invert(v), invert(u))

    @given(words, words)
    def test_length_bounds(self, u, v):
        uv = multiply(u, v)
        assert len(uv) <= len(u) + len(v)
        assert (len(uv) - len(u) - len(v)) % 2 == 0

    @given(words)
    def test_inverse_cancels(self, u):
        assert multiply(u, invert(u)).is_identity()
