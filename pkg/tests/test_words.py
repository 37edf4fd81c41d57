import random

import pytest

from solvgroup.errors import InputValidationError, WordSyntaxError
from solvgroup.words import (
    Alphabet,
    Word,
    commutator,
    exponent_sums,
    free_reduce,
    invert,
    parse_word,
    power,
    word_to_str,
)
from tests.util import random_word

AB2 = Alphabet(2)


def P(text, alphabet=AB2):
    return parse_word(text, alphabet)


class TestParse:
    def test_letter_and_inverse(self):
        assert P("x1 X1").letters == ((1, 1), (1, -1))

    def test_negative_power(self):
        assert parse_word("x1^-3", Alphabet(1)).letters == ((1, -1),) * 3

    def test_index_out_of_range(self):
        with pytest.raises(InputValidationError):
            P("x3")

    def test_zero_power_is_identity(self):
        assert P("x1^0") == Word()

    def test_empty_string(self):
        assert P("") == Word()
        assert P("   ") == Word()

    def test_inverse_power(self):
        assert P("X2^2").letters == ((2, -1), (2, -1))

    def test_syntax_error_carries_position(self):
        with pytest.raises(WordSyntaxError) as info:
            P("x1 y2")
        assert info.value.position == 3

    @pytest.mark.parametrize("bad", ["x", "x^2", "1x", "x1^", "x1^+", "x-1"])
    def test_malformed_tokens(self, bad):
        with pytest.raises(WordSyntaxError):
            P(bad)

    def test_round_trip_rendering(self):
        rng = random.Random(7)
        for _ in range(50):
            w = free_reduce(random_word(rng, 2, 12))
            assert P(word_to_str(w)) == w

    def test_rendering_compresses_runs(self):
        assert word_to_str(P("x1 x1 x1 X2 X2")) == "x1^3 X2^2"


class TestReduce:
    def test_commutator_of_inverses_cancels(self):
        assert free_reduce(P("x1 x2 X2 X1")) == Word()

    def test_already_reduced(self):
        assert free_reduce(P("x1 x2")) == P("x1 x2")

    def test_inner_cancellation(self):
        assert free_reduce(P("x1 X1 x1")) == P("x1")

    def test_idempotent_and_nonincreasing(self):
        rng = random.Random(11)
        for _ in range(100):
            w = random_word(rng, 3, 20)
            reduced = free_reduce(w)
            assert free_reduce(reduced) == reduced
            assert len(reduced) <= len(w)

    def test_word_times_inverse_reduces_to_identity(self):
        rng = random.Random(12)
        for _ in range(100):
            w = random_word(rng, 3, 20)
            assert free_reduce(w * invert(w)) == Word()


class TestInvert:
    def test_example(self):
        assert invert(P("x1 x2")) == P("X2 X1")

    def test_empty(self):
        assert invert(Word()) == Word()

    def test_involution(self):
        rng = random.Random(13)
        for _ in range(100):
            w = random_word(rng, 3, 15)
            assert invert(invert(w)) == w

    def test_preserves_reducedness(self):
        rng = random.Random(14)
        for _ in range(50):
            w = free_reduce(random_word(rng, 3, 15))
            assert free_reduce(invert(w)) == invert(w)


class TestPower:
    def test_positive(self):
        assert power(P("x1 x2"), 3) == P("x1 x2 x1 x2 x1 x2")

    def test_zero(self):
        assert power(P("x1 x2"), 0) == Word()

    def test_negative(self):
        assert power(P("x1"), -2) == P("X1 X1")

    def test_additivity(self):
        rng = random.Random(15)
        for _ in range(50):
            w = random_word(rng, 2, 8)
            a, b = rng.randint(-4, 4), rng.randint(-4, 4)
            assert power(w, a + b) == free_reduce(power(w, a) * power(w, b))


def test_exponent_sums():
    assert exponent_sums(P("x1 x2 X1 X2"), 2) == (0, 0)
    assert exponent_sums(P("x1^3 X2"), 2) == (3, -1)


def test_commutator_shape():
    assert commutator(P("x1"), P("x2")) == P("X1 X2 x1 x2")


def test_alphabet_requires_positive_rank():
    with pytest.raises(InputValidationError):
        Alphabet(0)
