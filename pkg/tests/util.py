"""Shared generators for randomized and exhaustive tests."""

from __future__ import annotations

import random

from solvgroup.words import Word, commutator, conjugate, free_reduce


def random_reduced_word(rng: random.Random, rank: int, length: int) -> Word:
    letters: list[tuple[int, int]] = []
    while len(letters) < length:
        index = rng.randint(1, rank)
        sign = rng.choice((1, -1))
        if letters and letters[-1] == (index, -sign):
            continue
        letters.append((index, sign))
    return Word(tuple(letters))


def random_word(rng: random.Random, rank: int, max_length: int) -> Word:
    count = rng.randint(0, max_length)
    return Word(
        tuple((rng.randint(1, rank), rng.choice((1, -1))) for _ in range(count))
    )


def random_commutator(rng: random.Random, rank: int, max_length: int = 4) -> Word:
    """A commutator of two random words: an element of the derived subgroup."""
    a = random_reduced_word(rng, rank, rng.randint(1, max_length))
    b = random_reduced_word(rng, rank, rng.randint(1, max_length))
    return commutator(a, b)


def random_second_derived_element(
    rng: random.Random, rank: int, factors: int = 2
) -> Word:
    """A product of commutators of derived-subgroup elements (lies in F'')."""
    result = Word()
    for _ in range(max(1, factors)):
        a = random_commutator(rng, rank)
        b = random_commutator(rng, rank)
        result = result * commutator(a, b)
    return free_reduce(result)


def reduced_words(rank: int, length: int):
    """All freely reduced words of exactly the given length, in a fixed order."""
    if length == 0:
        yield Word()
        return
    prefix: list[tuple[int, int]] = []

    def extend():
        if len(prefix) == length:
            yield Word(tuple(prefix))
            return
        for index in range(1, rank + 1):
            for sign in (1, -1):
                if prefix and prefix[-1] == (index, -sign):
                    continue
                prefix.append((index, sign))
                yield from extend()
                prefix.pop()

    yield from extend()


def flow_value_multisets(flow, rank: int) -> dict[int, tuple[int, ...]]:
    """Per-generator sorted tuples of flow values (invariant under shifts)."""
    by_generator: dict[int, list[int]] = {i: [] for i in range(1, rank + 1)}
    for (_tail, index), value in flow.items():
        by_generator[index].append(value)
    return {i: tuple(sorted(values)) for i, values in by_generator.items()}


__all__ = [
    "conjugate",
    "flow_value_multisets",
    "random_commutator",
    "random_reduced_word",
    "random_second_derived_element",
    "random_word",
    "reduced_words",
]
