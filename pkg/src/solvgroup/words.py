"""Free-group words over a numbered alphabet.

Generators are written ``x1 x2 ...`` and their inverses ``X1 X2 ...``; a
token may carry an integer power, as in ``x1^-3``. Words store letters as
``(generator_index, sign)`` pairs, so the rank is unbounded and equality and
hashing are structural.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import InputValidationError, WordSyntaxError

Letter = tuple[int, int]  # (generator index >= 1, sign +1 or -1)

_TOKEN = re.compile(r"(?P<head>[xX])(?P<index>\d+)(?:\^(?P<power>[+-]?\d+))?\Z")


@dataclass(frozen=True)
class Alphabet:
    """The generating set x1..x{rank}."""

    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise InputValidationError(f"alphabet rank must be >= 1, got {self.rank}")

    def check_letter(self, letter: Letter) -> None:
        index, sign = letter
        if not 1 <= index <= self.rank:
            raise InputValidationError(
                f"generator index {index} out of range for rank {self.rank}"
            )
        if sign not in (-1, 1):
            raise InputValidationError(f"letter sign must be +1 or -1, got {sign}")


@dataclass(frozen=True)
class Word:
    """A (not necessarily reduced) word in the free group."""

    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def prefix(self, length: int) -> "Word":
        return Word(self.letters[:length])

    def __str__(self) -> str:
        return word_to_str(self)


EMPTY_WORD = Word()


def letter_word(index: int, sign: int = 1) -> Word:
    return Word(((index, sign),))


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse a whitespace-separated word string; empty input is the identity."""
    letters: list[Letter] = []
    for match in re.finditer(r"\S+", text):
        token, position = match.group(), match.start()
        parsed = _TOKEN.match(token)
        if parsed is None:
            raise WordSyntaxError(f"bad token {token!r}", position)
        index = int(parsed.group("index"))
        if not 1 <= index <= alphabet.rank:
            raise InputValidationError(
                f"generator index {index} out of range for rank {alphabet.rank}"
                f" (at position {position})"
            )
        sign = 1 if parsed.group("head") == "x" else -1
        power = 1 if parsed.group("power") is None else int(parsed.group("power"))
        if power < 0:
            sign, power = -sign, -power
        letters.extend(((index, sign),) * power)
    return Word(tuple(letters))


def word_to_str(w: Word) -> str:
    """Render a word; runs of equal letters are compressed to powers."""
    parts: list[str] = []
    run: Letter | None = None
    count = 0
    for letter in tuple(w) + ((0, 0),):  # sentinel flushes the final run
        if letter == run:
            count += 1
            continue
        if run is not None:
            index, sign = run
            head = f"x{index}" if sign > 0 else f"X{index}"
            parts.append(head if count == 1 else f"{head}^{count}")
        run, count = letter, 1
    return " ".join(parts)


def free_reduce(w: Word) -> Word:
    """The unique freely reduced form of w."""
    stack: list[Letter] = []
    for index, sign in w:
        if stack and stack[-1] == (index, -sign):
            stack.pop()
        else:
            stack.append((index, sign))
    return Word(tuple(stack))


def is_reduced(w: Word) -> bool:
    return all(
        w.letters[i] != (w.letters[i + 1][0], -w.letters[i + 1][1])
        for i in range(len(w) - 1)
    )


def invert(w: Word) -> Word:
    return Word(tuple((index, -sign) for index, sign in reversed(w.letters)))


def power(w: Word, k: int) -> Word:
    """The freely reduced k-th power of w (inverse word for negative k)."""
    base = free_reduce(w)
    if k < 0:
        base, k = invert(base), -k
    return free_reduce(Word(base.letters * k))


def conjugate(w: Word, c: Word) -> Word:
    """The freely reduced conjugate c^-1 w c."""
    return free_reduce(invert(c) * w * c)


def commutator(a: Word, b: Word) -> Word:
    """The freely reduced commutator a^-1 b^-1 a b."""
    return free_reduce(invert(a) * invert(b) * a * b)


def exponent_sums(w: Word, rank: int) -> tuple[int, ...]:
    """Per-generator exponent sums (the image in the free abelian quotient)."""
    sums = [0] * rank
    for index, sign in w:
        sums[index - 1] += sign
    return tuple(sums)
