"""Pluggable base-group back-ends.

An oracle models a quotient of the free group on its alphabet and answers
the word problem, the power problem, and hands out canonical vertex keys
for the group's Cayley graph. Keys are plain hashable, totally ordered
Python values (ints and nested tuples), so the same key works as a graph
vertex, a dictionary key in a flow map, and a component of a higher-level
key when oracles are stacked.

All values are bounded-checked against 64-bit signed integers so that a
runaway computation fails loudly instead of silently producing huge
numbers.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .errors import InputValidationError, UnsupportedOracleError
from .words import (
    Alphabet,
    Word,
    exponent_sums,
    free_reduce,
    invert,
    letter_word,
    power,
)

I64_MAX = 2**63 - 1


def checked_int(value: int) -> int:
    """Reject values outside the signed 64-bit range."""
    if value > I64_MAX or value < -I64_MAX - 1:
        raise OverflowError(f"integer value {value} exceeds the 64-bit range")
    return value


class GroupOracle:
    """Interface for base groups F/N.

    Subclasses implement the key primitives (``root_key``, ``step_key``,
    ``mul_key``, ``inv_key``, ``key_order``, ``representative``) plus ``pp``;
    ``canonical_key`` and ``wp`` are derived from them. Oracles are immutable
    after construction; internal caches are pure memoization.
    """

    alphabet: Alphabet
    supports_pp: bool = True

    # -- key primitives ---------------------------------------------------

    def root_key(self):
        raise NotImplementedError

    def step_key(self, key, index: int, sign: int):
        """Key of (element of ``key``) * x_index^sign."""
        raise NotImplementedError

    def mul_key(self, a, b):
        raise NotImplementedError

    def inv_key(self, key):
        raise NotImplementedError

    def key_order(self, key) -> int | None:
        """Order of the element behind ``key``; None when infinite."""
        raise NotImplementedError

    def representative(self, key) -> Word:
        """A word equal, in the group, to the element behind ``key``."""
        raise NotImplementedError

    # -- derived operations -------------------------------------------------

    def canonical_key(self, w: Word):
        for letter in w:
            self.alphabet.check_letter(letter)
        key = self.root_key()
        for index, sign in w:
            key = self.step_key(key, index, sign)
        return key

    def wp(self, w: Word) -> bool:
        return self.canonical_key(w) == self.root_key()

    def pp(self, u: Word, v: Word) -> int | None:
        """Some k with v = u^k in the group, or None when no power works."""
        raise NotImplementedError

    def cp(self, u: Word, v: Word) -> Word | None:
        """A conjugator word c with c^-1 u c = v, or None."""
        raise NotImplementedError


class WordProblemOracle(GroupOracle):
    """Base class for oracles that can only answer the word problem.

    Canonical keys are small integers handed out in discovery order. Keying
    a word scans the known class representatives with wp calls, so keying
    all prefixes of a word of length n costs O(n^2) wp calls. Everything
    else is derived from that table; the power problem is unavailable.
    """

    supports_pp = False

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._class_reps: list[Word] = [Word()]

    def wp(self, w: Word) -> bool:
        raise NotImplementedError

    def root_key(self) -> int:
        return 0

    def canonical_key(self, w: Word) -> int:
        for letter in w:
            self.alphabet.check_letter(letter)
        for key, rep in enumerate(self._class_reps):
            if self.wp(w * invert(rep)):
                return key
        self._class_reps.append(free_reduce(w))
        return len(self._class_reps) - 1

    def representative(self, key: int) -> Word:
        return self._class_reps[key]

    def step_key(self, key: int, index: int, sign: int) -> int:
        return self.canonical_key(self._class_reps[key] * letter_word(index, sign))

    def mul_key(self, a: int, b: int) -> int:
        return self.canonical_key(self._class_reps[a] * self._class_reps[b])

    def inv_key(self, key: int) -> int:
        return self.canonical_key(invert(self._class_reps[key]))

    def key_order(self, key: int) -> int | None:
        raise UnsupportedOracleError(
            "a word-problem-only oracle cannot bound element orders"
        )

    def pp(self, u: Word, v: Word) -> int | None:
        raise UnsupportedOracleError("power problem unavailable: oracle is wp-only")


# ---------------------------------------------------------------------------
# Free abelian groups Z^n
# ---------------------------------------------------------------------------


class FreeAbelianOracle(GroupOracle):
    """Z^n with keys = exponent-sum vectors (int tuples)."""

    def __init__(self, rank: int):
        self.alphabet = Alphabet(rank)
        self._root = (0,) * rank

    def root_key(self) -> tuple[int, ...]:
        return self._root

    def step_key(self, key, index, sign):
        vec = list(key)
        vec[index - 1] = checked_int(vec[index - 1] + sign)
        return tuple(vec)

    def mul_key(self, a, b):
        return tuple(checked_int(x + y) for x, y in zip(a, b))

    def inv_key(self, key):
        return tuple(-x for x in key)

    def key_order(self, key) -> int | None:
        return 1 if key == self._root else None

    def representative(self, key) -> Word:
        letters = []
        for i, value in enumerate(key, start=1):
            sign = 1 if value > 0 else -1
            letters.extend(((i, sign),) * abs(value))
        return Word(tuple(letters))

    def canonical_key(self, w: Word):
        for letter in w:
            self.alphabet.check_letter(letter)
        return tuple(checked_int(s) for s in exponent_sums(w, self.alphabet.rank))

    def pp(self, u: Word, v: Word) -> int | None:
        ku, kv = self.canonical_key(u), self.canonical_key(v)
        if ku == self._root:
            return 0 if kv == self._root else None
        k = None
        for a, b in zip(ku, kv):
            if a != 0:
                if b % a != 0:
                    return None
                k = b // a
                break
        assert k is not None
        if all(b == k * a for a, b in zip(ku, kv)):
            return k
        return None

    def cp(self, u: Word, v: Word) -> Word | None:
        # Conjugation is trivial in an abelian group.
        return Word() if self.canonical_key(u) == self.canonical_key(v) else None


# ---------------------------------------------------------------------------
# Finite groups given by a multiplication table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MulTable:
    """Finite group data: ``table[a][b]`` is the index of a*b.

    ``generators`` lists the element index that each alphabet letter maps to,
    so the alphabet rank equals ``len(generators)``.
    """

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    generators: tuple[int, ...]

    def __post_init__(self):
        m, t, e = self.order, self.table, self.identity
        if m < 1 or len(t) != m or any(len(row) != m for row in t):
            raise InputValidationError("table must be an order x order array")
        if any(not 0 <= x < m for row in t for x in row):
            raise InputValidationError("table entries must be element indices")
        if not 0 <= e < m:
            raise InputValidationError("identity index out of range")
        if any(t[e][a] != a or t[a][e] != a for a in range(m)):
            raise InputValidationError("identity row/column mismatch")
        for a in range(m):
            if all(t[a][b] != e for b in range(m)):
                raise InputValidationError(f"element {a} has no inverse")
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise InputValidationError(
                            f"associativity fails at ({a},{b},{c})"
                        )
        if not self.generators:
            raise InputValidationError("at least one generator is required")
        if any(not 0 <= g < m for g in self.generators):
            raise InputValidationError("generator index out of range")

    @classmethod
    def from_dict(cls, data: dict) -> "MulTable":
        try:
            return cls(
                order=int(data["order"]),
                table=tuple(tuple(int(x) for x in row) for row in data["table"]),
                identity=int(data["identity"]),
                generators=tuple(int(g) for g in data["generators"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputValidationError(f"malformed multiplication table: {exc}")

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "table": [list(row) for row in self.table],
            "identity": self.identity,
            "generators": list(self.generators),
        }


def _perm_table(perms: list[tuple[int, ...]], generators: list[tuple[int, ...]]) -> MulTable:
    index = {p: i for i, p in enumerate(perms)}
    compose = lambda p, q: tuple(q[p[i]] for i in range(len(p)))  # noqa: E731
    table = tuple(
        tuple(index[compose(p, q)] for q in perms) for p in perms
    )
    identity = index[tuple(range(len(perms[0])))]
    return MulTable(
        order=len(perms),
        table=table,
        identity=identity,
        generators=tuple(index[g] for g in generators),
    )


def s3_table() -> MulTable:
    """The symmetric group on three points, generated by a 3-cycle and a
    transposition (orders 3 and 2)."""
    perms = sorted(itertools.permutations(range(3)))
    return _perm_table(list(perms), [(1, 2, 0), (1, 0, 2)])


S3_TABLE = s3_table()


class FiniteGroupOracle(GroupOracle):
    """Finite group with keys = element indices into the multiplication table."""

    def __init__(self, table: MulTable):
        self.table = table
        self.alphabet = Alphabet(len(table.generators))
        t, m = table.table, table.order
        inv = [None] * m
        for a in range(m):
            for b in range(m):
                if t[a][b] == table.identity:
                    inv[a] = b
                    break
        self._inv = tuple(inv)
        self._gen = table.generators
        self._gen_inv = tuple(inv[g] for g in table.generators)
        self._words: dict[int, Word] = {}
        self._bfs_order: list[int] = []
        self._expand_words()

    def _expand_words(self):
        # Shortest representative words over the generated subgroup, by BFS.
        t = self.table.table
        start = self.table.identity
        self._words[start] = Word()
        self._bfs_order.append(start)
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for i in range(1, self.alphabet.rank + 1):
                for sign, image in ((1, self._gen[i - 1]), (-1, self._gen_inv[i - 1])):
                    nxt = t[cur][image]
                    if nxt not in self._words:
                        self._words[nxt] = self._words[cur] * letter_word(i, sign)
                        self._bfs_order.append(nxt)
                        queue.append(nxt)

    def elements(self) -> list[int]:
        """Keys of the subgroup generated by the designated generators."""
        return list(self._bfs_order)

    def root_key(self) -> int:
        return self.table.identity

    def step_key(self, key, index, sign):
        image = self._gen[index - 1] if sign > 0 else self._gen_inv[index - 1]
        return self.table.table[key][image]

    def mul_key(self, a, b):
        return self.table.table[a][b]

    def inv_key(self, key):
        return self._inv[key]

    def key_order(self, key) -> int:
        order, cur = 1, key
        while cur != self.table.identity:
            cur = self.table.table[cur][key]
            order += 1
        return order

    def representative(self, key) -> Word:
        try:
            return self._words[key]
        except KeyError:
            raise InputValidationError(
                f"element {key} is not in the subgroup generated by the alphabet"
            )

    def pp(self, u: Word, v: Word) -> int | None:
        ku, kv = self.canonical_key(u), self.canonical_key(v)
        cur = self.table.identity
        for k in range(self.key_order(ku)):
            if cur == kv:
                return k
            cur = self.table.table[cur][ku]
        return None

    def cp(self, u: Word, v: Word) -> Word | None:
        ku, kv = self.canonical_key(u), self.canonical_key(v)
        t = self.table.table
        for c in self._bfs_order:
            if t[t[self._inv[c]][ku]][c] == kv:
                return self._words[c]
        return None


# ---------------------------------------------------------------------------
# Free groups
# ---------------------------------------------------------------------------


class FreeGroupOracle(GroupOracle):
    """The free group itself (the degenerate base); keys are reduced words."""

    def __init__(self, rank: int):
        self.alphabet = Alphabet(rank)

    def root_key(self) -> tuple:
        return ()

    def step_key(self, key, index, sign):
        if key and key[-1] == (index, -sign):
            return key[:-1]
        return key + ((index, sign),)

    def mul_key(self, a, b):
        a = list(a)
        pos = 0
        while a and pos < len(b) and a[-1] == (b[pos][0], -b[pos][1]):
            a.pop()
            pos += 1
        return tuple(a) + b[pos:]

    def inv_key(self, key):
        return tuple((i, -s) for i, s in reversed(key))

    def key_order(self, key) -> int | None:
        return 1 if key == () else None

    def representative(self, key) -> Word:
        return Word(key)

    def pp(self, u: Word, v: Word) -> int | None:
        ku, kv = self.canonical_key(u), self.canonical_key(v)
        if not ku:
            return 0 if not kv else None
        rank = self.alphabet.rank
        eu = exponent_sums(Word(ku), rank)
        ev = exponent_sums(Word(kv), rank)
        if any(eu):
            # The abelianization pins the only possible exponent.
            i = next(i for i, s in enumerate(eu) if s)
            if ev[i] % eu[i]:
                return None
            k = ev[i] // eu[i]
            return k if self.canonical_key(power(Word(ku), k)) == kv else None
        # u has trivial abelianization; |u^k| >= |k| still bounds the search.
        for k in range(len(kv) + 1):
            for signed in ((k,) if k == 0 else (k, -k)):
                if self.canonical_key(power(Word(ku), signed)) == kv:
                    return signed
        return None

    @staticmethod
    def _cyclic_split(key) -> tuple[tuple, tuple]:
        """Split a reduced word as c * core * c^-1 with core cyclically reduced."""
        prefix = []
        while len(key) >= 2 and key[0] == (key[-1][0], -key[-1][1]):
            prefix.append(key[0])
            key = key[1:-1]
        return tuple(prefix), key

    def cp(self, u: Word, v: Word) -> Word | None:
        pa, core_a = self._cyclic_split(self.canonical_key(u))
        pb, core_b = self._cyclic_split(self.canonical_key(v))
        if len(core_a) != len(core_b):
            return None
        if not core_a:
            return Word()
        for t in range(len(core_a)):
            if core_a[t:] + core_a[:t] == core_b:
                conj = Word(pa) * Word(core_a[:t]) * invert(Word(pb))
                return free_reduce(conj)
        return None


# ---------------------------------------------------------------------------
# Factories
# ---------------------------------------------------------------------------


def make_free_abelian(rank: int) -> FreeAbelianOracle:
    return FreeAbelianOracle(rank)


def make_finite_group(table: MulTable) -> FiniteGroupOracle:
    return FiniteGroupOracle(table)


def make_free_group(rank: int) -> FreeGroupOracle:
    return FreeGroupOracle(rank)
