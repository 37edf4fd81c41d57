"""Integer flows on Cayley graphs and the group-ring algebra around them.

A flow map assigns integers to positive edges ``(tail key, generator
index)`` of the Cayley graph of a base oracle; the value on a negative edge
is minus the value on its inverse, so only positive edges are stored and
zero entries are dropped eagerly (map equality is flow equality).

The module provides the flow of a word, pointwise arithmetic, the shift
action of the base group, the net-flow map into the group ring, the
augmentation, telescoping (a right inverse of net-flow on augmentation-zero
ring elements), circulation repair, the orbit solver for equations
``f - g.f = target``, and the reconstruction of a word realizing a given
flow. The last three power the constructive conjugacy machinery.
"""

from __future__ import annotations

from .errors import ContextMismatchError, InputValidationError
from .oracles import GroupOracle, checked_int
from .words import Word, free_reduce, invert, letter_word


class CayleyContext:
    """Tracing context for the Cayley graph of a base oracle.

    The context remembers one representative word for every vertex key it
    has visited (the first word that reached it); telescoping and flow
    serialization rely on those words.
    """

    is_cayley = True

    def __init__(self, oracle: GroupOracle):
        self.oracle = oracle
        self._reps: dict = {oracle.root_key(): Word()}

    @property
    def root(self):
        return self.oracle.root_key()

    def remember(self, key, word: Word) -> None:
        if key not in self._reps:
            self._reps[key] = word

    def representative(self, key) -> Word:
        rep = self._reps.get(key)
        if rep is None:
            rep = self.oracle.representative(key)
            self._reps[key] = rep
        return rep

    def step(self, key, index: int, sign: int):
        """Cross one edge; returns ``(positive edge, new key)``."""
        nxt = self.oracle.step_key(key, index, sign)
        if nxt not in self._reps and key in self._reps:
            self._reps[nxt] = self._reps[key] * letter_word(index, sign)
        edge = (key, index) if sign > 0 else (nxt, index)
        return edge, nxt

    def head(self, edge):
        return self.step(edge[0], edge[1], 1)[1]

    def key_of(self, w: Word, start=None):
        key = self.root if start is None else start
        for index, sign in w:
            _, key = self.step(key, index, sign)
        return key

    def mul(self, a, b):
        product = self.oracle.mul_key(a, b)
        if product not in self._reps and a in self._reps and b in self._reps:
            self._reps[product] = self._reps[a] * self._reps[b]
        return product


class FlowMap:
    """Finitely supported integer map on positive edges of a context."""

    __slots__ = ("ctx", "_entries")

    def __init__(self, ctx, entries=None):
        self.ctx = ctx
        self._entries: dict = {}
        if entries:
            for edge, value in dict(entries).items():
                if value:
                    self._entries[edge] = checked_int(value)

    # -- inspection ---------------------------------------------------------

    def items(self):
        return self._entries.items()

    def sorted_entries(self) -> tuple:
        return tuple(sorted(self._entries.items()))

    def value(self, edge) -> int:
        return self._entries.get(edge, 0)

    def support(self):
        return set(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, FlowMap):
            return self._entries == other._entries
        return NotImplemented

    def __repr__(self) -> str:
        return f"FlowMap({self._entries!r})"

    def copy(self) -> "FlowMap":
        return FlowMap(self.ctx, self._entries)

    # -- arithmetic -----------------------------------------------------------

    def _merge(self, other: "FlowMap", factor: int) -> "FlowMap":
        if other.ctx is not None and self.ctx is not None and other.ctx is not self.ctx:
            raise ContextMismatchError("flows belong to different contexts")
        result = dict(self._entries)
        for edge, value in other._entries.items():
            total = checked_int(result.get(edge, 0) + factor * value)
            if total:
                result[edge] = total
            else:
                result.pop(edge, None)
        return FlowMap(self.ctx or other.ctx, result)

    def __add__(self, other: "FlowMap") -> "FlowMap":
        return self._merge(other, 1)

    def __sub__(self, other: "FlowMap") -> "FlowMap":
        return self._merge(other, -1)

    def __neg__(self) -> "FlowMap":
        return FlowMap(self.ctx, {e: -v for e, v in self._entries.items()})

    def scale(self, factor: int) -> "FlowMap":
        if factor == 0:
            return FlowMap(self.ctx)
        return FlowMap(
            self.ctx, {e: checked_int(v * factor) for e, v in self._entries.items()}
        )

    def norm(self) -> int:
        return sum(abs(v) for v in self._entries.values())


class GroupRingElement:
    """Finitely supported integer combination of vertex keys."""

    __slots__ = ("ctx", "_coeffs")

    def __init__(self, ctx, coeffs=None):
        self.ctx = ctx
        self._coeffs: dict = {}
        if coeffs:
            for key, value in dict(coeffs).items():
                if value:
                    self._coeffs[key] = checked_int(value)

    def items(self):
        return self._coeffs.items()

    def coefficient(self, key) -> int:
        return self._coeffs.get(key, 0)

    def support(self):
        return set(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, GroupRingElement):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __repr__(self) -> str:
        return f"GroupRingElement({self._coeffs!r})"

    def _merge(self, other: "GroupRingElement", factor: int) -> "GroupRingElement":
        result = dict(self._coeffs)
        for key, value in other._coeffs.items():
            total = checked_int(result.get(key, 0) + factor * value)
            if total:
                result[key] = total
            else:
                result.pop(key, None)
        return GroupRingElement(self.ctx or other.ctx, result)

    def __add__(self, other):
        return self._merge(other, 1)

    def __sub__(self, other):
        return self._merge(other, -1)

    def __neg__(self):
        return GroupRingElement(self.ctx, {k: -v for k, v in self._coeffs.items()})


# ---------------------------------------------------------------------------
# Flows of words and pointwise operations
# ---------------------------------------------------------------------------


def flow_of(ctx, w: Word, start=None) -> FlowMap:
    """The flow of the path labeled w starting at ``start`` (default: root)."""
    key = ctx.root if start is None else start
    entries: dict = {}
    for index, sign in w:
        edge, key = ctx.step(key, index, sign)
        total = entries.get(edge, 0) + sign
        if total:
            entries[edge] = checked_int(total)
        else:
            del entries[edge]
    return FlowMap(ctx, entries)


def add(f: FlowMap, g: FlowMap) -> FlowMap:
    return f + g


def negate(f: FlowMap) -> FlowMap:
    return -f


def norm(f: FlowMap) -> int:
    return f.norm()


def shift_by_key(gkey, f: FlowMap) -> FlowMap:
    """Left translation: the entry on (t, i) moves to (g*t, i)."""
    ctx = f.ctx
    if not getattr(ctx, "is_cayley", False):
        raise InputValidationError("shift is only defined on a Cayley context")
    return FlowMap(
        ctx, {(ctx.mul(gkey, tail), i): v for (tail, i), v in f.items()}
    )


def shift(g: Word, f: FlowMap) -> FlowMap:
    ctx = f.ctx
    if not getattr(ctx, "is_cayley", False):
        raise InputValidationError("shift is only defined on a Cayley context")
    return shift_by_key(ctx.key_of(g), f)


def net_flow(f: FlowMap) -> GroupRingElement:
    """Per-vertex imbalance: outgoing positive values minus incoming ones."""
    ctx = f.ctx
    coeffs: dict = {}
    for (tail, index), value in f.items():
        head = ctx.head((tail, index))
        coeffs[tail] = coeffs.get(tail, 0) + value
        coeffs[head] = coeffs.get(head, 0) - value
    return GroupRingElement(ctx, coeffs)


def is_circulation(f: FlowMap) -> bool:
    return not net_flow(f)


def boundary(ctx, key) -> GroupRingElement:
    """The ring element delta_root - delta_key (zero when key is the root)."""
    if key == ctx.root:
        return GroupRingElement(ctx)
    return GroupRingElement(ctx, {ctx.root: 1, key: -1})


def augment(z: GroupRingElement) -> int:
    """Sum of coefficients."""
    return checked_int(sum(v for _, v in z.items()))


def ring_action(z: GroupRingElement, f: FlowMap) -> FlowMap:
    """Module action of the group ring: sum of shifted copies of f."""
    result = FlowMap(f.ctx)
    for key, coeff in z.items():
        result = result + shift_by_key(key, f).scale(coeff)
    return result


def telescope(ctx, z: GroupRingElement) -> FlowMap:
    """A flow whose net flow is z, for augmentation-zero z.

    Each vertex key g in the support contributes minus its coefficient times
    the flow of g's representative word, because the net flow of a word's
    flow is delta_root - delta_g; summing telescopes to z. Representative
    words must be known for every support key.
    """
    if augment(z) != 0:
        raise InputValidationError("telescope requires an augmentation-zero element")
    result = FlowMap(ctx)
    for key, coeff in sorted(z.items()):
        result = result + flow_of(ctx, ctx.representative(key)).scale(-coeff)
    return result


# ---------------------------------------------------------------------------
# Orbit machinery for the shift action of a single group element
# ---------------------------------------------------------------------------


def _key_power(ctx, gkey, exponent: int):
    key = ctx.root
    step = gkey if exponent >= 0 else ctx.oracle.inv_key(gkey)
    for _ in range(abs(exponent)):
        key = ctx.mul(step, key)
    return key


def repair_circulation(ctx, g: Word, f: FlowMap) -> FlowMap:
    """Replace f by a circulation with the same image under ``f - g.f``.

    Requires g nontrivial in the base group and ``f - g.f`` a circulation.
    When g has infinite order the hypothesis already forces f to be a
    circulation and f itself is returned. When g has finite order k the net
    flow of f is constant on left <g>-orbits, so it factors through the
    orbit sum ``1 + g + ... + g^(k-1)``; telescoping the cofactor and
    subtracting its orbit sum from f kills the net flow without changing
    ``f - g.f``.
    """
    gkey = ctx.key_of(g)
    if gkey == ctx.root:
        raise InputValidationError("g must be nontrivial in the base group")
    residual = f - shift_by_key(gkey, f)
    if not is_circulation(residual):
        raise InputValidationError("f - g.f must be a circulation")
    order = ctx.oracle.key_order(gkey)
    imbalance = net_flow(f)
    if order is None:
        # Infinite order: a finitely supported invariant net flow is zero.
        if imbalance:
            raise InputValidationError("net flow of f is not <g>-invariant")
        return f
    cofactor: dict = {}
    consumed = set()
    for key in sorted(imbalance.support()):
        if key in consumed:
            continue
        orbit = [key]
        cur = ctx.mul(gkey, key)
        while cur != key:
            orbit.append(cur)
            cur = ctx.mul(gkey, cur)
        values = {imbalance.coefficient(member) for member in orbit}
        if len(values) != 1:
            raise InputValidationError("net flow of f is not <g>-invariant")
        consumed.update(orbit)
        cofactor[min(orbit)] = values.pop()
    cofactor_elt = GroupRingElement(ctx, cofactor)
    if augment(cofactor_elt) != 0:
        raise InputValidationError("net flow of f is not <g>-invariant")
    partial = telescope(ctx, cofactor_elt)
    orbit_sum = GroupRingElement(
        ctx, {_key_power(ctx, gkey, j): 1 for j in range(order)}
    )
    repaired = f - ring_action(orbit_sum, partial)
    return repaired


def solve_shift_difference(ctx, g: Word, target: FlowMap) -> FlowMap:
    """Solve ``sigma - g.sigma = target`` for a finitely supported sigma.

    Edges split into orbits under left translation by g; on each orbit the
    equation is a difference equation solved by prefix sums. Solvability
    requires every orbit's values to sum to zero (equivalently: the target
    projects to zero on the coset graph of <g>), otherwise this raises.
    """
    gkey = ctx.key_of(g)
    if gkey == ctx.root:
        if target:
            raise InputValidationError("g is trivial but the target is nonzero")
        return FlowMap(ctx)
    order = ctx.oracle.key_order(gkey)
    oracle = ctx.oracle
    remaining = dict(target.items())
    sigma: dict = {}

    def relative_position(base_tail, tail):
        """j with tail = g^j * base_tail, or None."""
        if not oracle.supports_pp:
            raise InputValidationError("base oracle lacks the power problem")
        difference = ctx.representative(tail) * invert(ctx.representative(base_tail))
        return oracle.pp(g, difference)

    while remaining:
        base_edge = min(remaining)
        base_tail, index = base_edge
        if order is not None:
            # Finite order: walk the whole orbit, collect positions.
            positions: dict[int, int] = {}
            cur = base_tail
            for j in range(order):
                value = remaining.pop((cur, index), 0)
                if value:
                    positions[j] = value
                cur = ctx.mul(gkey, cur)
            if cur != base_tail:
                raise InputValidationError("orbit walk failed to close")
            if sum(positions.values()) != 0:
                raise InputValidationError("target does not project to zero")
            running = 0
            cur = base_tail
            for j in range(order):
                running += positions.get(j, 0)
                if running:
                    sigma[(cur, index)] = checked_int(running)
                cur = ctx.mul(gkey, cur)
        else:
            # Infinite order: find relative positions of same-index entries.
            group_positions = {0: remaining.pop(base_edge)}
            for edge in [e for e in remaining if e[1] == index]:
                j = relative_position(base_tail, edge[0])
                if j is not None:
                    group_positions[j] = remaining.pop(edge)
            if sum(group_positions.values()) != 0:
                raise InputValidationError("target does not project to zero")
            low, high = min(group_positions), max(group_positions)
            running = 0
            cur = _shifted_tail(ctx, gkey, base_tail, low)
            for j in range(low, high):
                running += group_positions.get(j, 0)
                if running:
                    sigma[(cur, index)] = checked_int(running)
                cur = ctx.mul(gkey, cur)
    return FlowMap(ctx, sigma)


def _shifted_tail(ctx, gkey, tail, exponent: int):
    return ctx.mul(_key_power(ctx, gkey, exponent), tail)


# ---------------------------------------------------------------------------
# Realizing flows as words
# ---------------------------------------------------------------------------


def word_realizing_flow(ctx, f: FlowMap, image_key=None) -> Word:
    """A word whose flow is f and whose image is ``image_key``.

    Requires the net flow of f to equal delta_root - delta_image (zero for
    the root). The flow minus the flow of the image's representative word
    is a circulation; circulations decompose into closed walks because the
    remaining arc multiset stays balanced, and each closed walk based at h
    is conjugated into place by h's representative word (whose + and -
    traversals cancel in the flow).
    """
    image = ctx.root if image_key is None else image_key
    if net_flow(f) != boundary(ctx, image):
        raise InputValidationError("flow does not match the requested image")
    tail_word = Word() if image == ctx.root else ctx.representative(image)
    circulation = f - flow_of(ctx, tail_word)

    arcs: dict = {}
    for (tail, index), value in circulation.items():
        head = ctx.head((tail, index))
        if value > 0:
            arcs.setdefault(tail, []).append([(index, 1), head, value])
        else:
            arcs.setdefault(head, []).append([(index, -1), tail, -value])
    for out_list in arcs.values():
        out_list.sort(key=lambda arc: (arc[0][0], -arc[0][1], str(arc[1])))

    def take_arc(vertex):
        for arc in arcs[vertex]:
            if arc[2] > 0:
                arc[2] -= 1
                return arc[0], arc[1]
        return None

    pieces: list[Word] = []
    for start in sorted(arcs):
        while True:
            step = take_arc(start)
            if step is None:
                break
            letters = [step[0]]
            cur = step[1]
            while cur != start:
                nxt = take_arc(cur)
                if nxt is None:
                    raise InputValidationError("flow is not balanced")
                letters.append(nxt[0])
                cur = nxt[1]
            loop = Word(tuple(letters))
            base = ctx.representative(start)
            pieces.append(base * loop * invert(base))
    result = Word()
    for piece in pieces:
        result = result * piece
    return free_reduce(result * tail_word)
