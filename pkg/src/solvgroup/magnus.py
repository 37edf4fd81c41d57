"""The Magnus embedding and decision procedures for derived quotients.

A word w over a base oracle for F/N maps to the pair (image of w in F/N,
flow of w on the Cayley graph). The pair is the identity exactly when w
lies in the derived subgroup N', which yields the word problem for F/N';
bounded power search gives the power problem; and a Schreier-graph
criterion with prefix-built candidate conjugators gives the conjugacy
problem. Stacking the construction on its own output produces oracles for
F/N'', F/N''', ... and, starting from the free abelian base, for free
solvable groups of any degree.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .errors import InputValidationError, UnsupportedOracleError
from .flows import (
    CayleyContext,
    FlowMap,
    boundary,
    flow_of,
    net_flow,
    repair_circulation,
    shift_by_key,
    solve_shift_difference,
    word_realizing_flow,
)
from .oracles import (
    FreeAbelianOracle,
    FiniteGroupOracle,
    GroupOracle,
    MulTable,
    make_finite_group,
    make_free_abelian,
    make_free_group,
)
from .words import Word, free_reduce, invert, letter_word


@dataclass(frozen=True)
class MagnusElement:
    """Image-flow pair representing an element of F/N'."""

    image: object
    flow: FlowMap

    def is_identity(self) -> bool:
        return not self.flow and self.image == self.flow.ctx.root


def magnus_image(base: GroupOracle, w: Word, ctx: CayleyContext | None = None) -> MagnusElement:
    """The Magnus pair of w, built letter by letter along the trace."""
    ctx = ctx or CayleyContext(base)
    key = ctx.root
    entries: dict = {}
    for index, sign in w:
        base.alphabet.check_letter((index, sign))
        edge, key = ctx.step(key, index, sign)
        total = entries.get(edge, 0) + sign
        if total:
            entries[edge] = total
        else:
            del entries[edge]
    return MagnusElement(key, FlowMap(ctx, entries))


def magnus_mul(a: MagnusElement, b: MagnusElement) -> MagnusElement:
    """Composition of Magnus pairs: images multiply, flows add with a shift."""
    ctx = a.flow.ctx
    return MagnusElement(
        ctx.mul(a.image, b.image), a.flow + shift_by_key(a.image, b.flow)
    )


def magnus_inv(a: MagnusElement) -> MagnusElement:
    ctx = a.flow.ctx
    image = ctx.oracle.inv_key(a.image)
    return MagnusElement(image, -shift_by_key(image, a.flow))


def is_magnus_image(base: GroupOracle, g, f: FlowMap) -> bool:
    """Membership test for image-flow pairs: the net flow must be the
    boundary of g (zero when g is the root)."""
    return net_flow(f) == boundary(f.ctx, g)


# ---------------------------------------------------------------------------
# Word problem
# ---------------------------------------------------------------------------


def wp_derived(base: GroupOracle, w: Word, ctx: CayleyContext | None = None) -> bool:
    """True iff w is trivial in F/N' (its flow over F/N vanishes)."""
    ctx = ctx or CayleyContext(base)
    return not flow_of(ctx, free_reduce(w))


def wp_derived_support(base: GroupOracle, w: Word) -> bool:
    """Word problem routed through an explicit support graph.

    The graph is built first; the flow is then accumulated by walking the
    word through the recorded edges, with no further oracle calls.
    """
    from .digraph import build_support_graph

    graph = build_support_graph(base, w)
    entries: dict = {}
    current = graph.root
    for index, sign in w:
        if sign > 0:
            edge = (current, index)
            current = graph.edges[edge]
        else:
            tail = graph.in_edges[(current, index)]
            edge = (tail, index)
            current = tail
        total = entries.get(edge, 0) + sign
        if total:
            entries[edge] = total
        else:
            del entries[edge]
    return not entries


# ---------------------------------------------------------------------------
# Power problem
# ---------------------------------------------------------------------------


def _power_flow(ctx: CayleyContext, fu: FlowMap, ku, k: int) -> FlowMap:
    """Flow of u^k given the flow and image key of u."""
    if k < 0:
        ku_inv = ctx.oracle.inv_key(ku)
        return _power_flow(ctx, -shift_by_key(ku_inv, fu), ku_inv, -k)
    acc = FlowMap(ctx)
    cursor = ctx.root
    for _ in range(k):
        acc = acc + shift_by_key(cursor, fu)
        cursor = ctx.mul(cursor, ku)
    return acc


def pp_derived(
    base: GroupOracle, u: Word, v: Word, ctx: CayleyContext | None = None
) -> int | None:
    """The unique k with v = u^k in F/N', or None.

    Powers are bounded by |v| because the flow norm of u^k grows at least
    linearly in k, so the scan tries k = 0, 1, -1, ..., |v|, -|v|. When the
    image of u is trivial in the base group the flow of u^k is exactly k
    times the flow of u and a single divisibility check decides.
    """
    ctx = ctx or CayleyContext(base)
    u, v = free_reduce(u), free_reduce(v)
    fu, fv = flow_of(ctx, u), flow_of(ctx, v)
    if not fu:
        return 0 if not fv else None
    ku, kv = ctx.key_of(u), ctx.key_of(v)
    if ku == ctx.root:
        if not fv:
            return 0
        edge = min(fu.support())
        ratio_num, ratio_den = fv.value(edge), fu.value(edge)
        if ratio_num % ratio_den:
            return None
        k = ratio_num // ratio_den
        return k if fu.scale(k) == fv else None
    ku_inv = ctx.oracle.inv_key(ku)
    if kv == ctx.root and not fv:
        return 0
    pos_key = neg_key = ctx.root
    for magnitude in range(1, len(v) + 1):
        pos_key = ctx.mul(pos_key, ku)
        if pos_key == kv and _power_flow(ctx, fu, ku, magnitude) == fv:
            return magnitude
        neg_key = ctx.mul(neg_key, ku_inv)
        if neg_key == kv and _power_flow(ctx, fu, ku, -magnitude) == fv:
            return -magnitude
    return None


# ---------------------------------------------------------------------------
# Schreier contexts (coset graphs of <u> over the base group)
# ---------------------------------------------------------------------------


class SchreierContext:
    """Right cosets of the subgroup generated by u's image, as a graph.

    Coset canonicalization depends on the base: over the free abelian
    oracle a pivot reduction along u's vector applies; over a finite oracle
    the minimum key of the orbit serves; any other base with a power
    problem uses a discovery table where two keys share a coset exactly
    when pp(u, difference word) succeeds. When u's image is trivial the
    coset graph coincides with the Cayley graph.
    """

    is_cayley = False

    def __init__(self, base: GroupOracle, u: Word):
        if not base.supports_pp:
            raise UnsupportedOracleError("Schreier contexts require a power problem")
        self.oracle = base
        self.u = free_reduce(u)
        self.ukey = base.canonical_key(self.u)
        self._trivial = self.ukey == base.root_key()
        self._coset_anchor: dict = {}
        self._gamma_memo: dict = {}
        self._step_memo: dict = {}
        self._pivot = None
        self._orbit_powers = None
        if not self._trivial:
            if isinstance(base, FreeAbelianOracle):
                vector = self.ukey
                position = next(i for i, x in enumerate(vector) if x)
                if vector[position] < 0:
                    vector = tuple(-x for x in vector)
                self._pivot = (position, vector)
            elif isinstance(base, FiniteGroupOracle):
                powers = [base.root_key()]
                cursor = base.mul_key(base.root_key(), self.ukey)
                while cursor != base.root_key():
                    powers.append(cursor)
                    cursor = base.mul_key(cursor, self.ukey)
                self._orbit_powers = powers
        self.root = self.coset_of(base.root_key(), Word())

    def coset_of(self, gamma_key, word: Word):
        cached = self._gamma_memo.get(gamma_key)
        if cached is not None:
            return cached
        base = self.oracle
        if self._trivial:
            coset = gamma_key
            anchor = (gamma_key, word)
        elif self._pivot is not None:
            position, vector = self._pivot
            offset = gamma_key[position] // vector[position]
            coset = tuple(x - offset * y for x, y in zip(gamma_key, vector))
            anchor = (coset, base.representative(coset))
        elif self._orbit_powers is not None:
            orbit = [base.mul_key(p, gamma_key) for p in self._orbit_powers]
            coset = min(orbit)
            anchor = (coset, base.representative(coset))
        else:
            coset = None
            for existing, (_, anchor_word) in self._coset_anchor.items():
                difference = word * invert(anchor_word)
                if base.pp(self.u, difference) is not None:
                    coset = existing
                    break
            if coset is None:
                coset = gamma_key
            anchor = (gamma_key, word)
        self._gamma_memo[gamma_key] = coset
        self._coset_anchor.setdefault(coset, anchor)
        return coset

    def coset_of_word(self, w: Word):
        w = free_reduce(w)
        return self.coset_of(self.oracle.canonical_key(w), w)

    def step(self, coset, index: int, sign: int):
        cached = self._step_memo.get((coset, index, sign))
        if cached is None:
            anchor_key, anchor_word = self._coset_anchor[coset]
            next_key = self.oracle.step_key(anchor_key, index, sign)
            cached = self.coset_of(next_key, anchor_word * letter_word(index, sign))
            self._step_memo[(coset, index, sign)] = cached
        edge = (coset, index) if sign > 0 else (cached, index)
        return edge, cached

    def head(self, edge):
        return self.step(edge[0], edge[1], 1)[1]

    def trace_flow(self, w: Word, start=None) -> FlowMap:
        return flow_of(self, w, self.root if start is None else start)


def make_schreier(base: GroupOracle, u: Word) -> SchreierContext:
    return SchreierContext(base, u)


# ---------------------------------------------------------------------------
# Conjugacy problem
# ---------------------------------------------------------------------------


def _complete_conjugator(ctx: CayleyContext, u: Word, v: Word, c0: Word) -> Word:
    """Upgrade a candidate satisfying the geometric criterion to an element
    that itself conjugates u to v in F/N'.

    The candidate pins the correct base-group image; the flow part is the
    solution of ``sigma - u.sigma = D'`` (solved orbit by orbit), repaired
    to a circulation so that the pair stays in the embedded subgroup, then
    realized as a word z with trivial base image. c0 * z conjugates.
    """
    ku, kc = ctx.key_of(u), ctx.key_of(c0)
    fu, fv, fc = flow_of(ctx, u), flow_of(ctx, v), flow_of(ctx, c0)
    difference = fu - shift_by_key(kc, fv)
    if ku == ctx.root:
        if difference:
            raise AssertionError("candidate accepted but flows differ on the Cayley graph")
        return c0
    residue = difference - (fc - shift_by_key(ku, fc))
    sigma = solve_shift_difference(ctx, u, residue)
    circulation = repair_circulation(ctx, u, sigma)
    flow_part = shift_by_key(ctx.oracle.inv_key(kc), circulation)
    z = word_realizing_flow(ctx, flow_part)
    return free_reduce(c0 * z)


def cp_derived(
    base: GroupOracle, u: Word, v: Word, ctx: CayleyContext | None = None
) -> Word | None:
    """A certified conjugator taking u to v in F/N', or None.

    Candidates are built from one fixed prefix of u (the first step whose
    Schreier-graph edge carries nonzero flow) against every prefix of v;
    a candidate is accepted when the flow of v retraced from its coset
    matches u's Schreier flow and its image conjugates correctly in the
    base group. Among accepted candidates the shortest is completed to an
    exact conjugator and certified.
    """
    ctx = ctx or CayleyContext(base)
    u, v = free_reduce(u), free_reduce(v)
    fu_gamma, fv_gamma = flow_of(ctx, u), flow_of(ctx, v)
    if not fu_gamma and not fv_gamma:
        return Word()
    if not fu_gamma or not fv_gamma:
        return None
    schreier = SchreierContext(base, u)
    fu_delta = schreier.trace_flow(u)
    pivot_prefix = None
    coset = schreier.root
    for position, (index, sign) in enumerate(u, start=1):
        edge, coset = schreier.step(coset, index, sign)
        if fu_delta.value(edge) != 0:
            pivot_prefix = u.prefix(position)
            break
    if pivot_prefix is None:
        raise AssertionError("nontrivial word produced a zero Schreier flow")
    ku, kv = ctx.key_of(u), ctx.key_of(v)
    accepted: list[Word] = []
    for j in range(len(v) + 1):
        candidate = free_reduce(pivot_prefix * invert(v.prefix(j)))
        ckey = ctx.key_of(candidate)
        conjugated = ctx.mul(ctx.mul(ctx.oracle.inv_key(ckey), ku), ckey)
        if conjugated != kv:
            continue
        if schreier.trace_flow(v, schreier.coset_of_word(candidate)) != fu_delta:
            continue
        accepted.append(candidate)
    if not accepted:
        return None
    conjugator = _complete_conjugator(ctx, u, v, min(accepted, key=len))
    certificate = free_reduce(invert(conjugator) * u * conjugator * invert(v))
    if flow_of(ctx, certificate):
        raise AssertionError("constructed conjugator failed its certificate")
    return conjugator


# ---------------------------------------------------------------------------
# Derived oracles and the solvable tower
# ---------------------------------------------------------------------------


def _bump_entries(entries: tuple, edge, delta: int) -> tuple:
    """Adjust one edge value inside a sorted entry tuple."""
    position = bisect.bisect_left(entries, (edge,))
    if position < len(entries) and entries[position][0] == edge:
        value = entries[position][1] + delta
        if value:
            return entries[:position] + ((edge, value),) + entries[position + 1 :]
        return entries[:position] + entries[position + 1 :]
    return entries[:position] + ((edge, delta),) + entries[position:]


class DerivedOracle(GroupOracle):
    """Oracle for F/N' built on top of an oracle for F/N.

    Keys are pairs (base key, sorted tuple of flow entries): the Magnus
    pair in frozen form. Stacking derived oracles yields F/N'', F/N''',
    and so on; the groups are torsion free, so key_order is 1 or infinite.
    """

    def __init__(self, base: GroupOracle):
        self.base = base
        self.alphabet = base.alphabet
        self.ctx = CayleyContext(base)
        self._rep_memo: dict = {self._root(): Word()}

    def _root(self):
        return (self.base.root_key(), ())

    def root_key(self):
        return self._root()

    def step_key(self, key, index, sign):
        image, entries = key
        if sign > 0:
            edge = (image, index)
            image = self.base.step_key(image, index, 1)
            return (image, _bump_entries(entries, edge, 1))
        image = self.base.step_key(image, index, -1)
        return (image, _bump_entries(entries, (image, index), -1))

    def mul_key(self, a, b):
        image_a, entries_a = a
        image_b, entries_b = b
        merged = dict(entries_a)
        for (tail, index), value in entries_b:
            edge = (self.base.mul_key(image_a, tail), index)
            total = merged.get(edge, 0) + value
            if total:
                merged[edge] = total
            else:
                del merged[edge]
        return (self.base.mul_key(image_a, image_b), tuple(sorted(merged.items())))

    def inv_key(self, key):
        image, entries = key
        inverse = self.base.inv_key(image)
        flipped = {
            (self.base.mul_key(inverse, tail), index): -value
            for (tail, index), value in entries
        }
        return (inverse, tuple(sorted(flipped.items())))

    def key_order(self, key) -> int | None:
        return 1 if key == self._root() else None

    def canonical_key(self, w: Word):
        for letter in w:
            self.alphabet.check_letter(letter)
        image = self.base.root_key()
        entries: dict = {}
        for index, sign in w:
            if sign > 0:
                edge = (image, index)
                image = self.base.step_key(image, index, 1)
            else:
                image = self.base.step_key(image, index, -1)
                edge = (image, index)
            total = entries.get(edge, 0) + sign
            if total:
                entries[edge] = total
            else:
                del entries[edge]
        key = (image, tuple(sorted(entries.items())))
        self._rep_memo.setdefault(key, free_reduce(w))
        return key

    def representative(self, key) -> Word:
        rep = self._rep_memo.get(key)
        if rep is None:
            image, entries = key
            rep = word_realizing_flow(self.ctx, FlowMap(self.ctx, dict(entries)), image)
            self._rep_memo[key] = rep
        return rep

    def wp(self, w: Word) -> bool:
        return wp_derived(self.base, w, ctx=self.ctx)

    def pp(self, u: Word, v: Word) -> int | None:
        return pp_derived(self.base, u, v, ctx=self.ctx)

    def cp(self, u: Word, v: Word) -> Word | None:
        return cp_derived(self.base, u, v, ctx=self.ctx)


def make_derived_oracle(base: GroupOracle) -> DerivedOracle:
    if not base.supports_pp:
        raise UnsupportedOracleError("derived oracles require a base power problem")
    return DerivedOracle(base)


def make_free_solvable(rank: int, degree: int) -> GroupOracle:
    """Oracle for the free solvable group of the given rank and degree
    (degree 1 is free abelian, each further degree stacks one derived level)."""
    if degree < 1:
        raise InputValidationError(f"degree must be >= 1, got {degree}")
    if degree == 1:
        return make_free_abelian(rank)
    return make_derived_oracle(make_free_solvable(rank, degree - 1))


# ---------------------------------------------------------------------------
# Group specifications (shared by CLI, service, and instance files)
# ---------------------------------------------------------------------------

GROUP_KINDS = ("free-solvable", "free-abelian", "finite", "free", "derived-of-finite")


@dataclass(frozen=True)
class GroupSpec:
    """Serializable description of a supported group."""

    kind: str
    rank: int | None = None
    degree: int | None = None
    table: MulTable | None = None

    def __post_init__(self):
        if self.kind not in GROUP_KINDS:
            raise InputValidationError(f"unknown group kind {self.kind!r}")
        needs_table = self.kind in ("finite", "derived-of-finite")
        if needs_table:
            if self.table is None:
                raise InputValidationError(f"{self.kind} groups require a table")
            if self.rank is not None or self.degree is not None:
                raise InputValidationError("rank/degree do not apply to table groups")
        else:
            if self.table is not None:
                raise InputValidationError("table only applies to finite groups")
            if self.rank is None or self.rank < 1:
                raise InputValidationError("rank must be a positive integer")
            if self.kind == "free-solvable":
                if self.degree is None or self.degree < 1:
                    raise InputValidationError("free-solvable needs degree >= 1")
            elif self.degree is not None:
                raise InputValidationError(f"degree does not apply to {self.kind}")

    @classmethod
    def from_dict(cls, data: dict) -> "GroupSpec":
        if not isinstance(data, dict) or "kind" not in data:
            raise InputValidationError("group spec must be an object with a kind")
        table = data.get("table")
        if isinstance(table, dict):
            table = MulTable.from_dict(table)
        rank = data.get("rank")
        degree = data.get("degree")
        return cls(
            kind=data["kind"],
            rank=None if rank is None else int(rank),
            degree=None if degree is None else int(degree),
            table=table,
        )

    def to_dict(self) -> dict:
        data: dict = {"kind": self.kind}
        if self.rank is not None:
            data["rank"] = self.rank
        if self.degree is not None:
            data["degree"] = self.degree
        if self.table is not None:
            data["table"] = self.table.to_dict()
        return data


def make_oracle(spec: GroupSpec) -> GroupOracle:
    if spec.kind == "free-solvable":
        return make_free_solvable(spec.rank, spec.degree)
    if spec.kind == "free-abelian":
        return make_free_abelian(spec.rank)
    if spec.kind == "free":
        return make_free_group(spec.rank)
    if spec.kind == "finite":
        return make_finite_group(spec.table)
    return make_derived_oracle(make_finite_group(spec.table))
