"""Subset sum, zero-one equations, and acyclic-graph membership.

The brute-force solvers are correctness oracles: they enumerate candidate
selections in binary counting order (first selector bit least significant)
and fail loudly when the instance exceeds the configured cap, with no
pruning heuristics. The zero-one equation reduction builds commuting,
independent conjugates inside a free metabelian group, spaced far enough
apart along the first generator that their flow supports are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceededError, InputValidationError
from .magnus import GroupSpec, make_oracle
from .oracles import GroupOracle
from .words import Word, commutator, free_reduce, invert, letter_word, parse_word, power

SSP_DEFAULT_CAP = 20
ZOE_DEFAULT_CAP = 20
AGP_DEFAULT_CAP = 100_000


@dataclass(frozen=True)
class SspInstance:
    group: GroupSpec
    generators: tuple[Word, ...]
    target: Word

    @classmethod
    def from_dict(cls, data: dict) -> "SspInstance":
        try:
            group = GroupSpec.from_dict(data["group"])
            oracle = make_oracle(group)
            generators = tuple(
                parse_word(text, oracle.alphabet) for text in data["generators"]
            )
            target = parse_word(data["target"], oracle.alphabet)
        except (KeyError, TypeError) as exc:
            raise InputValidationError(f"malformed subset-sum instance: {exc}")
        return cls(group=group, generators=generators, target=target)

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_dict(),
            "generators": [str(g) for g in self.generators],
            "target": str(self.target),
        }


@dataclass(frozen=True)
class ZoeInstance:
    matrix: tuple[tuple[int, ...], ...]  # rows are equations, columns selectors

    def __post_init__(self):
        if not self.matrix or not self.matrix[0]:
            raise InputValidationError("matrix must be nonempty")
        width = len(self.matrix[0])
        if any(len(row) != width for row in self.matrix):
            raise InputValidationError("matrix rows must have equal length")
        if any(x not in (0, 1) for row in self.matrix for x in row):
            raise InputValidationError("matrix entries must be 0 or 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ZoeInstance":
        try:
            return cls(tuple(tuple(int(x) for x in row) for row in data["matrix"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputValidationError(f"malformed zero-one instance: {exc}")

    def to_dict(self) -> dict:
        return {"matrix": [list(row) for row in self.matrix]}


@dataclass(frozen=True)
class AgpInstance:
    group: GroupSpec
    vertex_count: int
    edges: tuple[tuple[int, int, Word], ...]  # (from, to, label)
    source: int
    sink: int
    target: Word

    def __post_init__(self):
        n = self.vertex_count
        if n < 1:
            raise InputValidationError("graph needs at least one vertex")
        for tail, head, _label in self.edges:
            if not (0 <= tail < n and 0 <= head < n):
                raise InputValidationError("edge endpoint out of range")
        if not (0 <= self.source < n and 0 <= self.sink < n):
            raise InputValidationError("source/sink out of range")
        if self._topological_order() is None:
            raise InputValidationError("graph must be acyclic")

    def _topological_order(self) -> list[int] | None:
        indegree = [0] * self.vertex_count
        outgoing: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for tail, head, _ in self.edges:
            indegree[head] += 1
            outgoing[tail].append(head)
        ready = [v for v in range(self.vertex_count) if indegree[v] == 0]
        order = []
        while ready:
            vertex = ready.pop()
            order.append(vertex)
            for head in outgoing[vertex]:
                indegree[head] -= 1
                if indegree[head] == 0:
                    ready.append(head)
        return order if len(order) == self.vertex_count else None

    @classmethod
    def from_dict(cls, data: dict) -> "AgpInstance":
        try:
            group = GroupSpec.from_dict(data["group"])
            alphabet = make_oracle(group).alphabet
            edges = tuple(
                (int(e["from"]), int(e["to"]), parse_word(e["label"], alphabet))
                for e in data["edges"]
            )
            return cls(
                group=group,
                vertex_count=int(data["vertices"]),
                edges=edges,
                source=int(data["source"]),
                sink=int(data["sink"]),
                target=parse_word(data["target"], alphabet),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputValidationError(f"malformed acyclic-graph instance: {exc}")

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_dict(),
            "vertices": self.vertex_count,
            "edges": [
                {"from": tail, "to": head, "label": str(label)}
                for tail, head, label in self.edges
            ],
            "source": self.source,
            "sink": self.sink,
            "target": str(self.target),
        }


# ---------------------------------------------------------------------------
# Brute-force solvers
# ---------------------------------------------------------------------------


def _selections(count: int):
    """All 0/1 vectors in binary counting order, first coordinate least
    significant: (0,..), (1,0,..), (0,1,..), (1,1,..), ..."""
    for code in range(1 << count):
        yield tuple((code >> j) & 1 for j in range(count))


def ssp_solve_brute(
    inst: SspInstance,
    oracle: GroupOracle | None = None,
    cap: int = SSP_DEFAULT_CAP,
) -> tuple[int, ...] | None:
    """First selector vector whose ordered product equals the target."""
    k = len(inst.generators)
    if k > cap:
        raise CapExceededError(f"{k} generators exceed the cap of {cap}")
    oracle = oracle or make_oracle(inst.group)
    generator_keys = [oracle.canonical_key(g) for g in inst.generators]
    target_key = oracle.canonical_key(inst.target)
    for selection in _selections(k):
        product = oracle.root_key()
        for key, chosen in zip(generator_keys, selection):
            if chosen:
                product = oracle.mul_key(product, key)
        if product == target_key:
            return selection
    return None


def zoe_solve_brute(
    z: ZoeInstance, cap: int = ZOE_DEFAULT_CAP
) -> tuple[int, ...] | None:
    """First selector vector with (matrix) . selection = all-ones."""
    width = len(z.matrix[0])
    if width > cap:
        raise CapExceededError(f"{width} columns exceed the cap of {cap}")
    for selection in _selections(width):
        if all(
            sum(row[j] * selection[j] for j in range(width)) == 1
            for row in z.matrix
        ):
            return selection
    return None


def zoe_to_ssp(z: ZoeInstance, rank: int = 2) -> SspInstance:
    """Encode a zero-one equation system as subset sum in a free metabelian
    group.

    Row i is represented by the conjugate h_i = c_i [x1,x2] c_i^-1 with
    c_i = x1^(9i); the spacing 9 = 2*|[x1,x2]| + 1 pushes the flow supports
    of the h_i pairwise apart, so they generate a free abelian subgroup.
    Column j becomes the product of the h_i with a 1 in that column and the
    target is the product of all h_i, making the instance solvable exactly
    when the system is.
    """
    if rank < 2:
        raise InputValidationError("the reduction needs rank >= 2")
    seed = commutator(letter_word(1), letter_word(2))
    spacing = 2 * len(seed) + 1
    rows = len(z.matrix)
    width = len(z.matrix[0])
    conjugates = []
    for i in range(1, rows + 1):
        shift_word = power(letter_word(1), spacing * i)
        conjugates.append(free_reduce(shift_word * seed * invert(shift_word)))
    generators = []
    for j in range(width):
        product = Word()
        for i in range(rows):
            if z.matrix[i][j]:
                product = product * conjugates[i]
        generators.append(free_reduce(product))
    target = Word()
    for h in conjugates:
        target = target * h
    return SspInstance(
        group=GroupSpec(kind="free-solvable", rank=rank, degree=2),
        generators=tuple(generators),
        target=free_reduce(target),
    )


def agp_solve_brute(
    inst: AgpInstance,
    oracle: GroupOracle | None = None,
    cap: int = AGP_DEFAULT_CAP,
) -> list[int] | None:
    """First source-to-sink path whose label equals the target.

    Paths are enumerated depth-first following edges in input order, so the
    result is the lexicographically least edge-index sequence. The total
    number of source-to-sink paths must stay within the cap.
    """
    oracle = oracle or make_oracle(inst.group)
    order = inst._topological_order()
    position = {vertex: i for i, vertex in enumerate(order)}
    path_counts = [0] * inst.vertex_count
    path_counts[inst.sink] = 1
    outgoing: list[list[tuple[int, int]]] = [[] for _ in range(inst.vertex_count)]
    for edge_id, (tail, head, _label) in enumerate(inst.edges):
        outgoing[tail].append((edge_id, head))
    for vertex in sorted(range(inst.vertex_count), key=lambda v: -position[v]):
        if vertex != inst.sink:
            path_counts[vertex] = sum(path_counts[h] for _, h in outgoing[vertex])
    if path_counts[inst.source] > cap:
        raise CapExceededError(
            f"{path_counts[inst.source]} paths exceed the cap of {cap}"
        )
    target_key = oracle.canonical_key(inst.target)
    path: list[int] = []

    def search(vertex, key) -> list[int] | None:
        if vertex == inst.sink and key == target_key:
            return list(path)
        for edge_id, head in outgoing[vertex]:
            label = inst.edges[edge_id][2]
            path.append(edge_id)
            found = search(head, oracle.mul_key(key, oracle.canonical_key(label)))
            if found is not None:
                return found
            path.pop()
        return None

    return search(inst.source, oracle.root_key())
