"""Folded inverse graphs labeled by generators.

Only positive edges are stored; the negative edge for ``tail --x_i--> head``
is implied. A support graph records the vertices and edges actually
traversed when a word is traced over an oracle, together with one
representative word per vertex (the first prefix that reached it).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import InputValidationError
from .oracles import FiniteGroupOracle, GroupOracle
from .words import Word, letter_word


@dataclass
class SupportGraph:
    """Edges traversed by a word, rooted at the key of the empty word."""

    root: object
    vertices: dict  # key -> first word reaching the key
    edges: dict  # (tail key, generator index) -> head key
    in_edges: dict = field(default_factory=dict)  # (head key, index) -> tail key

    def __post_init__(self):
        if not self.in_edges:
            self.in_edges = {(h, i): t for (t, i), h in self.edges.items()}

    def vertex_count(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return len(self.edges)


def build_support_graph(oracle: GroupOracle, w: Word) -> SupportGraph:
    """Trace w from the identity, collecting every prefix vertex and edge.

    Vertices are oracle-canonical keys, so the result is automatically
    folded. The word need not be reduced.
    """
    root = oracle.canonical_key(Word())
    vertices = {root: Word()}
    edges: dict = {}
    current = root
    prefix = Word()
    for index, sign in w:
        oracle.alphabet.check_letter((index, sign))
        nxt = oracle.step_key(current, index, sign)
        prefix = prefix * letter_word(index, sign)
        if nxt not in vertices:
            vertices[nxt] = prefix
        if sign > 0:
            edges[(current, index)] = nxt
        else:
            edges[(nxt, index)] = current
        current = nxt
    return SupportGraph(root=root, vertices=vertices, edges=edges)


@dataclass
class FiniteXDigraph:
    """An explicit finite folded inverse graph (positive edges only)."""

    vertices: list
    edges: list  # (tail, head, generator index)
    root: object | None = None

    def __post_init__(self):
        vertex_set = set(self.vertices)
        if len(vertex_set) != len(self.vertices):
            raise InputValidationError("duplicate vertices")
        seen_out, seen_in = set(), set()
        for tail, head, index in self.edges:
            if tail not in vertex_set or head not in vertex_set:
                raise InputValidationError(f"edge ({tail},{head},{index}) leaves the vertex set")
            if (tail, index) in seen_out or (head, index) in seen_in:
                raise InputValidationError("graph is not folded")
            seen_out.add((tail, index))
            seen_in.add((head, index))
        if self.root is not None and self.root not in vertex_set:
            raise InputValidationError("root is not a vertex")


def from_support_graph(g: SupportGraph) -> FiniteXDigraph:
    vertices = sorted(g.vertices)
    edges = sorted((tail, head, index) for (tail, index), head in g.edges.items())
    return FiniteXDigraph(vertices=vertices, edges=edges, root=g.root)


def cayley_graph(oracle: FiniteGroupOracle) -> FiniteXDigraph:
    """The full Cayley graph of a finite oracle on its generated subgroup."""
    vertices = sorted(oracle.elements())
    edges = sorted(
        (v, oracle.step_key(v, i, 1), i)
        for v in vertices
        for i in range(1, oracle.alphabet.rank + 1)
    )
    return FiniteXDigraph(vertices=vertices, edges=edges, root=oracle.root_key())


def _undirected_adjacency(g: FiniteXDigraph):
    adj: dict = {v: [] for v in g.vertices}
    for edge_id, (tail, head, _index) in enumerate(g.edges):
        adj[tail].append((head, edge_id))
        if head != tail:
            adj[head].append((tail, edge_id))
    return adj


def is_connected(g: FiniteXDigraph) -> bool:
    if not g.vertices:
        return True
    adj = _undirected_adjacency(g)
    seen = {g.vertices[0]}
    queue = deque(seen)
    while queue:
        for nxt, _ in adj[queue.popleft()]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(g.vertices)


def graph_rank(g: FiniteXDigraph) -> int:
    """Positive edges beyond a spanning tree: |E+| - (|V| - 1)."""
    if not is_connected(g):
        raise InputValidationError("rank requires a connected graph")
    return len(g.edges) - (len(g.vertices) - 1)


def girth(g: FiniteXDigraph) -> int | float:
    """Length of the shortest nonempty reduced cycle, or infinity.

    A self-loop gives girth 1; two distinct positive edges joining the same
    pair of vertices give a reduced length-2 cycle (up one edge, back down
    the other). Beyond those cases the graph is simple and ordinary BFS
    from every vertex applies.
    """
    pair_counts: dict = {}
    for tail, head, _index in g.edges:
        if tail == head:
            return 1
        pair = (tail, head) if tail <= head else (head, tail)
        pair_counts[pair] = pair_counts.get(pair, 0) + 1
    if any(count > 1 for count in pair_counts.values()):
        return 2
    adj = _undirected_adjacency(g)
    best = math.inf
    for start in g.vertices:
        dist = {start: 0}
        parent_edge = {start: None}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            if dist[cur] * 2 >= best:
                continue
            for nxt, edge_id in adj[cur]:
                if edge_id == parent_edge[cur]:
                    continue
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    parent_edge[nxt] = edge_id
                    queue.append(nxt)
                else:
                    best = min(best, dist[cur] + dist[nxt] + 1)
    return best


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    g: SupportGraph | FiniteXDigraph,
    flow=None,
    name: str = "support",
    labels: dict | None = None,
) -> str:
    """Render as Graphviz DOT; flow values, when given, join the edge labels."""
    if isinstance(g, SupportGraph):
        vertices = sorted(g.vertices)
        edges = sorted((t, h, i) for (t, i), h in g.edges.items())
        root = g.root
        labels = labels or {k: str(w) for k, w in g.vertices.items()}
    else:
        vertices, edges, root = list(g.vertices), list(g.edges), g.root
        labels = labels or {}
    node_id = {v: f"n{pos}" for pos, v in enumerate(vertices)}
    lines = [f"digraph {name} {{"]
    for v in vertices:
        attrs = [f"label={_dot_quote(labels.get(v, repr(v)))}"]
        if v == root:
            attrs.append("shape=doublecircle")
        lines.append(f"  {node_id[v]} [{', '.join(attrs)}];")
    for tail, head, index in edges:
        text = f"x{index}"
        if flow is not None:
            text += f" : {flow.value((tail, index))}"
        lines.append(
            f"  {node_id[tail]} -> {node_id[head]} [label={_dot_quote(text)}];"
        )
    lines.append("}")
    return "\n".join(lines)
