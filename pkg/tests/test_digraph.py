import math
import random

import pytest

from solvgroup.digraph import (
    FiniteXDigraph,
    build_support_graph,
    cayley_graph,
    from_support_graph,
    girth,
    graph_rank,
    to_dot,
)
from solvgroup.errors import InputValidationError
from solvgroup.flows import CayleyContext, flow_of
from solvgroup.oracles import (
    S3_TABLE,
    FreeAbelianOracle,
    MulTable,
    WordProblemOracle,
    make_finite_group,
    make_free_abelian,
)
from solvgroup.words import Alphabet, Word, parse_word
from tests.util import random_word

AB2 = Alphabet(2)


def P(text):
    return parse_word(text, AB2)


class TestSupportGraph:
    def test_lattice_square(self):
        zz = make_free_abelian(2)
        graph = build_support_graph(zz, P("x1 x2 X1 X2"))
        assert set(graph.vertices) == {(0, 0), (1, 0), (1, 1), (0, 1)}
        assert graph.edges == {
            ((0, 0), 1): (1, 0),
            ((1, 0), 2): (1, 1),
            ((0, 1), 1): (1, 1),
            ((0, 0), 2): (0, 1),
        }
        assert graph.root == (0, 0)

    def test_empty_word(self):
        zz = make_free_abelian(2)
        graph = build_support_graph(zz, Word())
        assert graph.vertex_count() == 1
        assert graph.edge_count() == 0

    def test_s3_commutator_support(self):
        s3 = make_finite_group(S3_TABLE)
        ctx = CayleyContext(s3)
        # the figure word [a^2, b]: nonzero flow (its image is a nontrivial
        # rotation, conjugating a 3-cycle by a transposition inverts it)
        word = P("x1 x1 x2 X1 X1 X2")
        graph = build_support_graph(s3, word)
        assert graph.vertex_count() <= 6
        assert flow_of(ctx, word)
        # a word trivial in S3 whose flow is still nonzero: [a^3, b]
        closed = P("x1^3 x2 x1^-3 X2")
        assert s3.wp(closed)
        assert flow_of(ctx, closed)

    def test_vertex_count_bound_and_prefix_tracing(self):
        zz = make_free_abelian(2)
        rng = random.Random(61)
        for _ in range(40):
            w = random_word(rng, 2, 15)
            graph = build_support_graph(zz, w)
            assert graph.vertex_count() <= len(w) + 1
            current = graph.root
            for index, sign in w:
                if sign > 0:
                    current = graph.edges[(current, index)]
                else:
                    current = graph.in_edges[(current, index)]

    def test_unreduced_input_allowed(self):
        zz = make_free_abelian(2)
        graph = build_support_graph(zz, P("x1 X1"))
        assert graph.vertex_count() == 2
        assert graph.edge_count() == 1

    def test_representatives_are_first_prefixes(self):
        zz = make_free_abelian(2)
        graph = build_support_graph(zz, P("x1 x2 X1 X2"))
        assert graph.vertices[(1, 1)] == P("x1 x2")
        assert graph.vertices[(0, 1)] == P("x1 x2 X1")


class TestRank:
    def test_tree_has_rank_zero(self):
        zz = make_free_abelian(2)
        graph = from_support_graph(build_support_graph(zz, P("x1 x2")))
        assert graph_rank(graph) == 0

    def test_lattice_square_has_rank_one(self):
        zz = make_free_abelian(2)
        graph = from_support_graph(build_support_graph(zz, P("x1 x2 X1 X2")))
        assert graph_rank(graph) == 1

    def test_full_s3_cayley_graph(self):
        graph = cayley_graph(make_finite_group(S3_TABLE))
        assert len(graph.vertices) == 6
        assert len(graph.edges) == 12
        assert graph_rank(graph) == 7

    def test_disconnected_rejected(self):
        graph = FiniteXDigraph(vertices=[0, 1, 2], edges=[(0, 1, 1)], root=0)
        with pytest.raises(InputValidationError):
            graph_rank(graph)


def _cyclic_table(n: int) -> MulTable:
    return MulTable(
        order=n,
        table=tuple(tuple((a + b) % n for b in range(n)) for a in range(n)),
        identity=0,
        generators=(1,),
    )


class TestGirth:
    def test_s3_girth_is_two(self):
        assert girth(cayley_graph(make_finite_group(S3_TABLE))) == 2

    def test_order_three_cycle(self):
        assert girth(cayley_graph(make_finite_group(_cyclic_table(3)))) == 3

    def test_longer_cycle(self):
        assert girth(cayley_graph(make_finite_group(_cyclic_table(7)))) == 7

    def test_tree_is_acyclic(self):
        zz = make_free_abelian(2)
        graph = from_support_graph(build_support_graph(zz, P("x1 x2 x1")))
        assert girth(graph) == math.inf

    def test_self_loop(self):
        table = MulTable(order=1, table=((0,),), identity=0, generators=(0,))
        assert girth(cayley_graph(make_finite_group(table))) == 1

    def test_lattice_square(self):
        zz = make_free_abelian(2)
        graph = from_support_graph(build_support_graph(zz, P("x1 x2 X1 X2")))
        assert girth(graph) == 4


class TestFoldedValidation:
    def test_duplicate_out_edge_rejected(self):
        with pytest.raises(InputValidationError):
            FiniteXDigraph(vertices=[0, 1, 2], edges=[(0, 1, 1), (0, 2, 1)])

    def test_duplicate_in_edge_rejected(self):
        with pytest.raises(InputValidationError):
            FiniteXDigraph(vertices=[0, 1, 2], edges=[(0, 2, 1), (1, 2, 1)])


class _WpOnlyAbelian(WordProblemOracle):
    def __init__(self):
        super().__init__(Alphabet(2))
        self._inner = FreeAbelianOracle(2)
        self.wp_calls = 0

    def wp(self, w):
        self.wp_calls += 1
        return self._inner.wp(w)


class TestQuadraticFallback:
    def test_wp_only_oracle_builds_the_same_graph(self):
        fast = make_free_abelian(2)
        slow = _WpOnlyAbelian()
        rng = random.Random(62)
        for _ in range(10):
            w = random_word(rng, 2, 8)
            g_fast = build_support_graph(fast, w)
            g_slow = build_support_graph(slow, w)
            assert g_fast.vertex_count() == g_slow.vertex_count()
            assert g_fast.edge_count() == g_slow.edge_count()

    def test_wp_call_count_is_quadratic_not_worse(self):
        slow = _WpOnlyAbelian()
        w = P("x1 x2 x1 x2 x1 x2")
        build_support_graph(slow, w)
        # keying each of the 7 prefixes scans at most the table built so far
        assert slow.wp_calls <= (len(w) + 1) ** 2


class TestDot:
    def test_dot_output_shape(self):
        zz = make_free_abelian(2)
        word = P("x1 x2 X1 X2")
        graph = build_support_graph(zz, word)
        ctx = CayleyContext(zz)
        text = to_dot(graph, flow=flow_of(ctx, word))
        assert text.startswith("digraph support {")
        assert text.rstrip().endswith("}")
        assert "shape=doublecircle" in text
        assert text.count("->") == 4
        assert "x1 : 1" in text

    def test_dot_is_deterministic(self):
        zz = make_free_abelian(2)
        word = P("x2 x1 X2")
        first = to_dot(build_support_graph(zz, word))
        second = to_dot(build_support_graph(zz, word))
        assert first == second
