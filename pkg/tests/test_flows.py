import random

import pytest

from solvgroup.errors import ContextMismatchError, InputValidationError
from solvgroup.flows import (
    CayleyContext,
    FlowMap,
    GroupRingElement,
    augment,
    boundary,
    flow_of,
    is_circulation,
    net_flow,
    repair_circulation,
    ring_action,
    shift,
    shift_by_key,
    solve_shift_difference,
    telescope,
    word_realizing_flow,
)
from solvgroup.oracles import S3_TABLE, make_finite_group, make_free_abelian
from solvgroup.words import Alphabet, Word, free_reduce, invert, parse_word
from tests.util import random_reduced_word, random_word

AB2 = Alphabet(2)


def P(text):
    return parse_word(text, AB2)


@pytest.fixture
def zz_ctx():
    return CayleyContext(make_free_abelian(2))


@pytest.fixture
def s3_ctx():
    return CayleyContext(make_finite_group(S3_TABLE))


def random_flow(rng, ctx, words=3, max_length=6) -> FlowMap:
    total = FlowMap(ctx)
    for _ in range(words):
        w = random_word(rng, ctx.oracle.alphabet.rank, max_length)
        total = total + flow_of(ctx, w).scale(rng.randint(-2, 2))
    return total


class TestFlowOf:
    def test_single_edge(self, zz_ctx):
        assert dict(flow_of(zz_ctx, P("x1")).items()) == {((0, 0), 1): 1}

    def test_lattice_square(self, zz_ctx):
        assert dict(flow_of(zz_ctx, P("x1 x2 X1 X2")).items()) == {
            ((0, 0), 1): 1,
            ((1, 0), 2): 1,
            ((0, 1), 1): -1,
            ((0, 0), 2): -1,
        }

    def test_cancellation_on_same_edge(self, zz_ctx):
        assert not flow_of(zz_ctx, P("x1 X1"))

    def test_concatenation_homomorphism(self, zz_ctx):
        rng = random.Random(71)
        for _ in range(60):
            w1, w2 = random_word(rng, 2, 8), random_word(rng, 2, 8)
            lhs = flow_of(zz_ctx, w1 * w2)
            rhs = flow_of(zz_ctx, w1) + shift(w1, flow_of(zz_ctx, w2))
            assert lhs == rhs

    def test_inverse_flow(self, zz_ctx):
        rng = random.Random(72)
        for _ in range(40):
            w = random_word(rng, 2, 8)
            lhs = flow_of(zz_ctx, invert(w))
            rhs = -shift(invert(w), flow_of(zz_ctx, w))
            assert lhs == rhs

    def test_free_reduction_invariance(self, zz_ctx):
        rng = random.Random(73)
        for _ in range(40):
            w = random_word(rng, 2, 10)
            assert flow_of(zz_ctx, w) == flow_of(zz_ctx, free_reduce(w))


class TestArithmetic:
    def test_additive_inverse(self, zz_ctx):
        f = flow_of(zz_ctx, P("x1 x2"))
        assert not (f + (-f))

    def test_identity(self, zz_ctx):
        f = flow_of(zz_ctx, P("x1 x2"))
        assert FlowMap(zz_ctx) + f == f

    def test_context_mismatch_rejected(self, zz_ctx, s3_ctx):
        f = flow_of(zz_ctx, P("x1"))
        g = flow_of(s3_ctx, P("x1"))
        with pytest.raises(ContextMismatchError):
            f + g

    def test_zero_entries_dropped(self, zz_ctx):
        f = FlowMap(zz_ctx, {((0, 0), 1): 1})
        g = FlowMap(zz_ctx, {((0, 0), 1): -1, ((0, 0), 2): 2})
        assert dict((f + g).items()) == {((0, 0), 2): 2}


class TestShift:
    def test_identity_shift(self, zz_ctx):
        f = flow_of(zz_ctx, P("x1 x2"))
        assert shift(Word(), f) == f

    def test_translation_example(self, zz_ctx):
        f = FlowMap(zz_ctx, {((0, 0), 2): 1})
        assert dict(shift(P("x1"), f).items()) == {((1, 0), 2): 1}

    def test_norm_preserved(self, zz_ctx):
        rng = random.Random(74)
        for _ in range(40):
            g = random_word(rng, 2, 6)
            f = random_flow(rng, zz_ctx)
            assert shift(g, f).norm() == f.norm()

    def test_group_action_composes(self, s3_ctx):
        rng = random.Random(75)
        for _ in range(30):
            g, h = random_word(rng, 2, 5), random_word(rng, 2, 5)
            f = random_flow(rng, s3_ctx)
            assert shift(g, shift(h, f)) == shift(g * h, f)


class TestNorm:
    def test_lattice_square(self, zz_ctx):
        assert flow_of(zz_ctx, P("x1 x2 X1 X2")).norm() == 4

    def test_empty(self, zz_ctx):
        assert FlowMap(zz_ctx).norm() == 0


class TestNetFlow:
    def test_single_edge(self, zz_ctx):
        z = net_flow(flow_of(zz_ctx, P("x1")))
        assert dict(z.items()) == {(0, 0): 1, (1, 0): -1}

    def test_commutator_is_circulation(self, zz_ctx):
        assert not net_flow(flow_of(zz_ctx, P("x1 x2 X1 X2")))
        assert is_circulation(flow_of(zz_ctx, P("x1 x2 X1 X2")))
        assert not is_circulation(flow_of(zz_ctx, P("x1")))
        assert is_circulation(FlowMap(zz_ctx))

    def test_boundary_property(self, zz_ctx):
        rng = random.Random(76)
        for _ in range(60):
            w = random_word(rng, 2, 10)
            z = net_flow(flow_of(zz_ctx, w))
            assert z == boundary(zz_ctx, zz_ctx.key_of(w))

    def test_boundary_property_finite(self, s3_ctx):
        rng = random.Random(77)
        for _ in range(40):
            w = random_word(rng, 2, 10)
            z = net_flow(flow_of(s3_ctx, w))
            assert z == boundary(s3_ctx, s3_ctx.key_of(w))


class TestAugment:
    def test_examples(self, zz_ctx):
        assert augment(GroupRingElement(zz_ctx, {(0, 0): 1, (1, 0): -1})) == 0
        assert augment(GroupRingElement(zz_ctx)) == 0
        assert augment(GroupRingElement(zz_ctx, {(0, 0): 3})) == 3

    def test_net_flow_lands_in_augmentation_kernel(self, zz_ctx):
        rng = random.Random(78)
        for _ in range(40):
            f = random_flow(rng, zz_ctx)
            assert augment(net_flow(f)) == 0


class TestTelescope:
    def test_single_generator(self, zz_ctx):
        z = GroupRingElement(zz_ctx, {(1, 0): 1, (0, 0): -1})
        assert dict(telescope(zz_ctx, z).items()) == {((0, 0), 1): -1}

    def test_empty(self, zz_ctx):
        assert not telescope(zz_ctx, GroupRingElement(zz_ctx))

    def test_product_vertex(self, zz_ctx):
        key = zz_ctx.key_of(P("x1 x2"))
        z = GroupRingElement(zz_ctx, {key: 1, (0, 0): -1})
        assert net_flow(telescope(zz_ctx, z)) == z

    def test_round_trip_on_random_elements(self, zz_ctx):
        rng = random.Random(79)
        for _ in range(40):
            coeffs = {}
            for _ in range(rng.randint(1, 4)):
                key = zz_ctx.key_of(random_word(rng, 2, 6))
                coeffs[key] = coeffs.get(key, 0) + rng.randint(-3, 3)
            coeffs[zz_ctx.root] = coeffs.get(zz_ctx.root, 0) - sum(coeffs.values())
            z = GroupRingElement(zz_ctx, coeffs)
            assert augment(z) == 0
            assert net_flow(telescope(zz_ctx, z)) == z

    def test_rejects_nonzero_augmentation(self, zz_ctx):
        with pytest.raises(InputValidationError):
            telescope(zz_ctx, GroupRingElement(zz_ctx, {(0, 0): 1}))


class TestRepairCirculation:
    def test_infinite_order_returns_input(self, zz_ctx):
        f = flow_of(zz_ctx, P("x1 x2 X1 X2"))
        assert repair_circulation(zz_ctx, P("x1"), f) == f

    def test_finite_order_postconditions(self, s3_ctx):
        rng = random.Random(80)
        a = P("x1")
        ka = s3_ctx.key_of(a)
        for _ in range(30):
            base_flow = random_flow(rng, s3_ctx)
            f = FlowMap(s3_ctx)
            cursor = s3_ctx.root
            for _ in range(3):  # orbit sum over <a>, order 3
                f = f + shift_by_key(cursor, base_flow)
                cursor = s3_ctx.mul(cursor, ka)
            closed = random_word(rng, 2, 6)
            closer = s3_ctx.representative(s3_ctx.key_of(closed))
            f = f + flow_of(s3_ctx, closed * invert(closer))
            repaired = repair_circulation(s3_ctx, a, f)
            assert not net_flow(repaired)
            lhs = f - shift(a, f)
            rhs = repaired - shift(a, repaired)
            assert lhs == rhs

    def test_empty_flow(self, s3_ctx):
        assert not repair_circulation(s3_ctx, P("x1"), FlowMap(s3_ctx))

    def test_trivial_shift_element_rejected(self, zz_ctx):
        with pytest.raises(InputValidationError):
            repair_circulation(zz_ctx, P("x1 X1"), FlowMap(zz_ctx))

    def test_precondition_violation_rejected(self, zz_ctx):
        # (1 - x1) applied to the flow of x2 is not a circulation
        with pytest.raises(InputValidationError):
            repair_circulation(zz_ctx, P("x1"), flow_of(zz_ctx, P("x2")))


class TestShiftKernels:
    def test_finite_orbit_sums_are_killed(self, s3_ctx):
        rng = random.Random(81)
        for _ in range(30):
            g = random_reduced_word(rng, 2, rng.randint(1, 4))
            kg = s3_ctx.key_of(g)
            if kg == s3_ctx.root:
                continue
            order = s3_ctx.oracle.key_order(kg)
            h = random_word(rng, 2, 4)
            generator_flow = flow_of(s3_ctx, P("x1") if rng.random() < 0.5 else P("x2"))
            f = FlowMap(s3_ctx)
            cursor = s3_ctx.key_of(h)
            for _ in range(order):
                f = f + shift_by_key(cursor, generator_flow)
                cursor = s3_ctx.mul(kg, cursor)
            assert f - shift(g, f) == FlowMap(s3_ctx)

    def test_torsion_free_shift_has_trivial_kernel(self, zz_ctx):
        rng = random.Random(82)
        checked = 0
        while checked < 30:
            g = random_reduced_word(rng, 2, rng.randint(1, 5))
            if zz_ctx.key_of(g) == zz_ctx.root:
                continue
            f = random_flow(rng, zz_ctx)
            if not f:
                continue
            assert f - shift(g, f) != FlowMap(zz_ctx)
            checked += 1


class TestSolveShiftDifference:
    @pytest.mark.parametrize("which", ["abelian", "finite"])
    def test_solves_constructed_targets(self, which, zz_ctx, s3_ctx):
        ctx = zz_ctx if which == "abelian" else s3_ctx
        rng = random.Random(83)
        for _ in range(25):
            g = random_reduced_word(rng, 2, rng.randint(1, 4))
            if ctx.key_of(g) == ctx.root:
                continue
            sigma0 = random_flow(rng, ctx)
            target = sigma0 - shift(g, sigma0)
            sigma = solve_shift_difference(ctx, g, target)
            assert sigma - shift(g, sigma) == target

    def test_unsolvable_target_rejected(self, zz_ctx):
        with pytest.raises(InputValidationError):
            solve_shift_difference(zz_ctx, P("x1"), flow_of(zz_ctx, P("x1")))

    def test_trivial_shift_element(self, zz_ctx):
        assert not solve_shift_difference(zz_ctx, P("x1 X1"), FlowMap(zz_ctx))
        with pytest.raises(InputValidationError):
            solve_shift_difference(zz_ctx, P("x1 X1"), flow_of(zz_ctx, P("x1")))


class TestWordRealizingFlow:
    def test_round_trip_with_image(self, zz_ctx):
        rng = random.Random(84)
        for _ in range(40):
            w = random_word(rng, 2, 8)
            f = flow_of(zz_ctx, w)
            realized = word_realizing_flow(zz_ctx, f, zz_ctx.key_of(w))
            assert flow_of(zz_ctx, realized) == f

    def test_circulations(self, zz_ctx):
        rng = random.Random(85)
        for _ in range(30):
            w = random_word(rng, 2, 8)
            closer = zz_ctx.representative(zz_ctx.key_of(w))
            f = flow_of(zz_ctx, w * invert(closer))
            realized = word_realizing_flow(zz_ctx, f)
            assert flow_of(zz_ctx, realized) == f

    def test_finite_base(self, s3_ctx):
        rng = random.Random(86)
        for _ in range(30):
            w = random_word(rng, 2, 8)
            f = flow_of(s3_ctx, w)
            realized = word_realizing_flow(s3_ctx, f, s3_ctx.key_of(w))
            assert flow_of(s3_ctx, realized) == f

    def test_image_mismatch_rejected(self, zz_ctx):
        with pytest.raises(InputValidationError):
            word_realizing_flow(zz_ctx, flow_of(zz_ctx, P("x1")), zz_ctx.root)


def test_ring_action_matches_shift_sums(zz_ctx):
    rng = random.Random(87)
    for _ in range(20):
        f = random_flow(rng, zz_ctx)
        k1 = zz_ctx.key_of(random_word(rng, 2, 4))
        k2 = zz_ctx.key_of(random_word(rng, 2, 4))
        z = GroupRingElement(zz_ctx, {k1: 2}) + GroupRingElement(zz_ctx, {k2: -1})
        expected = shift_by_key(k1, f).scale(2) + shift_by_key(k2, f).scale(-1)
        assert ring_action(z, f) == expected
