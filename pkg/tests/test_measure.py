"""Measure spaces, partitions, and the block-averaging conditional expectation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orliczlab import young
from orliczlab.errors import ConfigError, NegativeInput, NotMeasurable, SpaceMismatch
from orliczlab.measure import (
    MeasureSpace,
    MinOfLinear,
    Partition,
    SimpleFunction,
    as_values,
    block_values,
    build_rotation_space,
    build_symmetric_space,
    check_averaging,
    cond_exp,
    domination_constant,
    generalized_jensen_check,
    is_block_constant,
    jensen_check,
)


def unit_space(n):
    return MeasureSpace(np.full(n, 1.0 / n))


class TestMeasureSpace:
    def test_total_and_integrate(self):
        space = MeasureSpace([0.5, 1.5, 2.0])
        assert space.n_atoms == 3
        assert space.total == pytest.approx(4.0)
        assert space.integrate([1.0, 2.0, 3.0]) == pytest.approx(0.5 + 3.0 + 6.0)

    def test_rejects_bad_weights(self):
        with pytest.raises(ConfigError):
            MeasureSpace([])
        with pytest.raises(ConfigError):
            MeasureSpace([1.0, 0.0])
        with pytest.raises(ConfigError):
            MeasureSpace([1.0, -2.0])
        with pytest.raises(ConfigError):
            MeasureSpace([1.0, np.inf])

    def test_rejects_label_count_mismatch(self):
        with pytest.raises(ConfigError):
            MeasureSpace([1.0, 1.0], labels=(0.5,))

    def test_weights_are_read_only(self):
        space = MeasureSpace([1.0, 2.0])
        with pytest.raises(ValueError):
            space.weights[0] = 3.0

    def test_integrate_rejects_wrong_shape(self):
        with pytest.raises(SpaceMismatch):
            MeasureSpace([1.0, 2.0]).integrate([1.0, 2.0, 3.0])


class TestPartition:
    def test_blocks_and_measures(self):
        part = Partition([0, 1, 0, 2])
        assert part.n_blocks == 3
        assert list(part.block_members(0)) == [0, 2]
        space = MeasureSpace([1.0, 2.0, 3.0, 4.0])
        assert list(part.block_measures(space)) == [4.0, 2.0, 4.0]

    def test_rejects_label_gaps(self):
        with pytest.raises(ConfigError):
            Partition([0, 2])  # block 1 missing
        with pytest.raises(ConfigError):
            Partition([1, 2])  # must start at 0
        with pytest.raises(ConfigError):
            Partition([])

    def test_refinement_relation(self):
        singletons = Partition([0, 1, 2, 3])
        pairs = Partition([0, 0, 1, 1])
        whole = Partition([0, 0, 0, 0])
        assert singletons.is_refinement_of(pairs)
        assert pairs.is_refinement_of(whole)
        assert singletons.is_refinement_of(whole)
        assert not whole.is_refinement_of(pairs)
        assert not pairs.is_refinement_of(singletons)
        assert not pairs.is_refinement_of(Partition([0, 0, 1, 1, 2, 2]))

    def test_space_size_must_match(self):
        with pytest.raises(SpaceMismatch):
            Partition([0, 1]).block_measures(MeasureSpace([1.0, 1.0, 1.0]))


class TestSimpleFunction:
    def test_binds_values_to_space(self):
        space = unit_space(3)
        f = SimpleFunction(space, [1.0, 2.0, 3.0])
        assert np.array_equal(as_values(space, f), [1.0, 2.0, 3.0])

    def test_rejects_wrong_length(self):
        with pytest.raises(SpaceMismatch):
            SimpleFunction(unit_space(3), [1.0, 2.0])

    def test_as_values_rejects_foreign_space(self):
        f = SimpleFunction(MeasureSpace([1.0, 2.0]), [1.0, 1.0])
        with pytest.raises(SpaceMismatch):
            as_values(MeasureSpace([3.0, 4.0]), f)

    def test_as_values_accepts_equal_weights_space(self):
        f = SimpleFunction(MeasureSpace([1.0, 2.0]), [5.0, 6.0])
        assert np.array_equal(as_values(MeasureSpace([1.0, 2.0]), f), [5.0, 6.0])


class TestCondExp:
    def test_whole_space_block_is_the_mean(self):
        space = unit_space(4)
        part = Partition([0, 0, 0, 0])
        out = cond_exp(space, part, [1.0, 2.0, 3.0, 4.0])
        assert np.allclose(out, 2.5)

    def test_weighted_average_per_block(self):
        space = MeasureSpace([1.0, 3.0, 2.0, 2.0])
        part = Partition([0, 0, 1, 1])
        out = cond_exp(space, part, [4.0, 0.0, 1.0, 5.0])
        # block 0: (1*4 + 3*0)/4 = 1; block 1: (2*1 + 2*5)/4 = 3
        assert np.allclose(out, [1.0, 1.0, 3.0, 3.0])

    def test_idempotent(self):
        rng = np.random.default_rng(7)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 10))
        part = Partition(np.arange(10) % 3)
        f = rng.normal(size=10)
        once = cond_exp(space, part, f)
        twice = cond_exp(space, part, once)
        assert np.max(np.abs(twice - once)) <= 1e-14 * max(1.0, np.max(np.abs(once)))

    def test_preserves_block_integrals(self):
        rng = np.random.default_rng(8)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 12))
        part = Partition(np.arange(12) % 4)
        f = rng.normal(size=12)
        ef = cond_exp(space, part, f)
        for b in range(part.n_blocks):
            members = part.block_members(b)
            got = np.sum(space.weights[members] * ef[members])
            want = np.sum(space.weights[members] * f[members])
            assert got == pytest.approx(want, rel=1e-12)

    def test_positive_and_linear(self):
        rng = np.random.default_rng(9)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 8))
        part = Partition(np.arange(8) % 3)
        f = rng.normal(size=8)
        g = rng.normal(size=8)
        assert np.all(cond_exp(space, part, np.abs(f)) >= 0)
        lhs = cond_exp(space, part, 2.0 * f - 3.0 * g)
        rhs = 2.0 * cond_exp(space, part, f) - 3.0 * cond_exp(space, part, g)
        assert np.allclose(lhs, rhs, atol=1e-13)

    def test_tower_property_refined_then_coarse(self):
        rng = np.random.default_rng(10)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 8))
        fine = Partition([0, 0, 1, 1, 2, 2, 3, 3])
        coarse = Partition([0, 0, 0, 0, 1, 1, 1, 1])
        assert fine.is_refinement_of(coarse)
        f = rng.normal(size=8)
        via_fine = cond_exp(space, coarse, cond_exp(space, fine, f))
        direct = cond_exp(space, coarse, f)
        assert np.allclose(via_fine, direct, atol=1e-13)

    def test_block_values_and_constancy(self):
        part = Partition([0, 1, 0, 1])
        assert list(block_values(part, [5.0, 7.0, 5.0, 7.0])) == [5.0, 7.0]
        assert is_block_constant(part, [5.0, 7.0, 5.0, 7.0])
        assert not is_block_constant(part, [5.0, 7.0, 5.1, 7.0])
        assert is_block_constant(part, [5.0, 7.0, 5.1, 7.0], tol=0.2)


class TestBuilders:
    def test_symmetric_space_shape(self):
        space, part = build_symmetric_space(2)
        assert np.allclose(space.weights, 0.25)
        assert space.labels == (-0.75, -0.25, 0.25, 0.75)
        assert list(part.labels) == [0, 1, 1, 0]

    def test_symmetric_cond_exp_is_symmetrization(self):
        space, part = build_symmetric_space(4)
        f = np.asarray(space.labels) ** 3 + 1.0  # odd part cancels
        out = cond_exp(space, part, f)
        assert np.allclose(out, (f + f[::-1]) / 2.0, atol=1e-15)

    def test_symmetric_rejects_bad_size(self):
        with pytest.raises(ConfigError):
            build_symmetric_space(0)

    def test_rotation_space_shape(self):
        space, part = build_rotation_space(3, 2)
        assert space.n_atoms == 6
        assert np.allclose(space.weights, 1.0 / 6.0)
        assert list(part.labels) == [0, 1, 0, 1, 0, 1]

    def test_rotation_cond_exp_averages_orbits(self):
        space, part = build_rotation_space(3, 2)
        f = np.array([6.0, 1.0, 0.0, 2.0, 3.0, 3.0])
        out = cond_exp(space, part, f)
        assert np.allclose(out, [3.0, 2.0, 3.0, 2.0, 3.0, 2.0])

    def test_rotation_rejects_bad_params(self):
        with pytest.raises(ConfigError):
            build_rotation_space(1, 2)
        with pytest.raises(ConfigError):
            build_rotation_space(3, 0)


class TestAveraging:
    def test_holds_for_block_constant_multiplier(self):
        rng = np.random.default_rng(11)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 6))
        part = Partition([0, 0, 1, 1, 2, 2])
        f = rng.normal(size=6)
        g = np.array([2.0, 2.0, -1.0, -1.0, 0.5, 0.5])
        report = check_averaging(space, part, f, g)
        assert report["holds"]

    def test_rejects_non_measurable_multiplier(self):
        space = unit_space(4)
        part = Partition([0, 0, 1, 1])
        with pytest.raises(NotMeasurable):
            check_averaging(space, part, np.ones(4), np.array([1.0, 2.0, 3.0, 3.0]))


class TestJensen:
    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_convexity_gap_never_positive(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        space = MeasureSpace(rng.uniform(0.5, 2.0, n))
        part = Partition(np.arange(n) % int(rng.integers(1, n + 1)))
        phi = young.scaled_power(float(rng.uniform(1.2, 4.0)))
        f = rng.uniform(-3.0, 3.0, n)
        report = jensen_check(space, part, phi, f)
        assert report["holds"], report

    def test_strict_inequality_visible_for_spread_data(self):
        space = unit_space(2)
        part = Partition([0, 0])
        phi = young.power(2.0)
        report = jensen_check(space, part, phi, np.array([0.0, 2.0]))
        # phi(E f) = 1 while E(phi f) = 2; the gap is strictly negative.
        assert report["holds"]
        assert report["max_violation"] == pytest.approx(-1.0)


class TestMinOfLinear:
    def test_single_linear_piece_commutes_exactly(self):
        space = MeasureSpace([1.0, 2.0, 1.0])
        part = Partition([0, 0, 1])
        theta = MinOfLinear(((2.0, 3.0),))
        fs = [np.array([1.0, 2.0, 0.5]), np.array([0.0, 1.0, 4.0])]
        report = generalized_jensen_check(space, part, theta, fs)
        assert report["holds"]
        assert abs(report["max_violation"]) <= 1e-13

    def test_min_of_two_coordinates(self):
        theta = MinOfLinear(((1.0, 0.0), (0.0, 1.0)))
        assert theta.arity == 2
        assert theta(np.array([3.0, 5.0])) == 3.0
        space = unit_space(4)
        part = Partition([0, 0, 0, 0])
        f = np.array([1.0, 4.0, 2.0, 8.0])
        g = np.array([3.0, 1.0, 5.0, 2.0])
        report = generalized_jensen_check(space, part, theta, [f, g])
        assert report["holds"]
        # E(min) = (1+1+2+2)/4 = 1.5 < min(E f, E g) = min(3.75, 2.75)
        assert report["max_violation"] == pytest.approx(1.5 - 2.75)

    def test_tangent_envelope_of_sqrt(self):
        # theta(x) = min over 64 slopes 1/(2 sqrt t) of x * slope: a concave,
        # monotone, nonnegative surrogate for sqrt built from tangent slopes.
        nodes = np.geomspace(0.01, 100.0, 64)
        theta = MinOfLinear(tuple((float(1.0 / (2.0 * np.sqrt(t))),) for t in nodes))
        rng = np.random.default_rng(12)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 10))
        part = Partition(np.arange(10) % 3)
        f = rng.uniform(0.0, 50.0, 10)
        report = generalized_jensen_check(space, part, theta, [f])
        assert report["holds"]

    def test_rejects_negative_coefficients_and_inputs(self):
        with pytest.raises(ConfigError):
            MinOfLinear(((1.0, -1.0),))
        with pytest.raises(ConfigError):
            MinOfLinear(())
        with pytest.raises(ConfigError):
            MinOfLinear(((1.0, 2.0), (1.0,)))
        theta = MinOfLinear(((1.0,),))
        space = unit_space(3)
        part = Partition([0, 0, 0])
        with pytest.raises(NegativeInput):
            generalized_jensen_check(space, part, theta, [np.array([1.0, -1.0, 2.0])])


class TestDominationConstant:
    def test_symmetric_pairing_gives_two(self):
        space, part = build_symmetric_space(4)
        assert domination_constant(space, part) == pytest.approx(2.0)

    def test_rotation_orbits_give_n(self):
        space, part = build_rotation_space(3, 2)
        assert domination_constant(space, part) == pytest.approx(3.0)

    def test_singleton_blocks_give_one(self):
        space = MeasureSpace([0.3, 1.7, 2.0])
        assert domination_constant(space, Partition([0, 1, 2])) == pytest.approx(1.0)

    def test_bounds_concentrated_functions(self):
        rng = np.random.default_rng(13)
        space = MeasureSpace(rng.uniform(0.5, 2.0, 8))
        part = Partition(np.arange(8) % 3)
        c0 = domination_constant(space, part)
        for i in range(8):
            h = np.zeros(8)
            h[i] = 1.0
            assert cond_exp(space, part, h)[i] <= c0 * h[i] + 1e-15
