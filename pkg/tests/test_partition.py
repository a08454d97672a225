"""
Tests for dyadic partitions: construction, nesting and point location.
"""

import numpy as np
import pytest

from primitive_forge.construction.partition import (
    ABSOLUTE_MAX_LEVEL,
    DyadicPartition,
    build,
    locate,
    refine,
)
from primitive_forge.errors import InvalidIntervalError, LevelOutOfRangeError, OutOfDomainError


class TestBuild:
    """Knots of P_n."""

    @pytest.mark.parametrize(
        "a, b, n, knots",
        [
            (0.0, 1.0, 1, [0.0, 1.0]),
            (0.0, 1.0, 3, [0.0, 0.25, 0.5, 0.75, 1.0]),
            (-2.0, 2.0, 2, [-2.0, 0.0, 2.0]),
        ],
    )
    def test_examples(self, a, b, n, knots):
        p = build(a, b, n)
        assert p.knots.tolist() == knots
        assert p.segments == 2 ** (n - 1)

    def test_endpoints_are_exact(self):
        p = build(0.1, 0.7, 9)
        assert p.knots[0] == 0.1
        assert p.knots[-1] == 0.7
        assert np.all(np.diff(p.knots) > 0)

    def test_knots_are_read_only(self):
        p = build(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            p.knots[1] = 0.3

    def test_knot_range_matches_knots(self):
        p = build(-1.3, 2.9, 7)
        assert np.array_equal(p.knot_range(5, 30), p.knots[5:31])
        assert p.knot_range(60, 64)[-1] == 2.9

    @pytest.mark.parametrize(
        "a, b",
        [(1.0, 1.0), (2.0, 1.0), (0.0, float("inf")), (float("nan"), 1.0), (-1e308, 1e308)],
    )
    def test_invalid_interval(self, a, b):
        with pytest.raises(InvalidIntervalError):
            build(a, b, 1)

    @pytest.mark.parametrize("n", [0, -1, 25])
    def test_level_out_of_range(self, n):
        with pytest.raises(LevelOutOfRangeError):
            build(0.0, 1.0, n)

    def test_custom_max_level(self):
        assert build(0.0, 1.0, 28, max_level=28).segments == 2**27
        with pytest.raises(LevelOutOfRangeError):
            build(0.0, 1.0, 2, max_level=ABSOLUTE_MAX_LEVEL + 1)

    def test_unresolvable_spacing(self):
        with pytest.raises(LevelOutOfRangeError):
            build(1.0, 1.0 + 2e-16 * 4, 10)

    def test_contains(self):
        p = build(0.0, 1.0, 3)
        assert p.contains([0.0, 0.3, 1.0])
        assert not p.contains(1.5)


class TestRefine:
    """P_{n+1} contains every knot of P_n."""

    @pytest.mark.parametrize(
        "a, b, n, knots",
        [
            (0.0, 1.0, 1, [0.0, 0.5, 1.0]),
            (-2.0, 2.0, 2, [-2.0, -1.0, 0.0, 1.0, 2.0]),
        ],
    )
    def test_examples(self, a, b, n, knots):
        assert refine(build(a, b, n)).knots.tolist() == knots

    def test_refine_equals_build(self):
        p = build(-0.3, 1.7, 1)
        for n in range(2, 16):
            p = refine(p)
            direct = build(-0.3, 1.7, n)
            assert p == direct
            assert np.array_equal(p.knots, direct.knots)

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (-2.0, 2.0), (0.1, 0.7), (-3.7, 1e3)])
    def test_grids_are_nested_bit_exactly(self, a, b):
        for n in range(1, 12):
            coarse = build(a, b, n).knots
            fine = build(a, b, n + 1).knots
            assert np.array_equal(fine[::2], coarse)

    def test_cannot_refine_past_max_level(self):
        with pytest.raises(LevelOutOfRangeError):
            refine(build(0.0, 1.0, 5, max_level=5))


class TestLocate:
    """Half-open members, last member closed."""

    def test_examples(self):
        p = build(0.0, 1.0, 3)
        assert locate(p, 0.5) == 2
        assert locate(p, 1.0) == 3
        assert locate(p, 0.0) == 0
        assert locate(p, 0.4999999) == 1

    def test_every_knot(self):
        p = build(0.1, 0.7, 10)
        indices = locate(p, p.knots)
        assert indices.tolist() == list(range(p.segments)) + [p.segments - 1]

    @pytest.mark.parametrize("a, b, n", [(0.0, 1.0, 12), (0.1, 0.7, 17), (-3.3, 5.1, 20)])
    def test_fuzz_against_searchsorted(self, a, b, n, rng):
        p = build(a, b, n)
        xs = rng.uniform(a, b, size=100_000)
        # Points exactly on or next to knots are where rounding bites.
        near = p.knots[rng.integers(0, p.segments + 1, size=2_000)]
        xs = np.concatenate([xs, near, np.nextafter(near, a), np.nextafter(near, b)])
        xs = np.clip(xs, a, b)
        expected = np.minimum(np.searchsorted(p.knots, xs, side="right") - 1, p.segments - 1)
        assert np.array_equal(locate(p, xs), expected)

    @pytest.mark.parametrize("x", [-0.1, 1.1, float("nan")])
    def test_out_of_domain(self, x):
        with pytest.raises(OutOfDomainError):
            locate(build(0.0, 1.0, 3), x)

    def test_scalar_returns_int(self):
        assert isinstance(locate(build(0.0, 1.0, 3), 0.3), int)

    def test_partition_is_hashable_value(self):
        assert {build(0.0, 1.0, 3), build(0.0, 1.0, 3)} == {DyadicPartition(0.0, 1.0, 3)}
