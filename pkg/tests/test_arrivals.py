import math

import pytest

from fusionsim.arrivals import (
    ArrivalSchedule,
    FixedLength,
    UniformLength,
    constant_schedule,
    overlap_ratio,
    poisson_schedule,
    sample_output_lengths,
    uniform_std,
)
from fusionsim.errors import InvalidParam


class TestConstantSchedule:
    def test_even_spacing(self):
        sched = constant_schedule(4, 10.0, start_ms=10.0)
        assert sched.times() == [10.0, 20.0, 30.0, 40.0]

    def test_zero_interval_means_simultaneous(self):
        sched = constant_schedule(4, 0.0, start_ms=10.0)
        assert sched.times() == [10.0, 10.0, 10.0, 10.0]

    def test_ids_are_sequential(self):
        sched = constant_schedule(3, 5.0)
        assert [rid for rid, _ in sched.entries] == [0, 1, 2]

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidParam):
            constant_schedule(0, 1.0)
        with pytest.raises(InvalidParam):
            constant_schedule(2, -1.0)


class TestPoissonSchedule:
    def test_first_arrival_at_start(self):
        sched = poisson_schedule(5, 100.0, seed=1, start_ms=3.0)
        assert sched.times()[0] == 3.0

    def test_count_and_monotonicity(self):
        sched = poisson_schedule(50, 100.0, seed=1)
        times = sched.times()
        assert len(times) == 50
        assert all(b >= a for a, b in zip(times, times[1:]))

    def test_deterministic_per_seed(self):
        a = poisson_schedule(20, 50.0, seed=9)
        b = poisson_schedule(20, 50.0, seed=9)
        assert a.times() == b.times()
        c = poisson_schedule(20, 50.0, seed=10)
        assert a.times() != c.times()

    def test_gap_statistics(self):
        """1000 gaps at mean 100 look exponential: sample mean within
        10% and sample variance within the sampling noise of 10000
        (the variance of a sample variance is large at this size)."""
        sched = poisson_schedule(1001, 100.0, seed=1)
        times = sched.times()
        gaps = [b - a for a, b in zip(times, times[1:])]
        mean = sum(gaps) / len(gaps)
        var = sum((g - mean) ** 2 for g in gaps) / (len(gaps) - 1)
        assert 90.0 <= mean <= 110.0
        assert 8000.0 <= var <= 12500.0

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidParam):
            poisson_schedule(0, 1.0, seed=0)
        with pytest.raises(InvalidParam):
            poisson_schedule(2, 0.0, seed=0)


def test_schedule_rejects_decreasing_times():
    with pytest.raises(InvalidParam):
        ArrivalSchedule(((0, 5.0), (1, 4.0)))


class TestOutputLengths:
    def test_fixed(self):
        assert sample_output_lengths(3, FixedLength(512), seed=0) == [512, 512, 512]

    def test_uniform_stays_in_bounds(self):
        lens = sample_output_lengths(5000, UniformLength(128, 1792), seed=42)
        assert min(lens) >= 128
        assert max(lens) <= 1792

    def test_uniform_endpoints_reachable(self):
        # narrow range so both endpoints are certain to show up
        lens = sample_output_lengths(500, UniformLength(3, 7), seed=9)
        assert set(lens) == {3, 4, 5, 6, 7}

    def test_uniform_mean(self):
        lens = sample_output_lengths(5000, UniformLength(128, 1792), seed=42)
        mean = sum(lens) / len(lens)
        assert 930.0 <= mean <= 990.0

    def test_deterministic_per_seed(self):
        a = sample_output_lengths(50, UniformLength(1, 100), seed=5)
        b = sample_output_lengths(50, UniformLength(1, 100), seed=5)
        assert a == b

    def test_validation(self):
        with pytest.raises(InvalidParam):
            FixedLength(0)
        with pytest.raises(InvalidParam):
            UniformLength(10, 5)
        with pytest.raises(InvalidParam):
            UniformLength(0, 5)


class TestOverlapRatio:
    @pytest.mark.parametrize(
        "gap,expected",
        [
            (500.0, 5500.0 / 6500.0),    # 0.84615...
            (2500.0, 3500.0 / 8500.0),   # 0.41176...
            (5000.0, 1000.0 / 11000.0),  # 0.09090...
        ],
    )
    def test_reference_points(self, gap, expected):
        assert overlap_ratio(6000.0, gap) == pytest.approx(expected, abs=1e-12)

    def test_zero_gap_full_overlap(self):
        assert overlap_ratio(6000.0, 0.0) == 1.0

    def test_gap_at_or_past_runtime_gives_zero(self):
        assert overlap_ratio(6000.0, 6000.0) == 0.0
        assert overlap_ratio(6000.0, 9000.0) == 0.0

    def test_monotone_in_gap(self):
        vals = [overlap_ratio(6000.0, g) for g in range(0, 7000, 250)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_rejects_nonpositive_runtime(self):
        with pytest.raises(InvalidParam):
            overlap_ratio(0.0, 10.0)
        with pytest.raises(InvalidParam):
            overlap_ratio(10.0, -1.0)


class TestUniformStd:
    def test_reference_value(self):
        assert uniform_std(128.0, 1792.0) == pytest.approx(
            1664.0 / math.sqrt(12.0), rel=1e-12
        )

    def test_degenerate_interval(self):
        assert uniform_std(5.0, 5.0) == 0.0

    def test_scales_linearly_with_width(self):
        assert uniform_std(0.0, 20.0) == pytest.approx(2 * uniform_std(0.0, 10.0))

    def test_rejects_inverted_interval(self):
        with pytest.raises(InvalidParam):
            uniform_std(2.0, 1.0)
