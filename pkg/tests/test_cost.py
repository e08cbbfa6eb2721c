import pytest

from fusionsim.cost import (
    BASE_ITERATION_MS,
    CostParams,
    Placement,
    TPConfig,
    comm_time,
    contention_factor,
    iteration_time,
    shuffle_time,
)
from fusionsim.errors import InvalidParam


def test_base_iteration_constant():
    assert BASE_ITERATION_MS == pytest.approx(6000.0 / 512.0, rel=0)


class TestIterationTime:
    def test_single_device_within_capacity(self):
        p = CostParams()
        t1 = iteration_time(1, 0, p, TPConfig())
        t4 = iteration_time(4, 0, p, TPConfig())
        assert t1 == p.base_iteration_ms
        assert t4 == p.base_iteration_ms

    def test_marginal_kicks_in_past_capacity(self):
        p = CostParams()
        t4 = iteration_time(4, 0, p, TPConfig())
        t5 = iteration_time(5, 0, p, TPConfig())
        t9 = iteration_time(9, 0, p, TPConfig())
        assert t5 == pytest.approx(t4 + p.marginal_per_request_ms)
        assert t9 == pytest.approx(t4 + 5 * p.marginal_per_request_ms)

    def test_no_collectives_on_single_device(self):
        p = CostParams()
        assert iteration_time(1, 10**9, p, TPConfig()) == p.base_iteration_ms

    def test_collectives_added_for_tp(self):
        p = CostParams()
        tp = TPConfig(tp_size=2)
        t = iteration_time(1, 1000, p, tp)
        expect = p.base_iteration_ms + 3.0 * (
            p.alpha_intra_ms + p.beta_intra_ms_per_byte * 500.0
        )
        assert t == pytest.approx(expect, rel=1e-12)

    def test_message_splits_across_devices(self):
        p = CostParams()
        t2 = iteration_time(1, 8000, p, TPConfig(tp_size=2))
        t4 = iteration_time(1, 8000, p, TPConfig(tp_size=4))
        assert t4 < t2

    def test_comm_linear_in_live_bytes(self):
        p = CostParams()
        tp = TPConfig(tp_size=2)
        t0 = iteration_time(1, 0, p, tp)
        t1 = iteration_time(1, 10_000, p, tp)
        t2 = iteration_time(1, 20_000, p, tp)
        assert t2 - t1 == pytest.approx(t1 - t0, rel=1e-9)

    def test_inter_node_costs_more(self):
        p = CostParams()
        intra = iteration_time(2, 50_000, p, TPConfig(2, Placement.INTRA))
        inter = iteration_time(2, 50_000, p, TPConfig(2, Placement.INTER))
        assert inter > intra

    def test_rejects_bad_args(self):
        p = CostParams()
        with pytest.raises(InvalidParam):
            iteration_time(0, 0, p, TPConfig())
        with pytest.raises(InvalidParam):
            iteration_time(1, -1, p, TPConfig())


class TestCommTime:
    def test_three_collective_calls(self):
        p = CostParams()
        tp = TPConfig(tp_size=2)
        per_call = p.alpha_intra_ms + p.beta_intra_ms_per_byte * 4096.0
        assert comm_time(4096.0, tp, p) == pytest.approx(3.0 * per_call, rel=1e-12)

    def test_inter_placement_parameters(self):
        p = CostParams()
        tp = TPConfig(tp_size=4, placement=Placement.INTER)
        per_call = p.alpha_inter_ms + p.beta_inter_ms_per_byte * 1000.0
        assert comm_time(1000.0, tp, p) == pytest.approx(3.0 * per_call, rel=1e-12)

    def test_requires_multiple_devices(self):
        with pytest.raises(InvalidParam):
            comm_time(100.0, TPConfig(tp_size=1), CostParams())


class TestContentionAndShuffle:
    def test_single_instance_unhindered(self):
        assert contention_factor(1, CostParams()) == 1.0

    def test_linear_slowdown(self):
        p = CostParams(contention_gamma=0.5)
        assert contention_factor(3, p) == pytest.approx(2.0)
        assert contention_factor(5, p) == pytest.approx(3.0)

    def test_zero_gamma_means_no_interference(self):
        p = CostParams(contention_gamma=0.0)
        assert contention_factor(10, p) == 1.0

    def test_shuffle_time_linear(self):
        p = CostParams(memcpy_beta_ms_per_byte=2e-6)
        assert shuffle_time(0, p) == 0.0
        assert shuffle_time(1_000_000, p) == pytest.approx(2.0)

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidParam):
            contention_factor(0, CostParams())
        with pytest.raises(InvalidParam):
            shuffle_time(-1.0, CostParams())


class TestParamValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(base_iteration_ms=0.0),
            dict(marginal_per_request_ms=-0.1),
            dict(capacity=0),
            dict(preprocess_ms=-1.0),
            dict(contention_gamma=-0.5),
            dict(request_bytes=0),
            dict(memcpy_beta_ms_per_byte=-1e-9),
        ],
    )
    def test_rejects_bad_params(self, kwargs):
        with pytest.raises(InvalidParam):
            CostParams(**kwargs)

    def test_tp_size_must_be_positive(self):
        with pytest.raises(InvalidParam):
            TPConfig(tp_size=0)
