import numpy as np
import pytest

from oracles import sweep_eer, sweep_threshold
from wisig.errors import InputError
from wisig.metrics import (
    MetricsReport,
    ScoredQuery,
    aggregate,
    compute_report,
    eer,
    eer_per_user,
    far,
    format_cell,
    frr,
    global_threshold,
    threshold_candidates,
)


def queries(genuine=(), random=(), simple=(), skilled=(), writer="1"):
    out = []
    for truth, scores in (
        ("genuine", genuine),
        ("random", random),
        ("simple", simple),
        ("skilled", skilled),
    ):
        out += [ScoredQuery(writer, float(s), truth) for s in scores]
    return out


class TestFrrFar:
    def test_all_accepted(self):
        assert frr(queries(genuine=[1, 2, 3]), 0.0) == 0.0

    def test_half_rejected(self):
        assert frr(queries(genuine=[-1, 1]), 0.0) == 50.0

    def test_count_oracle(self, rng):
        threshold = 0.3
        scores = rng.uniform(-1, 1, 10)
        k = sum(1 for s in scores if s < threshold)
        assert frr(queries(genuine=scores), threshold) == 10.0 * k

    def test_no_genuine_rejected(self):
        with pytest.raises(InputError):
            frr(queries(skilled=[1.0]), 0.0)

    def test_far_all_rejected(self):
        assert far(queries(skilled=[-3, -2]), "skilled", 0.0) == 0.0

    def test_far_half_accepted(self):
        assert far(queries(skilled=[-2, -1, 1, 3]), "skilled", 0.0) == 50.0

    def test_far_count_oracle(self, rng):
        threshold = -0.1
        scores = rng.uniform(-1, 1, 40)
        k = sum(1 for s in scores if s >= threshold)
        assert far(queries(random=scores), "random", threshold) == 100.0 * k / 40

    def test_far_absent_type_is_none(self):
        assert far(queries(skilled=[1.0]), "simple", 0.0) is None

    def test_threshold_boundary_is_accept(self):
        # accept iff score >= threshold, fixed project-wide
        assert frr(queries(genuine=[0.0]), 0.0) == 0.0
        assert far(queries(skilled=[0.0]), "skilled", 0.0) == 100.0


class TestGlobalThreshold:
    def test_perfectly_separated_picks_midpoint(self):
        t = global_threshold([1, 2, 3], [-3, -2, -1])
        assert t == 0.0

    def test_crossing_at_fifty_percent(self):
        t = global_threshold([0, 2], [1, 3])
        g = np.array([0.0, 2.0])
        s = np.array([1.0, 3.0])
        assert 100.0 * np.mean(g < t) == 50.0
        assert 100.0 * np.mean(s >= t) == 50.0

    def test_interleaved_set_matches_sweep_oracle(self, rng):
        g = rng.normal(1.0, 1.0, 10)
        s = rng.normal(0.0, 1.0, 10)
        assert global_threshold(g, s) == sweep_threshold(g, s)[0]

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            global_threshold([], [1.0])

    def test_candidates_include_sentinels_and_midpoints(self):
        cands = threshold_candidates([1.0, 3.0])
        assert {0.0, 1.0, 2.0, 3.0, 4.0} == set(cands.tolist())


class TestEer:
    def test_perfectly_separated(self):
        value, _ = eer([1, 2, 3], [-1, -2, -3])
        assert value == 0.0

    def test_fifty_percent(self):
        value, _ = eer([0, 2], [1, 3])
        assert value == 50.0

    def test_matches_sweep_oracle_on_random_sets(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            ng = int(rng.integers(5, 101))
            ns = int(rng.integers(5, 101))
            g = rng.normal(0.8, 1.0, ng)
            s = rng.normal(-0.8, 1.0, ns)
            assert eer(g, s)[0] == sweep_eer(g, s)

    def test_crossing_gap_bound(self):
        for seed in range(50):
            rng = np.random.default_rng(1000 + seed)
            ng = int(rng.integers(3, 60))
            ns = int(rng.integers(3, 60))
            g = rng.normal(0.3, 1.0, ng)
            s = rng.normal(-0.3, 1.0, ns)
            t = global_threshold(g, s)
            frr_v = 100.0 * np.mean(g < t)
            far_v = 100.0 * np.mean(s >= t)
            assert abs(frr_v - far_v) <= 100.0 / min(ng, ns) + 1e-9

    def test_monotone_rates_in_threshold(self, rng):
        g = rng.normal(1, 1, 50)
        s = rng.normal(-1, 1, 50)
        cands = threshold_candidates(np.concatenate([g, s]))
        frr_v = [100.0 * np.mean(g < t) for t in cands]
        far_v = [100.0 * np.mean(s >= t) for t in cands]
        assert all(a <= b for a, b in zip(frr_v, frr_v[1:]))
        assert all(a >= b for a, b in zip(far_v, far_v[1:]))

    def test_positive_scaling_leaves_eer_unchanged(self, rng):
        g = rng.normal(1, 1, 30)
        s = rng.normal(-1, 1, 30)
        for scale in (0.5, 2.0, 17.0):
            assert eer(g * scale, s * scale)[0] == eer(g, s)[0]


class TestEerPerUser:
    def test_two_writers_mean(self):
        q = queries(genuine=[1, 2], skilled=[-1, -2], writer="a")
        q += queries(genuine=[0, 2], skilled=[1, 3], writer="b")
        value, excluded = eer_per_user(q)
        assert value == 25.0
        assert excluded == 0

    def test_writer_without_forgeries_excluded(self):
        q = queries(genuine=[1], skilled=[-1], writer="a")
        q += queries(genuine=[1], writer="b")
        value, excluded = eer_per_user(q)
        assert value == 0.0
        assert excluded == 1

    def test_random_forgeries_ignored(self):
        q = queries(genuine=[1, 2], skilled=[-1, -2], random=[5.0, 6.0], writer="a")
        assert eer_per_user(q)[0] == 0.0


class TestComputeReport:
    def test_separable_report(self):
        q = queries(genuine=[2, 3], random=[-4, -5], simple=[-3, -4], skilled=[-1, -2])
        r = compute_report(q)
        assert r.frr == 0.0
        assert r.far_random == 0.0
        assert r.far_simple == 0.0
        assert r.far_skilled == 0.0
        assert r.aer == 0.0
        assert r.eer_global == 0.0

    def test_aer_averages_present_rates(self):
        q = queries(genuine=[0, 2], random=[1, 3], skilled=[1, 3])
        r = compute_report(q)
        assert r.far_simple is None
        assert r.aer == pytest.approx((r.frr + r.far_random + r.far_skilled) / 3)
        assert r.aer_genuine_skilled == pytest.approx((r.frr + r.far_skilled) / 2)
        assert r.eer_global == r.aer_genuine_skilled


def report(value, with_simple=True):
    return MetricsReport(
        frr=value,
        far_random=value,
        far_simple=value if with_simple else None,
        far_skilled=value,
        aer=value,
        aer_genuine_skilled=value,
        eer_global=value,
        eer_user=value,
        threshold_global=0.0,
    )


class TestAggregate:
    def test_single_report_zero_std(self):
        summary = aggregate([report(2.0)])
        assert summary["frr"] == (2.0, 0.0)
        assert format_cell(summary["frr"]) == "2.00 (0.00)"

    def test_two_values_sample_std(self):
        summary = aggregate([report(2.0), report(4.0)])
        assert summary["frr"][0] == 3.0
        assert summary["frr"][1] == pytest.approx(np.sqrt(2.0))
        assert format_cell(summary["frr"]) == "3.00 (1.41)"

    def test_five_equal_reports(self):
        summary = aggregate([report(1.5)] * 5)
        assert summary["aer"] == (1.5, 0.0)

    def test_absent_field_stays_none(self):
        summary = aggregate([report(1.0, with_simple=False)] * 3)
        assert summary["far_simple"] is None
        assert format_cell(summary["far_simple"]) == "—"

    def test_heterogeneous_fields_rejected(self):
        with pytest.raises(InputError):
            aggregate([report(1.0), report(1.0, with_simple=False)])

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            aggregate([])
