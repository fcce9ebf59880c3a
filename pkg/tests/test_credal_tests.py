import json

import numpy as np
import pytest

from credal_testing import (
    CredalTestConfig,
    Decision,
    InvalidInputError,
    SplitConfig,
    equality_test,
    inclusion_test,
    plausibility_test,
    specification_test,
)
from credal_testing.credal_tests import derive_seed

FAST = CredalTestConfig(permutations=200, seed=17)


def gaussians(rng, means, n):
    return [rng.normal(m, 1.0, size=(n, len(m))) for m in means]


MEANS = [[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]]


class TestSpecification:
    def test_single_extreme(self, rng):
        Sy = gaussians(rng, MEANS[:1], 120)
        rep = specification_test(rng.normal(size=(120, 2)), Sy, FAST)
        assert rep.metadata["eta"] == [1.0] and rep.metadata["lambda"] == [1.0]
        assert 0 < rep.p_value <= 1

    def test_detects_outside_point(self, rng):
        Sy = gaussians(rng, MEANS, 300)
        Sx = rng.normal([-4.0, -4.0], 1.0, size=(300, 2))
        assert specification_test(Sx, Sy, FAST).rejected

    def test_recovers_weights(self, rng):
        Sy = gaussians(rng, MEANS, 1500)
        w = np.array([0.6, 0.3, 0.1])
        labels = rng.choice(3, size=1500, p=w)
        Sx = np.array(MEANS)[labels] + rng.normal(size=(1500, 2))
        rep = specification_test(Sx, Sy, FAST)
        np.testing.assert_allclose(rep.metadata["eta"], w, atol=0.1)

    def test_metadata(self, rng):
        Sy = gaussians(rng, MEANS, 200)
        rep = specification_test(rng.normal(size=(200, 2)), Sy, FAST)
        m = rep.metadata
        for key in ("seed", "backend", "bandwidth", "beta", "rho", "n_e", "n_t",
                    "lambda", "eta", "alignment_objective", "optimizer", "scaled_statistic"):
            assert key in m
        assert m["seed"] == 17 and m["bandwidth"] > 0
        assert m["n_e"] == [int(np.floor(200 * m["rho"] + 1e-9))] * 4
        assert m["n_t"] == 200 - m["n_e"][0]
        assert m["scaled_statistic"] == pytest.approx(m["n_t"] * rep.statistic, rel=1e-12)
        assert rep.permutations_used == 200
        json.loads(rep.to_json())

    def test_fixed_bandwidth(self, rng):
        Sy = gaussians(rng, MEANS, 100)
        rep = specification_test(rng.normal(size=(100, 2)), Sy, FAST.replace(bandwidth=0.7))
        assert rep.metadata["bandwidth"] == 0.7
        assert rep.metadata["bandwidth_source"] == "fixed"

    def test_double_dip_warns(self, rng):
        Sy = gaussians(rng, MEANS, 100)
        cfg = FAST.replace(split=SplitConfig(beta=0.25, mode="double_dip"))
        rep = specification_test(rng.normal(size=(100, 2)), Sy, cfg)
        assert "warning" in rep.metadata
        assert rep.metadata["n_e"] == [100] * 4 and rep.metadata["n_t"] == 31

    def test_dimension_mismatch(self, rng):
        with pytest.raises(InvalidInputError):
            specification_test(rng.normal(size=(50, 3)), gaussians(rng, MEANS, 50), FAST)


def test_seed_determinism(rng):
    Sx, Sy = gaussians(rng, MEANS[:2], 150), gaussians(rng, MEANS, 150)
    for test in (specification_test, plausibility_test, inclusion_test, equality_test):
        x = Sx[0] if test is specification_test else Sx
        assert test(x, Sy, FAST).to_json() == test(x, Sy, FAST).to_json()


def test_unseeded_run_reports_reusable_seed(rng):
    Sx, Sy = rng.normal(size=(100, 2)), gaussians(rng, MEANS, 100)
    first = specification_test(Sx, Sy, FAST.replace(seed=None))
    again = specification_test(Sx, Sy, FAST.replace(seed=first.metadata["seed"]))
    assert first.to_json() == again.to_json()


def test_level_monotonicity(rng):
    Sy = gaussians(rng, MEANS, 150)
    Sx = rng.normal([1.0, 1.0], 1.3, size=(150, 2))
    reps = [specification_test(Sx, Sy, FAST.replace(alpha=a)) for a in (0.01, 0.05, 0.2, 0.5)]
    assert len({r.p_value for r in reps}) == 1
    flags = [r.rejected for r in reps]
    assert flags == sorted(flags)


class TestInclusion:
    def test_single_extreme_is_specification(self, rng):
        Sx, Sy = gaussians(rng, MEANS[:1], 150), gaussians(rng, MEANS, 150)
        inc = inclusion_test(Sx, Sy, FAST)
        spec = specification_test(Sx[0], Sy, FAST.replace(seed=derive_seed(17, 0)))
        assert inc.p_value == spec.p_value and inc.decision == spec.decision
        assert inc.sub_reports[0].to_json() == spec.to_json()

    def test_bonferroni(self, rng):
        Sx, Sy = gaussians(rng, MEANS, 150), gaussians(rng, MEANS, 150)
        rep = inclusion_test(Sx, Sy, FAST)
        assert len(rep.sub_reports) == 3
        assert all(s.alpha == pytest.approx(0.05 / 3) for s in rep.sub_reports)
        assert rep.p_value == min(1.0, 3 * min(s.p_value for s in rep.sub_reports))
        assert rep.rejected == any(s.rejected for s in rep.sub_reports)

    def test_detects_outside_extreme(self, rng):
        Sx = gaussians(rng, [[0.0, 0.0], [-4.0, -4.0]], 300)
        rep = inclusion_test(Sx, gaussians(rng, MEANS, 300), FAST)
        assert rep.rejected and rep.sub_reports[1].rejected


class TestEquality:
    def test_structure(self, rng):
        Sx, Sy = gaussians(rng, MEANS, 120), gaussians(rng, MEANS, 120)
        rep = equality_test(Sx, Sy, FAST)
        assert [s.metadata["test"] for s in rep.sub_reports] == ["inclusion", "inclusion"]
        assert all(s.alpha == 0.025 for s in rep.sub_reports)
        assert all(ss.alpha == pytest.approx(0.025 / 3) for s in rep.sub_reports for ss in s.sub_reports)
        assert rep.p_value == min(1.0, 2 * min(s.p_value for s in rep.sub_reports))

    def test_swapped_sides(self, rng):
        # swapping the sides swaps the roles of the two inclusion directions
        Sx, Sy = gaussians(rng, MEANS[:2], 120), gaussians(rng, MEANS, 120)
        ab = equality_test(Sx, Sy, FAST)
        ba = equality_test(Sy, Sx, FAST)
        assert ab.sub_reports[0].metadata["subtests"] == ba.sub_reports[1].metadata["subtests"] == 2
        assert ab.sub_reports[1].metadata["subtests"] == ba.sub_reports[0].metadata["subtests"] == 3

    def test_detects_missing_extreme(self, rng):
        Sx = gaussians(rng, MEANS[:2], 300)
        Sy = gaussians(rng, MEANS, 300)
        assert equality_test(Sx, Sy, FAST).rejected


class TestPlausibility:
    def test_disjoint_sets_rejected(self, rng):
        Sx = gaussians(rng, [[0.0, 0.0], [1.0, 0.0]], 300)
        Sy = gaussians(rng, [[6.0, 6.0], [7.0, 6.0]], 300)
        rep = plausibility_test(Sx, Sy, FAST)
        assert rep.rejected and rep.decision is Decision.REJECT

    def test_shared_extreme(self, rng):
        Sx = gaussians(rng, [[0.0, 0.0], [5.0, 0.0]], 300)
        Sy = gaussians(rng, [[0.0, 0.0], [-5.0, 0.0]], 300)
        rep = plausibility_test(Sx, Sy, FAST)
        assert rep.metadata["lambda"][0] > 0.8 and rep.metadata["eta"][0] > 0.8
        assert "objective_trace" in rep.metadata


@pytest.mark.slow
def test_specification_level_small_sample():
    # 150 null replications at n=200 stay near the nominal level
    from credal_testing import ScenarioSpec, build_scenario

    rejections = 0
    for i in range(150):
        Sx, Sy = build_scenario(ScenarioSpec("specification", "null", n=200, seed=i, structure_seed=3))
        rejections += specification_test(Sx, Sy, CredalTestConfig(
            permutations=200, split=SplitConfig(beta=1 / 3), seed=i)).rejected
    assert rejections / 150 <= 0.13
