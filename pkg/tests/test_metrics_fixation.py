import numpy as np
import pytest

from saleval.errors import DegenerateInputError
from saleval.maps import (
    FixationSet,
    centered_gaussian_baseline,
    density_from_fixations,
    invert_map,
)
from saleval.metrics_fixation import (
    auc_f,
    auc_of_curve,
    auc_pair_oracle,
    auc_s,
    cc,
    nss,
    nss_at_points,
    roc_from_samples,
    sauc,
    sim,
    snss,
    snss_trials,
)
from saleval.shuffle import TrialPlan, build_shuffle_bank, shuffled_negative_trials


def _blob_setup(seed=0):
    """Two-image toy dataset with well separated fixation clusters."""
    rng = np.random.default_rng(seed)
    frame = (32, 24)
    fix_a = FixationSet("a", np.column_stack([rng.integers(4, 9, 12), rng.integers(4, 9, 12)]), frame)
    fix_b = FixationSet("b", np.column_stack([rng.integers(24, 29, 12), rng.integers(16, 21, 12)]), frame)
    bank = build_shuffle_bank([fix_a, fix_b], frame)
    g = density_from_fixations(fix_a, 4.0)
    return fix_a, fix_b, bank, g


def test_cc_self_and_inverse():
    _, _, _, g = _blob_setup()
    assert cc(g, g) == pytest.approx(1.0)
    assert cc(invert_map(g), g) == pytest.approx(-1.0)


def test_cc_affine_invariant():
    rng = np.random.default_rng(4)
    s = rng.random((10, 10))
    g = rng.random((10, 10))
    assert abs(cc(3.7 * s + 0.2, g) - cc(s, g)) < 1e-9


def test_cc_degenerate_raises():
    with pytest.raises(DegenerateInputError):
        cc(np.full((4, 4), 0.5), np.random.default_rng(0).random((4, 4)))


def test_cc_shape_mismatch():
    with pytest.raises(ValueError):
        cc(np.ones((2, 2)), np.ones((3, 3)))


def test_sim_identical_is_one():
    _, _, _, g = _blob_setup()
    assert sim(g, g) == pytest.approx(1.0)


def test_sim_disjoint_ranges_zero():
    lo = np.full((4, 4), 0.1)
    hi = np.full((4, 4), 0.9)
    assert sim(lo, hi, bins=4) == 0.0


def test_sim_matches_hand_histogram():
    s = np.array([[0.1, 0.3], [0.6, 0.9]])
    g = np.array([[0.2, 0.2], [0.7, 0.7]])
    # 4 bins: s -> [.25,.25,.25,.25], g -> [.5,0,.5,0]; intersection .25+.25
    assert sim(s, g, bins=4) == pytest.approx(0.5)


def test_nss_positive_at_peak():
    rng = np.random.default_rng(1)
    s = rng.random((8, 8))
    y, x = np.unravel_index(s.argmax(), s.shape)
    fix = FixationSet("a", [[x, y]], (8, 8))
    expected = (s.max() - s.mean()) / s.std()
    assert nss(s, fix) == pytest.approx(expected)
    assert nss(s, fix) > 0


def test_nss_affine_invariant():
    rng = np.random.default_rng(2)
    s = rng.random((12, 12))
    fix = FixationSet("a", [[2, 3], [7, 7], [10, 1]], (12, 12))
    assert abs(nss(2.5 * s + 1.0, fix) - nss(s, fix)) < 1e-9


def test_nss_degenerate_raises():
    fix = FixationSet("a", [[1, 1]], (4, 4))
    with pytest.raises(DegenerateInputError):
        nss(np.full((4, 4), 0.3), fix)


def test_roc_perfect_separation():
    curve = roc_from_samples([1.0, 1.0], [0.0, 0.0])
    idx = np.where(curve.tpr == 1.0)[0]
    assert (curve.fpr[idx][:-1] == 0.0).all()
    assert auc_of_curve(curve) == pytest.approx(1.0)


def test_roc_matches_brute_force_thresholds():
    pos = np.array([0.9, 0.4, 0.4, 0.2, 0.75])
    neg = np.array([0.6, 0.1, 0.4, 0.8, 0.3])
    curve = roc_from_samples(pos, neg)
    for t, tp, fp in zip(curve.thresholds, curve.tpr, curve.fpr):
        assert tp == pytest.approx((pos >= t).mean())
        assert fp == pytest.approx((neg >= t).mean())


def test_roc_rejects_out_of_range():
    with pytest.raises(ValueError):
        roc_from_samples([1.2], [0.1])


def test_auc_diagonal_and_perfect():
    t = np.linspace(1, 0, 256)
    diag = roc_from_samples(t.clip(0, 1), t.clip(0, 1))
    assert auc_of_curve(diag) == pytest.approx(0.5)


def test_auc_pair_oracle_basics():
    assert auc_pair_oracle([1.0], [0.0]) == 1.0
    assert auc_pair_oracle([0.5], [0.5]) == 0.5
    assert auc_pair_oracle([0.9, 0.4], [0.6, 0.1]) == 0.75


def test_auc_grid_close_to_oracle():
    rng = np.random.default_rng(9)
    for n, tol in [(8, 0.05), (64, 0.01), (256, 0.01)]:
        for _ in range(20):
            pos = rng.beta(2, 1, n)
            neg = rng.beta(1, 2, n)
            grid = auc_of_curve(roc_from_samples(pos, neg))
            assert abs(grid - auc_pair_oracle(pos, neg)) <= tol


def test_auc_grid_refinement_stable():
    rng = np.random.default_rng(10)
    pos = rng.beta(3, 1.5, 128)
    neg = rng.beta(1.5, 3, 128)
    a256 = auc_of_curve(roc_from_samples(pos, neg, levels=256))
    a1024 = auc_of_curve(roc_from_samples(pos, neg, levels=1024))
    assert abs(a256 - a1024) < 0.005


def test_auc_f_constant_map_exactly_half():
    fix = FixationSet("a", [[1, 1], [2, 3], [5, 5]], (8, 8))
    plan = TrialPlan(num_trials=10, master_seed=0)
    assert auc_f(np.full((8, 8), 0.7), fix, plan).value == 0.5


def test_auc_f_good_map_high():
    fix_a, _, _, g = _blob_setup()
    plan = TrialPlan(num_trials=30, master_seed=1)
    score = auc_f(g, fix_a, plan)
    assert score.value > 0.9
    assert score.trials_used == 30


def test_auc_f_deterministic():
    fix_a, _, _, g = _blob_setup()
    plan = TrialPlan(num_trials=10, master_seed=5)
    assert auc_f(g, fix_a, plan).value == auc_f(g, fix_a, plan).value


def test_sauc_constant_map_exactly_half():
    fix_a, _, bank, _ = _blob_setup()
    plan = TrialPlan(num_trials=10, master_seed=0)
    assert sauc(np.full((24, 32), 0.4), fix_a, bank, plan).value == 0.5


def test_sauc_gt_map_above_half_on_separated_data():
    fix_a, _, bank, g = _blob_setup()
    plan = TrialPlan(num_trials=30, master_seed=2)
    assert sauc(g, fix_a, bank, plan).value > 0.9


def test_auc_s_self_high_and_constant_half():
    _, _, _, g = _blob_setup()
    assert auc_s(g, g) > 0.99
    assert auc_s(np.full_like(g, 0.3), g) == 0.5


def test_auc_s_degenerate_gt():
    with pytest.raises(DegenerateInputError):
        auc_s(np.zeros((4, 4)), np.zeros((4, 4)))
    with pytest.raises(DegenerateInputError):
        auc_s(np.full((4, 4), 0.1), np.full((4, 4), 0.8))


def test_snss_positive_for_gt_map():
    fix_a, _, bank, g = _blob_setup()
    plan = TrialPlan(num_trials=40, master_seed=3)
    score = snss(g, fix_a, bank, plan)
    assert score.value > 1.0
    assert score.metric_id == "snss"


def test_snss_affine_invariant():
    fix_a, _, bank, g = _blob_setup()
    plan = TrialPlan(num_trials=20, master_seed=4)
    base = snss(g, fix_a, bank, plan).value
    scaled = snss(np.clip(0.5 * g + 0.1, 0, 1), fix_a, bank, plan).value
    assert abs(base - scaled) < 1e-9


def test_snss_antisymmetric_under_role_swap():
    fix_a, _, bank, g = _blob_setup()
    plan = TrialPlan(num_trials=8, master_seed=6)
    for sample in shuffled_negative_trials(bank, fix_a, "snss", plan):
        fwd = nss_at_points(g, fix_a.points) - nss_at_points(g, sample.points)
        rev = nss_at_points(g, sample.points) - nss_at_points(g, fix_a.points)
        assert fwd == pytest.approx(-rev, abs=1e-12)


def test_snss_trials_reproducible():
    fix_a, _, bank, g = _blob_setup()
    plan = TrialPlan(num_trials=12, master_seed=8)
    v1 = snss_trials(g, fix_a, bank, plan)
    v2 = snss_trials(g, fix_a, bank, plan)
    assert np.array_equal(v1, v2)


def test_snss_degenerate_raises():
    fix_a, _, bank, _ = _blob_setup()
    plan = TrialPlan(num_trials=3, master_seed=0)
    with pytest.raises(DegenerateInputError):
        snss(np.full((24, 32), 0.2), fix_a, bank, plan)


def test_centered_gaussian_near_chance_under_sauc():
    # fixations drawn from a centered distribution: the centered blob gets
    # no shuffled advantage even though it nails the spatial prior
    rng = np.random.default_rng(12)
    frame = (48, 36)
    sets = []
    for i in range(12):
        pts = np.column_stack(
            [
                np.clip(rng.normal(24, 6, 25).round(), 0, 47),
                np.clip(rng.normal(18, 5, 25).round(), 0, 35),
            ]
        ).astype(int)
        sets.append(FixationSet(f"i{i}", pts, frame))
    bank = build_shuffle_bank(sets, frame)
    blob = centered_gaussian_baseline(*frame, 0.25)
    plan = TrialPlan(num_trials=40, master_seed=13)
    scores = [sauc(blob, fs, bank, plan).value for fs in sets]
    assert 0.45 < np.mean(scores) < 0.55
