import numpy as np
import pytest
from scipy import stats

from saleval.maps import FixationSet
from saleval.shuffle import (
    ShuffleBank,
    TrialPlan,
    build_shuffle_bank,
    derive_trial_seed,
    pooled_fixations,
    sample_shuffled_nonfixated,
    sample_uniform_nonfixated,
    shuffled_negative_trials,
)


def _bank():
    a = FixationSet("a", [[1, 1], [2, 2], [3, 3]], (10, 10))
    b = FixationSet("b", [[5, 5], [6, 6], [7, 7], [8, 8], [9, 9]], (10, 10))
    return build_shuffle_bank([a, b], (10, 10))


def test_bank_counts_and_ids():
    bank = _bank()
    assert set(bank.entries) == {"a", "b"}
    assert sum(len(p) for p in bank.entries.values()) == 8


def test_bank_proportional_rescale():
    fs = FixationSet("a", [[50, 50]], (100, 100))
    other = FixationSet("b", [[0, 0]], (200, 200))
    bank = build_shuffle_bank([fs, other], (200, 200))
    assert bank.entries["a"].tolist() == [[100, 100]]


def test_bank_deterministic():
    b1, b2 = _bank(), _bank()
    for k in b1.entries:
        assert np.array_equal(b1.entries[k], b2.entries[k])


def test_bank_requires_two_images():
    fs = FixationSet("a", [[1, 1]], (4, 4))
    with pytest.raises(ValueError):
        build_shuffle_bank([fs], (4, 4))


def test_seed_derivation_stable_and_distinct():
    s = derive_trial_seed(42, "img", "sauc", 0)
    assert s == derive_trial_seed(42, "img", "sauc", 0)
    others = {
        derive_trial_seed(42, "img", "sauc", 1),
        derive_trial_seed(42, "img", "snss", 0),
        derive_trial_seed(43, "img", "sauc", 0),
        derive_trial_seed(42, "img2", "sauc", 0),
    }
    assert s not in others and len(others) == 4


def test_uniform_excludes_fixations_forced_case():
    fs = FixationSet("a", [[0, 0]], (2, 2))
    out = sample_uniform_nonfixated(fs, 3, seed=1)
    assert sorted(map(tuple, out.points.tolist())) == [(0, 1), (1, 0), (1, 1)]


def test_uniform_deterministic():
    fs = FixationSet("a", [[3, 3], [4, 4]], (32, 32))
    s1 = sample_uniform_nonfixated(fs, 10, seed=99)
    s2 = sample_uniform_nonfixated(fs, 10, seed=99)
    assert np.array_equal(s1.points, s2.points)


def test_uniform_never_hits_fixations():
    fs = FixationSet("a", [[x, y] for x in range(8) for y in range(4)], (8, 8))
    fixated = set(map(tuple, fs.points.tolist()))
    for seed in range(50):
        out = sample_uniform_nonfixated(fs, 16, seed=seed)
        assert len(set(map(tuple, out.points.tolist()))) == 16
        assert not fixated & set(map(tuple, out.points.tolist()))


def test_uniform_rejection_branch_distinct_points():
    fs = FixationSet("a", [[0, 0]], (64, 64))
    out = sample_uniform_nonfixated(fs, 12, seed=5)
    assert len(set(map(tuple, out.points.tolist()))) == 12
    assert (0, 0) not in set(map(tuple, out.points.tolist()))


def test_uniform_n_too_large_rejected():
    fs = FixationSet("a", [[0, 0]], (2, 2))
    with pytest.raises(ValueError):
        sample_uniform_nonfixated(fs, 4, seed=0)


def test_uniform_chi_square_uniformity():
    # pooled pixel frequencies over many draws on an 8x8 frame
    fs = FixationSet("a", [[0, 0], [7, 7]], (8, 8))
    counts = np.zeros(64)
    draws = 0
    for seed in range(12500):
        out = sample_uniform_nonfixated(fs, 8, seed=seed)
        flat = out.points[:, 1] * 8 + out.points[:, 0]
        np.add.at(counts, flat, 1)
        draws += 8
    eligible = np.ones(64, bool)
    eligible[[0, 63]] = False
    assert counts[~eligible].sum() == 0
    _, p = stats.chisquare(counts[eligible])
    assert p > 0.01


def test_shuffled_source_correctness():
    bank = _bank()
    pool = set(map(tuple, pooled_fixations(bank, "a").tolist()))
    out = sample_shuffled_nonfixated(bank, "a", 50, seed=3)
    assert set(map(tuple, out.points.tolist())) <= pool
    assert out.points.shape == (50, 2)


def test_shuffled_deterministic():
    bank = _bank()
    s1 = sample_shuffled_nonfixated(bank, "b", 7, seed=11)
    s2 = sample_shuffled_nonfixated(bank, "b", 7, seed=11)
    assert np.array_equal(s1.points, s2.points)


def test_shuffled_forced_source():
    # excluding one of two images forces every sample onto the other's points
    a = FixationSet("a", [[1, 1]], (4, 4))
    b = FixationSet("b", [[2, 2], [3, 3]], (4, 4))
    bank = build_shuffle_bank([a, b], (4, 4))
    out = sample_shuffled_nonfixated(bank, "a", 20, seed=0)
    assert set(map(tuple, out.points.tolist())) <= {(2, 2), (3, 3)}


def test_pooled_fixations_empty_exclusion_rejected():
    # the >= 2 image invariant makes this unreachable via a built bank, so
    # poke the guard directly with a hand-rigged single-entry bank
    bank = _bank()
    rigged = object.__new__(ShuffleBank)
    object.__setattr__(rigged, "entries", {"a": bank.entries["a"]})
    object.__setattr__(rigged, "frame", bank.frame)
    with pytest.raises(ValueError):
        pooled_fixations(rigged, "a")


def test_shuffled_multiplicity_chi_square():
    # pooled draws should follow the multiplicity of the source fixations
    a = FixationSet("a", [[0, 0]], (4, 4))
    b = FixationSet("b", [[1, 1], [1, 1], [2, 2]], (4, 4))
    bank = build_shuffle_bank([a, b], (4, 4))
    counts = {(1, 1): 0, (2, 2): 0}
    n_draws = 30000
    for seed in range(300):
        out = sample_shuffled_nonfixated(bank, "a", 100, seed=seed)
        for p in map(tuple, out.points.tolist()):
            counts[p] += 1
    _, p_val = stats.chisquare(
        [counts[(1, 1)], counts[(2, 2)]], [n_draws * 2 / 3, n_draws * 1 / 3]
    )
    assert p_val > 0.01


def test_trial_plan_defaults_and_digest():
    plan = TrialPlan()
    assert plan.num_trials == 100
    assert plan.samples_per_trial is None
    assert plan.digest() == TrialPlan().digest()
    assert plan.digest() != TrialPlan(master_seed=1).digest()
    with pytest.raises(ValueError):
        TrialPlan(num_trials=0)


def test_trials_are_independent_and_indexed():
    bank = _bank()
    fs = FixationSet("a", [[1, 1], [2, 2], [3, 3]], (10, 10))
    plan = TrialPlan(num_trials=5, master_seed=7)
    samples = list(shuffled_negative_trials(bank, fs, "snss", plan))
    assert [s.trial_index for s in samples] == [0, 1, 2, 3, 4]
    # distinct seeds should yield at least one differing sample
    assert any(
        not np.array_equal(samples[0].points, s.points) for s in samples[1:]
    )
