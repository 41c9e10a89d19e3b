"""Metrics driven by fixation points or a ground-truth density map.

Covers the classic map-vs-map scores (CC, SIM), the point-based scores
(NSS and its shuffled form SNSS), and the ROC family (AUC over uniform
negatives, AUC over a binarized density map, shuffled AUC), plus an exact
pair-counting AUC oracle used to validate the threshold-grid integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .maps import FixationSet, as_map, values_at
from .shuffle import ShuffleBank, TrialPlan, shuffled_negative_trials, uniform_negative_trials

__all__ = [
    "MetricScore",
    "RocCurve",
    "auc_f",
    "auc_of_curve",
    "auc_pair_oracle",
    "auc_s",
    "cc",
    "nss",
    "nss_at_points",
    "roc_from_samples",
    "sauc",
    "sim",
    "snss",
    "snss_trials",
]


@dataclass(frozen=True)
class MetricScore:
    """A metric value plus how it was obtained."""

    value: float
    metric_id: str
    trials_used: int = 1
    blur_sigma: float | None = None


@dataclass(frozen=True)
class RocCurve:
    """TPR/FPR at descending thresholds over [0, 1]."""

    thresholds: np.ndarray
    tpr: np.ndarray
    fpr: np.ndarray


def _check_shapes(s: np.ndarray, g: np.ndarray) -> None:
    if s.shape != g.shape:
        raise ValueError(f"map dimensions differ: {s.shape} vs {g.shape}")


def _check_frame(s: np.ndarray, fix: FixationSet) -> None:
    w, h = fix.frame
    if s.shape != (h, w):
        raise ValueError(f"map shape {s.shape} does not match fixation frame {w}x{h}")


def _mean_std(s: np.ndarray, metric_id: str) -> tuple[float, float]:
    # constancy checked on the value range: std() of a constant array can
    # come out as ~1e-17 instead of 0
    if s.max() == s.min():
        raise DegenerateInputError(f"zero-variance map in {metric_id}")
    return float(s.mean()), float(s.std())


def cc(s, g) -> float:
    """Pearson correlation between a predicted map and a density map.

    Invariant under positive affine transforms of either map. Raises
    DegenerateInputError when either map has zero variance; callers report
    a missing score rather than a fake 0.
    """
    s = as_map(s)
    g = as_map(g)
    _check_shapes(s, g)
    _mean_std(s, "cc")
    _mean_std(g, "cc")
    r = np.corrcoef(s.ravel(), g.ravel())[0, 1]
    return float(np.clip(r, -1.0, 1.0))


def sim(s, g, bins: int = 256) -> float:
    """Histogram intersection between the two maps' intensity histograms.

    Both maps are binned over [0, 1] and the histograms mass-normalized, so
    the score lies in [0, 1] with 1 for identical histograms.
    """
    s = as_map(s)
    g = as_map(g)
    _check_shapes(s, g)
    if bins < 2:
        raise ValueError("bins must be >= 2")
    hs, _ = np.histogram(s, bins=bins, range=(0.0, 1.0))
    hg, _ = np.histogram(g, bins=bins, range=(0.0, 1.0))
    return float(np.minimum(hs / s.size, hg / g.size).sum())


def nss_at_points(s, points) -> float:
    """Mean standardized map value at the given (x, y) points."""
    s = as_map(s)
    mu, sd = _mean_std(s, "nss")
    return float((values_at(s, points).mean() - mu) / sd)


def nss(s, fix: FixationSet) -> float:
    """Normalized scanpath saliency: standardized map values at fixations."""
    s = as_map(s)
    _check_frame(s, fix)
    return nss_at_points(s, fix.points)


def snss_trials(
    s, fix: FixationSet, bank: ShuffleBank, plan: TrialPlan, metric_id: str = "snss"
) -> np.ndarray:
    """Per-trial NSS(fixations) - NSS(shuffled negatives)."""
    s = as_map(s)
    _check_frame(s, fix)
    mu, sd = _mean_std(s, "snss")
    pos = (values_at(s, fix.points).mean() - mu) / sd
    vals = np.empty(plan.num_trials)
    for sample in shuffled_negative_trials(bank, fix, metric_id, plan):
        neg = (values_at(s, sample.points).mean() - mu) / sd
        vals[sample.trial_index] = pos - neg
    return vals


def snss(s, fix: FixationSet, bank: ShuffleBank, plan: TrialPlan) -> MetricScore:
    """Shuffled NSS: NSS at fixations minus NSS at cross-image negatives.

    Negatives are drawn from the pooled fixations of the other images, one
    sample per trial; the score is the trial mean. Positive means the map
    separates this image's fixations from the dataset-wide fixation
    distribution, so center bias alone scores near 0.
    """
    vals = snss_trials(s, fix, bank, plan)
    return MetricScore(float(vals.mean()), "snss", plan.num_trials)


def roc_from_samples(pos_values, neg_values, levels: int = 256) -> RocCurve:
    """ROC over a descending threshold grid on [0, 1].

    A sample counts as salient when its value is >= the threshold; the
    convention applies to positives and negatives alike, so ties contribute
    symmetrically and all-equal inputs land on the chance diagonal.
    """
    pos = np.asarray(pos_values, dtype=np.float64)
    neg = np.asarray(neg_values, dtype=np.float64)
    if pos.size == 0 or neg.size == 0:
        raise ValueError("need at least one positive and one negative value")
    if min(pos.min(), neg.min()) < 0 or max(pos.max(), neg.max()) > 1:
        raise ValueError("sample values must lie in [0, 1]")
    if levels < 2:
        raise ValueError("levels must be >= 2")
    thresholds = np.linspace(1.0, 0.0, levels)
    ps = np.sort(pos)
    ns = np.sort(neg)
    tpr = 1.0 - np.searchsorted(ps, thresholds, side="left") / pos.size
    fpr = 1.0 - np.searchsorted(ns, thresholds, side="left") / neg.size
    return RocCurve(thresholds=thresholds, tpr=tpr, fpr=fpr)


def auc_of_curve(curve: RocCurve) -> float:
    """Trapezoidal area under an ROC curve, anchored at (0,0) and (1,1)."""
    fpr = np.concatenate(([0.0], curve.fpr, [1.0]))
    tpr = np.concatenate(([0.0], curve.tpr, [1.0]))
    return float(np.trapezoid(tpr, fpr))


def auc_pair_oracle(pos_values, neg_values) -> float:
    """Exact AUC by exhaustive pair counting: P(pos > neg) + P(pos = neg)/2."""
    pos = np.asarray(pos_values, dtype=np.float64).ravel()
    neg = np.asarray(neg_values, dtype=np.float64).ravel()
    if pos.size == 0 or neg.size == 0:
        raise ValueError("need at least one positive and one negative value")
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    return float(wins / (pos.size * neg.size))


def auc_f(s, fix: FixationSet, plan: TrialPlan) -> MetricScore:
    """AUC with uniform-random non-fixated negatives, averaged over trials.

    One negative per fixation, resampled each trial. A constant map gives
    exactly 0.5 by the tie convention; that is a valid score, not an error.
    """
    s = as_map(s)
    _check_frame(s, fix)
    if s.max() > 1.0:
        raise ValueError("auc_f expects a normalized map")
    pos = values_at(s, fix.points)
    aucs = np.empty(plan.num_trials)
    for sample in uniform_negative_trials(fix, "auc_f", plan):
        curve = roc_from_samples(pos, values_at(s, sample.points))
        aucs[sample.trial_index] = auc_of_curve(curve)
    return MetricScore(float(aucs.mean()), "auc_f", plan.num_trials)


def sauc(s, fix: FixationSet, bank: ShuffleBank, plan: TrialPlan) -> MetricScore:
    """Shuffled AUC: negatives drawn from other images' fixations.

    Because the negatives inherit the dataset's spatial bias, a centered
    blob scores near chance instead of profiting from center bias.
    """
    s = as_map(s)
    _check_frame(s, fix)
    if s.max() > 1.0:
        raise ValueError("sauc expects a normalized map")
    pos = values_at(s, fix.points)
    aucs = np.empty(plan.num_trials)
    for sample in shuffled_negative_trials(bank, fix, "sauc", plan):
        curve = roc_from_samples(pos, values_at(s, sample.points))
        aucs[sample.trial_index] = auc_of_curve(curve)
    return MetricScore(float(aucs.mean()), "sauc", plan.num_trials)


def auc_s(s, g, levels: int = 256) -> float:
    """AUC against the density map binarized at half its standard deviation.

    The density map g is thresholded once at T = 0.5 * std(g); the
    prediction is swept over the threshold grid and the ROC integrated by
    trapezoid. Raises DegenerateInputError when the binarization has no
    positives or no negatives.
    """
    s = as_map(s)
    g = as_map(g)
    _check_shapes(s, g)
    if g.max() == 0:
        raise DegenerateInputError("all-zero ground truth in auc_s")
    gt = g >= 0.5 * g.std()
    n_pos = int(gt.sum())
    if n_pos == 0:
        raise DegenerateInputError("no ground-truth pixel above threshold in auc_s")
    if n_pos == g.size:
        raise DegenerateInputError("ground-truth binarization has no negatives in auc_s")
    if s.max() > 1.0:
        raise ValueError("auc_s expects a normalized map")
    thresholds = np.linspace(1.0, 0.0, levels)
    inside = np.sort(s[gt])
    everything = np.sort(s, axis=None)
    n_hit = n_pos - np.searchsorted(inside, thresholds, side="left")
    n_sal = s.size - np.searchsorted(everything, thresholds, side="left")
    tpr = n_hit / n_pos
    fpr = (n_sal - n_hit) / (s.size - n_pos)
    return auc_of_curve(RocCurve(thresholds=thresholds, tpr=tpr, fpr=fpr))
