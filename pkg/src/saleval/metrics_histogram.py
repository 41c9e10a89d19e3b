"""Histogram-domain metrics over map values at sampled points.

The shuffled histogram metrics compare the distribution of map values at
the true fixations against the distribution at cross-image negative
points: signed shuffled symmetric KLD (SSKLD), shuffled Jensen-Shannon
distance (SJSD), and shuffled Earth Mover's Distance (SEMD) built on a
mass-mismatch-penalized EMD with a saturated bin-index ground distance.
A generic-LP oracle cross-checks the transport solver on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DegenerateInputError
from .flow import min_cost_transport
from .maps import FixationSet, as_map, values_at
from .metrics_fixation import MetricScore
from .shuffle import ShuffleBank, TrialPlan, shuffled_negative_trials

__all__ = [
    "GroundDistanceSpec",
    "ValueHistogram",
    "emd_brute_oracle",
    "emd_hat",
    "ground_distance_matrix",
    "hist_at_points",
    "jsd",
    "semd",
    "semd_trials",
    "sjsd",
    "sjsd_trials",
    "sskld",
    "sskld_trials",
    "symmetric_kld",
]


@dataclass(frozen=True)
class ValueHistogram:
    """Binned distribution of sampled values over [0, 1].

    mass holds the per-bin frequencies divided by `normalizer` (the sample
    count the histogram is normalized against), so it sums to 1 when every
    sample both landed in range and counted toward the normalizer.
    """

    bin_edges: np.ndarray
    mass: np.ndarray
    normalizer: int

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        mass = np.asarray(self.mass, dtype=np.float64)
        if edges.ndim != 1 or edges.size < 3 or mass.size != edges.size - 1:
            raise ValueError("need B+1 edges and B masses with B >= 2")
        if edges[0] != 0.0 or edges[-1] != 1.0 or (np.diff(edges) <= 0).any():
            raise ValueError("bin edges must increase strictly from 0 to 1")
        if (mass < 0).any():
            raise ValueError("bin masses must be >= 0")
        if self.normalizer < 1:
            raise ValueError("normalizer must be >= 1")
        edges.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "mass", mass)

    @property
    def bins(self) -> int:
        return self.mass.size


@dataclass(frozen=True)
class GroundDistanceSpec:
    """Saturated absolute bin-index distance: d(i, j) = min(|i - j|, saturation)."""

    saturation: int = 5
    kind: str = "abs-bin-index"

    def __post_init__(self):
        if self.kind != "abs-bin-index":
            raise ValueError(f"unknown ground distance kind: {self.kind}")
        if self.saturation < 1:
            raise ValueError("saturation must be >= 1")


def ground_distance_matrix(bins: int, d: GroundDistanceSpec) -> np.ndarray:
    idx = np.arange(bins)
    return np.minimum(np.abs(idx[:, None] - idx[None, :]), d.saturation).astype(np.float64)


_EDGE_CACHE: dict[int, np.ndarray] = {}


def _unit_edges(bins: int) -> np.ndarray:
    edges = _EDGE_CACHE.get(bins)
    if edges is None:
        edges = np.linspace(0.0, 1.0, bins + 1)
        edges.setflags(write=False)
        _EDGE_CACHE[bins] = edges
    return edges


def _point_hist(vals: np.ndarray, bins: int, normalizer: int) -> ValueHistogram:
    # uniform bins over [0, 1]: direct index binning, last bin right-closed
    idx = np.minimum((vals * bins).astype(np.int64), bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return ValueHistogram(_unit_edges(bins), counts / normalizer, normalizer)


def hist_at_points(s, points, bins: int = 16) -> ValueHistogram:
    """Histogram of map values at (x, y) points, mass-normalized by the count.

    Bins span [0, 1] with the final bin right-closed, so a value of exactly
    1.0 is counted.
    """
    s = as_map(s)
    pts = np.asarray(points)
    if pts.size == 0:
        raise ValueError("points must be non-empty")
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if s.max() > 1.0:
        raise ValueError("hist_at_points expects a normalized map")
    return _point_hist(values_at(s, pts), bins, pts.shape[0])


def _check_same_binning(a: ValueHistogram, b: ValueHistogram) -> None:
    if a.bins != b.bins or not np.array_equal(a.bin_edges, b.bin_edges):
        raise ValueError("histograms must share the same binning")


def symmetric_kld(h: ValueHistogram, hhat: ValueHistogram, epsilon: float = 1e-12) -> float:
    """Symmetrized Kullback-Leibler divergence, natural log.

    epsilon is added to every bin of both histograms before the ratios, so
    empty bins neither divide by zero nor take log(0). Non-negative, zero
    only for identical histograms (up to the epsilon floor).
    """
    _check_same_binning(h, hhat)
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    p = h.mass + epsilon
    q = hhat.mass + epsilon
    return float(0.5 * np.sum((p - q) * np.log(p / q)))


def jsd(p: ValueHistogram, q: ValueHistogram) -> float:
    """Jensen-Shannon divergence with base-2 logs, bounded to [0, 1].

    Masses are renormalized to sum 1 internally; empty bins contribute
    nothing (the 0 * log 0 = 0 convention).
    """
    _check_same_binning(p, q)
    if p.mass.sum() == 0 or q.mass.sum() == 0:
        raise ValueError("histograms must have positive total mass")
    pm = p.mass / p.mass.sum()
    qm = q.mass / q.mass.sum()
    mid = 0.5 * (pm + qm)

    def _kld2(a: np.ndarray) -> float:
        nz = a > 0
        return float(np.sum(a[nz] * np.log2(a[nz] / mid[nz])))

    return 0.5 * (_kld2(pm) + _kld2(qm))


def emd_hat(h_source: ValueHistogram, h_sink: ValueHistogram, d: GroundDistanceSpec) -> float:
    """Earth Mover's Distance valid for unnormalized histograms.

    Minimum-cost transport of min(total masses) under the saturated
    bin-index ground distance, plus |total mass difference| * saturation
    as the mismatch penalty. Solved exactly by min-cost flow.
    """
    _check_same_binning(h_source, h_sink)
    a = h_source.mass
    b = h_sink.mass
    # the saturated distance is a metric, so the in-place overlap ships at
    # zero cost in some optimal plan; solve only the residual
    overlap = np.minimum(a, b)
    sol = min_cost_transport(a - overlap, b - overlap, ground_distance_matrix(a.size, d))
    return sol.cost + abs(a.sum() - b.sum()) * d.saturation


def emd_brute_oracle(h1: ValueHistogram, h2: ValueHistogram, d: GroundDistanceSpec) -> float:
    """Independent exact reference for emd_hat via a generic LP formulation.

    Limited to small instances (<= 8 bins); intended for cross-validation,
    not production scoring.
    """
    _check_same_binning(h1, h2)
    bins = h1.bins
    if bins > 8:
        raise ValueError("oracle limited to 8 bins")
    a = h1.mass
    b = h2.mass
    c = ground_distance_matrix(bins, d).ravel()
    # f[i, j] flattened row-major; rows: sum_j f_ij <= a_i, cols: sum_i f_ij <= b_j
    row = np.zeros((bins, bins * bins))
    col = np.zeros((bins, bins * bins))
    for i in range(bins):
        row[i, i * bins : (i + 1) * bins] = 1.0
        col[i, i::bins] = 1.0
    total = min(a.sum(), b.sum())
    res = linprog(
        c,
        A_ub=np.vstack([row, col]),
        b_ub=np.concatenate([a, b]),
        A_eq=np.ones((1, bins * bins)),
        b_eq=[total],
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"LP oracle failed: {res.message}")
    return float(res.fun) + abs(a.sum() - b.sum()) * d.saturation


def _require_variance(s: np.ndarray, metric_id: str) -> tuple[float, float]:
    # constancy checked on the value range, not std(), which picks up float summation noise
    if s.max() == s.min():
        raise DegenerateInputError(f"zero-variance map in {metric_id}")
    return float(s.mean()), float(s.std())


def _shuffled_parts(s, fix, bank, plan, bins, metric_id):
    """Per-trial (snss value, fixation histogram, negative histogram).

    Both histograms are normalized by the ground-truth fixation count, so
    their masses stay comparable even when the plan draws a different
    number of negatives.
    """
    s = as_map(s)
    w, h = fix.frame
    if s.shape != (h, w):
        raise ValueError(f"map shape {s.shape} does not match fixation frame {w}x{h}")
    if s.max() > 1.0:
        raise ValueError(f"{metric_id} expects a normalized map")
    mu, sd = _require_variance(s, metric_id)
    pos_vals = values_at(s, fix.points)
    pos_nss = (pos_vals.mean() - mu) / sd
    h_pos = _point_hist(pos_vals, bins, len(fix))
    for sample in shuffled_negative_trials(bank, fix, metric_id, plan):
        neg_vals = values_at(s, sample.points)
        snss_val = pos_nss - (neg_vals.mean() - mu) / sd
        yield snss_val, h_pos, _point_hist(neg_vals, bins, len(fix)), sample.trial_index


def sskld_trials(
    s,
    fix: FixationSet,
    bank: ShuffleBank,
    plan: TrialPlan,
    bins: int = 16,
    epsilon: float = 1e-12,
) -> np.ndarray:
    """Per-trial signed shuffled KLD: sign(trial SNSS) * symmetric KLD."""
    vals = np.empty(plan.num_trials)
    for snss_val, h_pos, h_neg, trial in _shuffled_parts(s, fix, bank, plan, bins, "sskld"):
        vals[trial] = np.sign(snss_val) * symmetric_kld(h_pos, h_neg, epsilon)
    return vals


def sskld(
    s,
    fix: FixationSet,
    bank: ShuffleBank,
    plan: TrialPlan,
    bins: int = 16,
    epsilon: float = 1e-12,
    sign_mode: str = "per-trial",
) -> MetricScore:
    """Signed shuffled symmetric KLD between fixated and negative values.

    The separation between the two value histograms is scored by symmetric
    KLD and signed by SNSS, so a map that puts its mass on the *wrong*
    pixels (e.g. an inverted map) goes negative instead of scoring as well
    as the original. sign_mode picks where the sign attaches: per trial
    (default) or once from the trial-mean SNSS.
    """
    if sign_mode not in ("per-trial", "aggregate"):
        raise ValueError("sign_mode must be 'per-trial' or 'aggregate'")
    snss_vals = np.empty(plan.num_trials)
    skld_vals = np.empty(plan.num_trials)
    for snss_val, h_pos, h_neg, trial in _shuffled_parts(s, fix, bank, plan, bins, "sskld"):
        snss_vals[trial] = snss_val
        skld_vals[trial] = symmetric_kld(h_pos, h_neg, epsilon)
    if sign_mode == "per-trial":
        value = float(np.mean(np.sign(snss_vals) * skld_vals))
    else:
        value = float(np.sign(snss_vals.mean()) * skld_vals.mean())
    return MetricScore(value, "sskld", plan.num_trials)


def sjsd_trials(
    s, fix: FixationSet, bank: ShuffleBank, plan: TrialPlan, bins: int = 16
) -> np.ndarray:
    """Per-trial square root of the JSD between the two value histograms."""
    vals = np.empty(plan.num_trials)
    for _, h_pos, h_neg, trial in _shuffled_parts(s, fix, bank, plan, bins, "sjsd"):
        vals[trial] = np.sqrt(jsd(h_pos, h_neg))
    return vals


def sjsd(s, fix: FixationSet, bank: ShuffleBank, plan: TrialPlan, bins: int = 16) -> MetricScore:
    """Shuffled Jensen-Shannon distance, a bounded [0, 1] score.

    sqrt(JSD) is a true distance (it satisfies the triangle inequality),
    which SKLD-style scores are not; higher is better.
    """
    vals = sjsd_trials(s, fix, bank, plan, bins)
    return MetricScore(float(vals.mean()), "sjsd", plan.num_trials)


def semd_trials(
    s,
    fix: FixationSet,
    bank: ShuffleBank,
    plan: TrialPlan,
    bins: int = 16,
    d: GroundDistanceSpec = GroundDistanceSpec(),
) -> np.ndarray:
    """Per-trial EMD between the fixated and negative value histograms."""
    vals = np.empty(plan.num_trials)
    for _, h_pos, h_neg, trial in _shuffled_parts(s, fix, bank, plan, bins, "semd"):
        vals[trial] = emd_hat(h_pos, h_neg, d)
    return vals


def semd(
    s,
    fix: FixationSet,
    bank: ShuffleBank,
    plan: TrialPlan,
    bins: int = 16,
    d: GroundDistanceSpec = GroundDistanceSpec(),
) -> MetricScore:
    """Shuffled EMD: how far apart the fixated and negative value histograms sit.

    Unlike map-vs-map EMD (lower is better, and center-biased), this
    shuffled form rewards separation, so higher is better and center bias
    cancels through the negatives.
    """
    vals = semd_trials(s, fix, bank, plan, bins, d)
    return MetricScore(float(vals.mean()), "semd", plan.num_trials)
