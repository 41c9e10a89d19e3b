"""The evaluation protocol: resize, blur-search, score, one record per metric.

Each model map is resized to the image's native size, peak-normalized,
then swept over a set of blur widths; every metric independently keeps
its best blur level, since blurring helps some metrics and hurts others.
Degenerate inputs turn into missing scores, never into fabricated values
and never into batch aborts.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..errors import DegenerateInputError
from ..maps import FixationSet, density_from_fixations, gaussian_blur, normalize_map, resize_map
from ..metrics_fixation import auc_f, auc_s, cc, nss, sauc, sim, snss
from ..metrics_histogram import GroundDistanceSpec, semd, sjsd, sskld
from ..shuffle import ShuffleBank, TrialPlan, build_shuffle_bank
from .dataset import DatasetManifest, ImageEntry

__all__ = [
    "ALL_METRICS",
    "DENSITY_METRICS",
    "SHUFFLED_METRICS",
    "EvalConfig",
    "EvaluationRecord",
    "evaluate_batch",
    "evaluate_pair",
    "optimal_blur_search",
]

SHUFFLED_METRICS = ("sauc", "snss", "sskld", "sjsd", "semd")
BASELINE_METRICS = ("cc", "sim", "nss", "auc_f", "auc_s")
ALL_METRICS = SHUFFLED_METRICS + BASELINE_METRICS
DENSITY_METRICS = ("cc", "sim", "auc_s")  # need the ground-truth density map


@dataclass(frozen=True)
class EvalConfig:
    """Knobs of the evaluation protocol; echoed verbatim into every report."""

    trials: int = 100
    bins: int = 16
    epsilon: float = 1e-12
    emd_saturation: int = 5
    blur_sweep: tuple[float, ...] = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0, 32.0)
    metrics: tuple[str, ...] = SHUFFLED_METRICS
    sign_mode: str = "per-trial"
    sim_bins: int = 256

    def __post_init__(self):
        for m in self.metrics:
            if m not in ALL_METRICS:
                raise ValueError(f"unknown metric: {m}")
        if self.sign_mode not in ("per-trial", "aggregate"):
            raise ValueError("sign_mode must be 'per-trial' or 'aggregate'")


@dataclass(frozen=True)
class EvaluationRecord:
    """One (model, image, metric) score with its provenance tags."""

    model_id: str
    image_id: str
    metric_id: str
    score: float | None
    blur_sigma: float | None
    distortion_type: str
    distortion_level: str
    complexity: str
    trial_plan_digest: str


def optimal_blur_search(s, scorer, sweep) -> tuple[float | None, float | None]:
    """Best (sigma, score) over the blur sweep; smallest sigma wins ties.

    The sweep must include 0 so "no blur" is always a candidate. A scorer
    that is degenerate at every blur level yields (None, None): a missing
    score, not an error.
    """
    sweep = tuple(sweep)
    if not sweep:
        raise ValueError("blur sweep must be non-empty")
    if 0 not in sweep:
        raise ValueError("blur sweep must contain 0")
    if any(sigma < 0 for sigma in sweep):
        raise ValueError("blur sweep sigmas must be >= 0")
    best_sigma, best_score = None, None
    for sigma in sorted(set(sweep)):
        try:
            score = scorer(gaussian_blur(s, sigma))
        except DegenerateInputError:
            continue
        if best_score is None or score > best_score:
            best_sigma, best_score = sigma, score
    return best_sigma, best_score


def _scorer(metric, fix, g, bank, plan, config):
    if metric == "sauc":
        return lambda m: sauc(m, fix, bank, plan).value
    if metric == "snss":
        return lambda m: snss(m, fix, bank, plan).value
    if metric == "sskld":
        return lambda m: sskld(
            m, fix, bank, plan, config.bins, config.epsilon, config.sign_mode
        ).value
    if metric == "sjsd":
        return lambda m: sjsd(m, fix, bank, plan, config.bins).value
    if metric == "semd":
        sat = GroundDistanceSpec(saturation=config.emd_saturation)
        return lambda m: semd(m, fix, bank, plan, config.bins, sat).value
    if metric == "cc":
        return lambda m: cc(m, g)
    if metric == "sim":
        return lambda m: sim(m, g, config.sim_bins)
    if metric == "nss":
        return lambda m: nss(m, fix)
    if metric == "auc_f":
        return lambda m: auc_f(m, fix, plan).value
    if metric == "auc_s":
        return lambda m: auc_s(m, g)
    raise ValueError(f"unknown metric: {metric}")


def evaluate_pair(
    s_raw,
    image: ImageEntry,
    fix: FixationSet,
    g,
    bank: ShuffleBank,
    plan: TrialPlan,
    config: EvalConfig,
    model_id: str = "model",
) -> list[EvaluationRecord]:
    """Score one model map against one image, one record per metric.

    The raw map is resized to the image dimensions and normalized; each
    metric then blur-searches independently. Metrics needing the density
    map (cc, sim, auc_s) require g; the shuffled metrics ignore it.
    """
    needed = set(config.metrics) & set(DENSITY_METRICS)
    if needed and g is None:
        raise ValueError(f"metrics {sorted(needed)} need the density map g")
    s0 = normalize_map(resize_map(s_raw, image.width, image.height))
    sweep = sorted(set(config.blur_sweep))
    if not sweep or 0 not in sweep or min(sweep) < 0:
        raise ValueError("blur sweep must be non-empty, non-negative and contain 0")
    candidates = [(sigma, gaussian_blur(s0, sigma)) for sigma in sweep]
    digest = plan.digest()
    records = []
    for metric in config.metrics:
        scorer = _scorer(metric, fix, g, bank, plan, config)
        best_sigma, best_score = None, None
        for sigma, cand in candidates:
            try:
                score = scorer(cand)
            except DegenerateInputError:
                continue
            if best_score is None or score > best_score:
                best_sigma, best_score = sigma, score
        records.append(
            EvaluationRecord(
                model_id=model_id,
                image_id=image.image_id,
                metric_id=metric,
                score=best_score,
                blur_sigma=best_sigma,
                distortion_type=image.distortion_type,
                distortion_level=image.distortion_level,
                complexity=image.complexity,
                trial_plan_digest=digest,
            )
        )
    return records


def _bank_for_frame(manifest: DatasetManifest, frame: tuple[int, int]) -> ShuffleBank:
    return build_shuffle_bank([manifest.fixations[im.image_id] for im in manifest.images], frame)


def _evaluate_unit(args):
    model_id, image, map_path, fix, g, bank, plan, config = args
    from ..io import read_pgm

    s_raw = read_pgm(map_path)
    return evaluate_pair(s_raw, image, fix, g, bank, plan, config, model_id=model_id)


def evaluate_batch(
    manifest: DatasetManifest, config: EvalConfig, plan: TrialPlan, jobs: int = 1
) -> list[EvaluationRecord]:
    """Run the full protocol over every (model, image) pair of a manifest.

    Work units are pure, so they may fan out to worker processes; results
    are sorted afterwards and do not depend on execution order. Needs at
    least 2 images (the shuffled metrics' negative source).
    """
    if len(manifest.images) < 2:
        raise ValueError("evaluation needs at least 2 images")
    banks: dict[tuple[int, int], ShuffleBank] = {}
    need_g = bool(set(config.metrics) & set(DENSITY_METRICS))
    units = []
    for image in manifest.images:
        frame = (image.width, image.height)
        if frame not in banks:
            banks[frame] = _bank_for_frame(manifest, frame)
        fix = manifest.fixations[image.image_id]
        g = density_from_fixations(fix, manifest.fwhm_px) if need_g else None
        for model in manifest.models:
            units.append(
                (
                    model.model_id,
                    image,
                    manifest.root / model.maps[image.image_id],
                    fix,
                    g,
                    banks[frame],
                    plan,
                    config,
                )
            )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_evaluate_unit, units))
    else:
        chunks = [_evaluate_unit(u) for u in units]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.model_id, r.image_id, r.metric_id))
    return records
