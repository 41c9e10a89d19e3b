"""
Why shuffled metrics exist: the centered-blob exploit
=====================================================

Eye-tracking data is center-biased (framing plus photographer's bias), so
a metric whose negatives are uniform random pixels rewards any prediction
that simply lights up the middle of the frame. Drawing the negatives from
the fixations of *other* images instead hands the same bias to both sides
and the exploit cancels.

This script builds a center-biased dataset, scores a centered Gaussian
blob that contains zero image information, and compares.
"""

import numpy as np

from saleval import (
    FixationSet,
    TrialPlan,
    auc_f,
    build_shuffle_bank,
    centered_gaussian_baseline,
    nss,
    sauc,
    snss,
)

rng = np.random.default_rng(42)
W, H = 128, 96
n_images, n_fix = 40, 35

# Fixations cluster around the frame center, image after image.
datasets = []
for i in range(n_images):
    pts = np.empty((0, 2), dtype=np.int64)
    while pts.shape[0] < n_fix:
        cand = np.column_stack(
            [
                np.round(rng.normal((W - 1) / 2, 0.18 * W, 2 * n_fix)),
                np.round(rng.normal((H - 1) / 2, 0.18 * H, 2 * n_fix)),
            ]
        ).astype(np.int64)
        keep = (cand[:, 0] >= 0) & (cand[:, 0] < W) & (cand[:, 1] >= 0) & (cand[:, 1] < H)
        pts = np.concatenate([pts, cand[keep]])[:n_fix]
    datasets.append(FixationSet(f"img{i}", pts, (W, H)))

bank = build_shuffle_bank(datasets, (W, H))
plan = TrialPlan(num_trials=100, master_seed=1)

# The know-nothing prediction.
blob = centered_gaussian_baseline(W, H, sigma_frac=0.25)

aucf = np.mean([auc_f(blob, fs, plan).value for fs in datasets])
nss_mean = np.mean([nss(blob, fs) for fs in datasets])
sauc_mean = np.mean([sauc(blob, fs, bank, plan).value for fs in datasets])
snss_mean = np.mean([snss(blob, fs, bank, plan).value for fs in datasets])

print("Centered Gaussian blob, averaged over the dataset:")
print(f"  AUC-F = {aucf:.4f}   <- far above chance, rewarded for center bias")
print(f"  NSS   = {nss_mean:+.4f}   <- likewise inflated")
print(f"  SAUC  = {sauc_mean:.4f}   <- back to chance (0.5)")
print(f"  SNSS  = {snss_mean:+.4f}   <- back to zero")
print()
print("The blob knows nothing about any particular image; only the shuffled")
print("scores say so.")
