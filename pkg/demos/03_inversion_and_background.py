"""
Two failure modes the signed and distance-like scores repair
============================================================

1. An *inverted* map (salient regions predicted dark, background bright)
   separates the fixated-value histogram from the negative-value histogram
   just as well as the original map, so an unsigned KLD cannot tell them
   apart. Attaching the sign of shuffled NSS fixes that: the inverted map
   goes negative.

2. Adding *background activity* (diffuse false positives) barely hurts a
   ROC-style score, because false positives at non-fixated points cost an
   AUC very little. SNSS and the Jensen-Shannon distance both pay directly.
"""

import numpy as np

from saleval import (
    FixationSet,
    TrialPlan,
    build_shuffle_bank,
    density_from_fixations,
    invert_map,
    normalize_map,
    sauc,
    sjsd,
    snss,
    sskld,
)

rng = np.random.default_rng(3)
W, H = 120, 90

# Sparse images: one tight cluster plus a few stray fixations, off-center.
datasets = []
for i in range(12):
    cx, cy = rng.uniform(20, W - 20), rng.uniform(15, H - 15)
    core = np.column_stack(
        [np.clip(np.round(rng.normal(cx, 1.5, 6)), 0, W - 1),
         np.clip(np.round(rng.normal(cy, 1.5, 6)), 0, H - 1)]
    ).astype(int)
    stray = np.column_stack([rng.integers(5, W - 5, 3), rng.integers(5, H - 5, 3)])
    datasets.append(FixationSet(f"img{i}", np.concatenate([core, stray]), (W, H)))

bank = build_shuffle_bank(datasets, (W, H))
plan = TrialPlan(num_trials=100, master_seed=2)
fix = datasets[0]
gt = density_from_fixations(fix, fwhm_px=7.0)

# --- failure mode 1: inversion -------------------------------------------
inv = invert_map(gt)
print("Ground-truth map as its own prediction vs the inverted map:")
print(f"  SSKLD(gt)       = {sskld(gt, fix, bank, plan).value:+.4f}")
print(f"  SSKLD(inverted) = {sskld(inv, fix, bank, plan).value:+.4f}")
print("  Same histogram separation, opposite sign: the sign of SNSS tells")
print("  the metric *which side* of the separation the fixations sit on.")

# --- failure mode 2: background activity ----------------------------------
noisy = normalize_map(gt + rng.uniform(0.0, 0.3, gt.shape))
print("\nClean map vs the same map plus uniform background activity:")
print(f"  SAUC: clean {sauc(gt, fix, bank, plan).value:.4f}  "
      f"noisy {sauc(noisy, fix, bank, plan).value:.4f}   (barely moves)")
print(f"  SNSS: clean {snss(gt, fix, bank, plan).value:+.4f}  "
      f"noisy {snss(noisy, fix, bank, plan).value:+.4f}   (drops)")
print(f"  SJSD: clean {sjsd(gt, fix, bank, plan).value:.4f}  "
      f"noisy {sjsd(noisy, fix, bank, plan).value:.4f}   (drops)")
