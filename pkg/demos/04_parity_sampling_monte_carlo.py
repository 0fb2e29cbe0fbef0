"""Randomized parity sampling and seeded bucket experiments.

Sampling each support element independently with a probability on the
order of 1/sqrt(k) already collapses the support into far fewer cosets
than k with high probability; these experiments measure that effect at
desk scale with fully reproducible seeds.
"""

from fractions import Fraction

import numpy as np

from parityfold import (
    check_calculus_inequality,
    estimate_bucket_reduction,
    folding_sampling_trial,
    gen_inner_product,
    sample_parity,
    warmup_success_rate,
    wht,
)

ip8 = gen_inner_product(4)  # 8 variables, full support: k = 256
spectrum = wht(ip8)
print(f"inner product on 8 variables: k = {spectrum.sparsity}")

# sample_parity is a pure function of (support, p, generator state)
rng = np.random.default_rng(7)
picked = sample_parity(sorted(spectrum.coeffs), 1 / 32, rng)
print(f"one draw at p = 1/32 keeps {len(picked)} parities: {picked[:6]} ...")

# --- one-phase sampling: expected bucket fraction ----------------------------
stats = estimate_bucket_reduction(ip8, 1 / 32, 200, 12345)
print(f"\n200 trials at p = 1/32:")
print(f"  mean buckets/k = {stats.mean_bucket_fraction} "
      f"~= {float(stats.mean_bucket_fraction):.4f}")
print(f"  95% CI {stats.ci95}")
print(f"  bucket counts ranged {min(stats.bucket_counts)}..{max(stats.bucket_counts)}")

# extremes are exact: p = 0 never merges anything
zero = estimate_bucket_reduction(ip8, 0.0, 10, 1)
assert zero.mean_bucket_fraction == 1

# --- the k^(3/4)-style warm-up probability -----------------------------------
warm = warmup_success_rate(ip8, 200, 999)
print(f"\nwarm-up schedule: requested p = {warm.requested[0]:.3f}, "
      f"used {warm.probabilities[0]} (clamped: {warm.clamped})")
print(f"  success fraction for buckets <= k/2: {warm.success_fraction}")

# --- two-phase sampling under a folding hypothesis ----------------------------
trial = folding_sampling_trial(ip8, Fraction(1), Fraction(0), 50, 777)
print(f"\ntwo-phase trial at (delta, ell) = (1, 0):")
print(f"  requested p = {tuple(round(p, 4) for p in trial.requested)}, "
      f"used {trial.probabilities} (clamped: {trial.clamped})")
print(f"  success fraction for buckets <= k - k/6 = {trial.success_threshold}: "
      f"{trial.success_fraction}")

# --- the exact-rational inequality used in the analysis -----------------------
print("\n(1 - p)^d <= 1 - p*d/2 on a rational grid:")
for d, p in ((10, Fraction(1, 10)), (50, Fraction(1, 50)), (100, Fraction(1, 100))):
    lhs = (1 - p) ** d
    assert check_calculus_inequality(d, p)
    print(f"  d = {d:3d}, p = {p}: lhs = {float(lhs):.4f} <= {float(1 - p * d / 2):.4f}")
