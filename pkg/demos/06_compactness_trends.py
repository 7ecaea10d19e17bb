"""
Compactness and essential-norm trends on refinement families
============================================================

"Finitely many atoms" is vacuous on one finite space, so infinite-space
phenomena are emulated by families: spaces with 16, 64, then 256 blocks
sharing a block-indexed multiplier law.  Level sets, truncation gaps, and the
essential-norm surrogate then exhibit trends where the theory has limits.
"""

import numpy as np

from orliczlab import young
from orliczlab.operators import (
    RefinementFamily,
    boundedness_classifier,
    essential_norm_bound,
    level_set,
    truncation_gap_check,
)

phi = young.scaled_power(2.0)
psi = young.conjugate_closed_form(phi)
C = 4.0  # squared domination constant for paired equal-weight atoms

# ---------------------------------------------------------------------------
# Level sets of the decaying multiplier u(j) = 1/j: the count of blocks above
# epsilon is floor(1/epsilon), independent of the family size once large.
family = RefinementFamily("reciprocal", (16, 64, 256))
op = family.member(64)
print("level-set counts for u(j) = 1/j at m = 64:")
for eps in (0.5, 0.2, 0.1, 0.05):
    print(f"  epsilon {eps:<5} -> {level_set(op, psi, eps).count} blocks")

# ---------------------------------------------------------------------------
# Truncation: removing the blocks below level epsilon changes the operator by
# at most C * epsilon in norm.  The gap estimate is a certified lower bound on
# the true distance, so staying below the bound is a real check.
print("\ntruncation gaps at m = 64:")
for eps in (0.05, 0.2, 0.7):
    report = truncation_gap_check(op, phi, psi, C, eps, budget=100, seed=1)
    print(f"  epsilon {eps:<5} gap >= {report['gap_lower_bound']:.6f}, "
          f"bound C*eps = {report['bound']:.3f}, holds={report['holds']}")

# ---------------------------------------------------------------------------
# The essential-norm surrogate beta_m: the smallest epsilon whose level set
# fits in a quarter of the blocks.  Decay sends it to zero; flat pins it at 1.
for law in ("reciprocal", "flat"):
    fam = RefinementFamily(law, (16, 64, 256))
    report = essential_norm_bound(fam, phi, psi, C, budget=60, seed=0)
    betas = ", ".join(f"{b:.5f}" for b in report["betas"])
    print(f"\n{law} family: beta_m = [{betas}]")
    print(f"  decreasing={report['trend_decreasing']}, all gaps hold={report['all_gaps_hold']}")

# ---------------------------------------------------------------------------
# The classifier combines the trends into verdicts, under explicit hypothesis
# flags: a certified Hoelder constant licenses the boundedness criterion, a
# product-growth certificate additionally licenses the compactness criterion.
flags = {"gcthi": True, "delta_prime": young.check_delta_prime(phi) is not None}
print("\nclassifier verdicts (bounded, compact):")
for law in ("reciprocal", "flat", "log_growth"):
    fam = RefinementFamily(law, (16, 64, 256))
    verdict = boundedness_classifier(fam, phi, psi, C, flags)
    print(f"  {law:<12} bounded={verdict['bounded']}, compact={verdict['compact']}, "
          f"level sups {np.round(verdict['level_sups'], 4)}")
