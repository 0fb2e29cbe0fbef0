"""Folding-direction structure of Fourier supports.

Unordered support pairs are classified by their XOR ("folding
direction").  Supports of +-1 functions are heavily constrained:

  - every realized direction has at least 2 pairs (pair condition);
  - once k > 4, every support element participates in some direction
    with at least 3 pairs;
  - if an element participates in exactly one such direction, that class
    has exactly k/2 pairs;
  - the signs of the coefficients must satisfy a parity system extracted
    from the size-2 classes, which lets us certify certain supports as
    not Boolean-realizable at all.
"""

from fractions import Fraction

from parityfold import (
    addressing_folding_profile,
    check_pair_condition,
    counterexample_support,
    direction_classes,
    folding_parameters,
    gen_addressing,
    gen_modified_addressing,
    heavy_participants,
    sign_feasibility,
    single_direction_structure,
    verify_three_fold,
    wht,
)

# --- direction classes of the 16-target addressing function -----------------
spectrum = wht(gen_addressing(16))
profile = direction_classes(spectrum.support())
print(f"addressing k=16: {len(profile.classes)} directions, "
      f"histogram {profile.histogram()}")
assert check_pair_condition(spectrum.support()).ok

# Folding parameters: the fraction of pairs in classes of size >= k^ell + 1.
for ell in (0, Fraction(1, 4), Fraction(1, 2)):
    params = folding_parameters(spectrum.support(), ell)
    print(f"  ell = {ell}: delta = {params.delta} "
          f"(threshold {params.class_size_threshold})")

# Elements with many heavy partners.
members = heavy_participants(spectrum.support(), Fraction(1, 5), Fraction(1, 2))
print(f"  heavy participants at (1/5, 1/2): {len(members)} of {spectrum.sparsity}")

# --- three-fold property -----------------------------------------------------
witnesses = verify_three_fold(spectrum)
print(f"three-fold: every one of the {len(witnesses)} support elements has a "
      "size->=3 direction")

# --- the single-nontrivial-direction family ----------------------------------
mod = wht(gen_modified_addressing(4))
report = single_direction_structure(mod)
print(f"\nmodified addressing k'=10: selector element 0b00001 participates in "
      f"{report.nontrivial_counts[1]} nontrivial direction(s)")
beta, size = report.single_direction[1]
print(f"  its unique nontrivial partner is 0b{beta:05b} with class size {size} = k'/2")
assert size == report.k // 2

# --- sign feasibility and the non-realizable support -------------------------
feas = sign_feasibility(mod.support())
print(f"\nsign system of the modified addressing support: feasible = {feas.feasible}")

supp = counterexample_support(5)
print(f"constructed support on n=5 ({len(supp)} masks): {sorted(supp)}")
print(f"  pair condition: {check_pair_condition(supp).ok}")
result = sign_feasibility(supp)
print(f"  sign system feasible: {result.feasible}")
print(f"  witness: {len(result.witness)} constraints whose product forces 1 = -1:")
for cons in result.witness:
    print(f"    direction 0b{cons.direction:05b}: pairs {cons.pair1}, {cons.pair2}")

# --- addressing profile -------------------------------------------------------
print()
for k in (4, 16, 64):
    rep = addressing_folding_profile(k)
    print(f"addressing k={k}: cross-target classes all {rep.cross_target_class_sizes} "
          f"(= sqrt k), fraction {rep.cross_target_pair_fraction} of all pairs; "
          f"same-target classes {rep.same_target_class_sizes}")
print(f"note: {addressing_folding_profile(4).counting_note}")
