import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parityfold.families import (
    gen_addressing,
    gen_conjunction,
    gen_inner_product,
    gen_parity,
    gen_random,
)
from parityfold.gf2 import coset_label, row_reduce
from parityfold.pdt import (
    BuildConfig,
    DegenerateInputError,
    Leaf,
    Node,
    NotFoldingError,
    ParityDecisionTree,
    ResampleCapExceededError,
    build_pdt,
    check_calculus_inequality,
    depth,
    estimate_bucket_reduction,
    evaluate_tree,
    folding_sampling_trial,
    sample_parity,
    verify_tree,
    warmup_success_rate,
)
from parityfold.spectral import FourierSpectrum, TruthTable, wht


def and2():
    return gen_conjunction(0b11, 2)


def test_evaluate_single_leaf():
    tree = ParityDecisionTree(3, Leaf(1))
    assert all(evaluate_tree(tree, x) == 1 for x in range(8))
    assert depth(tree) == 0


def test_evaluate_single_query():
    tree = ParityDecisionTree(2, Node(0b01, Leaf(1), Leaf(-1)))
    assert evaluate_tree(tree, 0b10) == 1  # x1 = 0 so the parity is +1
    assert evaluate_tree(tree, 0b01) == -1
    assert depth(tree) == 1


def test_verify_tree():
    result = build_pdt(and2(), BuildConfig(seed=1))
    assert verify_tree(result.tree, and2())
    assert evaluate_tree(result.tree, 0b11) == -1
    assert not verify_tree(ParityDecisionTree(2, Leaf(1)), and2())


def test_verify_tree_guards():
    with pytest.raises(ValueError):
        verify_tree(ParityDecisionTree(3, Leaf(1)), and2())


def test_tree_json_roundtrip():
    result = build_pdt(gen_addressing(4), BuildConfig(seed=3))
    data = result.tree.to_dict()
    assert ParityDecisionTree.from_dict(data) == result.tree


def test_sample_parity_extremes():
    rng = np.random.default_rng(0)
    assert sample_parity([1, 2, 3], 0.0, rng) == []
    assert sample_parity([3, 1, 2], 1.0, rng) == [1, 2, 3]


def test_sample_parity_deterministic():
    supp = sorted(wht(gen_addressing(16)).coeffs)
    a = sample_parity(supp, 1 / 8, np.random.default_rng(42))
    b = sample_parity(supp, 1 / 8, np.random.default_rng(42))
    assert a == b
    assert set(a) <= set(supp)


def test_build_constant():
    t = TruthTable(3, np.ones(8))
    result = build_pdt(t)
    assert result.tree.root == Leaf(1)
    assert result.depth() == 0


def test_build_single_character():
    t = gen_parity(0b101, 3)
    result = build_pdt(t)
    assert result.depth() == 1
    assert isinstance(result.tree.root, Node)
    assert result.tree.root.query == 0b101
    assert verify_tree(result.tree, t)


def test_build_degenerate():
    with pytest.raises(DegenerateInputError):
        build_pdt(FourierSpectrum(3, {}))


def test_build_resample_cap():
    cfg = BuildConfig(strategy="sampling", probability=1e-12, resample_cap=2, seed=0)
    with pytest.raises(ResampleCapExceededError):
        build_pdt(and2(), cfg)


@pytest.mark.parametrize("strategy", ["sampling", "folding-sampling", "max-coefficient", "greedy-min-bucket"])
def test_build_strategies_sound_on_small_corpus(strategy):
    for table in [and2(), gen_addressing(4), gen_inner_product(2), gen_random(5, 7)]:
        cfg = BuildConfig(strategy=strategy, seed=11)
        result = build_pdt(table, cfg)
        assert verify_tree(result.tree, table)


def test_build_folding_sampling_with_parameters():
    cfg = BuildConfig(
        strategy="folding-sampling", seed=5, delta=Fraction(1), ell=Fraction(0)
    )
    result = build_pdt(gen_inner_product(2), cfg)
    assert verify_tree(result.tree, gen_inner_product(2))


def test_path_queries_linearly_independent():
    for seed in (0, 1, 2):
        result = build_pdt(gen_addressing(16), BuildConfig(seed=seed))
        for path in result.tree.paths():
            assert row_reduce(path, result.tree.n).rank == len(path)


def test_build_deterministic():
    cfg = BuildConfig(seed=9)
    a = build_pdt(gen_addressing(16), cfg)
    b = build_pdt(gen_addressing(16), cfg)
    assert a.tree == b.tree
    assert a.log == b.log
    c = build_pdt(gen_addressing(16), BuildConfig(seed=10))
    assert c.tree != a.tree or c.log != a.log


def test_build_log_progress_invariants():
    cfg = BuildConfig(seed=4)
    result = build_pdt(gen_addressing(16), cfg)
    for record in result.log:
        k = record.sparsity_before
        assert record.max_child_sparsity <= record.bucket_count
        if record.target_met:
            assert record.bucket_count <= (1 - cfg.epsilon) * k
        else:
            assert record.bucket_count <= k - 1
        assert len(record.batch) >= 1
        assert record.resamples >= 1


def test_build_addressing64_sound_within_depth_budget():
    table = gen_addressing(64)
    result = build_pdt(table, BuildConfig(seed=0))
    assert verify_tree(result.tree, table)
    assert result.depth() <= 4 * math.isqrt(64)


def test_build_log_jsonl():
    result = build_pdt(gen_addressing(4), BuildConfig(seed=2))
    lines = result.log_jsonl().splitlines()
    assert len(lines) == len(result.log)
    assert all(line.startswith("{") for line in lines)


def test_config_validation():
    with pytest.raises(ValueError):
        BuildConfig(strategy="magic")
    with pytest.raises(ValueError):
        BuildConfig(probability=0.0)
    with pytest.raises(ValueError):
        BuildConfig(resample_cap=0)
    with pytest.raises(ValueError):
        BuildConfig(epsilon=Fraction(1))


def test_estimate_bucket_reduction_p0_mean_exactly_one():
    stats = estimate_bucket_reduction(gen_inner_product(2), 0.0, 5, 0)
    assert stats.mean_bucket_fraction == 1
    assert stats.bucket_counts == (16,) * 5


def test_estimate_bucket_reduction_p1_minimal():
    s = wht(gen_addressing(16))
    stats1 = estimate_bucket_reduction(s, 1.0, 3, 0)
    stats0 = estimate_bucket_reduction(s, 0.0, 3, 0)
    # at p=1 the whole support is spanned: one bucket per coset of span(S)
    full = row_reduce(sorted(s.coeffs), s.n)
    expected = len({coset_label(a, full) for a in s.coeffs})
    assert set(stats1.bucket_counts) == {expected}
    assert stats1.mean_bucket_fraction <= stats0.mean_bucket_fraction


def test_estimate_bucket_reduction_guards():
    with pytest.raises(ValueError):
        estimate_bucket_reduction(gen_inner_product(2), 0.5, 0, 0)
    with pytest.raises(ValueError):
        estimate_bucket_reduction(gen_parity(1, 2), 0.5, 1, 0)  # k = 1 < 4


def test_trial_determinism():
    a = estimate_bucket_reduction(gen_inner_product(3), 1 / 8, 20, 123)
    b = estimate_bucket_reduction(gen_inner_product(3), 1 / 8, 20, 123)
    assert a == b
    c = estimate_bucket_reduction(gen_inner_product(3), 1 / 8, 20, 124)
    assert c.bucket_counts != a.bucket_counts


def test_warmup_clamps_and_succeeds_on_full_support():
    # k = 16: the formula gives p = 2*sqrt(4)/2 = 2, clamped to 1; the full
    # span of the inner-product support is everything, so one bucket remains
    stats = warmup_success_rate(gen_inner_product(2), 10, 1)
    assert stats.clamped
    assert stats.probabilities == (1.0,)
    assert stats.success_fraction == 1
    assert set(stats.bucket_counts) == {1}


def test_warmup_guards():
    with pytest.raises(ValueError):
        warmup_success_rate(gen_inner_product(2), 0, 1)


def test_folding_sampling_trial_ip4():
    stats = folding_sampling_trial(gen_inner_product(2), 1, 0, 10, 3)
    assert stats.clamped  # the second-phase formula far exceeds 1 at k = 16
    assert stats.success_threshold == Fraction(40, 3)  # 16 - 16/6
    assert stats.success_fraction == 1


def test_folding_sampling_trial_rejects_non_folding():
    with pytest.raises(NotFoldingError):
        folding_sampling_trial(gen_addressing(16), 1, Fraction(1, 2), 5, 0)
    with pytest.raises(ValueError):
        folding_sampling_trial(gen_inner_product(2), 1, 0, 0, 0)


def test_calculus_inequality_examples():
    assert check_calculus_inequality(0, Fraction(1, 3))
    assert check_calculus_inequality(1, Fraction(1))  # 0 <= 1/2
    assert check_calculus_inequality(10, Fraction(1, 10))
    with pytest.raises(ValueError):
        check_calculus_inequality(10, Fraction(1, 2))  # p*d = 5 > 1
    with pytest.raises(ValueError):
        check_calculus_inequality(-1, Fraction(1, 2))


@given(st.integers(0, 60), st.data())
@settings(max_examples=80, deadline=None)
def test_calculus_inequality_property(d, data):
    denom = data.draw(st.integers(max(1, d), 4 * max(1, d)))
    p = Fraction(1, denom) if d else data.draw(st.fractions(0, 1))
    assert check_calculus_inequality(d, p)
