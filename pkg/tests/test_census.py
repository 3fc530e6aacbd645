import itertools

import numpy as np
import pytest

from modalcount import ConsistencyError, InputError, LimitError
from modalcount import census as C
from modalcount.modal import is_s5
from modalcount.partitions import bell, integer_partitions, p_exact
from modalcount.prng import SplitMix64
from modalcount.relations import RelationClass, all_frames, canonical_key, has_property, identity


def labeled_by_loop(n, cls):
    """Pure-Python brute force over every relation, independent of the numpy path."""
    return [f for f in all_frames(n) if C.matches(f, cls)]


def test_batch_property_agrees_with_definitions():
    frames = list(all_frames(3))
    mats = np.array([f.rel for f in frames])
    for c in RelationClass:
        got = C.batch_property(mats, c)
        assert list(got) == [has_property(f, c) for f in frames], c


@pytest.mark.parametrize("cls", ["strict-order", "partial-order", "equivalence"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_labeled_structures_match_loop(n, cls):
    fast = {tuple(row) for row in C.labeled_structures(n, cls)}
    slow = {tuple(cell for row in f.rel for cell in row) for f in labeled_by_loop(n, cls)}
    assert fast == slow


def test_count_labeled_examples():
    assert C.count_labeled(2, "relation") == 16
    assert C.count_labeled(3, "strict-order") == len(labeled_by_loop(3, "strict-order")) == 19
    assert C.count_labeled(4, "equivalence") == 15 == bell(4)


def test_strict_and_partial_orders_are_equinumerous():
    for n in range(1, 6):
        assert C.count_labeled(n, "strict-order") == C.count_labeled(n, "partial-order")
        assert C.count_unlabeled(n, "strict-order") == C.count_unlabeled(n, "partial-order")


def test_count_unlabeled_examples():
    assert C.count_unlabeled(3, "relation") == 104
    assert C.count_unlabeled(5, "equivalence") == 7 == p_exact(5)
    assert C.count_unlabeled(4, "strict-order") == 16


def test_unlabeled_strict_orders_by_loop_n4():
    keys = {canonical_key(f) for f in labeled_by_loop(4, "strict-order")}
    assert len(keys) == 16


def test_budget_errors():
    with pytest.raises(LimitError, match="budget"):
        C.count_labeled(6, "strict-order")
    with pytest.raises(LimitError):
        C.count_unlabeled(5, "relation")
    assert C.count_labeled(40, "relation") == 2**1600


def test_equivalence_bijection_to_seven():
    for n in range(1, 8):
        assert C.count_unlabeled(n, "equivalence") == p_exact(n)


def test_partition_to_frame_examples():
    from modalcount.relations import complete

    assert C.partition_to_frame([3]) == complete(3)
    assert C.partition_to_frame([1, 1, 1]) == identity(3)
    f = C.partition_to_frame([2, 1])
    assert f.edges() == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]
    assert is_s5(f)


def test_frame_to_partition_examples():
    from modalcount.relations import complete

    assert C.frame_to_partition(identity(4)).parts == (1, 1, 1, 1)
    assert C.frame_to_partition(complete(3)).parts == (3,)
    with pytest.raises(InputError):
        C.frame_to_partition(identity(2).__class__(2, (0b10, 0b01)))


def test_partition_round_trip():
    for n in range(1, 9):
        for lam in integer_partitions(n):
            f = C.partition_to_frame(lam)
            assert is_s5(f)
            assert C.frame_to_partition(f) == lam


def test_frame_to_partition_on_shuffled_blocks():
    from modalcount.relations import frame_from_edges

    blocks = [{0, 3}, {1}, {2, 4, 5}]
    f = frame_from_edges(6, [(u, v) for b in blocks for u in b for v in b])
    assert C.frame_to_partition(f).parts == (3, 2, 1)


def test_census_routes_agree():
    rep = C.census(3, "relation", both=True)
    assert (rep.labeled, rep.unlabeled, rep.method) == (512, 104, "formula+brute-force")
    rep = C.census(4, "strict-order", both=True)
    assert (rep.labeled, rep.unlabeled) == (219, 16)
    rep = C.census(5, "equivalence", both=True)
    assert (rep.labeled, rep.unlabeled) == (52, 7)


def test_census_reports_disagreement(monkeypatch):
    monkeypatch.setattr(C, "a_exact", lambda n: 105)
    with pytest.raises(ConsistencyError):
        C.census(3, "relation", labeled=False, both=True)


def test_sample_relation_bit_layout():
    rng = SplitMix64(99)
    word = SplitMix64(99).next()
    f = C.sample_relation(rng, 3)
    for c in range(9):
        assert f.holds(c // 3, c % 3) == bool(word >> (63 - c) & 1)


def test_vectorized_sampler_matches_scalar():
    for n in (1, 2, 3, 9):
        rng = SplitMix64(5)
        hits = sum(is_s5(C.sample_relation(rng, n)) for _ in range(3000))
        assert C.sample_s5_probability(n, 3000, 5, chunk=257).hits == hits


def test_sampler_is_reproducible():
    a = C.sample_s5_probability(2, 10_000, 11)
    b = C.sample_s5_probability(2, 10_000, 11)
    assert a == b


def test_exact_probabilities():
    from fractions import Fraction

    assert C.exact_s5_probability(1) == Fraction(1, 2)
    assert C.exact_s5_probability(2) == Fraction(2, 16)
    assert C.exact_s5_probability(3) == Fraction(5, 512)
    for n in (1, 2, 3):
        hits = sum(is_s5(f) for f in all_frames(n))
        assert C.exact_s5_probability(n) == Fraction(hits, 2 ** (n * n))


def test_sample_n1_band():
    est = C.sample_s5_probability(1, 100_000, 3)
    assert 0.49 <= est.ratio <= 0.51


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_sampler_three_sigma(n, seed):
    trials = 200_000
    p = float(C.exact_s5_probability(n))
    est = C.sample_s5_probability(n, trials, seed)
    assert abs(est.ratio - p) <= 3 * (p * (1 - p) / trials) ** 0.5


def test_sample_rejects_no_trials():
    with pytest.raises(InputError):
        C.sample_s5_probability(2, 0, 1)
