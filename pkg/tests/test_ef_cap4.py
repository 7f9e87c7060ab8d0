"""Small-capacity solver tests: size profiles, the forced split patterns,
and oracle agreement when every quota is at most 4."""

import random

import pytest

from fairline import (
    check_envy_free,
    enumerate_size_profiles,
    is_feasible,
    load_instance,
    normalize_allocation,
    oracle_exists,
    solve_ef_cap4,
    split_pattern_for,
)
from fairline.oracle import EnumerationBudget, allocation_signature, enumerate_feasible
from fairline.errors import CapacityTooLarge

from conftest import example, random_instance


class TestSizeProfiles:
    def test_forced_by_capacity(self):
        assert list(enumerate_size_profiles(load_instance([1] * 4, [2, 2]))) == [(2, 2)]
        assert list(enumerate_size_profiles(load_instance([1] * 3, [2, 1]))) == [(2, 1)]

    def test_nonincreasing_only(self):
        profiles = list(enumerate_size_profiles(load_instance([1] * 5, [3, 3])))
        assert profiles == [(3, 2)]

    def test_lexicographically_decreasing(self):
        profiles = list(enumerate_size_profiles(load_instance([1] * 4, [3, 3, 3])))
        assert profiles == sorted(profiles, reverse=True)
        assert (3, 1, 0) in profiles and (2, 2, 0) in profiles and (2, 1, 1) in profiles

    def test_rejects_big_quota(self):
        with pytest.raises(CapacityTooLarge):
            list(enumerate_size_profiles(load_instance([1] * 5, [5])))


class TestSplitPatterns:
    def test_table_rows_for_four(self):
        assert split_pattern_for(4, 8, 0) == (4, 4)
        assert split_pattern_for(4, 9, 0) == (4, 4, 1)
        assert split_pattern_for(4, 10, 0) == (4, 4, 2)
        assert split_pattern_for(4, 7, 4) == (4, 2, 1)
        assert split_pattern_for(4, 7, 3) == (4, 3)

    def test_table_rows_for_three_two_one(self):
        assert split_pattern_for(3, 4, 0) == (3, 1)
        assert split_pattern_for(3, 6, 0) == (3, 3)
        assert split_pattern_for(3, 5, 0) == (3, 2)
        assert split_pattern_for(2, 5, 0) == (2, 2, 1)
        assert split_pattern_for(2, 4, 0) == (2, 2)
        assert split_pattern_for(1, 3, 0) == (1, 1, 1)

    def test_pattern_totals(self):
        for beta in (1, 2, 3, 4):
            for count in range(1, 13):
                for nxt in (0, 2, 3, 4):
                    assert sum(split_pattern_for(beta, count, nxt)) == count


class TestSolver:
    def test_hopeless_instance(self):
        assert solve_ef_cap4(example("7")) is None

    def test_flat_instance(self):
        inst = load_instance([1, 1, 1, 1], [2, 2])
        allocation = solve_ef_cap4(inst)
        assert allocation is not None
        assert sorted(len(t) for t in allocation) == [2, 2]
        assert check_envy_free(inst, allocation)[0]

    def test_three_riders_no_ef(self):
        assert solve_ef_cap4(example("5")) is None

    def test_quota_five_rejected(self):
        with pytest.raises(CapacityTooLarge):
            solve_ef_cap4(load_instance([1, 2], [5]))

    def test_many_taxis_shortcut(self):
        inst = load_instance([1, 2, 3], [1, 1, 1, 1])
        allocation = solve_ef_cap4(inst)
        assert allocation == tuple(frozenset({a}) for a in (1, 2, 3))

    def test_oracle_agreement(self):
        rng = random.Random(2718)
        for _ in range(120):
            inst = random_instance(rng, max_n=8, max_k=4, max_q=4)
            allocation = solve_ef_cap4(inst)
            exists = oracle_exists(inst, "ef").exists
            assert (allocation is not None) == exists
            if allocation is not None:
                assert is_feasible(inst, allocation)
                assert check_envy_free(inst, allocation)[0]

    def test_profile_uniqueness_up_to_isomorphism(self):
        # whenever an envy-free allocation exists for a size profile, the
        # oracle sees exactly one capacity-free isomorphism class with it
        rng = random.Random(2719)
        hits = 0
        for _ in range(60):
            inst = random_instance(rng, max_n=7, max_k=3, max_q=4)
            allocation = solve_ef_cap4(inst)
            if allocation is None:
                continue
            profile = _nonzero_sizes(allocation)
            classes = set()
            for other in enumerate_feasible(inst, EnumerationBudget()):
                if _nonzero_sizes(other) != profile:
                    continue
                if check_envy_free(inst, other)[0]:
                    classes.add(allocation_signature(inst, other, with_quotas=False))
            assert len(classes) == 1
            hits += 1
        assert hits > 20


class TestPatternRealization:
    def test_observed_patterns_match_table(self):
        rng = random.Random(2720)
        observed_splits = 0
        for _ in range(80):
            inst = random_instance(rng, max_n=8, max_k=4, max_q=4, max_types=3)
            for allocation in enumerate_feasible(inst, EnumerationBudget()):
                if not check_envy_free(inst, allocation)[0]:
                    continue
                observed_splits += _assert_patterns(inst, allocation)
        assert observed_splits > 30

    def test_remainder_three_branch_occurs(self):
        # seven riders of the first type split (4, 2, 1) over three full
        # 4-seat taxis; two filler types keep the tail envy-free
        inst = load_instance([1] * 7 + [2] * 3 + [3] * 2, [4, 4, 4])
        allocation = solve_ef_cap4(inst)
        assert allocation is not None
        assert check_envy_free(inst, allocation)[0]
        counts = sorted(
            (sum(1 for a in t if inst.x(a) == 1) for t in allocation), reverse=True
        )
        assert counts == [4, 2, 1]
        assert _assert_patterns(inst, allocation) >= 1


def _nonzero_sizes(allocation):
    return tuple(sorted((len(t) for t in allocation if t), reverse=True))


def _assert_patterns(inst, allocation):
    """Check every split type against the forced pattern; returns how many
    split types the allocation exhibits."""
    ordered = normalize_allocation(inst, allocation)
    sizes = [len(t) for t in ordered]
    splits = 0
    for value in inst.types():
        counts = [sum(1 for a in t if inst.x(a) == value) for t in ordered]
        holders = [i for i, c in enumerate(counts) if c]
        if len(holders) < 2:
            continue
        splits += 1
        start = holders[0]
        observed = tuple(counts[i] for i in holders)
        total = sum(observed)
        after = start + (total + 3) // 4
        next_size = sizes[after] if after < len(sizes) else 0
        assert observed == split_pattern_for(sizes[start], total, next_size)
    return splits
