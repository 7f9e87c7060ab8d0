"""Core engine tests: loading, feasibility, and the exact cost functions."""

import random
from fractions import Fraction

import pytest

from fairline import (
    INFINITY,
    agent_cost,
    allocation_costs,
    coalition_types,
    is_feasible,
    load_instance,
    phi,
    phi_capacitated,
    psi,
    shapley_permutation_oracle,
    total_cost,
)
from fairline.errors import (
    CoalitionTooLargeForOracle,
    EmptyInput,
    MuTooSmall,
    NonPositiveCapacity,
    NonPositiveDestination,
    NonPositivePoint,
    NotAPartition,
    TaxiIndexOutOfRange,
)

from conftest import alloc, example, naive_phi, random_coalition_destinations


class TestLoadInstance:
    def test_sorts_and_records_permutation(self):
        inst = load_instance([4, 2, 4, 4], [2, 2])
        assert inst.destinations == (2, 4, 4, 4)
        assert inst.capacities == (2, 2)
        assert inst.original_agent_ids == (2, 1, 3, 4)

    def test_singleton(self):
        inst = load_instance([5], [1])
        assert inst.destinations == (5,) and inst.capacities == (1,)

    def test_example_4_already_sorted(self):
        inst = load_instance([1, 2, 2, 4, 4], [3, 3])
        assert inst.destinations == (1, 2, 2, 4, 4)
        assert inst.capacities == (3, 3)
        assert inst.original_agent_ids == (1, 2, 3, 4, 5)

    def test_capacities_sorted_nonincreasing(self):
        inst = load_instance([1, 1], [1, 3, 2])
        assert inst.capacities == (3, 2, 1)
        assert inst.original_taxi_ids == (2, 3, 1)

    def test_rejects_bad_input(self):
        with pytest.raises(EmptyInput):
            load_instance([], [1])
        with pytest.raises(EmptyInput):
            load_instance([1], [])
        with pytest.raises(NonPositiveDestination):
            load_instance([0], [1])
        with pytest.raises(NonPositiveDestination):
            load_instance([-2], [1])
        with pytest.raises(NonPositiveCapacity):
            load_instance([1], [0])
        with pytest.raises(NonPositiveCapacity):
            load_instance([1], [Fraction(3, 2)])


class TestFeasibility:
    def test_example_4_split(self):
        inst = example("4")
        assert is_feasible(inst, alloc({1, 2, 3}, {4, 5}))

    def test_capacity_violation(self):
        inst = load_instance([2, 4, 4, 4], [2, 2])
        assert not is_feasible(inst, alloc({1, 2, 3}, {4}))

    def test_singletons_whenever_enough_taxis(self):
        inst = load_instance([1, 2, 3], [1, 1, 1])
        assert is_feasible(inst, alloc({1}, {2}, {3}))

    def test_too_many_coalitions_is_infeasible_not_an_error(self):
        inst = load_instance([1, 2], [2])
        assert not is_feasible(inst, alloc({1}, {2}))

    def test_not_a_partition(self):
        inst = load_instance([1, 2], [2])
        with pytest.raises(NotAPartition):
            is_feasible(inst, alloc({1}, {1, 2}))
        with pytest.raises(NotAPartition):
            is_feasible(inst, alloc({1}))


class TestPhi:
    def test_worked_four_rider_coalition(self):
        coalition = [12, 24, 36, 40]
        assert phi(coalition, 12) == 3
        assert phi(coalition, 24) == 7
        assert phi(coalition, 36) == 13
        assert phi(coalition, 40) == 17

    def test_lone_rider_pays_full_fare(self):
        assert phi([5], 5) == 5

    def test_two_riders_shapley(self):
        # frozen from the permutation-average oracle over both join orders
        assert shapley_permutation_oracle([2, 4], 2, 2) == 3
        assert phi([2, 4], 4) == 3

    def test_beyond_last_dropoff_is_infinite(self):
        assert phi([2, 4], 5) is INFINITY

    def test_rejects_nonpositive_point(self):
        with pytest.raises(NonPositivePoint):
            phi([1, 2], 0)

    def test_matches_naive_reference(self):
        rng = random.Random(20260810)
        for _ in range(200):
            dests = random_coalition_destinations(rng, max_size=6)
            x = rng.choice(dests + [max(dests) + 1])
            assert phi(dests, x) == naive_phi(dests, x)


class TestPhiCapacitated:
    def test_over_quota_is_infinite(self):
        inst = load_instance([1, 2, 3], [2, 2])
        assert phi_capacitated(inst, 1, {1, 2, 3}, 3) is INFINITY

    def test_within_quota_matches_phi(self):
        inst = load_instance([12, 24, 36, 40], [4])
        assert phi_capacitated(inst, 1, {1, 2, 3, 4}, 40) == 17

    def test_quota_one_singleton(self):
        inst = load_instance([5], [1])
        assert phi_capacitated(inst, 1, {1}, 5) == 5

    def test_taxi_index_validated(self):
        inst = load_instance([5], [1])
        with pytest.raises(TaxiIndexOutOfRange):
            phi_capacitated(inst, 2, {1}, 5)


class TestPsi:
    def test_empty_prefix_divides_evenly(self):
        assert psi([], 4, 2) == 2

    def test_prefix_identity_on_worked_example(self):
        assert psi([12, 24, 36], 40, 4) == 17

    def test_segment_sum(self):
        assert psi([2], 4, 3) == Fraction(5, 3)

    def test_mu_too_small(self):
        with pytest.raises(MuTooSmall):
            psi([1, 2], 5, 1)

    def test_phi_psi_identity_random(self):
        rng = random.Random(77)
        for _ in range(300):
            dests = random_coalition_destinations(rng, max_size=6)
            x = rng.choice(dests)
            below = [d for d in dests if d < x]
            assert phi(dests, x) == psi(below, x, len(dests))


class TestShapleyOracle:
    def test_worked_example_positions(self):
        coalition = [12, 24, 36, 40]
        for position, expected in ((1, 3), (2, 7), (3, 13), (4, 17)):
            assert shapley_permutation_oracle(coalition, 4, position) == expected

    def test_singleton(self):
        assert shapley_permutation_oracle([5], 1, 1) == 5

    def test_three_riders_with_duplicates(self):
        # 2/3 for the shared leg plus the lone remainder, over all 6 orders
        assert shapley_permutation_oracle([2, 2, 6], 3, 3) == Fraction(14, 3)

    def test_above_quota_infinite(self):
        assert shapley_permutation_oracle([1, 2, 3], 2, 1) is INFINITY

    def test_size_cap(self):
        with pytest.raises(CoalitionTooLargeForOracle):
            shapley_permutation_oracle(list(range(1, 10)), 9, 1)

    def test_agrees_with_phi_randomized(self):
        rng = random.Random(4242)
        for _ in range(60):
            dests = sorted(random_coalition_destinations(rng, max_size=6))
            position = rng.randint(1, len(dests))
            assert shapley_permutation_oracle(dests, len(dests), position) == phi(
                dests, dests[position - 1]
            )


class TestTotalCost:
    def test_worked_two_taxi_instance(self):
        inst = example("2")
        assert total_cost(inst, alloc({2, 3, 7, 8, 9}, {1, 4, 5, 6})) == 8

    def test_singleton(self):
        inst = load_instance([5], [1])
        assert total_cost(inst, alloc({1})) == 5

    def test_empty_taxis_free(self):
        # capacities canonicalize to (4, 2, 2): the big taxi comes first
        inst = example("3")
        assert total_cost(inst, alloc({1, 2}, {3, 4}, set())) == 2
        assert total_cost(inst, alloc({1, 2, 3, 4}, set(), set())) == 1

    def test_infeasible_is_infinite(self):
        inst = load_instance([1, 2, 3], [2, 1])
        assert total_cost(inst, alloc({1, 2, 3}, set())) is INFINITY


class TestInvariants:
    def test_conservation(self):
        rng = random.Random(99)
        for _ in range(300):
            dests = random_coalition_destinations(rng, max_size=7)
            paid = sum(phi(dests, x) for x in dests)
            assert paid == max(dests)

    def test_oracle_equivalence_small(self):
        rng = random.Random(123)
        for _ in range(40):
            dests = sorted(random_coalition_destinations(rng, max_size=5))
            quota = rng.randint(1, len(dests) + 1)
            for position in range(1, len(dests) + 1):
                lhs = shapley_permutation_oracle(dests, quota, position)
                if len(dests) > quota:
                    assert lhs is INFINITY
                else:
                    assert lhs == phi(dests, dests[position - 1])

    def test_average_cost_rate_nondecreasing(self):
        rng = random.Random(5)
        for _ in range(100):
            dests = sorted(random_coalition_destinations(rng, max_size=6))
            rates = [phi(dests, x) / x for x in dests]
            assert all(a <= b for a, b in zip(rates, rates[1:]))

    def test_phi_monotone_in_x_and_membership(self):
        rng = random.Random(6)
        for _ in range(100):
            dests = sorted(random_coalition_destinations(rng, max_size=5))
            xs = sorted(rng.choice(dests) for _ in range(2))
            assert phi(dests, xs[0]) <= phi(dests, xs[1])
            x = rng.choice(dests)
            extra = x + Fraction(rng.randint(0, 5))
            assert phi(dests + [extra], x) <= phi(dests, x)

    def test_costs_rederive_from_allocation(self):
        inst = example("4")
        allocation = alloc({1, 2, 3}, {4, 5})
        costs = allocation_costs(inst, allocation)
        for agent, cost in costs.items():
            assert cost == agent_cost(inst, allocation, agent)
        assert sum(costs.values()) == total_cost(inst, allocation)
