"""Type-parameterized solver tests: allocation graphs, star-forest
enumeration, realization round trips, the semilattice property, and oracle
agreement."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from fairline import (
    StarForest,
    TypeSet,
    allocation_graph,
    check_envy_free,
    enumerate_star_forests,
    is_feasible,
    load_instance,
    oracle_exists,
    realize_allocation,
    solve_ef_fpt_types,
)
from fairline.ef_types import _component_data
from fairline.errors import BudgetExceeded, ConditionsViolated
from fairline.generators import fig7_allocation, paper_example
from fairline.oracle import EnumerationBudget, allocation_signature, enumerate_feasible

from conftest import alloc, example, random_instance


class TestAllocationGraph:
    def test_single_type_edgeless(self):
        inst = load_instance([2, 2, 2], [2, 1])
        graph = allocation_graph(inst, alloc({1, 2}, {3}))
        assert graph.edges == frozenset() and graph.is_star_forest
        assert len(graph.vertices) == 1

    def test_two_stop_coalition(self):
        inst = example("7")
        graph = allocation_graph(inst, alloc({1, 2}, {3, 4}))
        assert graph.edges == frozenset({(2, 4)})
        assert graph.is_star_forest

    def test_showcase_forest(self):
        inst, allocation = paper_example("fig7")
        graph = allocation_graph(inst, allocation)
        assert graph.is_star_forest
        comps = graph.forest.components()
        assert len(comps) == 4
        assert [len(c.paths) for c in comps] == [3, 1, 0, 2]
        roots = [graph.vertices[c.root] for c in comps]
        assert roots == [1, 2, Fraction(5, 2), 3]

    def test_in_degree_two_is_not_a_forest(self):
        inst = load_instance([1, 2, 3, 3], [2, 2])
        graph = allocation_graph(inst, alloc({1, 3}, {2, 4}))
        assert graph.edges == frozenset({(1, 3), (2, 3)})
        assert not graph.is_star_forest


class TestStarForestEnumeration:
    @pytest.mark.parametrize("p,count", [(1, 1), (2, 2), (3, 6), (4, 23)])
    def test_counts_match_independent_enumeration(self, p, count):
        ts = TypeSet(tuple(Fraction(v) for v in range(1, p + 1)), (1,) * p)
        forests = list(enumerate_star_forests(ts))
        assert len(forests) == count
        assert len(forests) == _count_star_forests_by_edge_sets(p)
        assert len({f.parent for f in forests}) == len(forests)

    def test_every_component_is_root_plus_paths(self):
        ts = TypeSet((Fraction(1), Fraction(2), Fraction(3), Fraction(4)), (1,) * 4)
        for forest in enumerate_star_forests(ts):
            for comp in forest.components():
                seen = {comp.root}
                for path in comp.paths:
                    assert all(a < b for a, b in zip(path, path[1:]))
                    assert comp.root < path[0]
                    seen.update(path)
                assert seen == set(comp.vertices())

    def test_budget(self):
        ts = TypeSet((Fraction(1), Fraction(2), Fraction(3)), (1, 1, 1))
        with pytest.raises(BudgetExceeded):
            list(enumerate_star_forests(ts, max_forests=3))


def _count_star_forests_by_edge_sets(p):
    """Independent count: filter all ascending edge subsets for in-degree
    at most 1 and out-degree at most 1 outside roots."""
    edges = [(i, j) for i in range(p) for j in range(i + 1, p)]
    count = 0
    for r in range(len(edges) + 1):
        for subset in combinations(edges, r):
            indeg = [0] * p
            outdeg = [0] * p
            for i, j in subset:
                indeg[j] += 1
                outdeg[i] += 1
            if any(d > 1 for d in indeg):
                continue
            if any(outdeg[v] > 1 for v in range(p) if indeg[v] > 0):
                continue
            count += 1
    return count


class TestRealize:
    def test_single_type_even_split(self):
        inst = load_instance([3, 3, 3, 3], [2, 2])
        ts = TypeSet.from_instance(inst)
        forest = StarForest(ts.types, (None,))
        allocation = realize_allocation(inst, forest, (2,))
        assert sorted(len(t) for t in allocation) == [2, 2]

    def test_noncontiguous_instance(self):
        inst = example("8")
        forest = StarForest(inst.types(), (None, None, 0))  # 20 hangs off 1
        allocation = realize_allocation(inst, forest, (6, 4))
        assert allocation == (frozenset({1, 2, 3, 4, 9, 10}), frozenset({5, 6, 7, 8}))

    def test_showcase_realization(self):
        inst, expected = paper_example("fig7")
        graph = allocation_graph(inst, expected)
        allocation = realize_allocation(inst, graph.forest, (6, 5, 5, 4))
        assert allocation_signature(inst, allocation) == allocation_signature(
            inst, expected
        )

    def test_condition_labels(self):
        inst = example("8")
        forest = StarForest(inst.types(), (None, None, 0))
        with pytest.raises(ConditionsViolated) as err:
            realize_allocation(inst, forest, (6, 2))  # needs 3 taxis, has 2
        assert err.value.condition == "taxi-count"

        single = load_instance([1, 1, 1, 1], [4, 4])
        root_only = StarForest(single.types(), (None,))
        with pytest.raises(ConditionsViolated) as err:
            realize_allocation(single, root_only, (3,))  # 3 does not divide 4
        assert err.value.condition == "size-divisor-bounds"

        pathy = load_instance([1, 1, 20, 20], [4, 4])
        forest2 = StarForest(pathy.types(), (None, 0))
        with pytest.raises(ConditionsViolated) as err:
            realize_allocation(pathy, forest2, (2,))  # path of 2 needs size > 2
        assert err.value.condition == "size-divisor-bounds"

        tall = load_instance([1, 1, 1], [2, 1])
        with pytest.raises(ConditionsViolated) as err:
            realize_allocation(tall, StarForest(tall.types(), (None,)), (3,))
        assert err.value.condition == "taxi-capacity"

        two_comp = load_instance([1, 1, 2, 2, 2, 2], [4, 4])
        forest3 = StarForest(two_comp.types(), (None, None))
        with pytest.raises(ConditionsViolated) as err:
            realize_allocation(two_comp, forest3, (2, 4))
        assert err.value.condition == "sizes-nonincreasing"

    def test_round_trip_reproduces_graph(self):
        rng = random.Random(4031)
        trips = 0
        for _ in range(200):
            inst = random_instance(rng, max_n=8, max_k=4, max_types=3)
            ts = TypeSet.from_instance(inst)
            for forest in enumerate_star_forests(ts):
                data = _component_data(inst, forest)
                sizes = [d.agent_count for d in data]
                lam = tuple(rng.randint(1, m) for m in sizes)
                try:
                    allocation = realize_allocation(inst, forest, lam)
                except ConditionsViolated:
                    continue
                graph = allocation_graph(inst, allocation)
                assert graph.is_star_forest
                assert graph.edges == forest.edges()
                trips += 1
        assert trips > 100


class TestSolver:
    def test_hopeless_instance(self):
        assert solve_ef_fpt_types(example("7")) is None

    def test_unique_ef_instance(self):
        inst = example("8")
        allocation = solve_ef_fpt_types(inst)
        assert allocation_signature(inst, allocation) == allocation_signature(
            inst, alloc({1, 2, 3, 4, 9, 10}, {5, 6, 7, 8})
        )

    def test_single_type_rides_together(self):
        inst = load_instance([1, 1, 1, 1], [4, 4])
        allocation = solve_ef_fpt_types(inst)
        assert sorted(len(t) for t in allocation if t) in ([4], [2, 2])
        assert check_envy_free(inst, allocation)[0]

    def test_oracle_agreement(self):
        rng = random.Random(1618)
        for _ in range(100):
            inst = random_instance(rng, max_n=8, max_k=4, max_types=3)
            allocation = solve_ef_fpt_types(inst)
            exists = oracle_exists(inst, "ef").exists
            assert (allocation is not None) == exists
            if allocation is not None:
                assert is_feasible(inst, allocation)
                assert check_envy_free(inst, allocation)[0]

    def test_semilattice_of_admissible_size_vectors(self):
        # for every forest, the EF size vectors are closed under
        # componentwise max (checked by full enumeration at desk scale)
        rng = random.Random(1619)
        closed_pairs = 0
        for _ in range(120):
            inst = random_instance(rng, max_n=8, max_k=4, max_types=3)
            ts = TypeSet.from_instance(inst)
            for forest in enumerate_star_forests(ts):
                admissible = _admissible_vectors(inst, forest)
                for lam_a in admissible:
                    for lam_b in admissible:
                        join = tuple(max(x, y) for x, y in zip(lam_a, lam_b))
                        assert join in admissible
                        closed_pairs += 1
        assert closed_pairs > 100


def _admissible_vectors(inst, forest):
    from itertools import product

    data = _component_data(inst, forest)
    admissible = set()
    ranges = [range(1, d.agent_count + 1) for d in data]
    for lam in product(*ranges):
        try:
            allocation = realize_allocation(inst, forest, lam)
        except ConditionsViolated:
            continue
        graph = allocation_graph(inst, allocation)
        if graph.edges != forest.edges():
            continue
        if check_envy_free(inst, allocation)[0]:
            admissible.add(lam)
    return admissible
