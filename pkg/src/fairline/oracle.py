"""Exhaustive ground truth for desk-scale instances.

Enumerates every feasible allocation (optionally one representative per
isomorphism class) and answers existence/optimality queries by filtering
through the concept checkers.  This module exists to certify the solvers,
not to compete with them.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

from . import criteria
from .core import Allocation, Cost, Instance, coalition_types, total_cost
from .errors import BudgetExceeded


@dataclass(frozen=True)
class EnumerationBudget:
    max_agents: int = 9
    max_allocations: int = 2_000_000
    dedup_by_isomorphism: bool = True


@dataclass
class OracleAnswer:
    exists: bool
    witness: Optional[Allocation]
    optimum: Optional[Cost]
    count: int


def allocation_signature(inst: Instance, alloc: Allocation, with_quotas: bool = True):
    """Canonical form of an allocation under type-level isomorphism.

    With quotas, two allocations are identified only when some coalition
    permutation matches both the per-type member counts and the capacity of
    the taxi each coalition sits in; without, empty coalitions are dropped
    and only the type multisets matter.
    """
    if with_quotas:
        padded = tuple(alloc) + (frozenset(),) * max(0, inst.k - len(alloc))
        return tuple(
            sorted((inst.q(i), coalition_types(inst, t)) for i, t in enumerate(padded, start=1))
        )
    return tuple(sorted(coalition_types(inst, t) for t in alloc if t))


def enumerate_feasible(inst: Instance, budget: Optional[EnumerationBudget] = None) -> Iterator[Allocation]:
    """Yield every feasible allocation of the instance exactly once.

    Allocations are produced as k-tuples of coalitions (trailing and interior
    empties allowed).  With dedup on, only the first allocation of each
    isomorphism class is yielded; symmetric taxi states are pruned during the
    search to keep the walk small.
    """
    budget = budget or EnumerationBudget()
    if inst.n > budget.max_agents:
        raise BudgetExceeded(f"n={inst.n} exceeds the oracle cap {budget.max_agents}")

    members = [[] for _ in inst.taxis()]
    seen_classes = set()
    leaves = 0

    def snapshot() -> Allocation:
        return tuple(frozenset(t) for t in members)

    def rec(a: int):
        nonlocal leaves
        if a > inst.n:
            leaves += 1
            if leaves > budget.max_allocations:
                raise BudgetExceeded(
                    f"more than {budget.max_allocations} feasible allocations"
                )
            alloc = snapshot()
            if budget.dedup_by_isomorphism:
                sig = allocation_signature(inst, alloc)
                if sig in seen_classes:
                    return
                seen_classes.add(sig)
            yield alloc
            return
        tried = set()
        x_a = inst.x(a)
        for j in inst.taxis():
            slot = members[j - 1]
            if len(slot) >= inst.q(j):
                continue
            if budget.dedup_by_isomorphism:
                state = (inst.q(j), tuple(inst.x(b) for b in slot))
                if state in tried:
                    continue  # identical taxi already tried: symmetric branch
                tried.add(state)
            slot.append(a)
            yield from rec(a + 1)
            slot.pop()

    yield from rec(1)


_PREDICATES = {
    "feasible": lambda inst, alloc: True,
    "ef": lambda inst, alloc: criteria.check_envy_free(inst, alloc)[0],
    "ns": lambda inst, alloc: criteria.check_nash_stable(inst, alloc)[0],
    "wss": lambda inst, alloc: criteria.check_swap_stable(inst, alloc, "weak")[0],
    "sss": lambda inst, alloc: criteria.check_swap_stable(inst, alloc, "strong")[0],
    "consecutive": criteria.check_consecutive,
    "split": criteria.check_split_conditions,
}


def oracle_exists(
    inst: Instance,
    predicate: Union[str, Callable],
    budget: Optional[EnumerationBudget] = None,
) -> OracleAnswer:
    """Existence (plus witness and count) of a feasible allocation satisfying
    a concept; for "so" the answer instead carries the exact optimum.

    `predicate` is a concept name from the checkers, or any callable
    (instance, allocation) -> bool.
    """
    budget = budget or EnumerationBudget()
    if predicate == "so":
        best: Optional[Cost] = None
        witness = None
        count = 0
        for alloc in enumerate_feasible(inst, budget):
            cost = total_cost(inst, alloc)
            if best is None or cost < best:
                best, witness, count = cost, alloc, 1
            elif cost == best:
                count += 1
        return OracleAnswer(witness is not None, witness, best, count)

    check = _PREDICATES[predicate] if isinstance(predicate, str) else predicate
    witness = None
    count = 0
    for alloc in enumerate_feasible(inst, budget):
        if check(inst, alloc):
            count += 1
            if witness is None:
                witness = alloc
    return OracleAnswer(witness is not None, witness, None, count)
