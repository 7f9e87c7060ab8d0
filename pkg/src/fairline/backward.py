"""Backward greedy: fill the biggest taxi with the farthest riders first.

The result is simultaneously socially optimal, Nash stable, and strongly
swap-stable whenever any feasible allocation exists.  Runs in O(n + k).
"""

from .core import Allocation, Instance
from .errors import NoFeasibleAllocation


def backward_greedy(inst: Instance) -> Allocation:
    """Group agents n..1 into taxis 1..k, moving on when a taxi fills.

    Returns all k coalitions (trailing ones may be empty).  Raises
    NoFeasibleAllocation exactly when total capacity is below n.
    """
    coalitions = [[] for _ in inst.taxis()]
    kappa = 1
    for a in range(inst.n, 0, -1):
        if len(coalitions[kappa - 1]) == inst.q(kappa):
            kappa += 1
            if kappa > inst.k:
                raise NoFeasibleAllocation(
                    f"{inst.n} agents exceed total capacity {sum(inst.capacities)}"
                )
        coalitions[kappa - 1].append(a)
    return tuple(frozenset(t) for t in coalitions)
