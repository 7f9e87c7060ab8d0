"""Domain model and the exact sequential cost-sharing engine.

Destinations and payments are `fractions.Fraction` throughout; the only
non-rational cost is the symbolic `INFINITY` used for over-capacity
coalitions.  All functions here are pure and safe to call concurrently.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import (
    CoalitionTooLargeForOracle,
    EmptyInput,
    MuTooSmall,
    NonPositiveCapacity,
    NonPositiveDestination,
    NonPositivePoint,
    NotAPartition,
    TaxiIndexOutOfRange,
)


class _Infinity:
    """Symbolic infinite cost: larger than every Fraction, absorbing under +."""

    __slots__ = ()

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("fairline.INFINITY")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

Rational = Fraction
Cost = Union[Fraction, _Infinity]

#: A coalition is a frozenset of 1-based agent indices.
Coalition = frozenset

#: An allocation is an ordered tuple of pairwise disjoint coalitions
#: covering all agents; empty coalitions are legal placeholders.
Allocation = tuple


@dataclass(frozen=True)
class Instance:
    """A canonicalized problem input.

    Destinations are sorted nondecreasing and capacities nonincreasing, as
    every algorithm here assumes.  The permutations record where each sorted
    agent/taxi sat in the caller's original lists (1-based), so results can
    be reported against the caller's ids.
    """

    destinations: tuple
    capacities: tuple
    original_agent_ids: tuple
    original_taxi_ids: tuple

    @property
    def n(self) -> int:
        return len(self.destinations)

    @property
    def k(self) -> int:
        return len(self.capacities)

    def x(self, agent: int) -> Fraction:
        """Destination of 1-based agent index."""
        return self.destinations[agent - 1]

    def q(self, taxi: int) -> int:
        """Capacity of 1-based taxi index."""
        return self.capacities[taxi - 1]

    def agents(self) -> range:
        return range(1, self.n + 1)

    def taxis(self) -> range:
        return range(1, self.k + 1)

    def types(self) -> tuple:
        """Distinct destination values, ascending."""
        return tuple(sorted(set(self.destinations)))

    def type_count(self, value: Fraction) -> int:
        return self.destinations.count(value)


def load_instance(raw_destinations: Sequence, raw_capacities: Sequence) -> Instance:
    """Validate and canonicalize raw input into an `Instance`.

    Sorting is stable, so equal destinations keep their input order in the
    recorded permutation.
    """
    if not raw_destinations or not raw_capacities:
        raise EmptyInput("need at least one destination and one capacity")
    destinations = []
    for d in raw_destinations:
        d = Fraction(d)
        if d <= 0:
            raise NonPositiveDestination(f"destination {d} is not positive")
        destinations.append(d)
    capacities = []
    for q in raw_capacities:
        if int(q) != q or int(q) <= 0:
            raise NonPositiveCapacity(f"capacity {q} is not a positive integer")
        capacities.append(int(q))

    agent_order = sorted(range(len(destinations)), key=lambda i: destinations[i])
    taxi_order = sorted(range(len(capacities)), key=lambda i: -capacities[i])
    return Instance(
        destinations=tuple(destinations[i] for i in agent_order),
        capacities=tuple(capacities[i] for i in taxi_order),
        original_agent_ids=tuple(i + 1 for i in agent_order),
        original_taxi_ids=tuple(i + 1 for i in taxi_order),
    )


# --- partitions and feasibility ----------------------------------------------

def validate_partition(inst: Instance, alloc: Allocation) -> None:
    """Raise NotAPartition unless the coalitions partition [n]."""
    seen = set()
    total = 0
    for coalition in alloc:
        total += len(coalition)
        seen.update(coalition)
    if total != len(seen):
        raise NotAPartition("coalitions overlap")
    if seen != set(inst.agents()):
        raise NotAPartition("coalitions do not cover exactly the agents 1..n")


def pad_to_k(inst: Instance, alloc: Allocation) -> Allocation:
    """Extend an allocation with trailing empty coalitions up to k taxis."""
    if len(alloc) >= inst.k:
        return tuple(alloc)
    return tuple(alloc) + (frozenset(),) * (inst.k - len(alloc))


def is_feasible(inst: Instance, alloc: Allocation) -> bool:
    """True iff at most k coalitions are used and every quota is respected."""
    validate_partition(inst, alloc)
    if len(alloc) > inst.k:
        return False
    return all(len(t) <= inst.q(i) for i, t in enumerate(alloc, start=1))


def coalition_types(inst: Instance, coalition: Iterable) -> tuple:
    """Sorted tuple of the members' destinations (a multiset of types)."""
    return tuple(sorted(inst.x(a) for a in coalition))


# --- the cost-sharing engine --------------------------------------------------

@lru_cache(maxsize=None)
def _phi_sorted(dests: tuple, x: Fraction) -> Cost:
    """Segment-sum of 1/(riders still aboard) over [0, x]; dests sorted."""
    total = Fraction(0)
    prev = Fraction(0)
    t = len(dests)
    for idx, d in enumerate(dests):
        if x <= d:
            return total + (x - prev) / (t - idx)
        total += (d - prev) / (t - idx)
        prev = d
    return INFINITY  # nobody aboard rides as far as x


def phi(coalition_destinations: Iterable, x: Fraction) -> Cost:
    """Cost charged at drop-off point x to a member of the given coalition.

    Equals the integral of dr / n_T(r) over [0, x], evaluated exactly as a
    finite sum over destination segments, and INFINITY when no member rides
    to x.
    """
    x = Fraction(x)
    if x <= 0:
        raise NonPositivePoint(f"cost undefined at {x}")
    return _phi_sorted(tuple(sorted(Fraction(d) for d in coalition_destinations)), x)


def phi_capacitated(inst: Instance, taxi_index: int, coalition: Iterable, x: Fraction) -> Cost:
    """phi with the capacity overlay: INFINITY when the coalition overfills."""
    if not 1 <= taxi_index <= inst.k:
        raise TaxiIndexOutOfRange(f"taxi {taxi_index} not in 1..{inst.k}")
    members = tuple(coalition)
    if len(members) > inst.q(taxi_index):
        return INFINITY
    return phi(coalition_types(inst, members), x)


def psi(prefix_destinations: Iterable, x: Fraction, mu: int) -> Cost:
    """Cost at x inside a coalition of final size mu whose members below x
    are exactly `prefix_destinations`.

    Satisfies phi(T, x) == psi(T_below_x, x, |T|) for every coalition T.
    """
    x = Fraction(x)
    if x <= 0:
        raise NonPositivePoint(f"cost undefined at {x}")
    dests = sorted(Fraction(d) for d in prefix_destinations)
    s = len(dests)
    if mu < s:
        raise MuTooSmall(f"mu={mu} is smaller than the prefix size {s}")
    total = Fraction(0)
    prev = Fraction(0)
    for idx, d in enumerate(dests):
        if x <= d:
            return total + (x - prev) / (s - idx + mu - s)
        total += (d - prev) / (s - idx + mu - s)
        prev = d
    if mu == s:
        return INFINITY
    return total + (x - prev) / (mu - s)


def shapley_permutation_oracle(
    coalition_destinations: Iterable, quota: int, agent_position: int
) -> Cost:
    """Literal permutation-average marginal cost, for certifying phi in tests.

    The cost of a set is its largest destination (INFINITY above the quota),
    and the value returned is the average over all join orders of the
    marginal increase caused by the agent at `agent_position` (1-based into
    the sorted multiset).
    """
    dests = sorted(Fraction(d) for d in coalition_destinations)
    t = len(dests)
    if t > 8:
        raise CoalitionTooLargeForOracle(f"{t} agents is beyond 8! permutations")
    if not 1 <= agent_position <= t:
        raise ValueError(f"agent_position {agent_position} not in 1..{t}")
    if t > quota:
        return INFINITY
    target = agent_position - 1
    zero = Fraction(0)
    total = Fraction(0)
    for perm in itertools.permutations(range(t)):
        prefix_max = zero
        for member in perm:
            if member == target:
                if dests[target] > prefix_max:
                    total += dests[target] - prefix_max
                break
            if dests[member] > prefix_max:
                prefix_max = dests[member]
    return total / math.factorial(t)


def total_cost(inst: Instance, alloc: Allocation) -> Cost:
    """Sum over taxis of the last drop-off distance; INFINITY if infeasible."""
    validate_partition(inst, alloc)
    total = Fraction(0)
    for i, coalition in enumerate(alloc, start=1):
        if not coalition:
            continue
        if i > inst.k or len(coalition) > inst.q(i):
            return INFINITY
        total += max(inst.x(a) for a in coalition)
    return total


def agent_cost(inst: Instance, alloc: Allocation, agent: int) -> Cost:
    """The payment of one agent under the given allocation."""
    for i, coalition in enumerate(alloc, start=1):
        if agent in coalition:
            if i > inst.k:
                return INFINITY
            return phi_capacitated(inst, i, coalition, inst.x(agent))
    raise NotAPartition(f"agent {agent} is not allocated")


def allocation_costs(inst: Instance, alloc: Allocation) -> dict:
    """Payments of every agent, keyed by (sorted) agent index."""
    validate_partition(inst, alloc)
    costs = {}
    for i, coalition in enumerate(alloc, start=1):
        for a in coalition:
            if i > inst.k:
                costs[a] = INFINITY
            else:
                costs[a] = phi_capacitated(inst, i, coalition, inst.x(a))
    return costs
