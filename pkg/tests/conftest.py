"""Shared helpers: worked-example shortcuts, random instances, and naive
reference implementations used as independent oracles."""

import math
import random
from fractions import Fraction

import pytest

from fairline import Instance, load_instance, phi, INFINITY
from fairline.generators import paper_example, random_instance  # noqa: F401 (re-export)


def example(ident):
    """Canonicalized instance of a worked example."""
    return paper_example(ident)[0]


def example_with_allocation(ident):
    return paper_example(ident)


def alloc(*coalitions):
    return tuple(frozenset(c) for c in coalitions)


def random_coalition_destinations(rng: random.Random, max_size=7):
    size = rng.randint(1, max_size)
    return [Fraction(rng.randint(1, 60), rng.randint(1, 10)) for _ in range(size)]


# --- naive reference implementations (kept independent of the library's
# fast paths on purpose) -------------------------------------------------------


def naive_phi(destinations, x):
    """Direct evaluation of the segment integral from its definition."""
    dests = sorted(Fraction(d) for d in destinations)
    if not dests or dests[-1] < x:
        return INFINITY
    points = sorted(set(d for d in dests if d <= x) | {Fraction(x)})
    total = Fraction(0)
    prev = Fraction(0)
    for point in points:
        aboard = sum(1 for d in dests if d > prev)  # riders over (prev, point]
        total += (point - prev) / aboard
        prev = point
    return total


def naive_agent_cost(inst, allocation, agent):
    for i, coalition in enumerate(allocation, start=1):
        if agent in coalition:
            if i > inst.k or len(coalition) > inst.q(i):
                return INFINITY
            return naive_phi([inst.x(b) for b in coalition], inst.x(agent))
    raise AssertionError("agent missing")


def naive_envies(inst, allocation, a, b):
    """Envy test straight from the definition, building the swapped coalition."""
    taxi_of = {}
    for i, coalition in enumerate(allocation, start=1):
        for member in coalition:
            taxi_of[member] = i
    i, j = taxi_of[a], taxi_of[b]
    if i == j:
        return False
    replaced = (set(allocation[j - 1]) - {b}) | {a}
    if j > inst.k or len(replaced) > inst.q(j):
        new_cost = INFINITY
    else:
        new_cost = naive_phi([inst.x(m) for m in replaced], inst.x(a))
    return new_cost < naive_agent_cost(inst, allocation, a)


def naive_check_ef(inst, allocation):
    return not any(
        naive_envies(inst, allocation, a, b)
        for a in inst.agents()
        for b in inst.agents()
        if a != b
    )


def count_capacity_functions(n, capacities):
    """Number of ways to assign n labeled agents to taxis within quota:
    sum over load vectors of the multinomial coefficient."""

    def rec(i, remaining):
        if i == len(capacities):
            return 1 if remaining == 0 else 0
        total = 0
        for load in range(0, min(capacities[i], remaining) + 1):
            total += math.comb(remaining, load) * rec(i + 1, remaining - load)
        return total

    return rec(0, n)
