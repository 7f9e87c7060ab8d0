"""Envy-free search for quotas of at most 4.

With such small taxis the way a shared destination type spreads over
coalitions is forced (one pattern per case, below), so guessing only the
coalition sizes and placing agents greedily by locality succeeds in O(n^6).
"""

from fractions import Fraction
from typing import Iterator, Optional

from .core import Allocation, Instance, coalition_types
from .criteria import check_envy_free
from .errors import CapacityTooLarge

SizeProfile = tuple
SplitPattern = tuple


def _require_small(inst: Instance) -> None:
    if any(q > 4 for q in inst.capacities):
        raise CapacityTooLarge(f"quotas {inst.capacities} exceed 4")


def enumerate_size_profiles(inst: Instance) -> Iterator[SizeProfile]:
    """Nonincreasing per-taxi rider counts within quota summing to n,
    lexicographically decreasing."""
    _require_small(inst)
    n, k = inst.n, inst.k

    def rec(i: int, remaining: int, bound: int, acc):
        if i > k:
            if remaining == 0:
                yield tuple(acc)
            return
        hi = min(bound, inst.q(i), remaining)
        for mu in range(hi, -1, -1):
            if remaining - mu > sum(min(mu, inst.q(j)) for j in range(i + 1, k + 1)):
                continue
            acc.append(mu)
            yield from rec(i + 1, remaining - mu, mu, acc)
            acc.pop()

    yield from rec(1, n, 4, [])


def split_pattern_for(
    first_taxi_size: int, type_count: int, next_taxi_size_after_block: int
) -> SplitPattern:
    """Per-taxi counts of one destination type shared across consecutive
    equal-size coalitions, as forced by envy-freeness.

    `first_taxi_size` is the common size of the coalitions holding the type,
    `type_count` how many agents have it, and `next_taxi_size_after_block`
    the size of the coalition just past ceil(type_count / 4) holders (0 when
    there is no such coalition); the last value only matters in the one
    ambiguous case: size-4 coalitions with a remainder of 3.
    """
    beta = first_taxi_size
    if not 1 <= beta <= 4:
        raise ValueError(f"first taxi size {beta} not in 1..4")
    if beta == 1:
        return (1,) * type_count
    full, rem = divmod(type_count, beta)
    if rem == 0:
        return (beta,) * full
    if beta == 4 and rem == 3:
        if next_taxi_size_after_block == 4:
            return (4,) * full + (2, 1)
        return (4,) * full + (3,)
    return (beta,) * full + (rem,)


def normalize_allocation(inst: Instance, alloc: Allocation) -> Allocation:
    """Reorder coalitions into the canonical presentation: first drop-off
    ascending, then share of the first type descending.  For envy-free
    allocations this also sorts sizes nonincreasingly."""
    nonempty = [t for t in alloc if t]

    def key(t):
        types = coalition_types(inst, t)
        first = types[0]
        return (first, -types.count(first), types)

    return tuple(sorted(nonempty, key=key))


def solve_ef_cap4(inst: Instance) -> Optional[Allocation]:
    """Envy-free feasible allocation, or None; complete when all quotas <= 4.

    Per size profile, agents go nearest-first to the cheapest unfilled
    coalition, except when a type with remainder 3 must close as counts
    (..., 2, 1) across two size-4 coalitions; the final envy check accepts
    or rejects the profile.
    """
    _require_small(inst)
    if inst.k >= inst.n:
        return tuple(frozenset({a}) for a in inst.agents())

    for profile in enumerate_size_profiles(inst):
        alloc = _greedy_for_profile(inst, profile)
        if alloc is not None:
            return alloc
    return None


def _greedy_for_profile(inst: Instance, profile: SizeProfile) -> Optional[Allocation]:
    k = inst.k
    members = [[] for _ in range(k)]
    count = [0] * k
    base = [Fraction(0)] * k
    top = [Fraction(0)] * k

    for a in inst.agents():
        x_a = inst.x(a)
        best = None
        for i in range(k):
            if count[i] >= profile[i]:
                continue
            value = base[i] + (x_a - top[i]) / (profile[i] - count[i])
            if best is None or value < best[0]:
                best = (value, i)
        if best is None:
            return None  # profile cannot hold everyone (never for valid profiles)
        i = best[1]
        last_of_type = a == inst.n or inst.x(a + 1) > x_a
        if (
            last_of_type
            and i + 1 < k
            and profile[i] == 4
            and profile[i + 1] == 4
            and count[i] == 2
            and count[i + 1] < 4
            and top[i] == x_a
            and members[i]
            and inst.x(members[i][0]) == x_a
        ):
            i = i + 1  # close the type as (..., 2, 1) over two size-4 coalitions
        base[i] += (x_a - top[i]) / (profile[i] - count[i])
        top[i] = x_a
        count[i] += 1
        members[i].append(a)

    alloc = tuple(frozenset(t) for t in members)
    ok, _ = check_envy_free(inst, alloc)
    return alloc if ok else None
