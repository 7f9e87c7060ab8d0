"""Checkers, with witnesses, for every solution concept.

Each checker accepts any partition of the agents, feasible or not: an
over-capacity coalition simply charges INFINITY, which keeps every formula
total.  Witnesses are always the lexicographically smallest violating pair,
so tests can pin them.
"""

from bisect import bisect_left, insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import backward
from .core import (
    Allocation,
    Cost,
    INFINITY,
    Instance,
    coalition_types,
    pad_to_k,
    phi,
    total_cost,
    validate_partition,
)
from .errors import GroupsNotAPartition, Infeasible

CONCEPTS = ("ef", "ns", "wss", "sss", "so", "consecutive", "split")


@dataclass(frozen=True)
class EnvyWitness:
    envier: int
    envied: int
    envier_cost: Cost
    replaced_cost: Cost


@dataclass(frozen=True)
class DeviationWitness:
    agent: int
    from_taxi: int
    to_taxi: int
    old_cost: Cost
    new_cost: Cost


@dataclass(frozen=True)
class SwapWitness:
    """agent_a envies agent_b; the b-side inequality depends on the mode."""

    agent_a: int
    agent_b: int
    a_cost: Cost
    a_replaced_cost: Cost
    b_cost: Cost
    b_replaced_cost: Cost


@dataclass
class ConceptReport:
    ef: Optional[bool] = None
    ns: Optional[bool] = None
    wss: Optional[bool] = None
    sss: Optional[bool] = None
    so: Optional[bool] = None
    consecutive: Optional[bool] = None
    split: Optional[bool] = None
    ef_in_groups: Optional[bool] = None
    witnesses: dict = field(default_factory=dict)

    def flags(self) -> dict:
        return {c: getattr(self, c) for c in CONCEPTS}


# --- internal plumbing --------------------------------------------------------

def _layout(inst: Instance, alloc: Allocation):
    """Padded coalitions, their sorted type tuples, and agent -> taxi map."""
    padded = pad_to_k(inst, alloc)
    types = [coalition_types(inst, t) for t in padded]
    taxi_of = {}
    for i, coalition in enumerate(padded, start=1):
        for a in coalition:
            taxi_of[a] = i
    return padded, types, taxi_of


def _own_cost(inst: Instance, taxi: int, types_i: tuple, x: Fraction) -> Cost:
    if taxi > inst.k or len(types_i) > inst.q(taxi):
        return INFINITY
    return phi(types_i, x)


def _swap_in(types_j: tuple, out_value: Fraction, in_value: Fraction) -> tuple:
    """Type multiset of T_j with one `out_value` replaced by `in_value`."""
    members = list(types_j)
    members.pop(bisect_left(members, out_value))
    insort(members, in_value)
    return tuple(members)


def _replaced_cost(inst, j, types_j, x_b, x_a) -> Cost:
    """Cost of a (type x_a) at x_a after replacing a type-x_b member of T_j."""
    if j > inst.k or len(types_j) > inst.q(j):
        return INFINITY
    return phi(_swap_in(types_j, x_b, x_a), x_a)


def _best_replacement(inst, j, types_j, x_a) -> Optional[Cost]:
    """Cheapest cost x_a's owner can get by replacing someone in T_j.

    Replacing any member with destination >= x_a leaves the cost at
    phi(T_j, x_a); replacing the latest-dropping member below x_a is the
    only way to do better.  Returns None for an empty coalition.
    """
    if not types_j:
        return None
    if j > inst.k or len(types_j) > inst.q(j):
        return INFINITY
    pos = bisect_left(types_j, x_a)
    best = None
    if pos < len(types_j):
        best = phi(types_j, x_a)
    if pos > 0:
        swapped = types_j[: pos - 1] + (x_a,) + types_j[pos:]
        cand = phi(swapped, x_a)
        if best is None or cand < best:
            best = cand
    return best


def _has_envy(inst: Instance, alloc: Allocation) -> bool:
    padded, types, _ = _layout(inst, alloc)
    for i, coalition in enumerate(padded, start=1):
        for a in coalition:
            x_a = inst.x(a)
            cost_a = _own_cost(inst, i, types[i - 1], x_a)
            for j in range(1, len(padded) + 1):
                if j == i:
                    continue
                best = _best_replacement(inst, j, types[j - 1], x_a)
                if best is not None and best < cost_a:
                    return True
    return False


def _envy_witness(inst: Instance, alloc: Allocation, groups=None) -> Optional[EnvyWitness]:
    """Lexicographically smallest (envier, envied) pair, or None."""
    padded, types, taxi_of = _layout(inst, alloc)
    for a in inst.agents():
        i = taxi_of[a]
        x_a = inst.x(a)
        cost_a = _own_cost(inst, i, types[i - 1], x_a)
        for b in inst.agents():
            j = taxi_of[b]
            if j == i:
                continue
            if groups is not None and groups[a] != groups[b]:
                continue
            replaced = _replaced_cost(inst, j, types[j - 1], inst.x(b), x_a)
            if replaced < cost_a:
                return EnvyWitness(a, b, cost_a, replaced)
    return None


# --- public checkers ----------------------------------------------------------

def envy_pairs(inst: Instance, alloc: Allocation):
    """Yield every ordered (envier, envied) pair of the allocation."""
    validate_partition(inst, alloc)
    padded, types, taxi_of = _layout(inst, alloc)
    for a in inst.agents():
        i = taxi_of[a]
        x_a = inst.x(a)
        cost_a = _own_cost(inst, i, types[i - 1], x_a)
        for b in inst.agents():
            j = taxi_of[b]
            if j == i:
                continue
            if _replaced_cost(inst, j, types[j - 1], inst.x(b), x_a) < cost_a:
                yield a, b


def check_envy_free(inst: Instance, alloc: Allocation):
    """(True, None) when no agent envies another, else (False, witness)."""
    validate_partition(inst, alloc)
    if not _has_envy(inst, alloc):
        return True, None
    return False, _envy_witness(inst, alloc)


def check_nash_stable(inst: Instance, alloc: Allocation):
    """(True, None) when no agent gains by moving to another taxi."""
    validate_partition(inst, alloc)
    padded, types, taxi_of = _layout(inst, alloc)
    for a in inst.agents():
        i = taxi_of[a]
        x_a = inst.x(a)
        cost_a = _own_cost(inst, i, types[i - 1], x_a)
        for j in range(1, len(padded) + 1):
            if j == i:
                continue
            if j > inst.k or len(padded[j - 1]) + 1 > inst.q(j):
                continue  # joining would overfill: the move costs INFINITY
            members = list(types[j - 1])
            insort(members, x_a)
            new_cost = phi(tuple(members), x_a)
            if new_cost < cost_a:
                return False, DeviationWitness(a, i, j, cost_a, new_cost)
    return True, None


def check_swap_stable(inst: Instance, alloc: Allocation, mode: str = "weak"):
    """Weak mode forbids mutual envy; strong mode forbids an envied agent
    who could replace the envier at no loss."""
    if mode not in ("weak", "strong"):
        raise ValueError(f"mode must be 'weak' or 'strong', got {mode!r}")
    validate_partition(inst, alloc)
    padded, types, taxi_of = _layout(inst, alloc)

    def envy_pair(a, b):
        """(a's current cost, a's cost after replacing b)."""
        i, j = taxi_of[a], taxi_of[b]
        x_a = inst.x(a)
        cost_a = _own_cost(inst, i, types[i - 1], x_a)
        return cost_a, _replaced_cost(inst, j, types[j - 1], inst.x(b), x_a)

    for a in inst.agents():
        for b in inst.agents():
            if taxi_of[a] == taxi_of[b]:
                continue
            a_cost, a_repl = envy_pair(a, b)
            if not a_repl < a_cost:
                continue  # a does not envy b
            b_cost, b_repl = envy_pair(b, a)
            bad = b_repl < b_cost if mode == "weak" else b_repl <= b_cost
            if bad:
                return False, SwapWitness(a, b, a_cost, a_repl, b_cost, b_repl)
    return True, None


def check_socially_optimal(inst: Instance, alloc: Allocation) -> bool:
    """Compare against the backward-greedy optimum (no enumeration needed)."""
    validate_partition(inst, alloc)
    if sum(inst.capacities) < inst.n:
        raise Infeasible("no feasible allocation exists for this instance")
    optimum = total_cost(inst, backward.backward_greedy(inst))
    return total_cost(inst, alloc) == optimum


def check_consecutive(inst: Instance, alloc: Allocation) -> bool:
    """True iff nonempty coalitions occupy non-overlapping destination ranges."""
    validate_partition(inst, alloc)
    spans = sorted(
        (min(inst.x(a) for a in t), max(inst.x(a) for a in t))
        for t in alloc
        if t
    )
    return all(spans[i][1] <= spans[i + 1][0] for i in range(len(spans) - 1))


def check_split_conditions(inst: Instance, alloc: Allocation) -> bool:
    """The three necessary conditions on every destination type shared by
    two coalitions: the type opens both coalitions, the coalitions have
    equal size, and equal shares force both coalitions to be pure."""
    validate_partition(inst, alloc)
    nonempty = [t for t in alloc if t]
    for value in inst.types():
        holders = [t for t in nonempty if any(inst.x(a) == value for a in t)]
        if len(holders) < 2:
            continue
        for t in holders:
            if any(inst.x(a) < value for a in t):
                return False  # (i) a split type must drop first
        size = len(holders[0])
        if any(len(t) != size for t in holders):
            return False  # (ii) equal coalition sizes
        for idx, t in enumerate(holders):
            share_t = sum(1 for a in t if inst.x(a) == value)
            for u in holders[idx + 1 :]:
                share_u = sum(1 for a in u if inst.x(a) == value)
                if share_t == share_u and (share_t != len(t) or share_u != len(u)):
                    return False  # (iii) equal shares force pure coalitions
    return True


def check_envy_free_in_groups(inst: Instance, alloc: Allocation, groups):
    """Envy check restricted to pairs inside the same group.

    `groups` is an iterable of collections of agent indices partitioning
    1..n.
    """
    validate_partition(inst, alloc)
    group_of = {}
    total = 0
    for gid, group in enumerate(groups):
        for a in group:
            if a in group_of:
                raise GroupsNotAPartition(f"agent {a} appears in two groups")
            group_of[a] = gid
            total += 1
    if total != inst.n or set(group_of) != set(inst.agents()):
        raise GroupsNotAPartition("groups do not cover exactly the agents 1..n")
    witness = _envy_witness(inst, alloc, groups=group_of)
    return (witness is None), witness


def evaluate_concepts(inst: Instance, alloc: Allocation, concepts=None, groups=None) -> ConceptReport:
    """Run the requested checkers (all of them by default) into one report."""
    wanted = set(concepts) if concepts is not None else set(CONCEPTS)
    report = ConceptReport()
    if "ef" in wanted:
        report.ef, w = check_envy_free(inst, alloc)
        if w:
            report.witnesses["ef"] = w
    if "ns" in wanted:
        report.ns, w = check_nash_stable(inst, alloc)
        if w:
            report.witnesses["ns"] = w
    if "wss" in wanted:
        report.wss, w = check_swap_stable(inst, alloc, "weak")
        if w:
            report.witnesses["wss"] = w
    if "sss" in wanted:
        report.sss, w = check_swap_stable(inst, alloc, "strong")
        if w:
            report.witnesses["sss"] = w
    if "so" in wanted:
        report.so = check_socially_optimal(inst, alloc)
    if "consecutive" in wanted:
        report.consecutive = check_consecutive(inst, alloc)
    if "split" in wanted:
        report.split = check_split_conditions(inst, alloc)
    if groups is not None:
        report.ef_in_groups, w = check_envy_free_in_groups(inst, alloc, groups)
        if w:
            report.witnesses["ef_in_groups"] = w
    return report
