"""Envy-free search driven by per-taxi configurations.

A configuration fixes, for every taxi, how many agents ride it, the first
drop-off point, and how many agents leave there.  Locality then pins each
remaining agent to the taxi where it is cheapest, so one greedy pass per
configuration decides the whole instance.  Intended for small k: there are
O(n^(3k)) configurations.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Union

from .core import (
    Allocation,
    Cost,
    INFINITY,
    Instance,
    _Infinity,
)
from .criteria import check_envy_free
from .errors import BudgetExceeded, ConfigurationInvalid


class TaxiConfig(NamedTuple):
    """(mu, s, r): rider count, first drop-off point, drop count there."""

    mu: int
    s: Union[Fraction, _Infinity]
    r: int


Configuration = tuple
EMPTY_TAXI = TaxiConfig(0, INFINITY, 0)


def _type_last_index(inst: Instance) -> dict:
    """Largest (1-based) agent index per destination type."""
    last = {}
    for a in inst.agents():
        last[inst.x(a)] = a
    return last


def is_valid_configuration(inst: Instance, cfg: Configuration) -> bool:
    """The four conditions that make a vector realizable by some feasible
    allocation: per-taxi sanity, rider counts summing to n, enough agents of
    each first-drop type, and every prefix of agents fitting into the taxis
    that can take them."""
    if len(cfg) != inst.k:
        return False
    type_counts = {}
    for a in inst.agents():
        type_counts[inst.x(a)] = type_counts.get(inst.x(a), 0) + 1
    for i, (mu, s, r) in enumerate(cfg, start=1):
        if (mu, s, r) == EMPTY_TAXI:
            continue
        if s not in type_counts or not 1 <= r <= mu <= inst.q(i):
            return False
    if sum(tc.mu for tc in cfg) != inst.n:
        return False
    first_drops = {}
    for tc in cfg:
        if tc.mu:
            first_drops[tc.s] = first_drops.get(tc.s, 0) + tc.r
    if any(total > type_counts[s] for s, total in first_drops.items()):
        return False
    for value, a in _type_last_index(inst).items():
        room = sum(tc.mu for tc in cfg if tc.mu and tc.s < value)
        room += sum(tc.r for tc in cfg if tc.mu and tc.s == value)
        if a > room:
            return False
    return True


def enumerate_configurations(
    inst: Instance, max_configurations: Optional[int] = None
) -> Iterator[Configuration]:
    """All valid configurations, in a fixed order.

    Per taxi the empty triple comes first, then (mu, s, r) by ascending
    first-drop type, rider count, and drop count.  Raises BudgetExceeded
    when a cap is given and more valid configurations exist.
    """
    types = inst.types()
    type_counts = {v: inst.type_count(v) for v in types}
    last_index = _type_last_index(inst)
    suffix_capacity = [0] * (inst.k + 2)
    for i in range(inst.k, 0, -1):
        suffix_capacity[i] = suffix_capacity[i + 1] + inst.q(i)

    chosen = []
    yielded = 0

    def candidates(i: int):
        yield EMPTY_TAXI
        for s in types:
            for mu in range(1, inst.q(i) + 1):
                for r in range(1, mu + 1):
                    yield TaxiConfig(mu, s, r)

    def conditions_hold(cfg: Configuration) -> bool:
        first_drops = {}
        for tc in cfg:
            if tc.mu:
                first_drops[tc.s] = first_drops.get(tc.s, 0) + tc.r
        if any(total > type_counts[s] for s, total in first_drops.items()):
            return False
        for value, a in last_index.items():
            room = sum(tc.mu for tc in cfg if tc.mu and tc.s < value)
            room += sum(tc.r for tc in cfg if tc.mu and tc.s == value)
            if a > room:
                return False
        return True

    def rec(i: int, used: int) -> Iterator[Configuration]:
        nonlocal yielded
        if i > inst.k:
            if used == inst.n:
                cfg = tuple(chosen)
                if conditions_hold(cfg):
                    yielded += 1
                    if max_configurations is not None and yielded > max_configurations:
                        raise BudgetExceeded(
                            f"more than {max_configurations} configurations"
                        )
                    yield cfg
            return
        for tc in candidates(i):
            total = used + tc.mu
            if total > inst.n or total + suffix_capacity[i + 1] < inst.n:
                continue
            chosen.append(tc)
            yield from rec(i + 1, total)
            chosen.pop()

    yield from rec(1, 0)


def greedy_from_configuration(inst: Instance, cfg: Configuration) -> Optional[Allocation]:
    """One locality-guided pass: first-drop slots are honoured, every other
    agent goes to the cheapest taxi already past its first stop.  Returns
    the built allocation when its final envy check passes, else None."""
    if not is_valid_configuration(inst, cfg):
        raise ConfigurationInvalid(f"not a realizable configuration: {cfg}")
    members = [[] for _ in inst.taxis()]
    count = [0] * inst.k
    base = [Fraction(0)] * inst.k  # running prefix cost at the last drop-off
    top = [Fraction(0)] * inst.k

    def place(i: int, agent: int, x: Fraction) -> None:
        idx = i - 1
        base[idx] += (x - top[idx]) / (cfg[idx].mu - count[idx])
        top[idx] = x
        count[idx] += 1
        members[idx].append(agent)

    for a in inst.agents():
        x_a = inst.x(a)
        target = None
        for i in inst.taxis():
            tc = cfg[i - 1]
            if tc.mu and tc.s == x_a and count[i - 1] < tc.r:
                target = i
                break
        if target is None:
            best = None
            for i in inst.taxis():
                tc = cfg[i - 1]
                if not tc.mu or not tc.s < x_a or count[i - 1] >= tc.mu:
                    continue
                value = base[i - 1] + (x_a - top[i - 1]) / (tc.mu - count[i - 1])
                if best is None or value < best[0]:
                    best = (value, i)
            assert best is not None, "a valid configuration always has room"
            target = best[1]
        place(target, a, x_a)

    alloc = tuple(frozenset(t) for t in members)
    ok, _ = check_envy_free(inst, alloc)
    return alloc if ok else None


def solve_ef_constant_taxis(
    inst: Instance, max_configurations: Optional[int] = None
) -> Optional[Allocation]:
    """First envy-free feasible allocation over all configurations, or None
    once every configuration has been tried."""
    for cfg in enumerate_configurations(inst, max_configurations):
        alloc = greedy_from_configuration(inst, cfg)
        if alloc is not None:
            return alloc
    return None
