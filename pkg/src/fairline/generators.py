"""Instance generators: random families and the built-in worked examples.

Every generator is deterministic: the worked examples are fixed data, and
the random families draw from `random.Random(seed)` only.
"""

import random
from fractions import Fraction
from typing import Optional

from .core import Allocation, Instance, load_instance
from .errors import UnknownFamily

# Worked examples, keyed by their number in the source material presentation
# (raw, pre-canonicalization lists).  Each entry: destinations, capacities,
# and optionally the allocation discussed there (against sorted agent ids).
_EXAMPLES = {
    "1": ([12, 24, 36, 40], [4]),
    "2": ([1, 2, 2, 4, 4, 4, 4, 4, 4], [5, 4]),
    "3": ([1, 1, 1, 1], [2, 2, 4]),
    "4": ([1, 2, 2, 4, 4], [3, 3]),
    "5": ([1, 2, 2], [2, 1]),
    "6": ([1, 1, 2, 2], [2, 2]),
    "7": ([2, 4, 4, 4], [2, 2]),
    "8": ([1, 1, 1, 1, 10, 10, 10, 10, 20, 20], [6, 4]),
}

_EXAMPLE_ALLOCATIONS = {
    "2": ({2, 3, 7, 8, 9}, {1, 4, 5, 6}),
    "3": (set(), {1, 2}, {3, 4}),
    "4": ({1, 2, 3}, {4, 5}),
    "5": ({1, 2}, {3}),
    "6": ({1, 3}, {2, 4}),
    "7": ({1, 2}, {3, 4}),
    "8": ({1, 2, 3, 4, 9, 10}, {5, 6, 7, 8}),
}

# A 46-agent, 9-taxi instance whose unique-by-construction envy-free
# allocation realizes a rich 4-component allocation graph (one root with
# three hanging paths, a root with one long path, an isolated root, and a
# root with two paths).  Destination values are chosen so that every
# locality constraint holds with exact rationals.
_FIG7_TYPES = (
    (Fraction(1), 7),            # root of component 1
    (Fraction(51, 50), 5),       # path a
    (Fraction(26, 25), 2),       # path b, first stop
    (Fraction(53, 50), 2),       # path b, second stop
    (Fraction(27, 25), 1),       # path c, first stop
    (Fraction(109, 100), 1),     # path c, second stop
    (Fraction(2), 7),            # root of component 2
    (Fraction(5, 2), 10),        # root of component 3 (isolated)
    (Fraction(13, 5), 1),        # path d, first stop
    (Fraction(27, 10), 1),       # path d, second stop
    (Fraction(273, 100), 1),     # path d, third stop
    (Fraction(3), 3),            # root of component 4
    (Fraction(16, 5), 3),        # path e
    (Fraction(33, 10), 1),       # path f, first stop
    (Fraction(17, 5), 1),        # path f, second stop
)
_FIG7_CAPACITIES = [6, 6, 6, 5, 5, 5, 5, 4, 4]


def _fig7_raw():
    destinations = []
    for value, count in _FIG7_TYPES:
        destinations.extend([value] * count)
    return destinations, list(_FIG7_CAPACITIES)


def fig7_allocation(inst: Instance) -> Allocation:
    """The nine coalitions of the star-forest showcase instance."""
    ids = {}
    for a in inst.agents():
        ids.setdefault(inst.x(a), []).append(a)

    r1, a1 = ids[Fraction(1)], ids[Fraction(51, 50)]
    b1, b2 = ids[Fraction(26, 25)], ids[Fraction(53, 50)]
    c1, c2 = ids[Fraction(27, 25)], ids[Fraction(109, 100)]
    r2, r3 = ids[Fraction(2)], ids[Fraction(5, 2)]
    d1, d2, d3 = ids[Fraction(13, 5)], ids[Fraction(27, 10)], ids[Fraction(273, 100)]
    r4, e1 = ids[Fraction(3)], ids[Fraction(16, 5)]
    f1, f2 = ids[Fraction(33, 10)], ids[Fraction(17, 5)]
    coalitions = (
        r1[0:1] + a1,
        r1[1:3] + b1 + b2,
        r1[3:7] + c1 + c2,
        r2[0:2] + d1 + d2 + d3,
        r2[2:7],
        r3[0:5],
        r3[5:10],
        r4[0:1] + e1,
        r4[1:3] + f1 + f2,
    )
    return tuple(frozenset(t) for t in coalitions)


def paper_example(ident: str):
    """(instance, discussed allocation or None) for a worked example id.

    Ids "1".."8" are the numbered examples; "fig7" is the star-forest
    showcase.
    """
    ident = str(ident)
    if ident == "fig7":
        inst = load_instance(*_fig7_raw())
        return inst, fig7_allocation(inst)
    if ident not in _EXAMPLES:
        raise UnknownFamily(f"no worked example {ident!r}")
    inst = load_instance(*_EXAMPLES[ident])
    alloc = _EXAMPLE_ALLOCATIONS.get(ident)
    if alloc is not None:
        alloc = tuple(frozenset(t) for t in alloc)
    return inst, alloc


def paper_example_raw(ident: str):
    """The raw (pre-sort) destination and capacity lists of an example."""
    ident = str(ident)
    if ident == "fig7":
        return _fig7_raw()
    if ident not in _EXAMPLES:
        raise UnknownFamily(f"no worked example {ident!r}")
    destinations, capacities = _EXAMPLES[ident]
    return list(destinations), list(capacities)


def _random_type_pool(rng: random.Random, count: int) -> list:
    pool = set()
    while len(pool) < count:
        pool.add(Fraction(rng.randint(1, 60), rng.randint(1, 6)))
    return sorted(pool)


def uniform_types(
    seed: int,
    n: int = 6,
    k: int = 3,
    max_q: Optional[int] = None,
    types: Optional[int] = None,
) -> Instance:
    """Agents drawn uniformly from a small random pool of rational types;
    capacities uniform in 1..max_q."""
    rng = random.Random(f"uniform-types:{seed}")
    max_q = max_q or n
    type_count = types or rng.randint(1, min(4, n))
    pool = _random_type_pool(rng, type_count)
    destinations = [rng.choice(pool) for _ in range(n)]
    # every type in the pool appears at least once when it fits
    for i, value in enumerate(pool[: min(type_count, n)]):
        destinations[i] = value
    capacities = [rng.randint(1, max_q) for _ in range(k)]
    return load_instance(destinations, capacities)


def clustered(
    seed: int,
    n: int = 6,
    k: int = 3,
    max_q: Optional[int] = None,
    types: Optional[int] = None,
) -> Instance:
    """Types form tight clusters around well-separated centers, the regime
    where envy constraints bind across clusters."""
    rng = random.Random(f"clustered:{seed}")
    max_q = max_q or n
    type_count = types or rng.randint(2, min(5, max(2, n)))
    centers = sorted(rng.sample(range(1, 12), min(3, type_count)))
    pool = set()
    while len(pool) < type_count:
        center = rng.choice(centers)
        pool.add(center + Fraction(rng.randint(0, 9), 100))
    pool = sorted(pool)
    destinations = [rng.choice(pool) for _ in range(n)]
    for i, value in enumerate(pool[: min(type_count, n)]):
        destinations[i] = value
    capacities = [rng.randint(1, max_q) for _ in range(k)]
    return load_instance(destinations, capacities)


def random_instance(
    rng: random.Random,
    max_n: int = 8,
    max_k: int = 4,
    max_q: Optional[int] = None,
    max_types: Optional[int] = None,
    feasible: bool = False,
) -> Instance:
    """One desk-scale instance with all dimensions drawn from the rng;
    with feasible=True, capacities are redrawn until they cover n."""
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_k)
    cap = max_q or n
    p = rng.randint(1, min(max_types or n, n))
    pool = set()
    while len(pool) < p:
        pool.add(Fraction(rng.randint(1, 40), rng.randint(1, 4)))
    pool = sorted(pool)
    destinations = [rng.choice(pool) for _ in range(n)]
    for i in range(min(p, n)):
        destinations[i] = pool[i]
    while True:
        capacities = [rng.randint(1, cap) for _ in range(k)]
        if not feasible or sum(capacities) >= n:
            break
    return load_instance(destinations, capacities)


FAMILIES = {
    "uniform-types": uniform_types,
    "clustered": clustered,
}


def generate(family: str, seed: int = 0, **kwargs) -> Instance:
    """Dispatch on a family name; "paper-example:<id>" returns the fixed
    worked instance (the seed is ignored there)."""
    if family.startswith("paper-example:"):
        return paper_example(family.split(":", 1)[1])[0]
    if family not in FAMILIES:
        raise UnknownFamily(f"unknown family {family!r}")
    return FAMILIES[family](seed, **kwargs)
