"""Envy-free search parameterized by the number of destination types.

Any envy-free allocation induces a digraph on types (an edge when one type
drops off right after another in some coalition) that must be a forest of
roots with hanging paths.  Conversely such a forest plus one coalition size
per component pins the allocation down completely, and the admissible size
vectors form an upper semilattice: starting from the componentwise maximum
and shrinking one coordinate per failed check visits at most n vectors per
forest.  Total time O(p^p * n^4) for p types.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import Allocation, Instance, validate_partition
from .criteria import envy_pairs
from .errors import BudgetExceeded, ConditionsViolated

SizeVector = tuple


@dataclass(frozen=True)
class TypeSet:
    """Distinct destination values (ascending) with their agent counts."""

    types: tuple
    multiplicities: tuple

    @classmethod
    def from_instance(cls, inst: Instance) -> "TypeSet":
        values = inst.types()
        return cls(values, tuple(inst.type_count(v) for v in values))

    @property
    def p(self) -> int:
        return len(self.types)


@dataclass(frozen=True)
class Component:
    """One tree of the forest: a root type and its hanging paths (type
    indices, each path ascending away from the root)."""

    root: int
    paths: tuple

    def vertices(self) -> tuple:
        verts = [self.root]
        for path in self.paths:
            verts.extend(path)
        return tuple(sorted(verts))


@dataclass(frozen=True)
class StarForest:
    """Parent assignment on type indices; edges point from smaller types to
    larger ones and only roots may have several children."""

    types: tuple
    parent: tuple

    def edges(self) -> frozenset:
        return frozenset(
            (self.types[p], self.types[i])
            for i, p in enumerate(self.parent)
            if p is not None
        )

    def components(self) -> tuple:
        children = [[] for _ in self.types]
        roots = []
        for i, p in enumerate(self.parent):
            if p is None:
                roots.append(i)
            else:
                children[p].append(i)
        comps = []
        for r in sorted(roots):
            paths = []
            for head in sorted(children[r]):
                path = [head]
                while children[path[-1]]:
                    (nxt,) = children[path[-1]]
                    path.append(nxt)
                paths.append(tuple(path))
            comps.append(Component(r, tuple(paths)))
        return tuple(comps)


def enumerate_star_forests(
    types: TypeSet, max_forests: Optional[int] = None
) -> Iterator[StarForest]:
    """All parent assignments whose components are roots with hanging paths.

    The smallest type is always a root; every other type picks either no
    parent or some smaller type, subject to non-roots keeping out-degree
    at most one.
    """
    p = types.p
    parent = [None] * p
    child_count = [0] * p
    yielded = 0

    def rec(i: int) -> Iterator[StarForest]:
        nonlocal yielded
        if i == p:
            yielded += 1
            if max_forests is not None and yielded > max_forests:
                raise BudgetExceeded(f"more than {max_forests} star-forests")
            yield StarForest(types.types, tuple(parent))
            return
        for cand in (None, *range(i)):
            if cand is not None:
                if parent[cand] is not None and child_count[cand] >= 1:
                    continue  # non-root vertices carry at most one path edge
                child_count[cand] += 1
            parent[i] = cand
            yield from rec(i + 1)
            parent[i] = None
            if cand is not None:
                child_count[cand] -= 1

    yield from rec(0)


@dataclass(frozen=True)
class AllocationGraph:
    vertices: tuple
    edges: frozenset
    is_star_forest: bool
    forest: Optional[StarForest]


def allocation_graph(inst: Instance, alloc: Allocation) -> AllocationGraph:
    """Digraph of consecutive drop-off types induced by an allocation, and
    whether it is a star-forest."""
    validate_partition(inst, alloc)
    values = inst.types()
    index = {v: i for i, v in enumerate(values)}
    edges = set()
    for coalition in alloc:
        dropoffs = sorted(set(inst.x(a) for a in coalition))
        edges.update(zip(dropoffs, dropoffs[1:]))

    parent = [None] * len(values)
    ok = True
    for y, z in edges:
        if parent[index[z]] is not None:
            ok = False  # two distinct predecessors
            break
        parent[index[z]] = index[y]
    forest = None
    if ok:
        out_degree = [0] * len(values)
        for y, _ in edges:
            out_degree[index[y]] += 1
        ok = all(
            out_degree[i] <= 1
            for i in range(len(values))
            if parent[i] is not None
        )
    if ok:
        forest = StarForest(values, tuple(parent))
    return AllocationGraph(values, frozenset(edges), ok, forest)


# --- realizing a (forest, size-vector) pair -----------------------------------

# condition labels, in the order the solver tests them
DISTINCT_PATH_COUNTS = "distinct-path-counts"
TAXI_COUNT = "taxi-count"
SIZE_DIVISOR_BOUNDS = "size-divisor-bounds"
SIZES_NONINCREASING = "sizes-nonincreasing"
TAXI_CAPACITY = "taxi-capacity"


@dataclass(frozen=True)
class _ComponentData:
    component: Component
    agent_count: int
    root_count: int
    path_counts: tuple


def _component_data(inst: Instance, forest: StarForest):
    counts = [inst.type_count(v) for v in forest.types]
    data = []
    for comp in forest.components():
        path_counts = tuple(sum(counts[v] for v in path) for path in comp.paths)
        data.append(
            _ComponentData(
                component=comp,
                agent_count=counts[comp.root] + sum(path_counts),
                root_count=counts[comp.root],
                path_counts=path_counts,
            )
        )
    return data


def _distinct_path_counts(data) -> bool:
    return all(len(set(d.path_counts)) == len(d.path_counts) for d in data)


def _divisor_bounds_violation(data, lam) -> Optional[int]:
    """Index (0-based) of the first component whose size is not a divisor of
    its agent count or falls outside the path-count bounds, else None.

    Every path coalition must strictly contain its path (so at least one
    root-type agent rides along), hence the strict lower bound.
    """
    for j, d in enumerate(data):
        size = lam[j]
        if size < 1 or d.agent_count % size:
            return j
        if d.path_counts:
            if size <= max(d.path_counts) or size * len(d.path_counts) > d.agent_count:
                return j
    return None


def _capacity_violation(inst, data, lam) -> Optional[int]:
    used = 0
    for j, d in enumerate(data):
        used += d.agent_count // lam[j]
        if lam[j] > inst.q(used):
            return j
    return None


def realize_allocation(inst: Instance, forest: StarForest, lam: SizeVector) -> Allocation:
    """The canonical allocation determined by a star-forest and one coalition
    size per component.

    Per component: one coalition per path, made of the whole path plus
    root-type filler, then pure root-type coalitions; components take
    consecutive taxis in root order.  Raises ConditionsViolated naming the
    first broken realizability condition.
    """
    if forest.types != inst.types():
        raise ConditionsViolated(DISTINCT_PATH_COUNTS, "forest built for other types")
    data = _component_data(inst, forest)
    if len(lam) != len(data):
        raise ConditionsViolated(SIZE_DIVISOR_BOUNDS, "one size per component required")
    if not _distinct_path_counts(data):
        raise ConditionsViolated(DISTINCT_PATH_COUNTS)
    if sum(Fraction(d.agent_count, lam[j]) for j, d in enumerate(data) if lam[j] > 0) > inst.k:
        raise ConditionsViolated(TAXI_COUNT)
    j = _divisor_bounds_violation(data, lam)
    if j is not None:
        raise ConditionsViolated(SIZE_DIVISOR_BOUNDS, f"component {j + 1}")
    if any(lam[j - 1] < lam[j] for j in range(1, len(lam))):
        raise ConditionsViolated(SIZES_NONINCREASING)
    j = _capacity_violation(inst, data, lam)
    if j is not None:
        raise ConditionsViolated(TAXI_CAPACITY, f"component {j + 1}")
    return _build(inst, data, lam)


def _build(inst: Instance, data, lam) -> Allocation:
    agents_of_type = {v: [] for v in inst.types()}
    for a in inst.agents():
        agents_of_type[inst.x(a)].append(a)

    coalitions = []
    for j, d in enumerate(data):
        size = lam[j]
        root_value = inst.types()[d.component.root]
        root_pool = list(agents_of_type[root_value])
        # paths ordered by ascending agent count: root share decreases along
        # the block, matching the canonical presentation
        path_plans = sorted(
            zip(d.path_counts, d.component.paths), key=lambda pc: pc[0]
        )
        plans = [([], size)] * ((d.agent_count - size * len(path_plans)) // size)
        for cnt, path in path_plans:
            members = []
            for v in path:
                members.extend(agents_of_type[inst.types()[v]])
            plans.append((members, size - cnt))
        for members, fill in plans:
            coalition = list(members) + root_pool[:fill]
            del root_pool[:fill]
            coalitions.append(frozenset(coalition))
    return tuple(coalitions)


# --- the solver ----------------------------------------------------------------

def _envied_component(inst, alloc, data) -> Optional[int]:
    """Smallest (0-based) component index owning an envied agent, or None."""
    comp_of_type = {}
    for j, d in enumerate(data):
        for v in d.component.vertices():
            comp_of_type[inst.types()[v]] = j
    envied = {b for _, b in envy_pairs(inst, alloc)}
    if not envied:
        return None
    return min(comp_of_type[inst.x(b)] for b in envied)


def solve_ef_fpt_types(
    inst: Instance, max_forests: Optional[int] = None
) -> Optional[Allocation]:
    """Envy-free feasible allocation, or None; FPT in the number of types.

    For each star-forest the candidate sizes per component start at every
    value up to the component's agent count; the componentwise maximum is
    realized and checked, and each failure either discards the forest (graph
    or taxi-count trouble) or removes the maximum of one component.
    """
    type_set = TypeSet.from_instance(inst)
    for forest in enumerate_star_forests(type_set, max_forests):
        data = _component_data(inst, forest)
        if not _distinct_path_counts(data):
            continue
        lattices = [list(range(1, d.agent_count + 1)) for d in data]
        while all(lattices):
            lam = tuple(lat[-1] for lat in lattices)
            if sum(Fraction(d.agent_count, lam[j]) for j, d in enumerate(data)) > inst.k:
                break  # no smaller vector uses fewer taxis
            j = _divisor_bounds_violation(data, lam)
            if j is not None:
                lattices[j].pop()
                continue
            j = next(
                (j for j in range(1, len(lam)) if lam[j - 1] < lam[j]), None
            )
            if j is not None:
                lattices[j].pop()
                continue
            j = _capacity_violation(inst, data, lam)
            if j is not None:
                lattices[j].pop()
                continue
            alloc = _build(inst, data, lam)
            j = _envied_component(inst, alloc, data)
            if j is None:
                return alloc
            lattices[j].pop()
    return None
