"""The desk-scale verification suite.

Each criterion is a function returning a CriterionResult; the CLI `bench`
subcommand and the acceptance tests both run these, so there is exactly one
definition of what "passing" means.  Every check is exact (rational
equality or boolean match); the only tolerances are the per-criterion time
limits.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import criteria
from .backward import backward_greedy
from .core import (
    coalition_types,
    is_feasible,
    phi,
    shapley_permutation_oracle,
    total_cost,
)
from .criteria import (
    check_consecutive,
    check_envy_free,
    check_nash_stable,
    check_split_conditions,
    check_swap_stable,
    evaluate_concepts,
)
from .ef_cap4 import normalize_allocation, solve_ef_cap4, split_pattern_for
from .ef_config import solve_ef_constant_taxis
from .ef_consecutive import solve_ef_consecutive
from .ef_types import solve_ef_fpt_types
from .generators import paper_example, random_instance
from .oracle import EnumerationBudget, allocation_signature, enumerate_feasible, oracle_exists


@dataclass
class CriterionResult:
    ident: int
    description: str
    passed: bool
    detail: str
    seconds: float
    limit_seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] criterion {self.ident:>2}: {self.description}"
            f"  ({self.seconds:.2f}s / limit {self.limit_seconds:g}s)"
            + ("" if self.passed else f"  -- {self.detail}")
        )


def _run(ident, description, limit_seconds, body) -> CriterionResult:
    start = time.perf_counter()
    try:
        failures = body()
    except Exception as exc:  # a crash is a failure, not an excuse
        failures = [f"exception: {exc!r}"]
    elapsed = time.perf_counter() - start
    passed = not failures and elapsed < limit_seconds
    detail = "; ".join(failures[:3]) if failures else (
        "" if elapsed < limit_seconds else f"time limit exceeded ({elapsed:.2f}s)"
    )
    return CriterionResult(ident, description, passed, detail, elapsed, limit_seconds)


def _random_coalition(rng, max_size=7):
    size = rng.randint(1, max_size)
    return [Fraction(rng.randint(1, 60), rng.randint(1, 10)) for _ in range(size)]


def criterion_1() -> CriterionResult:
    def body():
        failures = []
        coalition = [12, 24, 36, 40]
        expected = {12: 3, 24: 7, 36: 13, 40: 17}
        for x, payment in expected.items():
            got = phi(coalition, x)
            if got != payment:
                failures.append(f"phi at {x}: {got} != {payment}")
        return failures

    return _run(1, "four-rider payments are exactly 3/7/13/17", 0.001, body)


def criterion_2() -> CriterionResult:
    def body():
        rng = random.Random("criterion-2")
        failures = []
        for trial in range(500):
            dests = sorted(_random_coalition(rng))
            position = rng.randint(1, len(dests))
            lhs = phi(dests, dests[position - 1])
            rhs = shapley_permutation_oracle(dests, len(dests), position)
            if lhs != rhs:
                failures.append(f"trial {trial}: {lhs} != {rhs}")
        return failures

    return _run(2, "phi equals the permutation-average oracle on 500 coalitions", 10, body)


def criterion_3() -> CriterionResult:
    def body():
        rng = random.Random("criterion-3")
        failures = []
        for trial in range(1000):
            dests = _random_coalition(rng)
            paid = sum(phi(dests, x) for x in dests)
            if paid != max(dests):
                failures.append(f"trial {trial}: sum {paid} != max {max(dests)}")
        return failures

    return _run(3, "payments sum to the last drop-off on 1000 coalitions", 5, body)


_SEPARATIONS = (
    ("2", ({2, 3, 7, 8, 9}, {1, 4, 5, 6}), {"so": True, "ns": True, "wss": False}),
    ("3", (set(), {1, 2}, {3, 4}), {"ns": True, "ef": True, "so": False}),
    ("4", ({1, 2, 3}, {4, 5}), {"so": True, "ef": True, "ns": False}),
    ("5", ({1, 2}, {3}), {"sss": True, "ef": False}),
    ("6", ({1, 3}, {2, 4}), {"wss": True, "sss": False}),
)


def criterion_4() -> CriterionResult:
    def body():
        failures = []
        for ident, coalitions, expected in _SEPARATIONS:
            inst, _ = paper_example(ident)
            allocation = tuple(frozenset(c) for c in coalitions)
            report = evaluate_concepts(inst, allocation, concepts=expected)
            for name, want in expected.items():
                got = getattr(report, name)
                if got != want:
                    failures.append(f"example {ident}: {name}={got}, wanted {want}")
        return failures

    return _run(4, "the five worked examples separate the concepts exactly", 1, body)


def criterion_5(trials=300) -> CriterionResult:
    def body():
        rng = random.Random("criterion-5")
        failures = []
        for trial in range(trials):
            inst = random_instance(rng, max_n=8, max_k=4, feasible=True)
            allocation = backward_greedy(inst)
            if not check_nash_stable(inst, allocation)[0]:
                failures.append(f"trial {trial}: not Nash stable")
            if not check_swap_stable(inst, allocation, "strong")[0]:
                failures.append(f"trial {trial}: not strongly swap-stable")
            optimum = oracle_exists(inst, "so").optimum
            if total_cost(inst, allocation) != optimum:
                failures.append(f"trial {trial}: cost != optimum {optimum}")
        return failures

    return _run(
        5, f"backward greedy is NS+SSS and exactly optimal on {trials} instances", 60, body
    )


def criterion_6(trials=300) -> CriterionResult:
    classes = (
        ("ef-config", solve_ef_constant_taxis, dict(max_n=8, max_k=2, max_types=4)),
        ("ef-cap4", solve_ef_cap4, dict(max_n=8, max_k=4, max_q=4)),
        ("ef-types", solve_ef_fpt_types, dict(max_n=8, max_k=4, max_types=3)),
    )

    def body():
        failures = []
        for name, solver, bounds in classes:
            rng = random.Random(f"criterion-6:{name}")
            for trial in range(trials):
                inst = random_instance(rng, **bounds)
                allocation = solver(inst)
                exists = oracle_exists(inst, "ef").exists
                if (allocation is not None) != exists:
                    failures.append(
                        f"{name} trial {trial}: solver={allocation is not None}, oracle={exists}"
                    )
                elif allocation is not None and not (
                    is_feasible(inst, allocation) and check_envy_free(inst, allocation)[0]
                ):
                    failures.append(f"{name} trial {trial}: returned non-EF allocation")
        return failures

    return _run(
        6, f"three envy-free solvers match the oracle on {trials} instances each", 300, body
    )


def criterion_7() -> CriterionResult:
    def body():
        failures = []
        inst7, _ = paper_example("7")
        if solve_ef_constant_taxis(inst7) is not None:
            failures.append("configuration solver found EF on the hopeless instance")
        if solve_ef_cap4(inst7) is not None:
            failures.append("small-capacity solver found EF on the hopeless instance")
        if solve_ef_fpt_types(inst7) is not None:
            failures.append("type solver found EF on the hopeless instance")
        if solve_ef_consecutive(inst7) is not None:
            failures.append("consecutive solver found EF on the hopeless instance")
        if oracle_exists(inst7, "ef").exists:
            failures.append("oracle claims EF exists on the hopeless instance")

        inst8, expected = paper_example("8")
        budget = EnumerationBudget(max_agents=10)
        answer = oracle_exists(inst8, "ef", budget)
        if answer.count != 1:
            failures.append(f"EF class count {answer.count} != 1")
        if solve_ef_consecutive(inst8) is not None:
            failures.append("consecutive solver should find nothing")
        want = allocation_signature(inst8, expected)
        for name, solver in (("types", solve_ef_fpt_types), ("config", solve_ef_constant_taxis)):
            got = solver(inst8)
            if got is None or allocation_signature(inst8, got) != want:
                failures.append(f"{name} solver missed the unique allocation")
        return failures

    return _run(7, "no-EF and unique-EF golden instances behave exactly", 10, body)


def criterion_8(trials=150) -> CriterionResult:
    def body():
        rng = random.Random("criterion-8")
        failures = []
        seen = 0
        for trial in range(trials):
            inst = random_instance(rng, max_n=7, max_k=4)
            for allocation in enumerate_feasible(inst, EnumerationBudget()):
                if not check_envy_free(inst, allocation)[0]:
                    continue
                seen += 1
                failures.extend(_lemma_violations(inst, allocation, trial))
        if seen < 100:
            failures.append(f"suite too thin: only {seen} EF allocations")
        return failures

    return _run(8, "monotonicity, split, and locality hold on every EF allocation", 120, body)


def _lemma_violations(inst, allocation, trial):
    failures = []
    nonempty = [t for t in allocation if t]
    lows = {t: min(inst.x(a) for a in t) for t in nonempty}
    for t in nonempty:
        for u in nonempty:
            if lows[t] < lows[u] and len(t) < len(u):
                failures.append(f"trial {trial}: monotonicity (sizes)")
            if lows[t] == lows[u] and len(t) != len(u):
                failures.append(f"trial {trial}: monotonicity (equality)")
    if not check_split_conditions(inst, allocation):
        failures.append(f"trial {trial}: split conditions")
    for t in nonempty:
        types_t = coalition_types(inst, t)
        for a in t:
            own = phi(types_t, inst.x(a))
            for u in nonempty:
                if u is t:
                    continue
                other = phi(coalition_types(inst, u), inst.x(a))
                if not own <= other:
                    failures.append(f"trial {trial}: locality")
                elif lows[u] < inst.x(a) and not own < other:
                    failures.append(f"trial {trial}: locality strictness")
    return failures


def criterion_9(trials=150) -> CriterionResult:
    def body():
        rng = random.Random("criterion-9")
        failures = []
        observed = 0
        for trial in range(trials):
            inst = random_instance(rng, max_n=8, max_k=4, max_q=4, max_types=3)
            for allocation in enumerate_feasible(inst, EnumerationBudget()):
                if not check_envy_free(inst, allocation)[0]:
                    continue
                ordered = normalize_allocation(inst, allocation)
                sizes = [len(t) for t in ordered]
                for value in inst.types():
                    counts = [sum(1 for a in t if inst.x(a) == value) for t in ordered]
                    holders = [i for i, c in enumerate(counts) if c]
                    if len(holders) < 2:
                        continue
                    observed += 1
                    start = holders[0]
                    pattern = tuple(counts[i] for i in holders)
                    total = sum(pattern)
                    after = start + (total + 3) // 4
                    next_size = sizes[after] if after < len(sizes) else 0
                    want = split_pattern_for(sizes[start], total, next_size)
                    if pattern != want:
                        failures.append(
                            f"trial {trial}: type {value} pattern {pattern} != {want}"
                        )
        if observed < 50:
            failures.append(f"suite too thin: only {observed} split types")
        return failures

    return _run(9, "observed split patterns match the forced table exactly", 120, body)


def criterion_10(trials=300) -> CriterionResult:
    def body():
        rng = random.Random("criterion-10")
        both = lambda i, a: check_consecutive(i, a) and check_envy_free(i, a)[0]
        failures = []
        for trial in range(trials):
            inst = random_instance(rng, max_n=8, max_k=4)
            allocation = solve_ef_consecutive(inst)
            exists = oracle_exists(inst, both).exists
            if (allocation is not None) != exists:
                failures.append(f"trial {trial}: DP={allocation is not None}, oracle={exists}")
            elif allocation is not None:
                if not check_consecutive(inst, allocation):
                    failures.append(f"trial {trial}: not consecutive")
                if not check_envy_free(inst, allocation)[0]:
                    failures.append(f"trial {trial}: boundary check admitted envy")
        return failures

    return _run(
        10, f"consecutive DP matches the oracle on {trials} instances", 60, body
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_criterion(ident: int) -> CriterionResult:
    return CRITERIA[ident]()


def run_desk_suite(idents=None) -> list:
    results = []
    for ident in sorted(idents or CRITERIA):
        result = run_criterion(ident)
        print(result.line(), flush=True)
        results.append(result)
    return results


def format_table(results) -> str:
    width = max(len(r.description) for r in results)
    lines = [
        f"{'#':>2}  {'criterion':<{width}}  {'result':<6}  {'time':>8}",
        f"{'-' * 2}  {'-' * width}  {'-' * 6}  {'-' * 8}",
    ]
    for r in results:
        lines.append(
            f"{r.ident:>2}  {r.description:<{width}}  "
            f"{'pass' if r.passed else 'FAIL':<6}  {r.seconds:>7.2f}s"
        )
    lines.append(
        f"\n{sum(r.passed for r in results)}/{len(results)} criteria passed"
    )
    return "\n".join(lines)
