"""Command-line front-end: check, solve, gen, bench.

Exit codes are stable for scripting: 0 success, 2 parse error, 3 bad
partition, 4 strategy inapplicable, 5 budget exceeded.
"""

import argparse
import json
import sys
import time

from . import bench as bench_mod
from .backward import backward_greedy
from .core import Instance
from .criteria import CONCEPTS, evaluate_concepts
from .ef_cap4 import solve_ef_cap4
from .ef_config import solve_ef_constant_taxis
from .ef_consecutive import solve_ef_consecutive
from .ef_types import solve_ef_fpt_types
from .errors import (
    BudgetExceeded,
    CapacityTooLarge,
    FairlineError,
    NoFeasibleAllocation,
    NotAPartition,
    ParseError,
    StrategyInapplicable,
    UnknownFamily,
)
from .fileio import (
    InstanceFile,
    build_result,
    load_allocation_file,
    load_instance_file,
    write_json,
)
from .generators import FAMILIES, generate, paper_example_raw
from .oracle import EnumerationBudget, oracle_exists

EXIT_PARSE = 2
EXIT_PARTITION = 3
EXIT_STRATEGY = 4
EXIT_BUDGET = 5

STRATEGIES = (
    "backward",
    "ef-auto",
    "ef-config",
    "ef-cap4",
    "ef-types",
    "ef-consecutive",
    "brute",
)


def _emit(result, json_path):
    payload = result.to_json()
    if json_path:
        write_json(json_path, payload)
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_check(args) -> int:
    instance_file = load_instance_file(args.instance)
    inst = instance_file.to_instance()
    allocation = load_allocation_file(args.allocation, inst)
    concepts = args.concepts.split(",") if args.concepts else None
    if concepts:
        unknown = set(concepts) - set(CONCEPTS)
        if unknown:
            raise ParseError(f"unknown concepts: {sorted(unknown)}")
    groups = None
    if args.groups:
        raw_groups = _load_groups(args.groups)
        to_sorted = {orig: a for a, orig in enumerate(inst.original_agent_ids, start=1)}
        try:
            groups = [{to_sorted[int(orig)] for orig in group} for group in raw_groups]
        except KeyError as exc:
            raise ParseError(f"group mentions unknown agent {exc}") from exc
    elif instance_file.groups:
        groups = instance_file.sorted_groups(inst)
    start = time.perf_counter()
    report = evaluate_concepts(inst, allocation, concepts=concepts, groups=groups)
    elapsed = (time.perf_counter() - start) * 1000
    result = build_result(
        inst, "check", allocation, report=report, status="allocation", wall_time_ms=elapsed
    )
    _emit(result, args.json)
    return 0


def _load_groups(path):
    from .fileio import _json_load

    data = _json_load(path)
    if isinstance(data, dict) and "groups" in data:
        return data["groups"]
    if isinstance(data, list):
        return data
    raise ParseError(f"{path} does not contain groups")


def _estimate_costs(inst: Instance):
    p = len(inst.types())
    estimates = {
        "ef-config": inst.n ** (3 * inst.k + 2),
        "ef-types": (p ** p) * inst.n ** 4,
    }
    if max(inst.capacities) <= 4:
        estimates["ef-cap4"] = inst.n ** 6
    return estimates


def _solve_ef_auto(inst: Instance, args):
    """Cheapest applicable complete solver; brute force under the oracle
    budget when every estimate blows up."""
    if inst.k >= inst.n:
        return "singletons", tuple(frozenset({a}) for a in inst.agents()), "allocation"
    estimates = _estimate_costs(inst)
    name = min(estimates, key=lambda s: (estimates[s], s))
    if estimates[name] <= 10**8:
        allocation = _COMPLETE_SOLVERS[name](inst, args)
        return name, allocation, "allocation" if allocation is not None else "none-exists"
    budget = EnumerationBudget(
        max_agents=inst.n, max_allocations=args.budget_allocs, dedup_by_isomorphism=True
    )
    try:
        answer = oracle_exists(inst, "ef", budget)
    except BudgetExceeded:
        return "brute", None, "unknown"
    return "brute", answer.witness, "allocation" if answer.exists else "none-exists"


_COMPLETE_SOLVERS = {
    "ef-config": lambda inst, args: solve_ef_constant_taxis(
        inst, max_configurations=args.budget_allocs
    ),
    "ef-cap4": lambda inst, args: solve_ef_cap4(inst),
    "ef-types": lambda inst, args: solve_ef_fpt_types(
        inst, max_forests=args.budget_forests
    ),
    "ef-consecutive": lambda inst, args: solve_ef_consecutive(inst),
}


def cmd_solve(args) -> int:
    instance_file = load_instance_file(args.instance)
    inst = instance_file.to_instance()
    start = time.perf_counter()
    status = None
    solver = args.strategy
    if args.strategy == "backward":
        try:
            allocation = backward_greedy(inst)
        except NoFeasibleAllocation:
            allocation, status = None, "none-exists"
    elif args.strategy == "brute":
        budget = EnumerationBudget(
            max_agents=inst.n,
            max_allocations=args.budget_allocs,
            dedup_by_isomorphism=True,
        )
        answer = oracle_exists(inst, "ef", budget)
        allocation = answer.witness
    elif args.strategy == "ef-auto":
        solver, allocation, status = _solve_ef_auto(inst, args)
        solver = f"ef-auto:{solver}"
    else:
        if args.strategy == "ef-cap4" and max(inst.capacities) > 4:
            raise StrategyInapplicable("ef-cap4 requires every capacity to be at most 4")
        allocation = _COMPLETE_SOLVERS[args.strategy](inst, args)
    elapsed = (time.perf_counter() - start) * 1000
    report = None
    if allocation is not None:
        report = evaluate_concepts(inst, allocation)
    result = build_result(
        inst, solver, allocation, report=report, status=status, wall_time_ms=elapsed
    )
    _emit(result, args.json)
    if result.status == "unknown":
        return EXIT_BUDGET
    return 0


def cmd_gen(args) -> int:
    if args.family.startswith("paper-example:"):
        destinations, capacities = paper_example_raw(args.family.split(":", 1)[1])
        payload = InstanceFile(destinations, capacities).to_json()
    else:
        if args.family not in FAMILIES:
            raise UnknownFamily(f"unknown family {args.family!r}")
        inst = generate(
            args.family,
            seed=args.seed,
            n=args.n,
            k=args.k,
            max_q=args.max_q,
            types=args.types,
        )
        # report in original (pre-sort) order: generation is already sorted
        payload = InstanceFile(
            list(inst.destinations), list(inst.capacities)
        ).to_json()
    if args.out:
        write_json(args.out, payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_bench(args) -> int:
    if args.suite != "desk":
        raise ParseError(f"unknown suite {args.suite!r}")
    results = bench_mod.run_desk_suite()
    print()
    print(bench_mod.format_table(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairline",
        description="Exact solvers and checkers for fair ride allocation on a line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="evaluate solution concepts of an allocation")
    p_check.add_argument("instance")
    p_check.add_argument("allocation")
    p_check.add_argument("--concepts", help=f"comma-separated subset of {','.join(CONCEPTS)}")
    p_check.add_argument("--groups", help="JSON file with agent groups for restricted envy")
    p_check.add_argument("--json", help="also write the report to this path")
    p_check.set_defaults(func=cmd_check)

    p_solve = sub.add_parser("solve", help="construct an allocation")
    p_solve.add_argument("instance")
    p_solve.add_argument("--strategy", choices=STRATEGIES, default="ef-auto")
    p_solve.add_argument("--budget-allocs", type=int, default=2_000_000)
    p_solve.add_argument("--budget-forests", type=int, default=1_000_000)
    p_solve.add_argument("--json", help="also write the result to this path")
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("--family", required=True,
                       help="uniform-types | clustered | paper-example:<1..8|fig7>")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--n", type=int, default=6)
    p_gen.add_argument("--k", type=int, default=3)
    p_gen.add_argument("--max-q", type=int, default=None)
    p_gen.add_argument("--types", type=int, default=None)
    p_gen.add_argument("--out", help="write the instance here as well as stdout")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="run the verification suite")
    p_bench.add_argument("--suite", default="desk")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotAPartition as exc:
        print(f"not a partition: {exc}", file=sys.stderr)
        return EXIT_PARTITION
    except (StrategyInapplicable, CapacityTooLarge) as exc:
        print(f"strategy inapplicable: {exc}", file=sys.stderr)
        return EXIT_STRATEGY
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except UnknownFamily as exc:
        print(f"unknown family: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FairlineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
