"""Command-line surface and the conformance harness behind it.

Exit codes: 0 success, 2 validation failure, 3 conformance mismatch,
4 resource cap (instance too large for the exact oracle).
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .beta_star import beta_star
from .classifier import ClassificationError
from .constructor import VerificationFailure, construct
from .genlab import Catalog, GenParams, enumerate_small, random_instances, sized_instance
from .lobster_model import (
    LobsterError,
    LobsterSpec,
    LobsterStructure,
    build_tree_from_spec,
    recognize_lobster,
    validate,
)
from .oracle import MAX_ORACLE_VERTICES, TooLarge, exact_beta_b, milp_beta_b
from .tree_core import (
    InvalidTree,
    Tree,
    check_broadcast,
    check_dominating,
    check_independent,
    cost,
    eccentricities,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISMATCH = 3
EXIT_TOO_LARGE = 4


# --- instance loading ------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    tree: Tree
    struct: LobsterStructure | None
    errors: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return self.struct is not None and not self.errors


def _read_source(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    if os.path.exists(source):
        with open(source) as fh:
            return fh.read()
    return source


def parse_instance(text: str) -> Instance:
    """LobsterSpec JSON, short form (``S2:[3,3] S1:2 S2:[3,3]``) or edge list."""
    text = text.strip()
    if text.startswith("{"):
        spec = LobsterSpec.parse(text)
        tree, struct = build_tree_from_spec(spec)
        return Instance(tree, struct, tuple(validate(struct)))
    if text[:3] in ("S1:", "S2:"):
        spec = LobsterSpec.from_short(text)
        tree, struct = build_tree_from_spec(spec)
        return Instance(tree, struct, tuple(validate(struct)))
    tree = Tree.parse_edge_list(text)
    try:
        struct = recognize_lobster(tree)
    except LobsterError as exc:
        return Instance(tree, None, (str(exc),))
    return Instance(tree, struct, tuple(validate(struct)))


def load_instance(source: str) -> Instance:
    return parse_instance(_read_source(source))


def load_assignment(source: str, n: int) -> tuple[int, ...]:
    """JSON list of n values, or an object ``{vertex: value}`` (missing = 0)."""
    data = json.loads(_read_source(source))
    if isinstance(data, dict) and "assignment" in data:
        data = data["assignment"]
    if isinstance(data, list):
        if len(data) != n:
            raise ValueError(f"assignment has {len(data)} entries, tree has {n} vertices")
        vals = [int(x) for x in data]
    elif isinstance(data, dict):
        vals = [0] * n
        for key, val in data.items():
            v = int(key)
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range")
            vals[v] = int(val)
    else:
        raise ValueError("assignment must be a JSON list or object")
    if any(x < 0 for x in vals):
        raise ValueError("assignment values must be non-negative")
    return tuple(vals)


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


# --- conformance -------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceCheck:
    """Everything the conformance and acceptance suites look at for one spec."""

    spec: LobsterSpec
    n: int
    k: int
    beta_star: int
    nus: tuple[int, int, int, int]
    stage_costs: tuple[int, ...]
    beta_b: int
    witness: tuple[int, ...]
    problem: str | None = None

    @property
    def ok(self) -> bool:
        return self.problem is None and self.beta_star == self.beta_b


@dataclass(frozen=True)
class ConformanceReport:
    instances_run: int
    mismatches: tuple[dict, ...]
    elapsed: float

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self, include_elapsed: bool = True) -> dict:
        out = {"instances_run": self.instances_run, "mismatches": list(self.mismatches)}
        if include_elapsed:
            out["elapsed"] = round(self.elapsed, 3)
        return out


BetaFn = Callable[[LobsterStructure], int]


def check_instance(spec: LobsterSpec, beta_fn: BetaFn | None = None) -> InstanceCheck:
    """Build, validate, classify, beta*, construct, oracle.  TooLarge propagates."""
    tree, struct = build_tree_from_spec(spec)
    if tree.n > MAX_ORACLE_VERTICES:
        raise TooLarge(f"{spec.short()} has {tree.n} vertices (cap {MAX_ORACLE_VERTICES})")
    problem = None
    errs = validate(struct)
    nus: tuple[int, int, int, int] = (0, 0, 0, 0)
    costs: tuple[int, ...] = ()
    bstar = -1
    if errs:
        problem = "invalid: " + "; ".join(errs)
    else:
        try:
            rep = beta_star(struct)
            nus = (rep.nu1, rep.nu2, rep.nu3, rep.nu4)
            bstar = beta_fn(struct) if beta_fn else rep.beta_star
            costs = construct(struct).costs
        except (ClassificationError, VerificationFailure) as exc:
            problem = f"{type(exc).__name__}: {exc}"
    res = exact_beta_b(tree)
    return InstanceCheck(spec, tree.n, spec.k, bstar, nus, costs, res.beta_b, res.witness, problem)


def _check_packed(args):
    spec, beta_fn = args
    return check_instance(spec, beta_fn)


def iter_checks(
    specs: Iterable[LobsterSpec], beta_fn: BetaFn | None = None, jobs: int = 1
) -> Iterable[InstanceCheck]:
    """Checks in input order; ``jobs > 1`` fans out to worker processes."""
    if jobs <= 1:
        for spec in specs:
            yield check_instance(spec, beta_fn)
        return
    import multiprocessing as mp

    with mp.get_context("spawn").Pool(jobs) as pool:
        yield from pool.imap(_check_packed, ((s, beta_fn) for s in specs), chunksize=16)


def run_conformance(
    specs: Iterable[LobsterSpec], beta_fn: BetaFn | None = None, jobs: int = 1
) -> ConformanceReport:
    t0 = time.perf_counter()
    count = 0
    bad: list[dict] = []
    for chk in iter_checks(specs, beta_fn, jobs):
        count += 1
        if not chk.ok:
            bad.append(
                {
                    "spec": chk.spec.to_json(),
                    "beta_star": chk.beta_star,
                    "beta_b": chk.beta_b,
                    "witness": list(chk.witness),
                    "problem": chk.problem,
                }
            )
    return ConformanceReport(count, tuple(bad), time.perf_counter() - t0)


# --- benchmark --------------------------------------------------------------------


def bench(sizes: Sequence[int], seed: int = 0, repeats: int = 3) -> list[dict]:
    """Best-of-``repeats`` beta_star time per size; building the tree is not timed."""
    rows = []
    for n in sizes:
        spec = sized_instance(n, seed)
        _, struct = build_tree_from_spec(spec)
        times = []
        value = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            value = beta_star(struct).beta_star
            times.append(time.perf_counter() - t0)
        rows.append(
            {
                "n": struct.tree.n,
                "k": struct.k,
                "seconds": min(times),
                "stdev": statistics.pstdev(times),
                "beta_star": value,
            }
        )
    return rows


# --- DOT ---------------------------------------------------------------------------


def export_dot(tree: Tree, spine: Sequence[int] = (), assignment: Sequence[int] | None = None) -> str:
    """Spine drawn in one row; vertex labels are f-values when given, else blank."""
    lines = ["graph lobster {", "  node [shape=circle];"]
    for v in range(tree.n):
        label = str(assignment[v]) if assignment is not None else ""
        lines.append(f'  {v} [label="{label}"];')
    if spine:
        lines.append("  { rank=same; " + " ".join(str(v) for v in spine) + "; }")
    for u, v in tree.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- commands ------------------------------------------------------------------------


def _out(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _err(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _require_valid(inst: Instance) -> LobsterStructure | None:
    if not inst.valid:
        _out({"valid": False, "errors": list(inst.errors)})
        return None
    return inst.struct


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    out = {"valid": inst.valid, "n": inst.tree.n, "errors": list(inst.errors)}
    if inst.struct is not None:
        out["k"] = inst.struct.k
        out["spine"] = list(inst.struct.spine)
        out["census"] = [
            {"type": c[0], "lambda1": c[1], "two_leaf_counts": list(c[2])} for c in inst.struct.census()
        ]
    _out(out)
    return EXIT_OK if inst.valid else EXIT_INVALID


def cmd_classify(args) -> int:
    struct = _require_valid(load_instance(args.instance))
    if struct is None:
        return EXIT_INVALID
    rep = beta_star(struct)
    _out({"types": [str(t) for t in rep.types], "sequences": [s.to_json() for s in rep.sequences]})
    return EXIT_OK


def cmd_compute(args) -> int:
    inst = load_instance(args.instance)
    if inst.valid:
        _out(beta_star(inst.struct).to_json())
        return EXIT_OK
    if inst.tree.n <= MAX_ORACLE_VERTICES and inst.tree.n >= 2:
        res = exact_beta_b(inst.tree)
        _out({"source": "oracle", "beta_b": res.beta_b, "witness": list(res.witness), "errors": list(inst.errors)})
        return EXIT_OK
    _out({"valid": False, "errors": list(inst.errors)})
    return EXIT_INVALID


def cmd_construct(args) -> int:
    struct = _require_valid(load_instance(args.instance))
    if struct is None:
        return EXIT_INVALID
    trace = construct(struct)
    stage = args.stage if args.stage is not None else len(trace.stages)
    if not 1 <= stage <= len(trace.stages):
        _err(f"stage must be in 1..{len(trace.stages)} for this instance")
        return EXIT_INVALID
    f = trace.stages[stage - 1]
    _out(
        {
            "stage": stage,
            "assignment": {str(v): x for v, x in enumerate(f)},
            "costs": list(trace.costs),
        }
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    try:
        f = load_assignment(args.assignment, inst.tree.n)
    except (ValueError, json.JSONDecodeError) as exc:
        _out({"valid": False, "errors": [str(exc)]})
        return EXIT_INVALID
    ecc = eccentricities(inst.tree)
    out = {
        "broadcast": check_broadcast(inst.tree, f, ecc),
        "independent": check_independent(inst.tree, f),
        "dominating": check_dominating(inst.tree, f),
        "cost": cost(f),
    }
    if inst.valid:
        target = beta_star(inst.struct).beta_star
        out["beta_star"] = target
        out["optimal"] = out["cost"] == target
    ok = out["broadcast"] and out["independent"]
    if args.expect_cost is not None:
        out["expected_cost"] = args.expect_cost
        ok = ok and out["cost"] == args.expect_cost
    out["valid"] = ok
    _out(out)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    if args.method == "milp":
        res = milp_beta_b(inst.tree, time_limit=args.time_limit)
    else:
        res = exact_beta_b(inst.tree)
    _out({"beta_b": res.beta_b, "witness": list(res.witness)})
    return EXIT_OK


def _specs_for(args) -> Iterable[LobsterSpec]:
    if args.source == "enumerate":
        cat = Catalog.bounded(args.max_branches, args.max_leaves)
        return enumerate_small(args.max_vertices, args.k_max, cat)
    params = GenParams(
        seed=args.seed,
        k_range=(0, args.k_max),
        branch_count_range=(2, args.max_branches),
        leaf_count_range=(1, args.max_leaves),
        s1_leaf_range=(2, args.max_branches),
        max_vertices=args.max_vertices,
    )
    return random_instances(params, args.count)


def cmd_conformance(args) -> int:
    if args.max_vertices > MAX_ORACLE_VERTICES:
        _err(f"--max-vertices above the oracle cap {MAX_ORACLE_VERTICES}")
        return EXIT_TOO_LARGE
    rep = run_conformance(_specs_for(args), jobs=args.jobs)
    _out(rep.to_json(include_elapsed=not args.no_timing))
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def cmd_gen(args) -> int:
    params = GenParams(
        seed=args.seed,
        k_range=(0, args.k_max),
        branch_count_range=(2, args.max_branches),
        leaf_count_range=(1, args.max_leaves),
        s1_leaf_range=(2, args.max_branches),
        max_vertices=args.max_vertices,
    )
    for spec in random_instances(params, args.count):
        sys.stdout.write(spec.dumps() + "\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cat = Catalog.bounded(args.max_branches, args.max_leaves)
    for spec in enumerate_small(args.max_vertices, args.k_max, cat):
        sys.stdout.write(spec.dumps() + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench(args.sizes, args.seed, args.repeats)
    ratios = []
    for a, b in zip(rows, rows[1:]):
        time_ratio = b["seconds"] / a["seconds"] if a["seconds"] > 0 else float("inf")
        ratios.append({"n_ratio": b["n"] / a["n"], "time_ratio": time_ratio})
    _out({"rows": rows, "ratios": ratios})
    return EXIT_OK


def cmd_export_dot(args) -> int:
    inst = load_instance(args.instance)
    f = None
    if args.assignment:
        f = load_assignment(args.assignment, inst.tree.n)
    elif args.stage is not None:
        if not inst.valid:
            _err("; ".join(inst.errors))
            return EXIT_INVALID
        trace = construct(inst.struct)
        if not 1 <= args.stage <= len(trace.stages):
            _err(f"stage must be in 1..{len(trace.stages)} for this instance")
            return EXIT_INVALID
        f = trace.stages[args.stage - 1]
    spine = inst.struct.spine if inst.struct is not None else ()
    sys.stdout.write(export_dot(inst.tree, spine, f))
    return EXIT_OK


def _add_bounds(p: argparse.ArgumentParser, max_vertices: int) -> None:
    p.add_argument("--max-vertices", type=int, default=max_vertices)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--max-branches", type=int, default=4)
    p.add_argument("--max-leaves", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lobster-broadcast", description="Broadcast independence of lobsters.")
    sub = ap.add_subparsers(dest="command", required=True)
    inst_help = "LobsterSpec JSON, short form, or edge list; a path, a literal, or '-' for stdin"

    p = sub.add_parser("validate", help="check the instance is a locally uniform 2-lobster")
    p.add_argument("instance", help=inst_help)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="subtree types and selected runs")
    p.add_argument("instance", help=inst_help)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compute", help="closed-form value with its breakdown")
    p.add_argument("instance", help=inst_help)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("construct", help="explicit optimal broadcast")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--stage", type=int, default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="audit an external assignment")
    p.add_argument("instance", help=inst_help)
    p.add_argument("assignment", help="JSON list or {vertex: value} object; path or literal")
    p.add_argument("--expect-cost", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact value by exhaustive search")
    p.add_argument("instance", help=inst_help)
    p.add_argument("--method", choices=("search", "milp"), default="search")
    p.add_argument("--time-limit", type=float, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("conformance", help="closed form against the exact oracle")
    p.add_argument("--source", choices=("enumerate", "fuzz"), default="enumerate")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="omit elapsed time for byte-stable output")
    _add_bounds(p, 20)
    p.set_defaults(func=cmd_conformance)

    p = sub.add_parser("gen", help="seeded random specs as JSON lines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    _add_bounds(p, 22)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("enumerate", help="all small specs as JSON lines")
    _add_bounds(p, 20)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bench", help="time the closed form at growing sizes")
    p.add_argument("--sizes", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-dot", help="Graphviz DOT rendering")
    p.add_argument("instance", help=inst_help)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--assignment", default=None)
    g.add_argument("--stage", type=int, default=None)
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        _err(str(exc))
        return EXIT_TOO_LARGE
    except (LobsterError, InvalidTree, json.JSONDecodeError, ValueError) as exc:
        _out({"valid": False, "errors": [str(exc)]})
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
