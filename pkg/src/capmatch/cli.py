"""Command-line front end.

Subcommands: ``solve`` (pick an algorithm, emit solution JSON), ``verify``
(recheck a solution document against its instance), ``gen random`` (seeded
instance generator) and ``reduce setcover`` / ``reduce vertexcover``
(hardness reductions; the reduced instance goes to --out, the budget and
bookkeeping JSON to stdout).

Exit codes: 0 success, 1 precondition or verification failure, 2 unreadable
or malformed input, 3 oracle search-space limit exceeded.  Diagnostics and
--trace output go to stderr; results go to stdout or --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    CapmatchError,
    InstanceTooLarge,
    ParseError,
    ValidationError,
)
from .generators import (
    from_set_cover,
    from_vertex_cover,
    random_instance,
    read_graph,
    read_set_cover,
)
from .minmax import solve_minmax
from .minsum import lp_approx_run, solve_p_approx
from .model import (
    Instance,
    Matching,
    parse_instance,
    serialize_instance,
    solution_to_json,
)
from .oracle import OracleLimits, brute_force_minmax, brute_force_minsum
from .stability import is_stable_augmented
from .twocost import solve_two_cost

ALGORITHMS = ("minmax", "psum", "lp", "twocost", "oracle-minsum", "oracle-minmax")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapmatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capmatch")
    sub = parser.add_subparsers(required=True)

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("--alg", required=True, choices=ALGORITHMS)
    solve.add_argument("--in", dest="infile", required=True)
    solve.add_argument("--out")
    solve.add_argument("--trace", action="store_true",
                       help="emit per-step JSON lines on stderr (lp, twocost)")
    solve.add_argument("--limit", type=int, default=OracleLimits().max_search_space,
                       help="oracle search-space ceiling")
    solve.add_argument("--workers", type=int, default=1)
    solve.add_argument("--format", choices=("json", "text"), default="json")
    solve.set_defaults(func=run_solve)

    verify = sub.add_parser("verify", help="recheck a solution document")
    verify.add_argument("--in", dest="infile", required=True)
    verify.add_argument("--solution", required=True)
    verify.set_defaults(func=run_verify)

    gen = sub.add_parser("gen", help="generate instances")
    gen_sub = gen.add_subparsers(required=True)
    gen_random = gen_sub.add_parser("random")
    gen_random.add_argument("--agents", type=int, default=8)
    gen_random.add_argument("--programs", type=int, default=6)
    gen_random.add_argument("--max-list", type=int, default=4)
    gen_random.add_argument("--quotas", default="0,1,2",
                            help="comma-separated allowed quota values")
    gen_random.add_argument("--costs", default="0,1,2,5",
                            help="comma-separated allowed cost values")
    gen_random.add_argument("--master-list", action="store_true")
    gen_random.add_argument("--seed", type=int, default=0)
    gen_random.add_argument("--out")
    gen_random.set_defaults(func=run_gen_random)

    reduce_cmd = sub.add_parser("reduce", help="covering-problem reductions")
    reduce_sub = reduce_cmd.add_subparsers(required=True)
    red_sc = reduce_sub.add_parser("setcover")
    red_sc.add_argument("--in", dest="infile", required=True,
                        help="file: 'n k' line, then element indices per set")
    red_sc.add_argument("--out", required=True)
    red_sc.set_defaults(func=run_reduce_setcover)
    red_vc = reduce_sub.add_parser("vertexcover")
    red_vc.add_argument("--in", dest="infile", required=True,
                        help="file: vertex count line, then 'u v' per edge")
    red_vc.add_argument("--k", type=int, required=True)
    red_vc.add_argument("--eps", default="1/2",
                        help="approximation gap, e.g. 1/3 or 0.5")
    red_vc.add_argument("--out", required=True)
    red_vc.set_defaults(func=run_reduce_vertexcover)

    return parser


def run_solve(args: argparse.Namespace) -> int:
    inst = parse_instance(Path(args.infile).read_text())
    trace_events = [] if args.trace else None
    if args.alg == "minmax":
        sol = solve_minmax(inst)
    elif args.alg == "psum":
        sol = solve_p_approx(inst)
    elif args.alg == "lp":
        run = lp_approx_run(inst)
        sol = run.solution
        if trace_events is not None:
            trace_events.extend(
                {"step": i, "agent": s.agent, "from": s.source, "to": s.target,
                 "class": s.target_label, "phase": s.phase}
                for i, s in enumerate(run.steps, 1)
            )
    elif args.alg == "twocost":
        sol, _ = solve_two_cost(inst, trace=trace_events)
    elif args.alg == "oracle-minsum":
        sol = brute_force_minsum(inst, OracleLimits(args.limit), workers=args.workers)
    else:
        sol = brute_force_minmax(inst, OracleLimits(args.limit), workers=args.workers)

    if trace_events:
        for event in trace_events:
            print(json.dumps(event), file=sys.stderr)
    doc = solution_to_json(inst, sol)
    payload = _render(doc, args.format)
    _write(args.out, payload)
    return 0


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    lines = []
    for a, p in doc["matching"].items():
        lines.append(f"matching {a} {p}")
    for p, v in doc["augmentation"].items():
        lines.append(f"augmentation {p} {v}")
    for key in ("total_cost", "max_cost", "a_perfect", "stable", "algorithm",
                "dual_objective"):
        if key in doc:
            value = doc[key]
            if isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key} {value}")
    return "\n".join(lines) + "\n"


def run_verify(args: argparse.Namespace) -> int:
    inst = parse_instance(Path(args.infile).read_text())
    doc = _load_solution(Path(args.solution).read_text())
    violations: list[dict] = []
    blocking = None

    matching_ok = True
    for a, p in doc["matching"].items():
        if a not in inst.agent_prefs:
            violations.append({"kind": "matching", "detail": f"unknown agent {a!r}"})
            matching_ok = False
        elif p not in inst.program_prefs:
            violations.append({"kind": "matching", "detail": f"unknown program {p!r}"})
            matching_ok = False
        elif not inst.is_edge(a, p):
            violations.append({"kind": "matching",
                               "detail": f"({a!r}, {p!r}) is not an edge"})
            matching_ok = False

    for p, v in doc["augmentation"].items():
        if p not in inst.program_prefs:
            violations.append({"kind": "augmentation",
                               "detail": f"unknown program {p!r}"})
            matching_ok = False
        elif v < 0:
            violations.append({"kind": "augmentation",
                               "detail": f"negative augmentation for {p!r}"})
            matching_ok = False

    if matching_ok:
        matching = Matching(doc["matching"])
        aug = doc["augmentation"]
        for p in inst.programs:
            need = max(0, matching.load(p) - inst.quota[p])
            if aug.get(p, 0) < need:
                violations.append({
                    "kind": "capacity",
                    "detail": f"program {p!r} needs {need} extra seats, "
                              f"solution grants {aug.get(p, 0)}",
                })
        total = sum(v * inst.cost[p] for p, v in aug.items())
        biggest = max((v * inst.cost[p] for p, v in aug.items()), default=0)
        if total != doc["total_cost"]:
            violations.append({"kind": "totals",
                               "detail": f"total_cost is {total}, "
                                         f"solution claims {doc['total_cost']}"})
        if biggest != doc["max_cost"]:
            violations.append({"kind": "totals",
                               "detail": f"max_cost is {biggest}, "
                                         f"solution claims {doc['max_cost']}"})
        a_perfect = matching.is_a_perfect(inst)
        if a_perfect != doc["a_perfect"]:
            violations.append({"kind": "flags",
                               "detail": f"a_perfect recomputes to {a_perfect}"})
        stable, report = is_stable_augmented(inst, matching)
        if stable != doc["stable"]:
            violations.append({"kind": "flags",
                               "detail": f"stable recomputes to {stable}"})
        if not stable:
            blocking = report.to_json()

    out: dict = {"valid": not violations, "violations": violations}
    if blocking is not None:
        out["blocking"] = blocking
    print(json.dumps(out, indent=2))
    return 0 if not violations else 1


def _load_solution(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"solution is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("solution document must be a JSON object")
    required = ("matching", "augmentation", "total_cost", "max_cost",
                "a_perfect", "stable")
    for key in required:
        if key not in doc:
            raise ParseError(f"solution document lacks {key!r}")
    if not isinstance(doc["matching"], dict) or \
            not all(isinstance(v, str) for v in doc["matching"].values()):
        raise ParseError("matching must map agents to programs")
    if not isinstance(doc["augmentation"], dict) or \
            not all(isinstance(v, int) and not isinstance(v, bool)
                    for v in doc["augmentation"].values()):
        raise ParseError("augmentation must map programs to integers")
    for key in ("total_cost", "max_cost"):
        if not isinstance(doc[key], int) or isinstance(doc[key], bool):
            raise ParseError(f"{key} must be an integer")
    for key in ("a_perfect", "stable"):
        if not isinstance(doc[key], bool):
            raise ParseError(f"{key} must be a boolean")
    return doc


def run_gen_random(args: argparse.Namespace) -> int:
    quotas = _int_list(args.quotas, "--quotas")
    costs = _int_list(args.costs, "--costs")
    inst = random_instance(args.agents, args.programs, args.max_list,
                           quotas, costs, master_list=args.master_list,
                           seed=args.seed)
    _write(args.out, serialize_instance(inst))
    return 0


def run_reduce_setcover(args: argparse.Namespace) -> int:
    n, k, sets = read_set_cover(Path(args.infile).read_text())
    artifact = from_set_cover(n, sets, k)
    Path(args.out).write_text(serialize_instance(artifact.instance))
    print(json.dumps(_meta_doc(artifact), indent=2))
    return 0


def run_reduce_vertexcover(args: argparse.Namespace) -> int:
    n_vertices, edges = read_graph(Path(args.infile).read_text())
    artifact = from_vertex_cover(n_vertices, edges, args.k, args.eps)
    Path(args.out).write_text(serialize_instance(artifact.instance))
    print(json.dumps(_meta_doc(artifact), indent=2))
    return 0


def _meta_doc(artifact) -> dict:
    meta = dict(artifact.meta)
    meta["sets"] = [list(s) for s in meta["sets"]]
    if "graph_edges" in meta:
        meta["graph_edges"] = [list(e) for e in meta["graph_edges"]]
    return {"budget": artifact.budget, **meta}


def _int_list(raw: str, flag: str) -> list[int]:
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated integers") from None


def _write(out: str | None, payload: str) -> None:
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload)


if __name__ == "__main__":
    raise SystemExit(main())
