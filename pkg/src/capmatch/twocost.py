"""Primal-dual solver for zero-quota instances with two distinct seat costs.

Works against the LP relaxation of minimum-total-cost augmentation.  Each
agent carries a dual payment ``y``; each ordered envy triple (preferred
agent, program, envied agent) carries a variable ``z``.  The dual constraint
of edge (a, p) sums ``y_a``, every ``z`` where a is the preferred agent at p
or a worse-ranked program, minus every ``z`` where a is the envied agent at p
itself; feasibility means no constraint exceeds the seat cost.

The solver matches what it can at the cheap cost, then repeatedly raises the
``y`` of the first unmatched agent.  Tight edges whose program would rather
have this agent are taken directly; otherwise the algorithm pays another
agent's way up (a ``z`` raise) which tightens that agent's better edges and
frees a seat chain.  Free promotions (matching a tight edge whose program's
threshold agent is exactly the mover) are applied exhaustively after every
change.  Matched edges stay tight throughout, which at termination turns the
dual objective into a cost certificate: total cost is at most the longest
agent list times the sum of the ``y`` values, which never exceeds the
optimum.

With fewer than two distinct costs every A-perfect matching costs the same,
so the solver just hands each agent its first choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .errors import NotAnEdge, PreconditionViolated
from .model import (
    NO_RANK,
    AugmentedSolution,
    Instance,
    Matching,
    metrics,
    require_all_matchable,
)
from .stability import build_solution

TraceEvent = dict


@dataclass
class DualState:
    """Dual variables: ``y`` per agent, sparse ``z`` per envy triple.

    A ``z`` key (preferred, program, envied) is only meaningful when the
    program ranks the first agent above the second and both edges exist.
    """

    y: dict[str, int]
    z: dict[tuple[str, str, str], int] = field(default_factory=dict)
    c1: int = 0
    c2: int = 0


class DualCheck(NamedTuple):
    feasible: bool
    objective: int
    violations: tuple[tuple[str, str, int, int], ...]  # (agent, program, lhs, cost)


def edge_lhs(inst: Instance, dual: DualState, agent: str, program: str) -> int:
    """Left-hand side of the dual constraint for one edge, from scratch."""
    if not inst.is_edge(agent, program):
        raise NotAnEdge(f"({agent!r}, {program!r}) is not an edge")
    arank = inst.agent_rank[agent]
    my_rank = arank[program]
    total = dual.y[agent]
    for (high, prog, low), val in dual.z.items():
        if not val:
            continue
        if high == agent:
            r = arank.get(prog)
            if r is not None and r >= my_rank:  # prog is program itself or worse
                total += val
        elif low == agent and prog == program:
            total -= val
    return total


def check_dual_feasible(inst: Instance, dual: DualState) -> DualCheck:
    """Recompute every edge constraint; deterministic violation order."""
    violations = []
    for a in inst.agents:
        for p in inst.agent_prefs[a]:
            lhs = edge_lhs(inst, dual, a, p)
            if lhs > inst.cost[p]:
                violations.append((a, p, lhs, inst.cost[p]))
    objective = sum(dual.y[a] for a in inst.agents)
    return DualCheck(not violations, objective, tuple(violations))


def compute_thresholds(inst: Instance, matching: Matching) -> dict[str, str | None]:
    """Per program: the most preferred agent that would rather be there."""
    return _thresholds(inst, matching.assignment)


def _thresholds(inst: Instance, assignment: dict[str, str]) -> dict[str, str | None]:
    arank = inst.agent_rank
    out: dict[str, str | None] = {}
    for p in inst.programs:
        pick = None
        for a in inst.program_prefs[p]:
            cur = assignment.get(a)
            if cur is None or arank[a][p] < arank[a][cur]:
                pick = a
                break
        out[p] = pick
    return out


def free_promotions(inst: Instance, dual: DualState, matching: Matching) -> Matching:
    """Exhaust matchable edges (tight + threshold agrees), deterministically.

    The input must be envy-free; the result does not depend on application
    order, but the implementation fixes one anyway: agents in declaration
    order, each along its most preferred matchable edge, thresholds
    recomputed after every move.
    """
    assignment = dict(matching.assignment)

    def tight(a: str, p: str) -> bool:
        return edge_lhs(inst, dual, a, p) == inst.cost[p]

    _run_free_promotions(inst, tight, assignment, None)
    return Matching({a: assignment[a] for a in inst.agents if a in assignment})


def _run_free_promotions(inst: Instance, tight: Callable[[str, str], bool],
                         assignment: dict[str, str],
                         trace: list[TraceEvent] | None) -> dict[str, str | None]:
    """Mutates ``assignment``; returns the final threshold index."""
    edge_budget = metrics(inst).edges + 1
    moves = 0
    while True:
        thresh = _thresholds(inst, assignment)
        move = None
        for a in inst.agents:
            for p in inst.agent_prefs[a]:
                if thresh[p] == a and tight(a, p):
                    move = (a, p)
                    break
            if move:
                break
        if move is None:
            return thresh
        a, p = move
        old = assignment.get(a)
        assignment[a] = p
        if trace is not None:
            trace.append({"event": "free_promote", "agent": a,
                          "source": old, "target": p})
        moves += 1
        if moves > edge_budget:
            raise RuntimeError("free promotions exceeded the edge budget")


def solve_two_cost(inst: Instance, check_invariants: bool = False,
                   trace: list[TraceEvent] | None = None
                   ) -> tuple[AugmentedSolution, DualState]:
    """Exact-ratio primal-dual run; also returns the dual certificate.

    Preconditions: all quotas zero and at most two distinct seat costs
    (PreconditionViolated otherwise), every agent matchable.  On return the
    dual is feasible, every matched edge is tight, and
    ``total_cost <= max_agent_list * dual_objective``.
    """
    require_all_matchable(inst)
    for p in inst.programs:
        if inst.quota[p] != 0:
            raise PreconditionViolated("two-cost solver requires all quotas zero")
    distinct = sorted(set(inst.cost.values()))
    if len(distinct) > 2:
        raise PreconditionViolated(
            f"two-cost solver requires at most two distinct costs, got {distinct}"
        )
    if len(distinct) < 2:
        return _uniform_cost(inst, distinct, trace)

    c1, c2 = distinct
    gap = c2 - c1
    cost = inst.cost
    arank = inst.agent_rank
    dual = DualState(y={a: c1 for a in inst.agents}, z={}, c1=c1, c2=c2)
    lhs: dict[tuple[str, str], int] = {}
    for a in inst.agents:
        for p in inst.agent_prefs[a]:
            lhs[(a, p)] = c1

    def tight(a: str, p: str) -> bool:
        return lhs[(a, p)] == cost[p]

    assignment: dict[str, str] = {}
    for a in inst.agents:
        pick = next((p for p in inst.agent_prefs[a] if cost[p] == c1), None)
        if pick is not None:
            assignment[a] = pick
    _emit(trace, {"event": "init", "matching": dict(assignment)})
    thresh = _thresholds(inst, assignment)
    _emit(trace, {"event": "thresholds", "map": dict(thresh)})

    n_edges = metrics(inst).edges
    budget = 8 * (n_edges + 1) * (len(inst.agents) + 1) + 64
    spent = 0
    while len(assignment) < len(inst.agents):
        a = next(x for x in inst.agents if x not in assignment)
        _emit(trace, {"event": "select", "agent": a})
        while a not in assignment:
            spent += 1
            if spent > budget:
                raise RuntimeError("two-cost solver exceeded its step budget")
            dual.y[a] += gap
            for p in inst.agent_prefs[a]:
                lhs[(a, p)] += gap
            _emit(trace, {"event": "y_update", "agent": a, "value": dual.y[a],
                          "tight": [p for p in inst.agent_prefs[a] if tight(a, p)]})
            if check_invariants:
                _audit(inst, dual, lhs, assignment)
            direct = next((p for p in inst.agent_prefs[a]
                           if tight(a, p) and thresh[p] == a), None)
            if direct is not None:
                assignment[a] = direct
                _emit(trace, {"event": "promote", "agent": a,
                              "source": None, "target": direct})
                thresh = _run_free_promotions(inst, tight, assignment, trace)
                if check_invariants:
                    _audit(inst, dual, lhs, assignment)
                continue
            candidates = _candidate_programs(inst, lhs, thresh, assignment, a)
            _emit(trace, {"event": "candidates", "agent": a,
                          "programs": list(candidates)})
            while candidates:
                spent += 1
                if spent > budget:
                    raise RuntimeError("two-cost solver exceeded its step budget")
                helper = thresh[candidates[0]]
                group = [p for p in candidates if thresh[p] == helper]
                pz = max(group, key=lambda p: arank[helper][p])
                key = (helper, pz, a)
                dual.z[key] = dual.z.get(key, 0) + gap
                pz_rank = arank[helper][pz]
                for p in inst.agent_prefs[helper]:
                    if arank[helper][p] <= pz_rank:
                        lhs[(helper, p)] += gap
                lhs[(a, pz)] -= gap
                _emit(trace, {"event": "z_update", "preferred": helper,
                              "program": pz, "agent": a, "value": dual.z[key],
                              "tight": [p for p in inst.agent_prefs[helper]
                                        if tight(helper, p)]})
                dest = next((p for p in inst.agent_prefs[helper]
                             if tight(helper, p) and thresh[p] == helper), None)
                if dest is None:
                    raise RuntimeError("helper agent has no matchable edge")
                old = assignment.get(helper)
                assignment[helper] = dest
                _emit(trace, {"event": "promote", "agent": helper,
                              "source": old, "target": dest})
                thresh = _run_free_promotions(inst, tight, assignment, trace)
                if check_invariants:
                    _audit(inst, dual, lhs, assignment)
                candidates = _candidate_programs(inst, lhs, thresh, assignment, a)
                _emit(trace, {"event": "candidates", "agent": a,
                              "programs": list(candidates)})

    matching = Matching({a: assignment[a] for a in inst.agents})
    _emit(trace, {"event": "done", "matching": dict(matching.assignment)})
    return _finish(inst, dual, matching, trace)


def _candidate_programs(inst: Instance, lhs: dict, thresh: dict,
                        assignment: dict[str, str], a: str) -> list[str]:
    """Programs a strictly prefers whose edge is tight and threshold is not a."""
    arank = inst.agent_rank[a]
    cur = assignment.get(a)
    cur_rank = arank[cur] if cur is not None else NO_RANK
    out = []
    for p in inst.agent_prefs[a]:
        if arank[p] >= cur_rank:
            break
        t = thresh[p]
        if t is not None and t != a and lhs[(a, p)] == inst.cost[p]:
            out.append(p)
    return out


def _uniform_cost(inst: Instance, distinct: list[int],
                  trace: list[TraceEvent] | None
                  ) -> tuple[AugmentedSolution, DualState]:
    """Zero or one distinct cost: every A-perfect matching costs the same,
    so give each agent its top choice (trivially envy-free)."""
    c = distinct[0] if distinct else 0
    assignment = {a: inst.agent_prefs[a][0] for a in inst.agents}
    _emit(trace, {"event": "init", "matching": dict(assignment)})
    dual = DualState(y={a: c for a in inst.agents}, z={}, c1=c, c2=c)
    matching = Matching(assignment)
    _emit(trace, {"event": "done", "matching": dict(assignment)})
    return _finish(inst, dual, matching, trace)


def _finish(inst: Instance, dual: DualState, matching: Matching,
            trace: list[TraceEvent] | None
            ) -> tuple[AugmentedSolution, DualState]:
    """Terminal guarantees, always enforced: feasible dual, tight matched
    edges, and the list-length cost certificate."""
    check = check_dual_feasible(inst, dual)
    if not check.feasible:
        raise RuntimeError(f"dual infeasible at termination: {check.violations[:3]}")
    for a, p in matching.assignment.items():
        if edge_lhs(inst, dual, a, p) != inst.cost[p]:
            raise RuntimeError(f"matched edge ({a!r}, {p!r}) is not tight")
    solution = build_solution(inst, matching, "twocost",
                              dual_objective=check.objective)
    longest = metrics(inst).max_agent_list
    if solution.total_cost > longest * check.objective:
        raise RuntimeError("cost certificate violated at termination")
    return solution, dual


def _audit(inst: Instance, dual: DualState, lhs: dict,
           assignment: dict[str, str]) -> None:
    """Debug-mode invariants: cached lhs matches scratch recomputation, the
    dual stays feasible, and the matching stays envy-free."""
    for a in inst.agents:
        for p in inst.agent_prefs[a]:
            fresh = edge_lhs(inst, dual, a, p)
            if fresh != lhs[(a, p)]:
                raise AssertionError(
                    f"lhs cache drift on ({a!r}, {p!r}): {lhs[(a, p)]} vs {fresh}"
                )
            if fresh > inst.cost[p]:
                raise AssertionError(f"dual constraint violated on ({a!r}, {p!r})")
    arank = inst.agent_rank
    prank = inst.program_rank
    for a, p in assignment.items():
        for b, pb in assignment.items():
            if a == b:
                continue
            if arank[a].get(pb, NO_RANK) < arank[a][p] and \
                    prank[pb][a] < prank[pb][b]:
                raise AssertionError(f"envy: {a!r} envies {b!r} at {pb!r}")


def _emit(trace: list[TraceEvent] | None, event: TraceEvent) -> None:
    if trace is not None:
        trace.append(event)
