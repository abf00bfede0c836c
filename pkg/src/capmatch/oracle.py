"""Brute-force ground truth for both objectives on small instances.

Enumerates every way to assign each agent one of its acceptable programs
(depth-first, agents in declaration order, programs in preference order) and
keeps the best assignment that is stable once quotas are grown to the load.
Envy between already-placed agents only gets worse as an assignment is
extended, so envious prefixes are pruned; partial cost is monotone too, which
gives a sound branch-and-bound.  The first optimum found is the
lexicographically smallest, making results deterministic even when the work
is split across processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import prod

from .errors import InstanceTooLarge
from .model import NO_RANK, AugmentedSolution, Instance, Matching, require_all_matchable
from .stability import build_solution

MINSUM = "sum"
MINMAX = "max"


@dataclass(frozen=True)
class OracleLimits:
    """Hard ceiling on the product of list lengths before refusing to run."""

    max_search_space: int = 10_000_000


def brute_force_minsum(inst: Instance, limits: OracleLimits = OracleLimits(),
                       workers: int = 1) -> AugmentedSolution:
    return _solve(inst, MINSUM, limits, workers, "oracle-minsum")


def brute_force_minmax(inst: Instance, limits: OracleLimits = OracleLimits(),
                       workers: int = 1) -> AugmentedSolution:
    return _solve(inst, MINMAX, limits, workers, "oracle-minmax")


def _solve(inst: Instance, objective: str, limits: OracleLimits, workers: int,
           algorithm: str) -> AugmentedSolution:
    require_all_matchable(inst)
    space = prod(len(inst.agent_prefs[a]) for a in inst.agents)
    if space > limits.max_search_space:
        raise InstanceTooLarge(
            f"search space {space} exceeds limit {limits.max_search_space}"
        )
    if not inst.agents:
        return build_solution(inst, Matching({}), algorithm)

    first_choices = range(len(inst.agent_prefs[inst.agents[0]]))
    if workers <= 1 or len(first_choices) < 2:
        best = _search(inst, objective, None)
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(first_choices))) as pool:
            results = pool.map(_search, [inst] * len(first_choices),
                               [objective] * len(first_choices), first_choices)
            best = min((r for r in results if r is not None), default=None)
    if best is None:
        raise RuntimeError("no feasible assignment; instance invariant broken")
    _, choices = best
    assignment = {a: inst.agent_prefs[a][ix]
                  for a, ix in zip(inst.agents, choices)}
    return build_solution(inst, Matching(assignment), algorithm)


def _search(inst: Instance, objective: str,
            first_choice: int | None) -> tuple[int, tuple[int, ...]] | None:
    """Best (cost, choice-vector) over all stable A-perfect assignments,
    optionally with the first agent's choice pinned."""
    agents = inst.agents
    n = len(agents)
    prefs = [inst.agent_prefs[a] for a in agents]
    arank = inst.agent_rank
    prank = inst.program_rank
    quota = inst.quota
    cost = inst.cost
    any_quota = any(quota[p] > 0 for p in inst.programs)
    summing = objective == MINSUM

    best_cost: int | None = None
    best_choices: tuple[int, ...] | None = None
    placed: list[str] = []  # program of agents[0..depth-1]
    choices: list[int] = []
    counts: dict[str, int] = {}

    def leaf_ok() -> bool:
        if not any_quota:
            return True
        # an under-filled program an agent prefers over its seat would block
        for i, a in enumerate(agents):
            my_rank = arank[a][placed[i]]
            for p in prefs[i]:
                if arank[a][p] >= my_rank:
                    break
                if counts.get(p, 0) < quota[p]:
                    return False
        return True

    def dfs(depth: int, partial: int) -> None:
        nonlocal best_cost, best_choices
        if best_cost is not None and partial >= best_cost:
            return
        if depth == n:
            if leaf_ok():
                best_cost, best_choices = partial, tuple(choices)
            return
        a = agents[depth]
        my_arank = arank[a]
        options = prefs[depth]
        if depth == 0 and first_choice is not None:
            span = range(first_choice, first_choice + 1)
        else:
            span = range(len(options))
        for ix in span:
            p = options[ix]
            my_rank_here = my_arank[p]
            p_ranks = prank[p]
            ok = True
            for j in range(depth):
                b = agents[j]
                pb = placed[j]
                # would a envy b, or b envy a?
                if my_arank.get(pb, NO_RANK) < my_rank_here and \
                        prank[pb][a] < prank[pb][b]:
                    ok = False
                    break
                b_rank = arank[b]
                if b_rank.get(p, NO_RANK) < b_rank[pb] and \
                        p_ranks[b] < p_ranks[a]:
                    ok = False
                    break
            if not ok:
                continue
            held = counts.get(p, 0)
            if held >= quota[p]:
                spend_unit = cost[p]
                if summing:
                    nxt = partial + spend_unit
                else:
                    spend = (held + 1 - quota[p]) * spend_unit
                    nxt = spend if spend > partial else partial
            else:
                nxt = partial
            counts[p] = held + 1
            placed.append(p)
            choices.append(ix)
            dfs(depth + 1, nxt)
            choices.pop()
            placed.pop()
            counts[p] = held

    dfs(0, 0)
    if best_choices is None:
        return None
    return best_cost, best_choices
