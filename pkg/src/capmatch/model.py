"""Core data model: instances, matchings, augmented solutions, and text formats.

An instance couples a bipartite acceptability graph between *agents* and
*programs* with strict preference lists on both sides, plus a non-negative
integer quota ``q(p)`` and seat cost ``c(p)`` per program.  Preference lists
are ordered most-preferred first and must be mutual: ``p`` appears in ``a``'s
list exactly when ``a`` appears in ``p``'s list.

Instance files are line-oriented UTF-8 text::

    # comment lines and blank lines are skipped
    agent <name> : <program> <program> ...
    program <name> q=<int> c=<int> : <agent> <agent> ...

Names are ASCII tokens matching ``[A-Za-z0-9_]+``.  A list after ``:`` may be
empty only on a program line.  Declaration order of lines is the canonical
order used for every deterministic tie-break in the solvers.

Solutions serialize to a JSON object with fields ``matching`` (unmatched
agents omitted), ``augmentation`` (zero entries omitted), ``total_cost``,
``max_cost``, ``a_perfect``, ``stable``, ``algorithm`` and, for the primal-dual
solver only, ``dual_objective``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .errors import (
    EmptyPreferenceList,
    InvalidMatching,
    ParseError,
    UnmatchableAgent,
    ValidationError,
)

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")

# Rank value larger than any real preference position; stands in for "unmatched".
NO_RANK = 1 << 60


@dataclass(frozen=True)
class Instance:
    """Agents, programs, strict mutual preference lists, quotas and seat costs.

    Instances are immutable after construction and validate themselves:
    identifier syntax, declaration of every referenced name, duplicate-free
    lists, mutual acceptability, and non-negative quotas and costs.
    """

    agents: tuple[str, ...]
    programs: tuple[str, ...]
    agent_prefs: dict[str, tuple[str, ...]]
    program_prefs: dict[str, tuple[str, ...]]
    quota: dict[str, int]
    cost: dict[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "programs", tuple(self.programs))
        object.__setattr__(
            self, "agent_prefs", {a: tuple(v) for a, v in self.agent_prefs.items()}
        )
        object.__setattr__(
            self, "program_prefs", {p: tuple(v) for p, v in self.program_prefs.items()}
        )
        object.__setattr__(self, "quota", dict(self.quota))
        object.__setattr__(self, "cost", dict(self.cost))
        self._validate()

    def _validate(self) -> None:
        for name in list(self.agents) + list(self.programs):
            if not _IDENT.match(name):
                raise ValidationError(f"bad identifier {name!r}")
        if len(set(self.agents)) != len(self.agents):
            raise ValidationError("duplicate agent declaration")
        if len(set(self.programs)) != len(self.programs):
            raise ValidationError("duplicate program declaration")
        agent_set, program_set = set(self.agents), set(self.programs)
        if set(self.agent_prefs) != agent_set:
            raise ValidationError("agent_prefs keys do not match declared agents")
        for mapping, what in ((self.program_prefs, "program_prefs"),
                              (self.quota, "quota"), (self.cost, "cost")):
            if set(mapping) != program_set:
                raise ValidationError(f"{what} keys do not match declared programs")
        for a, prefs in self.agent_prefs.items():
            if len(set(prefs)) != len(prefs):
                raise ValidationError(f"duplicate entry in preference list of {a!r}")
            for p in prefs:
                if p not in program_set:
                    raise ValidationError(f"agent {a!r} lists unknown program {p!r}")
        for p, prefs in self.program_prefs.items():
            if len(set(prefs)) != len(prefs):
                raise ValidationError(f"duplicate entry in preference list of {p!r}")
            for a in prefs:
                if a not in agent_set:
                    raise ValidationError(f"program {p!r} lists unknown agent {a!r}")
        for p in self.programs:
            if not isinstance(self.quota[p], int) or self.quota[p] < 0:
                raise ValidationError(f"program {p!r} has negative or non-integer quota")
            if not isinstance(self.cost[p], int) or self.cost[p] < 0:
                raise ValidationError(f"program {p!r} has negative or non-integer cost")
        forward = {(a, p) for a, prefs in self.agent_prefs.items() for p in prefs}
        backward = {(a, p) for p, prefs in self.program_prefs.items() for a in prefs}
        for a, p in sorted(forward - backward):
            raise ValidationError(f"agent {a!r} lists {p!r} but not vice versa")
        for a, p in sorted(backward - forward):
            raise ValidationError(f"program {p!r} lists {a!r} but not vice versa")

    @cached_property
    def agent_rank(self) -> dict[str, dict[str, int]]:
        """``agent_rank[a][p]`` is the 0-based position of p in a's list."""
        return {a: {p: i for i, p in enumerate(prefs)}
                for a, prefs in self.agent_prefs.items()}

    @cached_property
    def program_rank(self) -> dict[str, dict[str, int]]:
        """``program_rank[p][a]`` is the 0-based position of a in p's list."""
        return {p: {a: i for i, a in enumerate(prefs)}
                for p, prefs in self.program_prefs.items()}

    def is_edge(self, agent: str, program: str) -> bool:
        return program in self.agent_rank.get(agent, {})


class InstanceMetrics(NamedTuple):
    edges: int
    max_agent_list: int
    max_program_list: int


@dataclass(frozen=True)
class Matching:
    """An assignment of agents to programs; unmatched agents are simply absent."""

    assignment: dict[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", dict(self.assignment))

    @cached_property
    def roster(self) -> dict[str, tuple[str, ...]]:
        """Derived program -> assigned agents view (assignment insertion order)."""
        out: dict[str, list[str]] = {}
        for a, p in self.assignment.items():
            out.setdefault(p, []).append(a)
        return {p: tuple(agents) for p, agents in out.items()}

    def program_of(self, agent: str) -> str | None:
        return self.assignment.get(agent)

    def agents_of(self, program: str) -> tuple[str, ...]:
        return self.roster.get(program, ())

    def load(self, program: str) -> int:
        return len(self.roster.get(program, ()))

    def is_a_perfect(self, inst: Instance) -> bool:
        return len(self.assignment) == len(inst.agents)


@dataclass(frozen=True)
class AugmentedSolution:
    """A matching together with the extra seats that make it feasible.

    ``aug`` holds only the strictly positive quota increases; a missing program
    means no extra seats there.  Totals are always recomputed from ``aug`` and
    the instance costs, never trusted from input.
    """

    matching: Matching
    aug: dict[str, int]
    total_cost: int
    max_cost: int
    a_perfect: bool
    stable: bool
    algorithm: str
    dual_objective: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "aug", dict(self.aug))


def parse_instance(text: str) -> Instance:
    """Parse instance-file text; ParseError/ValidationError carry line numbers."""
    agents: list[str] = []
    programs: list[str] = []
    agent_prefs: dict[str, tuple[str, ...]] = {}
    program_prefs: dict[str, tuple[str, ...]] = {}
    quota: dict[str, int] = {}
    cost: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected ':' separator")
        fields = head.split()
        items = tail.split()
        if not fields:
            raise ParseError(f"line {lineno}: missing declaration before ':'")
        kind = fields[0]
        if kind == "agent":
            if len(fields) != 2:
                raise ParseError(f"line {lineno}: expected 'agent <name> : ...'")
            name = fields[1]
            _check_ident(name, lineno)
            if name in agent_prefs:
                raise ValidationError(f"line {lineno}: duplicate agent {name!r}")
            if not items:
                raise ValidationError(
                    f"line {lineno}: agent {name!r} has an empty preference list"
                )
            _check_items(items, lineno)
            agents.append(name)
            agent_prefs[name] = tuple(items)
        elif kind == "program":
            if len(fields) != 4:
                raise ParseError(
                    f"line {lineno}: expected 'program <name> q=<int> c=<int> : ...'"
                )
            name = fields[1]
            _check_ident(name, lineno)
            if name in program_prefs:
                raise ValidationError(f"line {lineno}: duplicate program {name!r}")
            q = _parse_kv(fields[2], "q", lineno)
            c = _parse_kv(fields[3], "c", lineno)
            if q < 0:
                raise ValidationError(f"line {lineno}: negative quota for {name!r}")
            if c < 0:
                raise ValidationError(f"line {lineno}: negative cost for {name!r}")
            _check_items(items, lineno)
            programs.append(name)
            program_prefs[name] = tuple(items)
            quota[name] = q
            cost[name] = c
        else:
            raise ParseError(f"line {lineno}: unknown declaration {kind!r}")

    return Instance(tuple(agents), tuple(programs), agent_prefs, program_prefs,
                    quota, cost)


def _check_ident(token: str, lineno: int) -> None:
    if not _IDENT.match(token):
        raise ValidationError(f"line {lineno}: bad identifier {token!r}")


def _check_items(items: list[str], lineno: int) -> None:
    for it in items:
        _check_ident(it, lineno)
    if len(set(items)) != len(items):
        raise ValidationError(f"line {lineno}: duplicate entry in preference list")


def _parse_kv(token: str, key: str, lineno: int) -> int:
    prefix = key + "="
    if not token.startswith(prefix):
        raise ParseError(f"line {lineno}: expected '{key}=<int>', got {token!r}")
    try:
        return int(token[len(prefix):])
    except ValueError:
        raise ParseError(f"line {lineno}: {token!r} is not an integer") from None


def serialize_instance(inst: Instance) -> str:
    """Canonical text form: agent lines in order, then program lines in order."""
    lines = []
    for a in inst.agents:
        lines.append(f"agent {a} : {' '.join(inst.agent_prefs[a])}")
    for p in inst.programs:
        head = f"program {p} q={inst.quota[p]} c={inst.cost[p]} :"
        prefs = inst.program_prefs[p]
        lines.append(head + (" " + " ".join(prefs) if prefs else ""))
    return "\n".join(lines) + ("\n" if lines else "")


def metrics(inst: Instance) -> InstanceMetrics:
    """Edge count and maximum list lengths (0 for an empty side)."""
    edges = sum(len(v) for v in inst.agent_prefs.values())
    max_a = max((len(v) for v in inst.agent_prefs.values()), default=0)
    max_p = max((len(v) for v in inst.program_prefs.values()), default=0)
    return InstanceMetrics(edges, max_a, max_p)


def least_cost_program(inst: Instance, agent: str) -> str:
    """Cheapest acceptable program; ties go to the most preferred one."""
    prefs = inst.agent_prefs.get(agent)
    if agent not in inst.agent_prefs:
        raise ValidationError(f"unknown agent {agent!r}")
    if not prefs:
        raise EmptyPreferenceList(f"agent {agent!r} has an empty preference list")
    return min(prefs, key=lambda p: (inst.cost[p], inst.agent_rank[agent][p]))


def require_all_matchable(inst: Instance) -> None:
    """Solvers that must match every agent reject empty preference lists."""
    for a in inst.agents:
        if not inst.agent_prefs[a]:
            raise UnmatchableAgent(f"agent {a!r} has an empty preference list")


def validate_matching(inst: Instance, matching: Matching,
                      quotas: dict[str, int] | None = None) -> None:
    """Check assigned pairs are edges and, when quotas are given, capacities."""
    for a, p in matching.assignment.items():
        if not inst.is_edge(a, p):
            raise InvalidMatching(f"pair ({a!r}, {p!r}) is not an edge")
    if quotas is not None:
        for p, occupants in matching.roster.items():
            if len(occupants) > quotas[p]:
                raise InvalidMatching(
                    f"program {p!r} holds {len(occupants)} agents, quota {quotas[p]}"
                )


def solution_cost(inst: Instance, matching: Matching) -> tuple[dict[str, int], int, int]:
    """Trimmed augmentation ``max(0, load - quota)`` per program, plus totals.

    Returns ``(aug, total_cost, max_cost)`` where aug holds only positive
    entries, total_cost is the cost-weighted sum and max_cost the largest
    single-program spend.
    """
    aug: dict[str, int] = {}
    total = 0
    biggest = 0
    for p in inst.programs:
        over = matching.load(p) - inst.quota[p]
        if over > 0:
            aug[p] = over
            spend = over * inst.cost[p]
            total += spend
            if spend > biggest:
                biggest = spend
    return aug, total, biggest


def solution_to_json(inst: Instance, sol: AugmentedSolution) -> dict:
    """JSON-ready dict; key order follows instance declaration order."""
    doc: dict = {
        "matching": {a: sol.matching.assignment[a] for a in inst.agents
                     if a in sol.matching.assignment},
        "augmentation": {p: sol.aug[p] for p in inst.programs if sol.aug.get(p)},
        "total_cost": sol.total_cost,
        "max_cost": sol.max_cost,
        "a_perfect": sol.a_perfect,
        "stable": sol.stable,
        "algorithm": sol.algorithm,
    }
    if sol.dual_objective is not None:
        doc["dual_objective"] = sol.dual_objective
    return doc
