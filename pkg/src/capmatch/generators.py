"""Instance generators: seeded random markets and hardness reductions.

The two reductions build matching markets whose optimal augmentation cost
encodes a covering problem:

* set cover: each element becomes an agent that accepts exactly the
  unit-cost programs standing for the sets containing it; every set also gets
  one dummy agent per "padding slot", each with a private free fallback
  program.  Opening a set means pulling all its dummies into the set's
  program, so a cover of size k yields total cost (k + 1) * n and vice versa.
* vertex cover: the universe is the edge set, the sets are vertex
  neighborhoods (every element lands in exactly two sets), and the padding
  width f grows with the desired approximation gap.

All arithmetic is exact; fractional gap parameters should be passed as
strings ("1/3") or :class:`fractions.Fraction` to avoid float rounding.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InvalidParams, UncoverableElement
from .model import Instance, Matching

_NAME_SOURCES = ("set_cover", "vertex_cover")


@dataclass(frozen=True)
class ReductionArtifact:
    """A reduced instance plus the budget its covering question maps to.

    ``meta`` records the source problem and the normalized sets, enough to
    rebuild witness matchings with :func:`cover_witness`.
    """

    instance: Instance
    budget: int
    meta: dict

    def __post_init__(self) -> None:
        object.__setattr__(self, "meta", dict(self.meta))


def random_instance(n_agents: int, n_programs: int, max_list: int,
                    quota_range, cost_set, master_list: bool = False,
                    seed: int = 0) -> Instance:
    """Seeded random instance; identical arguments reproduce identical output.

    Every agent draws a non-empty acceptable set; program lists are the
    mutual image.  With ``master_list`` both sides order their lists by one
    global permutation per side, otherwise each list gets its own shuffle.
    """
    if n_agents < 1 or n_programs < 1:
        raise InvalidParams("need at least one agent and one program")
    if max_list < 1:
        raise InvalidParams("max_list must be positive")
    quotas = sorted(set(quota_range))
    costs = sorted(set(cost_set))
    if not quotas or not costs:
        raise InvalidParams("quota_range and cost_set must be non-empty")
    if quotas[0] < 0 or costs[0] < 0:
        raise InvalidParams("quotas and costs must be non-negative")

    rng = random.Random(seed)
    agents = [f"a{i}" for i in range(1, n_agents + 1)]
    programs = [f"p{j}" for j in range(1, n_programs + 1)]
    prog_master = {p: i for i, p in enumerate(rng.sample(programs, n_programs))}
    agent_master = {a: i for i, a in enumerate(rng.sample(agents, n_agents))}

    agent_prefs: dict[str, tuple[str, ...]] = {}
    neighbors: dict[str, list[str]] = {p: [] for p in programs}
    for a in agents:
        span = rng.randint(1, min(max_list, n_programs))
        chosen = rng.sample(programs, span)
        if master_list:
            chosen.sort(key=prog_master.__getitem__)
        agent_prefs[a] = tuple(chosen)
        for p in chosen:
            neighbors[p].append(a)

    program_prefs: dict[str, tuple[str, ...]] = {}
    for p in programs:
        listed = list(neighbors[p])
        if master_list:
            listed.sort(key=agent_master.__getitem__)
        else:
            rng.shuffle(listed)
        program_prefs[p] = tuple(listed)

    quota = {p: rng.choice(quotas) for p in programs}
    cost = {p: rng.choice(costs) for p in programs}
    return Instance(tuple(agents), tuple(programs), agent_prefs, program_prefs,
                    quota, cost)


def _normalize_sets(universe_size: int, sets) -> list[tuple[int, ...]]:
    normalized = []
    for j, raw in enumerate(sets, 1):
        members = sorted(set(raw))
        for e in members:
            if not isinstance(e, int) or not 1 <= e <= universe_size:
                raise InvalidParams(f"set {j} contains invalid element {e!r}")
        normalized.append(tuple(members))
    return normalized


def _cover_instance(n_elem: int, sets: list[tuple[int, ...]],
                    dummies_per_set: int) -> Instance:
    """Shared construction: element agents, set programs, dummy pairs.

    Orderings on both sides follow one master list each (dummies first, then
    elements; set programs, then fallback programs), so the result keeps the
    master-list property.
    """
    m = len(sets)
    member_of: dict[int, list[int]] = {e: [] for e in range(1, n_elem + 1)}
    for j, members in enumerate(sets, 1):
        for e in members:
            member_of[e].append(j)
    for e in range(1, n_elem + 1):
        if not member_of[e]:
            raise UncoverableElement(f"element {e} is in no set")

    agents: list[str] = []
    programs: list[str] = []
    agent_prefs: dict[str, tuple[str, ...]] = {}
    program_prefs: dict[str, tuple[str, ...]] = {}
    quota: dict[str, int] = {}
    cost: dict[str, int] = {}

    for j in range(1, m + 1):
        for slot in range(1, dummies_per_set + 1):
            u = f"u{j}_{slot}"
            agents.append(u)
            agent_prefs[u] = (f"c{j}", f"w{j}_{slot}")
    for e in range(1, n_elem + 1):
        a = f"a{e}"
        agents.append(a)
        agent_prefs[a] = tuple(f"c{j}" for j in member_of[e])

    for j, members in enumerate(sets, 1):
        c_name = f"c{j}"
        programs.append(c_name)
        dummies = tuple(f"u{j}_{slot}" for slot in range(1, dummies_per_set + 1))
        program_prefs[c_name] = dummies + tuple(f"a{e}" for e in members)
        quota[c_name] = 0
        cost[c_name] = 1
    for j in range(1, m + 1):
        for slot in range(1, dummies_per_set + 1):
            w_name = f"w{j}_{slot}"
            programs.append(w_name)
            program_prefs[w_name] = (f"u{j}_{slot}",)
            quota[w_name] = 0
            cost[w_name] = 0

    return Instance(tuple(agents), tuple(programs), agent_prefs, program_prefs,
                    quota, cost)


def from_set_cover(universe_size: int, sets, k: int) -> ReductionArtifact:
    """Reduce "is there a cover of at most k sets?" to augmentation cost.

    The reduced instance admits an A-perfect stable augmentation of total
    cost at most ``(k + 1) * n`` exactly when such a cover exists; the budget
    field carries that threshold.
    """
    if universe_size < 1:
        raise InvalidParams("universe must be non-empty")
    if k < 1:
        raise InvalidParams("cover budget k must be at least 1")
    normalized = _normalize_sets(universe_size, sets)
    if not normalized:
        raise InvalidParams("need at least one set")
    inst = _cover_instance(universe_size, normalized, universe_size)
    budget = (k + 1) * universe_size
    meta = {
        "source": "set_cover",
        "universe": universe_size,
        "sets": tuple(normalized),
        "k": k,
        "dummies_per_set": universe_size,
    }
    return ReductionArtifact(inst, budget, meta)


def from_vertex_cover(n_vertices: int, edges, k: int, eps) -> ReductionArtifact:
    """Vertex cover via set cover over the edge universe.

    Each edge is covered by exactly its two endpoint neighborhoods, so
    element agents end up with lists of length two.  The padding width is
    ``f = ceil(2 * n_elem * (1 - eps) / eps)`` with ``n_elem`` the number of
    graph edges, and the budget is ``n_elem + k * f``.
    """
    if n_vertices < 1:
        raise InvalidParams("graph must have at least one vertex")
    if k < 1:
        raise InvalidParams("cover budget k must be at least 1")
    gap = _as_fraction(eps)
    if not 0 < gap <= Fraction(1, 2):
        raise InvalidParams("eps must satisfy 0 < eps <= 1/2")
    edge_list: list[tuple[int, int]] = []
    seen = set()
    for raw in edges:
        u, v = raw
        if not (isinstance(u, int) and isinstance(v, int)):
            raise InvalidParams(f"bad edge {raw!r}")
        if not (1 <= u <= n_vertices and 1 <= v <= n_vertices) or u == v:
            raise InvalidParams(f"bad edge {raw!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidParams(f"duplicate edge {raw!r}")
        seen.add(key)
        edge_list.append(key)
    if not edge_list:
        raise InvalidParams("graph must have at least one edge")

    n_elem = len(edge_list)
    incident: list[tuple[int, ...]] = []
    for v in range(1, n_vertices + 1):
        incident.append(tuple(i + 1 for i, (x, y) in enumerate(edge_list)
                              if v in (x, y)))
    f = math.ceil(2 * n_elem * (1 - gap) / gap)
    inst = _cover_instance(n_elem, incident, f)
    budget = n_elem + k * f
    meta = {
        "source": "vertex_cover",
        "vertices": n_vertices,
        "graph_edges": tuple(edge_list),
        "universe": n_elem,
        "sets": tuple(incident),
        "k": k,
        "eps": str(gap),
        "dummies_per_set": f,
    }
    return ReductionArtifact(inst, budget, meta)


def _as_fraction(eps) -> Fraction:
    if isinstance(eps, float):
        return Fraction(str(eps))
    return Fraction(eps)


def cover_witness(artifact: ReductionArtifact, cover) -> Matching:
    """The matching a cover induces: open each chosen set's program fully.

    Dummies of chosen sets move to the set program, all other dummies take
    their private fallback, and each element goes to its most preferred
    opened set program.  InvalidParams if ``cover`` misses an element.
    """
    chosen = set(cover)
    sets = artifact.meta["sets"]
    width = artifact.meta["dummies_per_set"]
    for j in chosen:
        if not 1 <= j <= len(sets):
            raise InvalidParams(f"cover names unknown set {j}")
    assignment: dict[str, str] = {}
    inst = artifact.instance
    for j in range(1, len(sets) + 1):
        target = f"c{j}" if j in chosen else None
        for slot in range(1, width + 1):
            u = f"u{j}_{slot}"
            assignment[u] = target if target else f"w{j}_{slot}"
    n_elem = artifact.meta["universe"]
    for e in range(1, n_elem + 1):
        a = f"a{e}"
        pick = next((p for p in inst.agent_prefs[a]
                     if int(p[1:]) in chosen), None)
        if pick is None:
            raise InvalidParams(f"cover does not cover element {e}")
        assignment[a] = pick
    return Matching({a: assignment[a] for a in inst.agents})


def min_cover_size(universe_size: int, sets) -> int:
    """Smallest number of sets covering the universe (exhaustive; small m)."""
    normalized = _normalize_sets(universe_size, sets)
    everything = set(range(1, universe_size + 1))
    covered = set().union(*[set(s) for s in normalized]) if normalized else set()
    if covered != everything:
        missing = min(everything - covered)
        raise UncoverableElement(f"element {missing} is in no set")
    for size in range(0, len(normalized) + 1):
        for combo in combinations(range(len(normalized)), size):
            union = set()
            for ix in combo:
                union.update(normalized[ix])
            if union == everything:
                return size
    raise RuntimeError("unreachable: full collection covers the universe")


def read_set_cover(text: str) -> tuple[int, int, list[tuple[int, ...]]]:
    """Parse "n k" then one line of element indices per set."""
    from .errors import ParseError

    lines = [ln.strip() for ln in text.splitlines()]
    body = [(i + 1, ln) for i, ln in enumerate(lines)
            if ln and not ln.startswith("#")]
    if not body:
        raise ParseError("empty set-cover input")
    first_no, first = body[0]
    parts = first.split()
    if len(parts) != 2:
        raise ParseError(f"line {first_no}: expected 'n k'")
    try:
        n, k = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"line {first_no}: expected integers") from None
    sets = []
    for lineno, ln in body[1:]:
        try:
            sets.append(tuple(int(tok) for tok in ln.split()))
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer element") from None
    return n, k, sets


def read_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse "n_vertices" then one "u v" line per edge."""
    from .errors import ParseError

    lines = [ln.strip() for ln in text.splitlines()]
    body = [(i + 1, ln) for i, ln in enumerate(lines)
            if ln and not ln.startswith("#")]
    if not body:
        raise ParseError("empty graph input")
    first_no, first = body[0]
    try:
        n_vertices = int(first)
    except ValueError:
        raise ParseError(f"line {first_no}: expected vertex count") from None
    edges = []
    for lineno, ln in body[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex") from None
    return n_vertices, edges
