"""Random market generator and the covering-problem reductions."""

from __future__ import annotations

from graphlib import TopologicalSorter

import pytest

from capmatch import (
    InvalidParams,
    ParseError,
    UncoverableElement,
    metrics,
    serialize_instance,
)
from capmatch.generators import (
    cover_witness,
    from_set_cover,
    from_vertex_cover,
    min_cover_size,
    random_instance,
    read_graph,
    read_set_cover,
)
from capmatch.model import solution_cost
from capmatch.stability import is_stable_augmented

from conftest import find_envy


def _admits_master_list(lists) -> bool:
    """Can one global order explain every given list?"""
    graph: dict = {}
    for seq in lists:
        for x, y in zip(seq, seq[1:]):
            graph.setdefault(y, set()).add(x)
            graph.setdefault(x, set())
    try:
        list(TopologicalSorter(graph).static_order())
        return True
    except ValueError:  # cycle
        return False


def test_random_instance_deterministic():
    a = random_instance(5, 4, 3, (0, 1), (0, 1, 5), seed=42)
    b = random_instance(5, 4, 3, (0, 1), (0, 1, 5), seed=42)
    assert serialize_instance(a) == serialize_instance(b)
    c = random_instance(5, 4, 3, (0, 1), (0, 1, 5), seed=43)
    assert serialize_instance(a) != serialize_instance(c)


def test_random_instance_shape():
    inst = random_instance(6, 4, 3, (0, 2), (1, 5), seed=7)
    assert len(inst.agents) == 6 and len(inst.programs) == 4
    for a in inst.agents:
        assert 1 <= len(inst.agent_prefs[a]) <= 3
    assert set(inst.quota.values()) <= {0, 2}
    assert set(inst.cost.values()) <= {1, 5}


def test_random_instance_master_list():
    for seed in range(8):
        inst = random_instance(6, 5, 4, (0, 1), (0, 1), master_list=True,
                               seed=seed)
        assert _admits_master_list(inst.agent_prefs.values())
        assert _admits_master_list(inst.program_prefs.values())


def test_random_instance_rejects_bad_params():
    with pytest.raises(InvalidParams):
        random_instance(0, 3, 2, (0,), (1,))
    with pytest.raises(InvalidParams):
        random_instance(3, 3, 0, (0,), (1,))
    with pytest.raises(InvalidParams):
        random_instance(3, 3, 2, (), (1,))
    with pytest.raises(InvalidParams):
        random_instance(3, 3, 2, (-1, 0), (1,))


def test_set_cover_singleton():
    art = from_set_cover(1, [{1}], 1)
    inst = art.instance
    assert inst.agents == ("u1_1", "a1")
    assert inst.programs == ("c1", "w1_1")
    assert inst.agent_prefs["u1_1"] == ("c1", "w1_1")
    assert inst.agent_prefs["a1"] == ("c1",)
    assert inst.quota == {"c1": 0, "w1_1": 0}
    assert inst.cost == {"c1": 1, "w1_1": 0}
    assert art.budget == 2


def test_set_cover_two_sets():
    art = from_set_cover(2, [{1, 2}, {2}], 2)
    inst = art.instance
    # one dummy per element of the universe, for each set
    assert inst.agents == ("u1_1", "u1_2", "u2_1", "u2_2", "a1", "a2")
    assert inst.programs == ("c1", "c2", "w1_1", "w1_2", "w2_1", "w2_2")
    assert inst.program_prefs["c1"] == ("u1_1", "u1_2", "a1", "a2")
    assert inst.program_prefs["c2"] == ("u2_1", "u2_2", "a2")
    assert inst.agent_prefs["a2"] == ("c1", "c2")  # set index order
    assert art.budget == 6
    assert art.meta["dummies_per_set"] == 2


def test_set_cover_lists_follow_declaration_order():
    art = from_set_cover(3, [{1, 3}, {2, 3}, {2}], 1)
    inst = art.instance
    a_index = {a: i for i, a in enumerate(inst.agents)}
    p_index = {p: i for i, p in enumerate(inst.programs)}
    for a in inst.agents:
        ranks = [p_index[p] for p in inst.agent_prefs[a]]
        assert ranks == sorted(ranks)
    for p in inst.programs:
        ranks = [a_index[a] for a in inst.program_prefs[p]]
        assert ranks == sorted(ranks)


def test_set_cover_rejects_bad_params():
    with pytest.raises(InvalidParams):
        from_set_cover(2, [{1, 2}], 0)  # k too small
    with pytest.raises(InvalidParams):
        from_set_cover(0, [], 1)
    with pytest.raises(InvalidParams):
        from_set_cover(2, [{1, 5}], 1)  # element out of range
    with pytest.raises(UncoverableElement):
        from_set_cover(2, [{1}], 1)  # nothing contains element 2


def test_cover_witness():
    art = from_set_cover(2, [{1, 2}, {2}], 1)
    m = cover_witness(art, [1])
    assert m.assignment == {"u1_1": "c1", "u1_2": "c1",
                            "u2_1": "w2_1", "u2_2": "w2_2",
                            "a1": "c1", "a2": "c1"}
    assert m.is_a_perfect(art.instance)
    ok, _ = is_stable_augmented(art.instance, m)
    assert ok
    assert find_envy(art.instance, m.assignment) is None
    _, total, _ = solution_cost(art.instance, m)
    assert total == art.budget == 4


def test_cover_witness_rejects_bad_covers():
    art = from_set_cover(2, [{1, 2}, {2}], 1)
    with pytest.raises(InvalidParams):
        cover_witness(art, [2])  # element 1 uncovered
    with pytest.raises(InvalidParams):
        cover_witness(art, [3])  # no such set


def test_min_cover_size():
    assert min_cover_size(3, [{1, 2}, {2, 3}, {3}]) == 2
    assert min_cover_size(1, [{1}]) == 1
    assert min_cover_size(2, [{1, 2}, {1}]) == 1
    with pytest.raises(UncoverableElement):
        min_cover_size(2, [{1}])


def test_vertex_cover_triangle():
    art = from_vertex_cover(3, [(1, 2), (2, 3), (1, 3)], 2, "1/2")
    assert art.meta["universe"] == 3  # one element per graph edge
    assert art.meta["dummies_per_set"] == 6  # f = ceil(2*3*(1/2)/(1/2))
    assert art.budget == 15  # 3 + 2*6
    inst = art.instance
    # every edge element can be covered by exactly its two endpoints
    for e in range(1, 4):
        assert len(inst.agent_prefs[f"a{e}"]) == 2
    assert metrics(inst).max_agent_list == 2


def test_vertex_cover_single_edge():
    art = from_vertex_cover(2, [(1, 2)], 1, "1/2")
    assert art.meta["dummies_per_set"] == 2
    assert art.budget == 3
    assert art.meta["sets"] == ((1,), (1,))


def test_vertex_cover_fraction_eps():
    art = from_vertex_cover(3, [(1, 2), (2, 3), (1, 3)], 1, "1/3")
    # f = ceil(2*3*(2/3)/(1/3)) = 12, exactly, no float rounding
    assert art.meta["dummies_per_set"] == 12
    assert art.budget == 15
    same = from_vertex_cover(3, [(1, 2), (2, 3), (1, 3)], 1, 0.5)
    assert same.meta["dummies_per_set"] == 6  # float 0.5 reads as 1/2


def test_vertex_cover_rejects_bad_params():
    edges = [(1, 2)]
    with pytest.raises(InvalidParams):
        from_vertex_cover(2, edges, 1, "3/5")  # eps > 1/2
    with pytest.raises(InvalidParams):
        from_vertex_cover(2, edges, 1, 0)
    with pytest.raises(InvalidParams):
        from_vertex_cover(2, [(1, 1)], 1, "1/2")  # self-loop
    with pytest.raises(InvalidParams):
        from_vertex_cover(2, [(1, 2), (2, 1)], 1, "1/2")  # duplicate
    with pytest.raises(InvalidParams):
        from_vertex_cover(2, [(1, 3)], 1, "1/2")  # endpoint out of range
    with pytest.raises(InvalidParams):
        from_vertex_cover(2, [], 1, "1/2")


def test_read_set_cover():
    n, k, sets = read_set_cover("# cover\n2 2\n\n1 2\n2\n")
    assert (n, k) == (2, 2)
    assert sets == [(1, 2), (2,)]


@pytest.mark.parametrize("bad", ["", "# only comments\n", "2\n1\n", "x 2\n1\n",
                                 "2 1\none two\n"])
def test_read_set_cover_errors(bad):
    with pytest.raises(ParseError):
        read_set_cover(bad)


def test_read_graph():
    n, edges = read_graph("3\n1 2\n2 3\n")
    assert n == 3
    assert edges == [(1, 2), (2, 3)]


@pytest.mark.parametrize("bad", ["", "three\n", "3\n1\n", "3\n1 2 3\n",
                                 "3\na b\n"])
def test_read_graph_errors(bad):
    with pytest.raises(ParseError):
        read_graph(bad)
