import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcbcolor.adversaries import CbipTree, FFBipartite2CB
from kcbcolor.graph_core import (
    ComponentTracker,
    InvalidStepError,
    NotBipartiteError,
    OnlineGraph,
    PresentationStep,
    add_vertex,
    bfs_component_count,
)
from kcbcolor.random_instances import random_presentation

from .conftest import steps_of


def replay(steps):
    g, tr = OnlineGraph(), ComponentTracker()
    counts = [add_vertex(g, tr, s) for s in steps]
    return g, tr, counts


def bfs_sides(graph, v):
    side = {v: 0}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in graph.adjacency[u]:
            if w not in side:
                side[w] = 1 - side[u]
                stack.append(w)
    return {u for u, s in side.items() if s == 0}, {u for u, s in side.items() if s == 1}


def test_single_vertex():
    assert replay(steps_of([]))[2] == [1]


def test_two_singletons_merge():
    assert replay(steps_of([], [], [0, 1]))[2] == [1, 2, 1]


def test_bipartite_example_counts():
    steps = [m.step for m in FFBipartite2CB(8).moves()]
    _, _, counts = replay(steps)
    # v5 joins v2 and v4, which sit in different components
    assert counts == [1, 2, 2, 2, 1, 1, 1, 1]
    assert max(counts) <= 2


def test_adjacency_symmetric_and_simple():
    g = OnlineGraph.from_pre_neighborhoods([[], [0], [0, 1]])
    assert g.adjacency == [{1, 2}, {0, 2}, {0, 1}]
    assert g.m == 3
    assert g.edges() == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("step", [
    PresentationStep.of(0, []),          # duplicate id
    PresentationStep.of(3, []),          # skips an id
    PresentationStep.of(2, [5]),         # unknown pre-neighbor
    PresentationStep.of(2, [2]),         # self-loop
])
def test_invalid_steps(step):
    g = OnlineGraph.from_pre_neighborhoods([[], [0]])
    with pytest.raises(InvalidStepError):
        g.add(step)


def test_tracker_rejects_unknown_neighbor():
    with pytest.raises(InvalidStepError):
        ComponentTracker().add(PresentationStep.of(0, [0]))


def test_sides_edge():
    _, tr, _ = replay(steps_of([], [0]))
    assert tr.component_sides(1) == ({1}, {0})


def test_sides_path():
    _, tr, _ = replay(steps_of([], [0], [1]))
    assert tr.component_sides(0) == ({0, 2}, {1})


def test_sides_t3_matches_bfs():
    pres, subtrees = CbipTree(2).layout()
    t3 = next(s for s in subtrees if s.order == 3)
    steps = steps_of(*pres[: t3.stop])
    g, tr, _ = replay(steps)
    same, opp = tr.component_sides(t3.root)
    assert (same, opp) == bfs_sides(g, t3.root)
    assert same == {0, 3} and opp == {1, 2}
    assert len(same) + len(opp) == 4


def test_odd_cycle_clears_flag():
    _, tr, counts = replay(steps_of([], [0], [0, 1]))
    assert counts == [1, 1, 1]
    assert not tr.is_bipartite(2)
    with pytest.raises(NotBipartiteError):
        tr.component_sides(0)


def test_odd_cycle_flag_survives_merge():
    _, tr, _ = replay(steps_of([], [0], [0, 1], [], [3, 2]))
    assert tr.component_count == 1
    assert not tr.is_bipartite(3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 80), st.floats(0.0, 0.15))
def test_incremental_counts_match_bfs(seed, n, p):
    steps = random_presentation(random.Random(seed), n, p)
    g, tr, counts = replay(steps)
    for i in range(1, n + 1):
        assert counts[i - 1] == bfs_component_count(g.prefix(i))
    assert tr.component_count == len(tr.roots())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 60), st.floats(0.0, 0.2))
def test_sides_are_proper_bipartitions(seed, n, p):
    steps = random_presentation(random.Random(seed), n, p)
    g, tr, _ = replay(steps)
    for v in range(n):
        if not tr.is_bipartite(v):
            continue
        same, opp = tr.component_sides(v)
        assert v in same and not same & opp
        assert same | opp == set(tr.component(v))
        for side in (same, opp):
            assert all(not (g.adjacency[u] & side) for u in side)
        assert (same, opp) == bfs_sides(g, v)


def test_bipartite_flag_matches_bfs(rng):
    from kcbcolor.verification import two_coloring

    for _ in range(50):
        steps = random_presentation(rng, rng.randint(1, 40), 0.08)
        g, tr, _ = replay(steps)
        for r in tr.roots():
            comp = sorted(tr.component(r))
            sub = OnlineGraph.from_pre_neighborhoods(
                [[comp.index(u) for u in g.steps[v].pre_neighborhood] for v in comp])
            assert tr.is_bipartite(r) == (two_coloring(sub) is not None)
