import random

import pytest

from kcbcolor.adversaries import (
    CbipTree,
    Clique,
    FF3Colorable1CB,
    FFBipartite2CB,
    Forest,
    ReservoirUnderflow,
    StrategyError,
    UniversalLayered,
    cbip_tree_adversary,
    cbip_tree_size,
    check_budget_feasibility,
    clique_adversary,
    ff_3colorable_1cb,
    ff_bipartite_2cb,
    forest_adversary,
    layer_budgets,
    make_strategy,
    universal_layered_adversary,
)
from kcbcolor.algorithms import CBIP, FirstFit, SeededBaseline
from kcbcolor.verification import (
    check_kappa_cb,
    check_proper,
    chromatic_number,
    color_classes_span_bins,
    girth_at_most,
    max_back_degree,
    saturation_report,
)


def bins_of(trace):
    return [r.bin for r in trace.records]


def test_clique_streams():
    assert len(list(clique_adversary(1))) == 1
    tr = Clique(3).play(FirstFit())
    assert tr.summary == {"bins_used": 3, "vertices": 3, "max_components": 1}


def test_clique_ten():
    tr = Clique(10).play(FirstFit())
    assert tr.summary["bins_used"] == 10
    assert all(r.components == 1 for r in tr.records)


def test_ff_bipartite_n2():
    tr = FFBipartite2CB(2).play(FirstFit())
    assert bins_of(tr) == [1, 1]


def test_ff_bipartite_n8():
    tr = FFBipartite2CB(8).play(FirstFit())
    assert bins_of(tr) == [1, 1, 2, 2, 3, 3, 4, 4]
    assert [r.color for r in tr.records] == [1, 2] * 4
    assert [r.components for r in tr.records] == [1, 2, 2, 2, 1, 1, 1, 1]


def test_ff_bipartite_rejects_odd():
    with pytest.raises(StrategyError):
        list(ff_bipartite_2cb(7))


def test_ff3_initial_phase():
    tr = FF3Colorable1CB(2).play(FirstFit())
    assert bins_of(tr) == [1, 2, 1, 2, 1, 2]
    sat = saturation_report(tr.bins, tr.colors)
    assert sat.saturated_bins(3) == [1, 2]


def test_ff3_four_rounds():
    tr = FF3Colorable1CB(4).play(FirstFit())
    b = bins_of(tr)
    for k in (3, 4):
        assert b[3 * k - 3: 3 * k] == [k, k, k]
    g = tr.graph()
    # expected edges, 1-based
    expected = {(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (5, 7), (3, 8), (6, 8),
                (1, 9), (4, 9), (2, 10), (5, 10), (8, 10), (3, 11), (6, 11), (9, 11),
                (1, 12), (4, 12), (7, 12)}
    assert {(u + 1, v + 1) for u, v in g.edges()} == expected
    assert chromatic_number(g) == 3


def test_ff3_fact_one():
    tr = FF3Colorable1CB(5).play(FirstFit())
    sat = saturation_report(tr.bins, tr.colors).saturated_bins(3)
    assert sat == [1, 2, 3, 4, 5]
    assert color_classes_span_bins(tr.bins, tr.colors, sat)


def test_ff3_stream_rejects_small():
    with pytest.raises(StrategyError):
        list(ff_3colorable_1cb(1))


def test_forest_kappa1():
    tr = forest_adversary(1)
    assert bins_of(tr) == [1, 2]


def test_forest_kappa3():
    tr = forest_adversary(3)
    assert tr.summary == {"bins_used": 4, "vertices": 8, "max_components": 3}
    assert bins_of(tr) == [1, 2, 1, 3, 1, 2, 1, 4]
    expected = {(1, 2), (2, 4), (3, 4), (5, 6), (4, 8), (6, 8), (7, 8)}
    assert {(u + 1, v + 1) for u, v in tr.graph().edges()} == expected


def test_forest_size_recurrence():
    s = {1: 1}
    for k in range(1, 10):
        s[k + 1] = 2 * s[k] + 1
    for kappa in range(1, 10):
        assert len(Forest(kappa).layout()) == s[kappa] + 1 == 2 ** kappa


def test_cbip_tree_sizes():
    sizes = [1, 2]
    for _ in range(10):
        sizes.append(sizes[-1] + sizes[-2] + 1)
    assert sizes[:6] == [1, 2, 4, 7, 12, 20]
    for i in range(1, 13):
        assert cbip_tree_size(i) == sizes[i - 1]
    for kappa in range(1, 6):
        assert len(CbipTree(kappa).layout()[0]) == sizes[2 * kappa - 1]


def test_cbip_tree_small():
    assert len(list(cbip_tree_adversary(1))) == 2
    tr = CbipTree(2).play(CBIP())
    assert tr.summary == {"bins_used": 4, "vertices": 7, "max_components": 2}


def test_cbip_tree_t6():
    tr = CbipTree(3).play(CBIP())
    pres, subtrees = CbipTree(3).layout()
    top = subtrees[-1]
    assert tr.summary["vertices"] == 20 and tr.summary["bins_used"] == 6
    g = tr.graph()
    depth = {top.root: 0}
    stack = [top.root]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w not in depth:
                depth[w] = depth[u] + 1
                stack.append(w)
    bins = tr.bins
    assert {bins[v] for v, d in depth.items() if d % 2} == {1, 2, 3, 4, 5}
    assert {bins[v] for v, d in depth.items() if d % 2 == 0} == {1, 2, 3, 4, 6}
    # adversary colors are depth parity
    assert all(tr.colors[v] == 1 + d % 2 for v, d in depth.items())


def test_cbip_tree_vs_firstfit_is_cheap():
    # FirstFit on trees never exceeds kappa + 1 bins
    for kappa in range(1, 6):
        assert CbipTree(kappa).play(FirstFit()).summary["bins_used"] <= kappa + 1


def test_layer_budgets():
    assert layer_budgets(3) == [30, 1]
    assert layer_budgets(4) == [200, 4, 1]
    assert layer_budgets(5) == [1800, 30, 5, 1]
    for t in range(3, 9):
        b = layer_budgets(t)
        check_budget_feasibility(t, b, (t + 1) ** (t - 3))
        assert sum(b) <= 20 * t * (t + 1) ** (t - 3)


def test_budget_feasibility_detects_shortfall():
    with pytest.raises(ReservoirUnderflow):
        check_budget_feasibility(5, [1800, 29, 5, 1], 36)
    with pytest.raises(ReservoirUnderflow):
        check_budget_feasibility(5, [1800, 30, 5, 1], 35)


def test_universal_t3_firstfit():
    strat = UniversalLayered(3)
    tr = strat.play(FirstFit())
    st = strat.state
    assert strat.budgets == [30, 1]
    assert bins_of(tr)[:30] == [1, 2] * 15
    assert st.reservoir_bins == [1, 2]
    assert tr.records[-1].bin == 3 and len(tr.records) == 31
    assert tr.summary["bins_used"] == 3 and tr.summary["max_components"] == 1
    assert len(tr.records) <= 60


@pytest.mark.parametrize("t", [3, 4, 5])
def test_universal_structure(t):
    strat = UniversalLayered(t)
    tr = strat.play(FirstFit())
    st = strat.state
    g = tr.graph()
    assert tr.summary["bins_used"] >= t
    # each vertex consumed at most once, so parents are unique
    consumed = [u for layer in st.layers[1:] for v in layer for u in g.steps[v].pre_neighborhood]
    assert len(consumed) == len(set(consumed))
    # reservoir vertices all share their bin, and reservoir bins are distinct
    for res, b in zip(st.initial_reservoirs, st.reservoir_bins):
        assert {tr.bins[v] for v in res} == {b}
    assert len(set(st.reservoir_bins)) == len(st.reservoir_bins)
    # path reservoirs are pairwise non-adjacent
    picked = st.initial_reservoirs[0] + st.initial_reservoirs[1]
    assert all(not (g.adjacency[u] & set(picked)) for u in picked)
    assert max_back_degree(g) <= 2
    assert check_proper(g, tr.colors)[0] and len(set(tr.colors.values())) <= 3


def test_universal_vs_baseline_seeds():
    for seed in range(20):
        tr = universal_layered_adversary(4, SeededBaseline(seed))
        assert tr.summary["bins_used"] >= 4
        assert chromatic_number(tr.graph(), limit=3) is not None
        assert check_kappa_cb(tr.steps, 1)[0]


@pytest.mark.parametrize("k", [3, 4, 5])
def test_universal_ck_free(k):
    strat = UniversalLayered(3, ck_free=k)
    tr = strat.play(FirstFit())
    assert tr.summary["bins_used"] >= 3
    assert not girth_at_most(tr.graph(), k)


def test_universal_rejects_bad_params():
    with pytest.raises(StrategyError):
        UniversalLayered(2)
    with pytest.raises(StrategyError):
        UniversalLayered(3, ck_free=2)


def test_universal_extraction_underflow():
    strat = UniversalLayered(5)
    # a path in three balanced bins, but far too short for 36 picks per bin
    with pytest.raises(ReservoirUnderflow):
        strat.extract_path_reservoirs([1, 2, 3] * 20)


def test_universal_extraction_spacing():
    strat = UniversalLayered(4, ck_free=4)
    rng = random.Random(1)
    path = [1]
    for _ in range(999):
        path.append(rng.choice([b for b in (1, 2, 3) if b != path[-1]]))
    r1, r2, b1, b2 = strat.extract_path_reservoirs(path)
    assert len(r1) == len(r2) == 5
    picks = sorted(r1 + r2)
    assert all(b - a > 4 for a, b in zip(picks, picks[1:]))
    assert {path[p] for p in r1} == {b1} and {path[p] for p in r2} == {b2}


def test_cbip_on_universal_is_a_run_error():
    from kcbcolor.trace import MatchupError

    # CBIP sees an odd cycle as soon as the first layer-2 vertex closes one
    with pytest.raises(MatchupError):
        UniversalLayered(3).play(CBIP())


def test_make_strategy():
    assert make_strategy("universal", {"t": 3}).ck_free is None
    with pytest.raises(StrategyError):
        make_strategy("forest", {})
    with pytest.raises(StrategyError):
        make_strategy("forest", {"kappa": 2, "n": 3})
    with pytest.raises(StrategyError):
        make_strategy("nope", {})
