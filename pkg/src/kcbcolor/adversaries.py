"""Adaptive adversary strategies for online coloring under a component bound.

Every strategy is a class exposing ``kappa`` (the component bound it respects),
``chi`` (the number of colors its own coloring may use) and ``moves()``, a
generator in the sense of :data:`kcbcolor.trace.MoveStream`. Colors are 1-based;
1/2/3 stand for red/green/blue.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional

from .algorithms import FirstFit, OnlineColorer
from .graph_core import PresentationStep
from .trace import AdversaryMove, MatchupTrace, MoveStream, play

RED, GREEN, BLUE = 1, 2, 3


class StrategyError(ValueError):
    """Invalid strategy parameters."""


class ReservoirUnderflow(AssertionError):
    """A reservoir ran dry; the layer budgets were supposed to rule this out."""


class Strategy:
    name = "strategy"
    kappa = 1
    chi = 1

    @property
    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    def moves(self) -> MoveStream:
        raise NotImplementedError

    def metadata(self, algorithm: str, seed: Optional[int] = None) -> dict[str, Any]:
        return {
            "strategy": self.name,
            "params": self.params,
            "algorithm": algorithm,
            "seed": seed,
            "kappa": self.kappa,
            "chi": self.chi,
        }

    def play(self, colorer: OnlineColorer, seed: Optional[int] = None) -> MatchupTrace:
        return play(self.moves(), colorer, self.metadata(colorer.name, seed))


def _fixed_stream(pres: list[list[int]], colors: list[Optional[int]]) -> MoveStream:
    for v, (pre, c) in enumerate(zip(pres, colors)):
        yield AdversaryMove(PresentationStep.of(v, pre), c)
    return None


class Clique(Strategy):
    """K_n, every vertex adjacent to all earlier ones."""

    name = "clique"

    def __init__(self, n: int):
        if n < 1:
            raise StrategyError("clique needs n >= 1")
        self.n = n
        self.chi = n

    @property
    def params(self):
        return {"n": self.n}

    def moves(self):
        return _fixed_stream([list(range(v)) for v in range(self.n)], list(range(1, self.n + 1)))


class FFBipartite2CB(Strategy):
    """Odd-indexed v_{2k-1} joined to every even-indexed v_{2k'} with k' != k.

    Presented as v_1, ..., v_n this is 2-CB and FirstFit puts v_{2k-1}, v_{2k}
    into bin k, so it ends with n/2 bins.
    """

    name = "ff_bipartite_2cb"
    kappa = 2
    chi = 2

    def __init__(self, n: int):
        if n < 2 or n % 2:
            raise StrategyError("ff_bipartite_2cb needs an even n >= 2")
        self.n = n

    @property
    def params(self):
        return {"n": self.n}

    def moves(self):
        pres, colors = [], []
        for v in range(self.n):
            # 0-based: v even <-> odd index v_{v+1}
            k = v // 2
            partner_parity = 1 if v % 2 == 0 else 0
            pres.append([2 * j + partner_parity for j in range(k)])
            colors.append(RED if v % 2 == 0 else GREEN)
        return _fixed_stream(pres, colors)


class FF3Colorable1CB(Strategy):
    """A 6-vertex path followed by rounds of three vertices each.

    In round k (3 <= k <= rounds), v_{3k-2} sees {v_{3k'-1}}, v_{3k-1} sees
    {v_{3k'}} and v_{3k} sees {v_{3k'-2}} over k' < k. Colors follow the index
    mod 3. Against FirstFit every round opens a new 3-saturated bin.
    """

    name = "ff_3colorable_1cb"
    kappa = 1
    chi = 3

    def __init__(self, rounds: int):
        if rounds < 2:
            raise StrategyError("ff_3colorable_1cb needs rounds >= 2")
        self.rounds = rounds

    @property
    def params(self):
        return {"rounds": self.rounds}

    @staticmethod
    def color_of(v: int) -> int:
        return (RED, GREEN, BLUE)[v % 3]

    def moves(self):
        pres: list[list[int]] = [[]] + [[v - 1] for v in range(1, 6)]
        for k in range(3, self.rounds + 1):
            # 1-based index x maps to id x - 1
            pres.append([3 * j - 1 - 1 for j in range(1, k)])
            pres.append([3 * j - 1 for j in range(1, k)])
            pres.append([3 * j - 2 - 1 for j in range(1, k)])
        return _fixed_stream(pres, [self.color_of(v) for v in range(len(pres))])


def _two_color_tree(n: int, edges: list[tuple[int, int]], root: int) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    color = [0] * n
    color[root] = RED
    stack = [root]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if not color[w]:
                color[w] = GREEN if color[u] == RED else RED
                stack.append(w)
    # any vertex not reached lives in another tree of the forest
    for s in range(n):
        if not color[s]:
            color[s] = RED
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if not color[w]:
                        color[w] = GREEN if color[u] == RED else RED
                        stack.append(w)
    return color


class Forest(Strategy):
    """Recursive forest construction.

    ``build(k)`` presents trees T_1..T_k holding representatives v_1..v_k with
    FirstFit bins 1..k; ``build(k+1)`` is ``build(k)``, a vertex joined to those
    representatives (bin k+1), then ``build(k)`` again. A final vertex joined to
    all kappa representatives forces bin kappa+1 using 2**kappa vertices.
    """

    name = "forest"
    chi = 2

    def __init__(self, kappa: int):
        if kappa < 1:
            raise StrategyError("forest needs kappa >= 1")
        self.kappa = kappa

    @property
    def params(self):
        return {"kappa": self.kappa}

    def layout(self) -> list[list[int]]:
        pres: list[list[int]] = []

        def build(k: int) -> list[int]:
            if k == 1:
                pres.append([])
                return [len(pres) - 1]
            reps = build(k - 1)
            pres.append(list(reps))
            u = len(pres) - 1
            return build(k - 1) + [u]

        pres.append(build(self.kappa))
        return pres

    def moves(self):
        pres = self.layout()
        edges = [(u, v) for v, pre in enumerate(pres) for u in pre]
        colors = _two_color_tree(len(pres), edges, len(pres) - 1)
        return _fixed_stream(pres, colors)


def forest_adversary(kappa: int, colorer: Optional[OnlineColorer] = None) -> MatchupTrace:
    return Forest(kappa).play(colorer if colorer is not None else FirstFit())


@dataclass(frozen=True)
class Subtree:
    """One recursively built T_i occupying the contiguous ids [start, stop)."""

    order: int
    root: int
    start: int
    stop: int


class CbipTree(Strategy):
    """Recursive trees T_i that force CBIP to use 2*kappa bins.

    T_1 is one vertex, T_2 one edge rooted at its later vertex (the one CBIP
    puts in bin 2), and T_i is T_{i-1}, then T_{i-2}, then a new root joined to
    both old roots. Building T_{2 kappa} never exceeds kappa components.
    """

    name = "cbip_tree"
    chi = 2

    def __init__(self, kappa: int):
        if kappa < 1:
            raise StrategyError("cbip_tree needs kappa >= 1")
        self.kappa = kappa

    @property
    def params(self):
        return {"kappa": self.kappa}

    @property
    def order(self) -> int:
        return 2 * self.kappa

    def layout(self) -> tuple[list[list[int]], list[Subtree]]:
        pres: list[list[int]] = []
        subtrees: list[Subtree] = []

        def build(i: int) -> int:
            start = len(pres)
            if i == 1:
                pres.append([])
            elif i == 2:
                pres.append([])
                pres.append([start])
            else:
                r1 = build(i - 1)
                r2 = build(i - 2)
                pres.append([r1, r2])
            root = len(pres) - 1
            subtrees.append(Subtree(i, root, start, len(pres)))
            return root

        build(self.order)
        return pres, subtrees

    def moves(self):
        pres, _ = self.layout()
        edges = [(u, v) for v, pre in enumerate(pres) for u in pre]
        colors = _two_color_tree(len(pres), edges, len(pres) - 1)
        return _fixed_stream(pres, colors)


def cbip_tree_size(i: int) -> int:
    a, b = 1, 2
    if i == 1:
        return 1
    for _ in range(i - 2):
        a, b = b, a + b + 1
    return b


def layer_budgets(t: int) -> list[int]:
    """Layer sizes [l_1, ..., l_{t-1}] for the universal construction."""
    if t < 3:
        raise StrategyError("universal construction needs t >= 3")
    budgets = [10 * t * (t + 1) ** (t - 3)]
    budgets += [t * (t + 1) ** (t - i - 2) for i in range(2, t - 1)]
    budgets.append(1)
    return budgets


def check_budget_feasibility(t: int, budgets: list[int], first_reservoir: int) -> None:
    """Every reservoir must cover all consumption by the layers above it."""
    ell = {i + 1: b for i, b in enumerate(budgets)}
    if first_reservoir < sum(ell[j] for j in range(2, t)):
        raise ReservoirUnderflow(f"t={t}: path reservoirs {first_reservoir} too small")
    for i in range(2, t - 1):
        need = sum(ell[j] for j in range(i + 1, t))
        if ell[i] // t < need:
            raise ReservoirUnderflow(f"t={t}: layer {i} reservoir {ell[i] // t} < {need}")


def _by_population(bins: list[int]) -> list[int]:
    counts = Counter(bins)
    return sorted(counts, key=lambda b: (-counts[b], b))


@dataclass
class LayerState:
    """Bookkeeping of the layered construction, kept for inspection."""

    t: int
    budgets: list[int]
    path: list[int] = field(default_factory=list)
    layers: list[list[int]] = field(default_factory=list)
    reservoir_bins: list[int] = field(default_factory=list)
    reservoirs: list[list[int]] = field(default_factory=list)
    initial_reservoirs: list[list[int]] = field(default_factory=list)
    parent: dict[int, int] = field(default_factory=dict)
    layer_index: int = 1


class UniversalLayered(Strategy):
    """Layered 1-CB construction forcing any colorer to ``t`` bins on a 3-colorable graph.

    L_1 is a path. Two reservoirs of pairwise far-apart path vertices are taken
    from the two fullest bins; each later layer vertex is joined to one unused
    vertex from every reservoir so far, and the fullest bin of a layer seeds the
    next reservoir. With ``ck_free=k`` reservoir vertices are kept more than k
    apart on the path (and the path is k+1 times longer), so no cycle has length
    at most k. Colors are deferred and produced when the run stops.
    """

    name = "universal"
    kappa = 1
    chi = 3

    def __init__(self, t: int, ck_free: Optional[int] = None):
        if t < 3:
            raise StrategyError("universal needs t >= 3")
        if ck_free is not None and ck_free < 3:
            raise StrategyError("ck_free must be >= 3")
        self.t = t
        self.ck_free = ck_free
        self.radius = 1 if ck_free is None else ck_free
        self.budgets = layer_budgets(t)
        if ck_free is not None:
            self.budgets[0] *= ck_free + 1
        self.first_reservoir = (t + 1) ** (t - 3)
        check_budget_feasibility(t, self.budgets, self.first_reservoir)
        self.state = LayerState(t, list(self.budgets))

    @property
    def params(self):
        return {"t": self.t, "ck_free": self.ck_free}

    @property
    def max_vertices(self) -> int:
        return sum(self.budgets)

    def extract_path_reservoirs(self, path_bins: list[int]) -> tuple[list[int], list[int], int, int]:
        """Pick far-apart path vertices from the two fullest bins, alternating."""
        order = _by_population(path_bins)
        if len(order) < 2:
            raise ReservoirUnderflow("path colored with a single bin")
        b1, b2 = order[0], order[1]
        pools = [
            [p for p, b in enumerate(path_bins) if b == b1],
            [p for p, b in enumerate(path_bins) if b == b2],
        ]
        alive = [set(pools[0]), set(pools[1])]
        cursor = [0, 0]
        picked: list[list[int]] = [[], []]
        want = self.first_reservoir
        turn = 0
        while len(picked[0]) < want or len(picked[1]) < want:
            if len(picked[turn]) < want:
                pool = pools[turn]
                while cursor[turn] < len(pool) and pool[cursor[turn]] not in alive[turn]:
                    cursor[turn] += 1
                if cursor[turn] == len(pool):
                    raise ReservoirUnderflow(
                        f"bin {(b1, b2)[turn]} ran out after {len(picked[turn])} picks")
                p = pool[cursor[turn]]
                picked[turn].append(p)
                for q in range(p - self.radius, p + self.radius + 1):
                    alive[0].discard(q)
                    alive[1].discard(q)
            turn = 1 - turn
        return picked[0], picked[1], b1, b2

    def moves(self):
        st = self.state
        t = self.t
        bins: list[int] = []
        pres: list[list[int]] = []

        def present(pre: list[int]):
            v = len(pres)
            pres.append(pre)
            b = yield AdversaryMove(PresentationStep.of(v, pre))
            bins.append(b)
            return v

        def done() -> bool:
            return len(set(bins)) >= t

        # layer 1: the path
        for p in range(self.budgets[0]):
            v = yield from present([p - 1] if p else [])
            st.path.append(v)
            if done():
                return self.final_coloring(pres)
        st.layers.append(list(st.path))
        r1, r2, b1, b2 = self.extract_path_reservoirs(bins[: len(st.path)])
        st.reservoirs = [list(r1), list(r2)]
        st.initial_reservoirs = [list(r1), list(r2)]
        st.reservoir_bins = [b1, b2]

        for i in range(2, t):
            st.layer_index = i
            layer: list[int] = []
            for _ in range(self.budgets[i - 1]):
                us = []
                for j in range(i):
                    if not st.reservoirs[j]:
                        raise ReservoirUnderflow(f"reservoir {j + 1} empty in layer {i}")
                    us.append(st.reservoirs[j].pop(0))
                v = yield from present(sorted(us))
                for u in us:
                    assert u not in st.parent, "vertex consumed twice"
                    st.parent[u] = v
                layer.append(v)
                if done():
                    st.layers.append(layer)
                    return self.final_coloring(pres)
            st.layers.append(layer)
            if i < t - 1:
                layer_bins = [bins[v] for v in layer]
                top = _by_population(layer_bins)[0]
                size = self.budgets[i - 1] // t
                chosen = [v for v in layer if bins[v] == top][:size]
                if len(chosen) < size:
                    raise ReservoirUnderflow(f"layer {i}: bin {top} holds only {len(chosen)}")
                st.reservoirs.append(chosen)
                st.initial_reservoirs.append(list(chosen))
                st.reservoir_bins.append(top)
        return self.final_coloring(pres)

    def final_coloring(self, pres: list[list[int]]) -> dict[int, int]:
        """2-color the parent forest, then extend greedily in arrival order."""
        n = len(pres)
        path = set(self.state.path)
        adj: list[set[int]] = [set() for _ in range(n)]
        forest: list[list[int]] = [[] for _ in range(n)]
        for v, pre in enumerate(pres):
            for u in pre:
                adj[u].add(v)
                adj[v].add(u)
                if not (u in path and v in path):
                    forest[u].append(v)
                    forest[v].append(u)
        color: dict[int, int] = {}
        for s in range(n):
            if s in color or not forest[s]:
                continue
            color[s] = RED
            stack = [s]
            while stack:
                u = stack.pop()
                for w in forest[u]:
                    if w not in color:
                        color[w] = GREEN if color[u] == RED else RED
                        stack.append(w)
        for v in range(n):
            if v not in color:
                taken = {color[u] for u in adj[v] if u in color}
                color[v] = min({RED, GREEN, BLUE} - taken)
        return color


def universal_layered_adversary(t: int, colorer: OnlineColorer,
                                ck_free: Optional[int] = None) -> MatchupTrace:
    return UniversalLayered(t, ck_free).play(colorer, getattr(colorer, "seed", None))


def clique_adversary(n: int) -> MoveStream:
    return Clique(n).moves()


def ff_bipartite_2cb(n: int) -> MoveStream:
    return FFBipartite2CB(n).moves()


def ff_3colorable_1cb(rounds: int) -> MoveStream:
    return FF3Colorable1CB(rounds).moves()


def cbip_tree_adversary(kappa: int) -> MoveStream:
    return CbipTree(kappa).moves()


STRATEGIES: dict[str, tuple[type[Strategy], tuple[str, ...]]] = {
    "clique": (Clique, ("n",)),
    "ff_bipartite_2cb": (FFBipartite2CB, ("n",)),
    "ff_3colorable_1cb": (FF3Colorable1CB, ("rounds",)),
    "forest": (Forest, ("kappa",)),
    "cbip_tree": (CbipTree, ("kappa",)),
    "universal": (UniversalLayered, ("t", "ck_free")),
}


def make_strategy(name: str, params: dict[str, Any]) -> Strategy:
    try:
        cls, keys = STRATEGIES[name]
    except KeyError:
        raise StrategyError(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}") from None
    missing = [k for k in keys if k not in params and k != "ck_free"]
    if missing:
        raise StrategyError(f"{name} needs parameter(s) {missing}")
    extra = set(params) - set(keys)
    if extra:
        raise StrategyError(f"{name} does not take {sorted(extra)}")
    return cls(**{k: params[k] for k in keys if k in params})
