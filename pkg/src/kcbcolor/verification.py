"""Independent oracles over graphs, bin assignments and traces.

Nothing here reuses the union-find of :mod:`kcbcolor.graph_core`; component
counts and bipartitions are recomputed from scratch.
"""

from __future__ import annotations

import sys
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .graph_core import OnlineGraph, PresentationStep


class BudgetExceeded(RuntimeError):
    """The exact chromatic search gave up; the answer is indeterminate."""


class TableViolation(ValueError):
    """A CBIP arrival landed on a combination the type tables rule out."""


class NotBipartiteComponent(ValueError):
    pass


# component bound


def component_counts(steps: Sequence[PresentationStep]) -> list[int]:
    """Number of components after each prefix, via a plain union-find."""
    parent: list[int] = []

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    counts = []
    cc = 0
    for s in steps:
        parent.append(s.vertex)
        cc += 1
        for u in s.pre_neighborhood:
            a, b = find(u), find(s.vertex)
            if a != b:
                parent[a] = b
                cc -= 1
        counts.append(cc)
    return counts


def check_kappa_cb(steps: Sequence[PresentationStep], kappa: int) -> tuple[bool, Optional[int]]:
    """Whether every prefix has at most ``kappa`` components.

    On failure also returns the (1-based) length of the shortest violating prefix.
    """
    for i, cc in enumerate(component_counts(steps), start=1):
        if cc > kappa:
            return False, i
    return True, None


# colorings


def check_proper(graph: OnlineGraph, assignment: Mapping[int, int]) -> tuple[bool, Optional[tuple[int, int]]]:
    for u, v in graph.edges():
        if assignment.get(u) is None or assignment.get(v) is None:
            return False, (u, v)
        if assignment[u] == assignment[v]:
            return False, (u, v)
    return True, None


def two_coloring(graph: OnlineGraph) -> Optional[list[int]]:
    side = [-1] * graph.n
    for s in range(graph.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in graph.adjacency[u]:
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def _greedy_clique(adj: list[set[int]]) -> int:
    best = 1 if adj else 0
    for v in sorted(range(len(adj)), key=lambda x: -len(adj[x])):
        clique = [v]
        for w in sorted(adj[v], key=lambda x: -len(adj[x])):
            if all(w in adj[c] for c in clique):
                clique.append(w)
        best = max(best, len(clique))
    return best


def _core(adj: list[set[int]], k: int) -> list[int]:
    """Vertices left after repeatedly deleting those of degree < k."""
    deg = [len(a) for a in adj]
    removed = [False] * len(adj)
    queue = deque(v for v in range(len(adj)) if deg[v] < k)
    for v in queue:
        removed[v] = True
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not removed[w]:
                deg[w] -= 1
                if deg[w] < k:
                    removed[w] = True
                    queue.append(w)
    return [v for v in range(len(adj)) if not removed[v]]


def k_colorable(graph: OnlineGraph, k: int, budget: int = 2_000_000) -> bool:
    """Exact k-colorability by DSATUR-ordered backtracking on the k-core."""
    if graph.n == 0:
        return True
    if k <= 0:
        return False
    if k == 1:
        return graph.m == 0
    if k == 2:
        return two_coloring(graph) is not None
    core = _core(graph.adjacency, k)
    if not core:
        return True
    index = {v: i for i, v in enumerate(core)}
    adj = [[index[w] for w in graph.adjacency[v] if w in index] for v in core]
    n = len(core)
    color = [-1] * n
    # per vertex, count of neighbors holding each color
    seen = [[0] * k for _ in range(n)]
    sat = [0] * n
    nodes = 0

    def assign(v: int, c: int, delta: int) -> None:
        for w in adj[v]:
            row = seen[w]
            if delta > 0:
                if row[c] == 0:
                    sat[w] += 1
                row[c] += 1
            else:
                row[c] -= 1
                if row[c] == 0:
                    sat[w] -= 1

    def pick() -> int:
        best, key = -1, (-1, -1)
        for v in range(n):
            if color[v] < 0:
                kv = (sat[v], len(adj[v]))
                if kv > key:
                    best, key = v, kv
        return best

    def solve(colored: int, used: int) -> bool:
        nonlocal nodes
        if colored == n:
            return True
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"k={k}: more than {budget} search nodes")
        v = pick()
        row = seen[v]
        for c in range(min(k, used + 1)):
            if row[c]:
                continue
            color[v] = c
            assign(v, c, 1)
            if solve(colored + 1, max(used, c + 1)):
                return True
            assign(v, c, -1)
            color[v] = -1
        return False

    limit = sys.getrecursionlimit()
    if n + 100 > limit:
        sys.setrecursionlimit(n + 1000)
    try:
        return solve(0, 0)
    finally:
        sys.setrecursionlimit(limit)


def chromatic_number(graph: OnlineGraph, limit: int = 20, budget: int = 2_000_000) -> Optional[int]:
    """Exact chromatic number, or None when it exceeds ``limit``.

    Raises :class:`BudgetExceeded` if the search is cut off.
    """
    if graph.n == 0:
        return 0
    k = max(1, _greedy_clique(graph.adjacency))
    while k <= limit:
        if k_colorable(graph, k, budget):
            return k
        k += 1
    return None


def chromatic_number_exhaustive(graph: OnlineGraph) -> int:
    """Minimum cover by independent sets, by DP over vertex subsets (small n only)."""
    n = graph.n
    if n == 0:
        return 0
    nbr = [sum(1 << w for w in graph.adjacency[v]) for v in range(n)]
    full = (1 << n) - 1
    independent = [True] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        independent[mask] = independent[rest] and not (nbr[low] & rest)
    inf = n + 1
    best = [inf] * (1 << n)
    best[0] = 0
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask & ~low
        # enumerate independent subsets of mask containing its lowest vertex
        sub = rest
        while True:
            s = sub | low
            if independent[s] and best[mask & ~s] + 1 < best[mask]:
                best[mask] = best[mask & ~s] + 1
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best[full]


# saturation


@dataclass
class SaturationReport:
    saturation: dict[int, int]
    perfect: dict[int, bool]

    def saturated_bins(self, p: int) -> list[int]:
        return sorted(b for b, q in self.saturation.items() if q >= p)


def saturation_report(bins: Mapping[int, int], colors: Mapping[int, int]) -> SaturationReport:
    """Per bin, the largest p for which it is p-saturated, and whether perfectly so."""
    members: dict[int, list[int]] = {}
    for v, b in bins.items():
        members.setdefault(b, []).append(v)
    sat = {b: len({colors[v] for v in vs}) for b, vs in members.items()}
    perfect = {b: len(vs) == sat[b] for b, vs in members.items()}
    return SaturationReport(sat, perfect)


def color_classes_span_bins(bins: Mapping[int, int], colors: Mapping[int, int],
                            saturated: Iterable[int]) -> bool:
    """Every color class meets every one of the given (saturated) bins."""
    wanted = set(saturated)
    classes: dict[int, set[int]] = {}
    for v, c in colors.items():
        classes.setdefault(c, set()).add(bins[v])
    return all(wanted <= bs for bs in classes.values())


# girth and inductiveness


def shortest_cycle(graph: OnlineGraph) -> Optional[int]:
    best = None
    adj = graph.adjacency
    for root in range(graph.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return best


def girth_at_most(graph: OnlineGraph, k: int) -> bool:
    """True iff the graph has a cycle of length <= k."""
    g = shortest_cycle(graph)
    return g is not None and g <= k


def max_back_degree(graph: OnlineGraph, order: Optional[Sequence[int]] = None) -> int:
    """Max over vertices of the number of neighbors placed later in ``order``."""
    if order is None:
        order = range(graph.n)
    pos = {v: i for i, v in enumerate(order)}
    return max((sum(1 for w in graph.adjacency[v] if pos[w] > pos[v]) for v in pos), default=0)


# CBIP component types


@dataclass(frozen=True)
class ComponentType:
    """Type 1[ell] or Type 2[ell] of a CBIP-colored bipartite component.

    Type 1: b(A) = [ell-2], b(B) = [ell-1].
    Type 2: b(A) = [ell-2] + {ell}, b(B) = [ell-1].
    ``a`` and ``b`` hold the witness vertex sets when known.
    """

    kind: int
    ell: int
    a: frozenset[int] = field(default=frozenset(), compare=False)
    b: frozenset[int] = field(default=frozenset(), compare=False)

    def a_bins(self) -> frozenset[int]:
        base = set(range(1, self.ell - 1))
        if self.kind == 2:
            base.add(self.ell)
        return frozenset(base)

    def b_bins(self) -> frozenset[int]:
        return frozenset(range(1, self.ell))

    def __str__(self):
        return f"Type {self.kind}[{self.ell}]"


def _interval_top(s: frozenset[int]) -> Optional[int]:
    """n if s == [n] (with [0] the empty set), else None."""
    n = len(s)
    if n == 0 or max(s) == n:
        return n
    return None


def type_from_bin_sets(x: Iterable[int], y: Iterable[int]) -> Optional[tuple[int, int, bool]]:
    """Match side bin sets against both type definitions.

    Returns ``(kind, ell, x_is_a)`` or None if neither definition fits.
    """
    x, y = frozenset(x), frozenset(y)
    for sa, sb, x_is_a in ((x, y, True), (y, x, False)):
        top_b = _interval_top(sb)
        if top_b is None or top_b < 1:
            continue
        ell = top_b + 1
        if sa == frozenset(range(1, ell - 1)):
            return 1, ell, x_is_a
        if sa == frozenset(range(1, ell - 1)) | {ell}:
            return 2, ell, x_is_a
    return None


def classify_components(graph: OnlineGraph, bins: Mapping[int, int]) -> list[Optional[ComponentType]]:
    """Type of every component (in order of smallest vertex); None where untypeable."""
    side = [-1] * graph.n
    out: list[Optional[ComponentType]] = []
    for s in range(graph.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        parts: tuple[list[int], list[int]] = ([s], [])
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in graph.adjacency[u]:
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    parts[side[w]].append(w)
                    queue.append(w)
                elif side[w] == side[u]:
                    raise NotBipartiteComponent(f"odd cycle through vertex {w}")
        match = type_from_bin_sets((bins[v] for v in parts[0]), (bins[v] for v in parts[1]))
        if match is None:
            out.append(None)
            continue
        kind, ell, x_is_a = match
        a, b = (parts[0], parts[1]) if x_is_a else (parts[1], parts[0])
        out.append(ComponentType(kind, ell, frozenset(a), frozenset(b)))
    return out


# Rows of the merge table, keyed by (S_{-v}, S_v) patterns relative to m:
# "m-2" = [m-2], "m-1" = [m-1], "m-2+m" = [m-2] u {m}, "m" = [m].
# Values: None for impossible rows, else (bin offset from m, kind, ell offset).
MERGE_TABLE: dict[tuple[str, str], Optional[tuple[int, int, int]]] = {
    ("m-2", "m-2"): (-1, 1, 0),
    ("m-2", "m-1"): (-1, 1, 0),
    ("m-2", "m-2+m"): None,
    ("m-2", "m"): None,
    ("m-1", "m-2"): (0, 2, 0),
    ("m-1", "m-1"): (0, 1, 1),
    ("m-1", "m-2+m"): (0, 2, 0),
    ("m-1", "m"): (0, 1, 1),
    ("m-2+m", "m-2"): None,
    ("m-2+m", "m-1"): (-1, 2, 0),
    ("m-2+m", "m-2+m"): None,
    ("m-2+m", "m"): None,
    ("m", "m-2"): None,
    ("m", "m-1"): (1, 2, 1),
    ("m", "m-2+m"): None,
    ("m", "m"): (1, 1, 2),
}


def _pattern(s: frozenset[int], m: int) -> Optional[str]:
    candidates = {
        "m-2": frozenset(range(1, m - 1)),
        "m-1": frozenset(range(1, m)),
        "m-2+m": frozenset(range(1, m - 1)) | {m},
        "m": frozenset(range(1, m + 1)),
    }
    for name, target in candidates.items():
        if s == target:
            return name
    return None


def expected_transition(before: Sequence[tuple[ComponentType, str]]) -> tuple[int, ComponentType]:
    """Bin of the arriving vertex and the type of its component, from the tables.

    ``before`` lists the components the vertex touches with the side ('A' or
    'B') on which it has neighbors. Raises :class:`TableViolation` on rows the
    tables mark impossible.
    """
    if not before:
        return 1, ComponentType(1, 2)
    if len(before) == 1:
        ctype, hit = before[0]
        if hit == "A":
            return ctype.ell - 1, ComponentType(ctype.kind, ctype.ell)
        return ctype.ell, ComponentType(2, ctype.ell)
    m = max(ct.ell for ct, _ in before)
    opposite: set[int] = set()
    same: set[int] = set()
    for ct, hit in before:
        if hit == "A":
            opposite |= ct.a_bins()
            same |= ct.b_bins()
        else:
            opposite |= ct.b_bins()
            same |= ct.a_bins()
    return merge_row(opposite, same, m)


def merge_row(opposite: Iterable[int], same: Iterable[int], m: int) -> tuple[int, ComponentType]:
    """Look up the merge table for side bin sets S_-v / S_v and type parameter m."""
    opposite, same = frozenset(opposite), frozenset(same)
    po, ps = _pattern(opposite, m), _pattern(same, m)
    if po is None or ps is None:
        raise TableViolation(f"side bin sets {sorted(opposite)} / {sorted(same)} fit no row for m={m}")
    row = MERGE_TABLE[(po, ps)]
    if row is None:
        raise TableViolation(f"impossible row S_-v=[{po}], S_v=[{ps}] for m={m}")
    db, kind, dl = row
    return m + db, ComponentType(kind, m + dl)


def check_type_transition(before: Sequence[tuple[ComponentType, str]], after: ComponentType,
                          assigned_bin: int) -> bool:
    """Whether one arrival matches the applicable table row (bin and resulting type)."""
    b, ct = expected_transition(before)
    return b == assigned_bin and (ct.kind, ct.ell) == (after.kind, after.ell)


class TypeInvariantError(AssertionError):
    pass


class CbipTypeMonitor:
    """Incremental check of the CBIP structure claims along a presentation.

    Keeps, for each component, the bin sets of its two sides and its type; after
    every arrival it checks the table row, the continuity of the type
    parameter, and (when ``kappa`` is given) that every ell is <= 2 kappa with at
    most one component having ell in {2 kappa - 1, 2 kappa}.
    """

    def __init__(self, kappa: Optional[int] = None):
        self.kappa = kappa
        self.comp_of: list[int] = []
        self.side_of: list[int] = []
        self.members: dict[int, tuple[list[int], list[int]]] = {}
        self.side_bins: dict[int, tuple[set[int], set[int]]] = {}
        self.types: dict[int, tuple[ComponentType, bool]] = {}  # (type, side 0 is A)
        self.ell_counts: Counter[int] = Counter()
        self.max_ell_seen = 0
        self.events = 0

    def _set_type(self, cid: int) -> ComponentType:
        x, y = self.side_bins[cid]
        match = type_from_bin_sets(x, y)
        if match is None:
            raise TypeInvariantError(f"component with side bins {sorted(x)} / {sorted(y)} is untypeable")
        kind, ell, x_is_a = match
        ct = ComponentType(kind, ell)
        self.types[cid] = (ct, x_is_a)
        self.ell_counts[ell] += 1
        return ct

    def _drop(self, cid: int) -> None:
        ct, _ = self.types.pop(cid)
        self.ell_counts[ct.ell] -= 1
        del self.members[cid], self.side_bins[cid]

    def observe(self, step: PresentationStep, b: int) -> ComponentType:
        v = step.vertex
        if v != len(self.comp_of):
            raise ValueError(f"expected vertex {len(self.comp_of)}, got {v}")
        hits: dict[int, int] = {}
        for u in step.pre_neighborhood:
            cid, side = self.comp_of[u], self.side_of[u]
            if hits.setdefault(cid, side) != side:
                raise NotBipartiteComponent(f"vertex {v} closes an odd cycle")
        before = []
        for cid, side in hits.items():
            ct, x_is_a = self.types[cid]
            before.append((ct, "A" if (side == 0) == x_is_a else "B"))
        m = max((ct.ell for ct, _ in before), default=2)
        exp_bin, exp_type = expected_transition(before)

        # merge into the largest touched component, v opposite to the hit sides
        if hits:
            host = max(hits, key=lambda c: len(self.members[c][0]) + len(self.members[c][1]))
            host_side = hits[host]
            for cid, side in hits.items():
                if cid == host:
                    continue
                flip = side != host_side
                mem, bs = self.members[cid], self.side_bins[cid]
                for s in (0, 1):
                    t = s ^ flip
                    for u in mem[s]:
                        self.comp_of[u] = host
                        self.side_of[u] = t
                    self.members[host][t].extend(mem[s])
                    self.side_bins[host][t].update(bs[s])
                self._drop(cid)
            ct, _ = self.types.pop(host)
            self.ell_counts[ct.ell] -= 1
            vside = 1 - host_side
        else:
            host = v
            self.members[host] = ([], [])
            self.side_bins[host] = (set(), set())
            vside = 0
        self.comp_of.append(host)
        self.side_of.append(vside)
        self.members[host][vside].append(v)
        self.side_bins[host][vside].add(b)
        after = self._set_type(host)
        self.events += 1

        if b != exp_bin or (after.kind, after.ell) != (exp_type.kind, exp_type.ell):
            raise TypeInvariantError(
                f"vertex {v}: got bin {b} / {after}, table predicts bin {exp_bin} / {exp_type}")
        if len(hits) >= 2:
            rise = after.ell - m
            if not 0 <= rise <= 2:
                raise TypeInvariantError(f"vertex {v}: type parameter jumped from {m} to {after.ell}")
            if rise > 0 and sum(1 for ct, _ in before if ct.ell >= m - 1) < 2:
                raise TypeInvariantError(f"vertex {v}: type parameter rose with < 2 large components")
        self.max_ell_seen = max(self.max_ell_seen, after.ell)
        if self.kappa is not None:
            top = 2 * self.kappa
            if after.ell > top:
                raise TypeInvariantError(f"vertex {v}: {after} exceeds ell <= {top}")
            if self.ell_counts[top - 1] + self.ell_counts[top] > 1:
                raise TypeInvariantError(f"vertex {v}: two components with ell in {{{top - 1}, {top}}}")
        return after

    def current_types(self) -> list[ComponentType]:
        return [ct for ct, _ in self.types.values()]
