"""Online graphs in the vertex-arrival model and incremental component tracking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class InvalidStepError(ValueError):
    """A presentation step that is inconsistent with the graph presented so far."""


class NotBipartiteError(ValueError):
    """Raised when a bipartition is requested for a component with an odd cycle."""


@dataclass(frozen=True)
class PresentationStep:
    """One arrival: a vertex id and its neighbors among earlier vertices."""

    vertex: int
    pre_neighborhood: frozenset[int] = frozenset()

    def __post_init__(self):
        if not isinstance(self.pre_neighborhood, frozenset):
            object.__setattr__(self, "pre_neighborhood", frozenset(self.pre_neighborhood))

    @classmethod
    def of(cls, vertex: int, pre: Iterable[int] = ()) -> "PresentationStep":
        return cls(vertex, frozenset(pre))


@dataclass
class OnlineGraph:
    steps: list[PresentationStep] = field(default_factory=list)
    adjacency: list[set[int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def m(self) -> int:
        return sum(len(s.pre_neighborhood) for s in self.steps)

    def validate(self, step: PresentationStep) -> None:
        if step.vertex != self.n:
            if 0 <= step.vertex < self.n:
                raise InvalidStepError(f"vertex {step.vertex} was already presented")
            raise InvalidStepError(f"expected vertex id {self.n}, got {step.vertex}")
        for u in step.pre_neighborhood:
            if u == step.vertex:
                raise InvalidStepError(f"self-loop at vertex {u}")
            if not 0 <= u < self.n:
                raise InvalidStepError(f"pre-neighbor {u} of {step.vertex} not yet presented")

    def add(self, step: PresentationStep) -> None:
        self.validate(step)
        self.steps.append(step)
        self.adjacency.append(set(step.pre_neighborhood))
        for u in step.pre_neighborhood:
            self.adjacency[u].add(step.vertex)

    def neighbors(self, v: int) -> set[int]:
        return self.adjacency[v]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, s.vertex) for s in self.steps for u in sorted(s.pre_neighborhood)]

    def prefix(self, i: int) -> "OnlineGraph":
        """The induced subgraph on the first ``i`` arrivals."""
        return OnlineGraph.from_steps(self.steps[:i])

    @classmethod
    def from_steps(cls, steps: Iterable[PresentationStep]) -> "OnlineGraph":
        g = cls()
        for s in steps:
            g.add(s)
        return g

    @classmethod
    def from_pre_neighborhoods(cls, pres: Iterable[Iterable[int]]) -> "OnlineGraph":
        return cls.from_steps(PresentationStep.of(v, pre) for v, pre in enumerate(pres))


class ComponentTracker:
    """Union-find with parity over arrived vertices.

    Each vertex stores its parity relative to its parent; the parity relative to
    the root tells which side of the component's bipartition it is on. Every root
    also keeps the explicit member lists of both sides (merged small into large),
    so ``component_sides`` costs time linear in its output.
    """

    def __init__(self):
        self._parent: list[int] = []
        self._parity: list[int] = []
        self._size: list[int] = []
        self._sides: dict[int, tuple[list[int], list[int]]] = {}
        self._bipartite: dict[int, bool] = {}
        self.component_count = 0
        self.history: list[int] = []

    def __len__(self) -> int:
        return len(self._parent)

    def find(self, v: int) -> tuple[int, int]:
        """Return ``(root, parity of v relative to root)``."""
        path = []
        while self._parent[v] != v:
            path.append(v)
            v = self._parent[v]
        root = v
        # path compression, folding parities from the top down
        acc = 0
        for u in reversed(path):
            acc ^= self._parity[u]
            self._parity[u] = acc
            self._parent[u] = root
        return root, (self._parity[path[0]] if path else 0)

    def _union(self, u: int, v: int) -> None:
        """Merge so that ``u`` and ``v`` end up on opposite sides."""
        ru, pu = self.find(u)
        rv, pv = self.find(v)
        if ru == rv:
            if pu == pv:
                self._bipartite[ru] = False
            return
        if self._size[ru] < self._size[rv]:
            ru, rv, pu, pv = rv, ru, pv, pu
        flip = pu ^ pv ^ 1
        self._parent[rv] = ru
        self._parity[rv] = flip
        self._size[ru] += self._size[rv]
        small = self._sides.pop(rv)
        big = self._sides[ru]
        big[flip].extend(small[0])
        big[1 - flip].extend(small[1])
        self._bipartite[ru] = self._bipartite[ru] and self._bipartite.pop(rv)
        self.component_count -= 1

    def add(self, step: PresentationStep) -> int:
        v = step.vertex
        if v != len(self._parent):
            raise InvalidStepError(f"expected vertex id {len(self._parent)}, got {v}")
        for u in step.pre_neighborhood:
            if not 0 <= u < v:
                raise InvalidStepError(f"pre-neighbor {u} of {v} not yet presented")
        self._parent.append(v)
        self._parity.append(0)
        self._size.append(1)
        self._sides[v] = ([v], [])
        self._bipartite[v] = True
        self.component_count += 1
        for u in sorted(step.pre_neighborhood):
            self._union(v, u)
        self.history.append(self.component_count)
        return self.component_count

    def root(self, v: int) -> int:
        return self.find(v)[0]

    def connected(self, u: int, v: int) -> bool:
        return self.root(u) == self.root(v)

    def is_bipartite(self, v: int) -> bool:
        return self._bipartite[self.root(v)]

    def component(self, v: int) -> list[int]:
        a, b = self._sides[self.root(v)]
        return a + b

    def component_sides(self, v: int) -> tuple[set[int], set[int]]:
        """Bipartition of v's component as ``(same_side, opposite_side)``."""
        root, parity = self.find(v)
        if not self._bipartite[root]:
            raise NotBipartiteError(f"component of vertex {v} contains an odd cycle")
        sides = self._sides[root]
        return set(sides[parity]), set(sides[1 - parity])

    def side_lists(self, v: int) -> tuple[list[int], list[int]]:
        """Like ``component_sides`` but returns the live lists (do not mutate)."""
        root, parity = self.find(v)
        if not self._bipartite[root]:
            raise NotBipartiteError(f"component of vertex {v} contains an odd cycle")
        sides = self._sides[root]
        return sides[parity], sides[1 - parity]

    def roots(self) -> list[int]:
        return list(self._sides)


def add_vertex(graph: OnlineGraph, tracker: ComponentTracker, step: PresentationStep) -> int:
    """Present ``step`` to both structures and return the new component count."""
    graph.add(step)
    return tracker.add(step)


def bfs_component_count(graph: OnlineGraph) -> int:
    seen = [False] * graph.n
    count = 0
    for s in range(graph.n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for w in graph.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count
