"""Online colorers: FirstFit, CBIP and a seeded random baseline.

Colorers only ever see ``PresentationStep`` objects, one at a time, and answer
with a 1-based bin index. They never see adversary colors or future vertices.
"""

from __future__ import annotations

import random
from typing import Iterable

from .graph_core import ComponentTracker, NotBipartiteError, PresentationStep


def smallest_missing(used: Iterable[int]) -> int:
    """min(N \\ used) over positive integers."""
    used = set(used)
    b = 1
    while b in used:
        b += 1
    return b


class OnlineColorer:
    name = "colorer"

    def __init__(self):
        self.bins: list[int] = []

    def decide(self, step: PresentationStep) -> int:
        if step.vertex != len(self.bins):
            raise ValueError(f"{self.name}: expected vertex {len(self.bins)}, got {step.vertex}")
        b = self._choose(step)
        self.bins.append(b)
        return b

    def _choose(self, step: PresentationStep) -> int:
        raise NotImplementedError

    def run(self, steps: Iterable[PresentationStep]) -> list[int]:
        return [self.decide(s) for s in steps]

    @property
    def bins_used(self) -> int:
        return len(set(self.bins))


class FirstFit(OnlineColorer):
    name = "firstfit"

    def _choose(self, step):
        return smallest_missing(self.bins[u] for u in step.pre_neighborhood)


class CBIP(OnlineColorer):
    """Least bin absent from the opposite side of the arriving vertex's component.

    The component is taken after the new vertex has been merged in, so it always
    contains the vertex itself.
    """

    name = "cbip"

    def __init__(self):
        super().__init__()
        self.tracker = ComponentTracker()

    def _choose(self, step):
        self.tracker.add(step)
        try:
            _, opposite = self.tracker.side_lists(step.vertex)
        except NotBipartiteError as exc:
            raise NotBipartiteError(f"CBIP requires bipartite input: {exc}") from None
        bins = self.bins
        return smallest_missing(bins[u] for u in opposite)


class SeededBaseline(OnlineColorer):
    """Uniform pseudo-random proper bin among 1..(max bin so far + 1)."""

    name = "baseline"

    def __init__(self, seed: int = 0):
        super().__init__()
        self.seed = seed
        self._rng = random.Random(seed)
        self._max = 0

    def _choose(self, step):
        blocked = {self.bins[u] for u in step.pre_neighborhood}
        options = [b for b in range(1, self._max + 2) if b not in blocked]
        b = self._rng.choice(options)
        self._max = max(self._max, b)
        return b


def first_fit_decide(state: FirstFit, step: PresentationStep) -> int:
    return state.decide(step)


def cbip_decide(state: CBIP, step: PresentationStep) -> int:
    return state.decide(step)


def baseline_decide(state: SeededBaseline, step: PresentationStep) -> int:
    return state.decide(step)


ALGORITHMS = {
    "firstfit": FirstFit,
    "cbip": CBIP,
    "baseline": SeededBaseline,
}


def make_colorer(name: str, seed: int | None = None) -> OnlineColorer:
    try:
        cls = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None
    if cls is SeededBaseline:
        return cls(0 if seed is None else seed)
    return cls()
