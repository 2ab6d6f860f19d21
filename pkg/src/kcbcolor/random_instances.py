"""Random presentations used by the property suites."""

from __future__ import annotations

import random

from .graph_core import ComponentTracker, PresentationStep


def random_presentation(rng: random.Random, n: int, p: float) -> list[PresentationStep]:
    """Erdos-Renyi style: each earlier vertex is a pre-neighbor with probability p."""
    return [PresentationStep.of(v, [u for u in range(v) if rng.random() < p]) for v in range(n)]


def random_kcb_bipartite(rng: random.Random, n: int, kappa: int,
                         p_isolated: float | None = None,
                         max_touch: int | None = None) -> list[PresentationStep]:
    """A random kappa-CB presentation of a bipartite graph.

    Each arrival is isolated (only while fewer than kappa components exist) or
    joins one or more existing components, taking its pre-neighbors from a
    single side of each, so bipartiteness is kept.
    """
    if p_isolated is None:
        p_isolated = rng.uniform(0.05, 0.7)
    tracker = ComponentTracker()
    steps = []
    for v in range(n):
        cc = tracker.component_count
        if cc == 0 or (cc < kappa and rng.random() < p_isolated):
            pre: list[int] = []
        else:
            roots = tracker.roots()
            top = len(roots) if max_touch is None else min(max_touch, len(roots))
            touched = rng.sample(roots, rng.randint(1, top))
            pre = []
            for r in touched:
                side = tracker.side_lists(r)[rng.randrange(2)] or tracker.side_lists(r)[0]
                pre.extend(rng.sample(side, min(len(side), rng.randint(1, 3))))
        step = PresentationStep.of(v, pre)
        tracker.add(step)
        steps.append(step)
    return steps
