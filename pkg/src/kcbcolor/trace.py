"""Matchup traces: the adaptive adversary/colorer loop and its JSON Lines form.

A trace file has one JSON object per line::

    {"type": "metadata", ...}
    {"type": "record", "v": 1, "pre": [], "bin": 1, "color": 1, "cc": 1}
    ...
    {"type": "colors", "colors": [...]}     # only when colors were deferred
    {"type": "summary", "bins_used": ..., "vertices": ..., "max_components": ...}

Vertex ids are 1-based in files (v_1 is the first arrival) and 0-based in memory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Generator, Optional

from .algorithms import OnlineColorer
from .graph_core import ComponentTracker, NotBipartiteError, OnlineGraph, PresentationStep


class TraceFormatError(ValueError):
    pass


class MatchupError(RuntimeError):
    """A run that could not complete, e.g. CBIP fed a non-bipartite graph."""

    def __init__(self, strategy: str, algorithm: str, step: int, reason: str):
        super().__init__(f"{strategy} vs {algorithm} failed at arrival {step + 1}: {reason}")
        self.strategy = strategy
        self.algorithm = algorithm
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class AdversaryMove:
    step: PresentationStep
    color: Optional[int] = None  # None means deferred to the final color map


# A strategy is a generator: it yields moves, receives the bin chosen for each
# one via send(), and returns the final color map (or None if every move
# carried its color).
MoveStream = Generator[AdversaryMove, int, Optional[dict[int, int]]]


@dataclass
class TraceRecord:
    vertex: int
    pre: tuple[int, ...]
    bin: int
    color: Optional[int]
    components: int

    @property
    def step(self) -> PresentationStep:
        return PresentationStep(self.vertex, frozenset(self.pre))


@dataclass
class MatchupTrace:
    metadata: dict[str, Any]
    records: list[TraceRecord] = field(default_factory=list)
    final_colors: Optional[dict[int, int]] = None
    summary: dict[str, int] = field(default_factory=dict)

    @property
    def steps(self) -> list[PresentationStep]:
        return [r.step for r in self.records]

    @property
    def bins(self) -> dict[int, int]:
        return {r.vertex: r.bin for r in self.records}

    @property
    def colors(self) -> dict[int, int]:
        """Adversary colors, merging per-record colors with the final map."""
        out = {r.vertex: r.color for r in self.records if r.color is not None}
        if self.final_colors:
            out.update(self.final_colors)
        return out

    def graph(self) -> OnlineGraph:
        return OnlineGraph.from_steps(self.steps)

    def compute_summary(self) -> dict[str, int]:
        return {
            "bins_used": len({r.bin for r in self.records}),
            "vertices": len(self.records),
            "max_components": max((r.components for r in self.records), default=0),
        }

    # serialization

    def to_jsonl(self) -> str:
        lines = [_dump({"type": "metadata", **self.metadata})]
        for r in self.records:
            lines.append(_dump({
                "type": "record",
                "v": r.vertex + 1,
                "pre": [u + 1 for u in r.pre],
                "bin": r.bin,
                "color": r.color,
                "cc": r.components,
            }))
        if self.final_colors is not None:
            colors = [self.final_colors.get(v) for v in range(len(self.records))]
            lines.append(_dump({"type": "colors", "colors": colors}))
        lines.append(_dump({"type": "summary", **self.summary}))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "MatchupTrace":
        try:
            objs = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"invalid JSON: {exc}") from None
        if len(objs) < 2:
            raise TraceFormatError("trace needs at least a metadata and a summary line")
        if not all(isinstance(o, dict) for o in objs):
            raise TraceFormatError("every line must be a JSON object")
        head, *body, tail = objs
        if head.get("type") != "metadata" or tail.get("type") != "summary":
            raise TraceFormatError("first line must be metadata and last line summary")
        metadata = {k: v for k, v in head.items() if k != "type"}
        summary = {k: v for k, v in tail.items() if k != "type"}
        trace = cls(metadata=metadata, summary=summary)
        for obj in body:
            kind = obj.get("type")
            if kind == "record":
                if trace.final_colors is not None:
                    raise TraceFormatError("record after color map")
                try:
                    trace.records.append(TraceRecord(
                        vertex=_int(obj["v"]) - 1,
                        pre=tuple(_int(u) - 1 for u in obj["pre"]),
                        bin=_int(obj["bin"]),
                        color=None if obj["color"] is None else _int(obj["color"]),
                        components=_int(obj["cc"]),
                    ))
                except (KeyError, TypeError) as exc:
                    raise TraceFormatError(f"malformed record {obj!r}: {exc}") from None
            elif kind == "colors":
                cols = obj.get("colors")
                if not isinstance(cols, list):
                    raise TraceFormatError("colors line needs a list")
                trace.final_colors = {v: _int(c) for v, c in enumerate(cols) if c is not None}
            else:
                raise TraceFormatError(f"unexpected line type {kind!r}")
        return trace


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TraceFormatError(f"expected an integer, got {x!r}")
    return x


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def play(moves: MoveStream, colorer: OnlineColorer, metadata: dict[str, Any]) -> MatchupTrace:
    """Drive the adaptive loop until the strategy stops, and record everything."""
    graph = OnlineGraph()
    tracker = ComponentTracker()
    trace = MatchupTrace(metadata=dict(metadata))
    strategy = metadata.get("strategy", "?")
    algorithm = metadata.get("algorithm", getattr(colorer, "name", "?"))
    final = None
    try:
        move = next(moves)
        while True:
            step = move.step
            graph.add(step)
            cc = tracker.add(step)
            try:
                b = colorer.decide(step)
            except NotBipartiteError as exc:
                raise MatchupError(strategy, algorithm, step.vertex, str(exc)) from exc
            trace.records.append(TraceRecord(step.vertex, tuple(sorted(step.pre_neighborhood)),
                                             b, move.color, cc))
            move = moves.send(b)
    except StopIteration as stop:
        final = stop.value
    if final is not None:
        trace.final_colors = dict(final)
    trace.summary = trace.compute_summary()
    return trace
