"""The four 3D morph operations: graph flip, outer-face change, component
flip, and component skip.  Each returns a certified sequence of keyframes
with the operation's combinatorial postcondition, and each certifies every
step it emits through the exact verifier.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .geometry import Line2, Point2, Point3, Rat, fold_map, rat
from .plane_graph import (
    Drawing2D,
    Graph,
    PlaneEmbedding,
    embedding_from_drawing,
    validate_drawing,
)
from .verifier import StepCertificate, Violation, verify_linear_step

logger = logging.getLogger("morph3d")

Keyframe = tuple[Point3, ...]


class MorphConstructionError(RuntimeError):
    """An operation failed to produce a certified morph."""


@dataclass(frozen=True)
class Morph:
    """A piecewise-linear 3D morph: ordered keyframes over a fixed graph.

    Consecutive keyframes define linear steps (all vertices move at uniform
    speed).  ``metadata`` records the producing operation, parameters and
    step counts.
    """

    graph: Graph
    keyframes: tuple[Keyframe, ...]
    metadata: dict = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return max(len(self.keyframes) - 1, 0)

    def first(self) -> Keyframe:
        return self.keyframes[0]

    def last(self) -> Keyframe:
        return self.keyframes[-1]

    def reversed(self) -> "Morph":
        meta = dict(self.metadata)
        meta["reversed"] = True
        return Morph(self.graph, tuple(reversed(self.keyframes)), meta)


def keyframe_of_drawing(d: Drawing2D) -> Keyframe:
    return tuple(p.lift(0) for p in d.coords)


def drawing_of_keyframe(g: Graph, frame: Keyframe) -> Drawing2D:
    if any(p.z != 0 for p in frame):
        raise ValueError("keyframe does not lie in z=0")
    return Drawing2D(g, tuple(p.drop() for p in frame))


def certify_steps(g: Graph, keyframes: Sequence[Keyframe], *, context: str) -> None:
    """Raise MorphConstructionError on the first step that fails to certify."""
    for idx, (a, b) in enumerate(zip(keyframes, keyframes[1:])):
        result = verify_linear_step(g, a, b)
        if isinstance(result, Violation):
            raise MorphConstructionError(
                f"{context}: step {idx} not crossing-free: {result.message} "
                f"in t-interval {result.interval}"
            )


def concat_morphs(parts: Sequence[Morph], metadata: Optional[dict] = None) -> Morph:
    """Concatenate morphs over the same graph; junction keyframes must match
    exactly and are deduplicated."""
    parts = [m for m in parts if m.keyframes]
    if not parts:
        raise ValueError("nothing to concatenate")
    g = parts[0].graph
    frames: list[Keyframe] = [parts[0].keyframes[0]]
    for m in parts:
        if m.graph.edges != g.edges or m.graph.n != g.n:
            raise ValueError("cannot concatenate morphs over different graphs")
        if m.keyframes[0] != frames[-1]:
            raise ValueError("morphs do not share a junction keyframe")
        frames.extend(m.keyframes[1:])
    meta = metadata or {}
    meta.setdefault("parts", [m.metadata.get("operation", "?") for m in parts])
    return Morph(g, tuple(frames), meta)


def restrict_morph(m: Morph, keep: Sequence[int], new_graph: Graph, *, context: str) -> Morph:
    """Keyframe restriction to a vertex subset (scaffold stripping).

    The restricted morph is re-certified from scratch; certification of the
    wider morph is never assumed to transfer.
    """
    keep = list(keep)
    frames = []
    prev = None
    for frame in m.keyframes:
        cut = tuple(frame[v] for v in keep)
        if cut != prev:
            frames.append(cut)
            prev = cut
    certify_steps(new_graph, frames, context=context)
    meta = dict(m.metadata)
    meta["restricted_from"] = m.graph.n
    return Morph(new_graph, tuple(frames), meta)
