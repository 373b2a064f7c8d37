"""Plane graphs: rotation systems, embeddings extracted from exact drawings,
split pairs and split components, block-cut-vertex trees, and the catalog of
parallel/rigid compositions used by the morph planner.

Vertices are dense ids 0..n-1 and graphs are simple (no loops or multi-edges).
All geometric tests go through the exact predicates in
:mod:`morph3d.geometry`; nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import (
    Point2,
    SegRel,
    Segment2,
    cross2,
    dot2,
    orient2d,
    segment_intersect_2d,
    point_on_segment_2d,
)

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            e = norm_edge(u, v)
            if e in seen:
                raise ValueError(f"multi-edge {e}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(norm_edge(u, v) for u, v in self.edges)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in set(self.edges)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)


def graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, tuple(tuple(e) for e in edges))


def connected_components(g: Graph) -> list[list[int]]:
    adj = g.adjacency()
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[tuple[Edge, ...], ...]  # edge sets, sorted deterministically
    cut_vertices: tuple[int, ...]
    adjacency: tuple[tuple[str, int, int], ...]  # ("bc", block index, cut vertex)

    def block_vertices(self, idx: int) -> tuple[int, ...]:
        vs = set()
        for u, v in self.blocks[idx]:
            vs.add(u)
            vs.add(v)
        return tuple(sorted(vs))

    @property
    def leaf_blocks(self) -> tuple[int, ...]:
        degree = [0] * len(self.blocks)
        for _, b, _ in self.adjacency:
            degree[b] += 1
        return tuple(i for i, d in enumerate(degree) if d <= 1)


def block_cut_tree(g: Graph) -> BlockCutTree:
    """Standard biconnected-component decomposition (iterative Tarjan).

    Blocks are ordered by their smallest contained vertex id, then edge list.
    """
    if not is_connected(g):
        raise ValueError("block_cut_tree requires a connected graph")
    adj = g.adjacency()
    disc = [-1] * g.n
    low = [0] * g.n
    timer = 0
    edge_stack: list[Edge] = []
    blocks: list[set[Edge]] = []
    cut: set[int] = set()

    for root in range(g.n):
        if disc[root] != -1:
            continue
        stack = [(root, -1, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] == -1:
                    edge_stack.append(norm_edge(u, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    if u == root:
                        root_children += 1
                    stack.append((w, u, iter(adj[w])))
                    advanced = True
                    break
                elif disc[w] < disc[u]:
                    edge_stack.append(norm_edge(u, w))
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                pu = stack[-1][0]
                low[pu] = min(low[pu], low[u])
                if low[u] >= disc[pu]:
                    block: set[Edge] = set()
                    e = norm_edge(pu, u)
                    while edge_stack:
                        top = edge_stack.pop()
                        block.add(top)
                        if top == e:
                            break
                    if block:
                        blocks.append(block)
                    if pu != root or root_children > 1:
                        cut.add(pu)
    if g.n == 1:
        return BlockCutTree(((),), (), ())

    ordered = sorted(
        (tuple(sorted(b)) for b in blocks),
        key=lambda b: (min(min(e) for e in b), b),
    )
    adjacency = []
    for i, b in enumerate(ordered):
        vs = set()
        for u, v in b:
            vs.add(u)
            vs.add(v)
        for c in sorted(cut):
            if c in vs:
                adjacency.append(("bc", i, c))
    return BlockCutTree(tuple(ordered), tuple(sorted(cut)), tuple(adjacency))


def is_biconnected(g: Graph) -> bool:
    if g.n < 3:
        return g.n == 2 and g.m == 1
    if not is_connected(g):
        return False
    t = block_cut_tree(g)
    return len(t.blocks) == 1 and not t.cut_vertices


# -- drawings ---------------------------------------------------------------

@dataclass(frozen=True)
class Drawing2D:
    graph: Graph
    coords: tuple[Point2, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.graph.n:
            raise ValueError("coordinate count does not match vertex count")

    def point(self, v: int) -> Point2:
        return self.coords[v]

    def segment(self, e: Edge) -> Segment2:
        return Segment2(self.coords[e[0]], self.coords[e[1]])

    def translated(self, d: Point2) -> "Drawing2D":
        return Drawing2D(self.graph, tuple(p + d for p in self.coords))


def check_drawing_planar(d: Drawing2D) -> list[str]:
    """Exact straight-line planarity check.  Returns a list of violations
    (empty = valid): distinct vertices coincide, a vertex lies in the
    relative interior of a non-incident edge, or two edges improperly meet.
    """
    issues = []
    g, pts = d.graph, d.coords
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if pts[u] == pts[v]:
                issues.append(f"vertices {u},{v} coincide")
    for u, v in g.edges:
        if pts[u] == pts[v]:
            issues.append(f"edge ({u},{v}) degenerate")
    if issues:
        return issues
    for u, v in g.edges:
        seg = d.segment((u, v))
        for w in range(g.n):
            if w in (u, v):
                continue
            if point_on_segment_2d(pts[w], seg.a, seg.b):
                issues.append(f"vertex {w} lies on edge ({u},{v})")
    for i in range(g.m):
        for j in range(i + 1, g.m):
            e1, e2 = g.edges[i], g.edges[j]
            shared = set(e1) & set(e2)
            rel = segment_intersect_2d(d.segment(e1), d.segment(e2))
            if shared:
                if rel not in (SegRel.ENDPOINT_TOUCH, SegRel.DISJOINT):
                    issues.append(f"adjacent edges {e1},{e2}: {rel.value}")
            elif rel != SegRel.DISJOINT:
                issues.append(f"edges {e1},{e2}: {rel.value}")
    return issues


def validate_drawing(d: Drawing2D) -> Drawing2D:
    issues = check_drawing_planar(d)
    if issues:
        raise ValueError("not a planar straight-line drawing: " + "; ".join(issues[:5]))
    return d


# -- embeddings -------------------------------------------------------------

@dataclass(frozen=True)
class PlaneEmbedding:
    """Rotation system (clockwise neighbor order per vertex) plus the outer
    face boundary walk in clockwise order."""

    graph: Graph
    rotation: tuple[tuple[int, ...], ...]
    outer_walk: tuple[int, ...]

    def rotation_of(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]


def _angular_key(base: Point2):
    """Exact comparator key factory: counterclockwise angular order around
    ``base`` starting from the +x axis."""
    import functools

    def cmp(pa: tuple[int, Point2], pb: tuple[int, Point2]) -> int:
        da = pa[1] - base
        db = pb[1] - base
        ha = 0 if (da.y > 0 or (da.y == 0 and da.x > 0)) else 1
        hb = 0 if (db.y > 0 or (db.y == 0 and db.x > 0)) else 1
        if ha != hb:
            return -1 if ha < hb else 1
        c = cross2(da, db)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return functools.cmp_to_key(cmp)


def _canon_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Canonical rotation of a cyclic sequence (start at the minimum)."""
    if not seq:
        return ()
    k = min(range(len(seq)), key=lambda i: (seq[i], i))
    return tuple(seq[k:]) + tuple(seq[:k])


def cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    return len(a) == len(b) and _canon_cycle(a) == _canon_cycle(b)


def embedding_from_drawing(d: Drawing2D) -> PlaneEmbedding:
    """Extract the rotation system (clockwise angular order) and the outer
    face walk of a valid connected drawing."""
    g = d.graph
    if not is_connected(g):
        raise ValueError("embedding extraction requires a connected graph")
    adj = g.adjacency()
    rotation = []
    for v in range(g.n):
        items = [(w, d.coords[w]) for w in sorted(adj[v])]
        items.sort(key=_angular_key(d.coords[v]))
        ccw = [w for w, _ in items]
        cw = tuple(reversed(ccw))
        rotation.append(_canon_cycle(cw))
    rotation_t = tuple(rotation)
    walks = trace_faces(g, rotation_t)
    outer = None
    for walk in walks:
        if _walk_signed_area2(d, walk) < 0:
            if outer is not None:
                raise ValueError("multiple negative-area faces; invalid drawing")
            outer = walk
    if outer is None:
        raise ValueError("no outer face found; invalid drawing")
    return PlaneEmbedding(g, rotation_t, _canon_cycle(outer))


def _walk_signed_area2(d: Drawing2D, walk: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for i in range(len(walk)):
        p = d.coords[walk[i]]
        q = d.coords[walk[(i + 1) % len(walk)]]
        total += p.x * q.y - q.x * p.y
    return total


def trace_faces(g: Graph, rotation: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Face walks of the rotation system.  With clockwise rotations, interior
    faces come out counterclockwise and the outer face clockwise.

    The next half-edge after (u -> v) is (v -> w) where w follows u in the
    rotation at v.
    """
    index = [{w: i for i, w in enumerate(rot)} for rot in rotation]
    visited: set[tuple[int, int]] = set()
    faces = []
    for u in range(g.n):
        for v in rotation[u]:
            if (u, v) in visited:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in visited:
                visited.add((a, b))
                walk.append(a)
                rot = rotation[b]
                k = index[b][a]
                c = rot[(k + 1) % len(rot)]
                a, b = b, c
            faces.append(tuple(walk))
    return faces


def euler_check(g: Graph, rotation: Sequence[Sequence[int]]) -> bool:
    """n - m + f == 2c with every component traced separately (an isolated
    vertex counts as one face)."""
    comps = connected_components(g)
    faces = len(trace_faces(g, rotation))
    faces += sum(1 for v in range(g.n) if not rotation[v])
    return g.n - g.m + faces == 2 * len(comps)


def validate_embedding(e: PlaneEmbedding) -> PlaneEmbedding:
    g = e.graph
    adj = g.adjacency()
    for v in range(g.n):
        if sorted(e.rotation[v]) != sorted(adj[v]):
            raise ValueError(f"rotation at {v} is not a permutation of its neighbors")
    if not euler_check(g, e.rotation):
        raise ValueError("rotation system is not planar (Euler check failed)")
    walks = [_canon_cycle(w) for w in trace_faces(g, e.rotation)]
    if _canon_cycle(e.outer_walk) not in walks:
        raise ValueError("outer walk is not a traced face of the rotation system")
    return e


def flip_embedding(e: PlaneEmbedding) -> PlaneEmbedding:
    """Reverse every rotation and the outer walk; an involution."""
    return PlaneEmbedding(
        e.graph,
        tuple(_canon_cycle(tuple(reversed(rot))) for rot in e.rotation),
        _canon_cycle(tuple(reversed(e.outer_walk))),
    )


def embeddings_equivalent(a: PlaneEmbedding, b: PlaneEmbedding) -> str:
    """Labeled comparison: "equal", "flip-equal", or "different"."""
    if a.graph.n != b.graph.n or a.graph.edges != b.graph.edges:
        raise ValueError("embeddings are over different graphs")

    def same(x: PlaneEmbedding, y: PlaneEmbedding) -> bool:
        return all(
            cyclic_equal(x.rotation[v], y.rotation[v]) for v in range(x.graph.n)
        ) and cyclic_equal(x.outer_walk, y.outer_walk)

    if same(a, b):
        return "equal"
    if same(flip_embedding(a), b):
        return "flip-equal"
    return "different"


def rotations_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return all(cyclic_equal(ra, rb) for ra, rb in zip(a, b))


# -- split pairs and split components ---------------------------------------

@dataclass(frozen=True)
class SplitComponent:
    vertices: frozenset[int]
    edges: frozenset[Edge]
    is_pair_edge: bool  # True when this component is the edge (u,v) itself

    def signature(self) -> frozenset[Edge]:
        return self.edges


def split_components(g: Graph, u: int, v: int) -> list[SplitComponent]:
    """Split components of {u, v}: each connected component of G - {u, v}
    together with u, v and all edges into them, plus the edge (u,v) itself
    when present.  Raises when {u,v} is not a split pair."""
    if u == v:
        raise ValueError("split pair must be two distinct vertices")
    adj = g.adjacency()
    seen = [False] * g.n
    seen[u] = seen[v] = True
    comps: list[SplitComponent] = []
    for s in range(g.n):
        if seen[s]:
            continue
        stack, comp = [s], {s}
        seen[s] = True
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    stack.append(w)
        vs = comp | {u, v}
        es = frozenset(
            e for e in g.edges
            if (e[0] in comp or e[1] in comp) and e[0] in vs and e[1] in vs
        )
        comps.append(SplitComponent(frozenset(vs), es, False))
    if g.has_edge(u, v):
        comps.append(SplitComponent(frozenset({u, v}), frozenset({norm_edge(u, v)}), True))
    if len(comps) < 2:
        raise ValueError(f"{{{u},{v}}} is not a split pair")
    comps.sort(key=lambda c: sorted(c.edges))
    return comps


def is_split_pair(g: Graph, u: int, v: int) -> bool:
    if u == v:
        return False
    try:
        split_components(g, u, v)
        return True
    except ValueError:
        return False


def ordered_split_components(
    g: Graph, embedding: PlaneEmbedding, u: int, v: int
) -> list[SplitComponent]:
    """Split components in clockwise order around u.

    When u lies on the outer walk the enumeration starts at the component
    incident to the outer face (the paper's G_1).  Otherwise it starts, as a
    policy, at the outer-walk-incident component with the smallest vertex id,
    falling back to the smallest-id component.
    """
    comps = split_components(g, u, v)
    owner: dict[Edge, int] = {}
    for i, c in enumerate(comps):
        for e in c.edges:
            owner[e] = i
    rot = embedding.rotation[u]
    bundle = [owner[norm_edge(u, w)] for w in rot]
    n = len(bundle)

    start_pos = 0
    outer = set(embedding.outer_walk)
    if u in outer:
        # start right after the outer-face gap at u: the walk successor of u
        walk = list(embedding.outer_walk)
        k = walk.index(u)
        succ = walk[(k + 1) % len(walk)]
        start_pos = rot.index(succ)
    else:
        candidates = [i for i, c in enumerate(comps) if (c.vertices - {u, v}) & outer]
        pool = candidates or list(range(len(comps)))
        target = min(pool, key=lambda i: min(comps[i].vertices))
        for pos in range(n):
            if bundle[pos] == target and bundle[pos - 1] != target:
                start_pos = pos
                break

    seen_order: list[int] = []
    for k in range(n):
        b = bundle[(start_pos + k) % n]
        if b not in seen_order:
            seen_order.append(b)
    # contiguity check: every component appears as one cyclic arc
    for idx in range(len(comps)):
        positions = sorted(i for i in range(n) if bundle[i] == idx)
        if not positions:
            raise ValueError(f"component {idx} has no edges at {u}")
        gaps = [(positions[(i + 1) % len(positions)] - positions[i]) % n for i in range(len(positions))]
        if sum(1 for gap in gaps if gap != 1) > 1:
            raise ValueError(f"component bundle at {u} is not contiguous")
    return [comps[i] for i in seen_order]


@dataclass(frozen=True)
class SplitStructure:
    """Catalog of all split pairs with their components plus the parallel and
    rigid composition lists used by the embedding planner."""

    pairs: tuple[tuple[int, int], ...]
    components: dict[tuple[int, int], tuple[SplitComponent, ...]]
    parallel: tuple[tuple[tuple[int, int], int], ...]  # (pair, k >= 3)
    rigid: tuple[tuple[tuple[int, int], SplitComponent], ...]


def composition_catalog(g: Graph) -> SplitStructure:
    """Brute-force enumeration over all vertex pairs (desk scale by design)."""
    if not is_biconnected(g):
        raise ValueError("composition catalog requires a biconnected graph")
    pairs = []
    components = {}
    parallel = []
    rigid = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if not is_split_pair(g, u, v):
                continue
            comps = tuple(split_components(g, u, v))
            pairs.append((u, v))
            components[(u, v)] = comps
            if len(comps) >= 3:
                parallel.append(((u, v), len(comps)))
            for c in comps:
                if c.is_pair_edge:
                    continue
                sub = graph(len(c.vertices), _relabel_edges(c.edges, sorted(c.vertices)))
                if is_biconnected(sub):
                    rigid.append(((u, v), c))
    return SplitStructure(tuple(pairs), components, tuple(parallel), tuple(rigid))


def _relabel_edges(edges: Iterable[Edge], vertex_order: Sequence[int]) -> tuple[Edge, ...]:
    index = {v: i for i, v in enumerate(vertex_order)}
    return tuple(norm_edge(index[u], index[v]) for u, v in edges)


def subgraph_drawing(d: Drawing2D, vertices: Sequence[int], edges: Iterable[Edge]) -> tuple[Drawing2D, dict[int, int]]:
    """Drawing of an induced-by-selection subgraph with dense relabeling;
    returns the drawing and the old->new vertex map."""
    order = sorted(vertices)
    index = {v: i for i, v in enumerate(order)}
    sub = graph(len(order), [(index[u], index[v]) for u, v in edges])
    return Drawing2D(sub, tuple(d.coords[v] for v in order)), index
