"""Convex drawings with a prescribed outer polygon (exact Tutte solve),
face triangulation by diagonals, chord subdivision, corridor routing inside
faces, and the guard-polygon constructions used by the component operations.

Everything constructed here is gated by exact checks: a drawing that fails
its planarity or convexity verification is never returned silently.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .exactsolve import SingularSystem, solve_exact
from .geometry import (
    Point2,
    Rat,
    SegRel,
    Segment2,
    bbox2,
    cross2,
    orient2d,
    point_on_segment_2d,
    rat,
    segment_intersect_2d,
)
from .plane_graph import (
    Drawing2D,
    Edge,
    Graph,
    PlaneEmbedding,
    check_drawing_planar,
    embedding_from_drawing,
    graph as make_graph,
    norm_edge,
    trace_faces,
    validate_drawing,
)

logger = logging.getLogger("morph3d")


class ConstructionError(RuntimeError):
    """A geometric construction failed its exact verification."""


# -- outer assignments and the Tutte solve ---------------------------------

@dataclass(frozen=True)
class OuterAssignment:
    """Prescribed positions for a boundary cycle, in walk order."""

    cycle: tuple[int, ...]
    positions: tuple[Point2, ...]

    def __post_init__(self) -> None:
        if len(self.cycle) != len(self.positions):
            raise ValueError("cycle and positions must have equal length")
        if len(set(self.cycle)) != len(self.cycle):
            raise ValueError("boundary cycle repeats a vertex")

    def is_strictly_convex(self) -> bool:
        return polygon_strictly_convex(self.positions)


def polygon_strictly_convex(pts: Sequence[Point2]) -> bool:
    n = len(pts)
    if n < 3:
        return False
    turn = 0
    for i in range(n):
        o = orient2d(pts[i], pts[(i + 1) % n], pts[(i + 2) % n])
        if o == 0:
            return False
        if turn == 0:
            turn = o
        elif o != turn:
            return False
    return True


def polygon_convex(pts: Sequence[Point2]) -> bool:
    n = len(pts)
    if n < 3:
        return False
    turn = 0
    for i in range(n):
        o = orient2d(pts[i], pts[(i + 1) % n], pts[(i + 2) % n])
        if o == 0:
            continue
        if turn == 0:
            turn = o
        elif o != turn:
            return False
    return turn != 0


def tutte_draw(
    embedding: PlaneEmbedding,
    outer: OuterAssignment,
    weights: Optional[dict[tuple[int, int], Rat]] = None,
    *,
    check_planar: bool = True,
) -> Drawing2D:
    """Barycentric drawing: boundary fixed on the prescribed polygon, every
    interior vertex placed at the weighted average of its neighbors (exact
    rational solve).  Raises on a singular system or when the exact planarity
    verification fails.
    """
    g = embedding.graph
    boundary = {v: outer.positions[i] for i, v in enumerate(outer.cycle)}
    interior = [v for v in range(g.n) if v not in boundary]
    index = {v: i for i, v in enumerate(interior)}
    adj = g.adjacency()

    def w_of(u: int, v: int) -> Rat:
        if weights is None:
            return Fraction(1)
        return rat(weights[(u, v)])

    rows: list[list[Fraction]] = []
    rhs: list[list[Fraction]] = []
    for v in interior:
        row = [Fraction(0)] * len(interior)
        bx = Fraction(0)
        by = Fraction(0)
        total = Fraction(0)
        for nb in adj[v]:
            w = w_of(v, nb)
            if w <= 0:
                raise ValueError("weights must be positive")
            total += w
            if nb in boundary:
                bx += w * boundary[nb].x
                by += w * boundary[nb].y
            else:
                row[index[nb]] -= w
        row[index[v]] = total
        rows.append(row)
        rhs.append([bx, by])

    try:
        sol = solve_exact(rows, rhs) if interior else []
    except SingularSystem as exc:
        raise ConstructionError(f"Tutte system singular: {exc}") from exc

    coords: list[Optional[Point2]] = [None] * g.n
    for v, pos in boundary.items():
        coords[v] = pos
    for v in interior:
        x, y = sol[index[v]]
        coords[v] = Point2(x, y)
    drawing = Drawing2D(g, tuple(coords))  # type: ignore[arg-type]
    if check_planar:
        issues = check_drawing_planar(drawing)
        if issues:
            raise ConstructionError("Tutte drawing failed planarity: " + issues[0])
    return drawing


def faces_strictly_convex(d: Drawing2D, skip_walks: Iterable[tuple[int, ...]] = ()) -> bool:
    from .plane_graph import embedding_from_drawing, _canon_cycle

    e = embedding_from_drawing(d)
    skip = {_canon_cycle(w) for w in skip_walks}
    skip.add(_canon_cycle(e.outer_walk))
    for walk in trace_faces(e.graph, e.rotation):
        if _canon_cycle(walk) in skip:
            continue
        pts = [d.coords[v] for v in walk]
        if not polygon_strictly_convex(pts):
            return False
    return True


# -- region membership (exact parity test) ---------------------------------

def point_in_walk(coords: Sequence[Point2], walk: Sequence[int], pt: Point2) -> str:
    """Exact location of pt relative to the closed region bounded by the walk:
    "inside", "outside", or "boundary".  Works for weakly simple walks;
    doubled edges cancel in the crossing parity (as they should)."""
    n = len(walk)
    for i in range(n):
        a = coords[walk[i]]
        b = coords[walk[(i + 1) % n]]
        if a == b:
            continue
        if point_on_segment_2d(pt, a, b):
            return "boundary"
    xs = [coords[v].x for v in walk]
    ys = [coords[v].y for v in walk]
    far_x = max(xs) + 1
    slope_idx = 0
    while True:
        # generic ray: from pt to a far point; retry if it grazes a vertex
        far = Point2(far_x, pt.y + Fraction(slope_idx, 97))
        if far == pt:
            slope_idx += 1
            continue
        grazes = False
        crossings = 0
        for i in range(n):
            a = coords[walk[i]]
            b = coords[walk[(i + 1) % n]]
            if a == b:
                continue
            if point_on_segment_2d(a, pt, far) or point_on_segment_2d(b, pt, far):
                grazes = True
                break
            rel = segment_intersect_2d(Segment2(pt, far), Segment2(a, b))
            if rel == SegRel.OVERLAP:
                grazes = True
                break
            if rel in (SegRel.PROPER_CROSSING, SegRel.ENDPOINT_INTERIOR, SegRel.ENDPOINT_TOUCH):
                crossings += 1
        if not grazes:
            return "inside" if crossings % 2 == 1 else "outside"
        slope_idx += 1
        if slope_idx > 4 * n + 8:
            raise ConstructionError("point_in_walk: no generic ray found")


# -- ear-clipping triangulation of a face walk ------------------------------

def _walk_area2(coords: Sequence[Point2], walk: Sequence[int]) -> Fraction:
    total = Fraction(0)
    n = len(walk)
    for i in range(n):
        p = coords[walk[i]]
        q = coords[walk[(i + 1) % n]]
        total += p.x * q.y - q.x * p.y
    return total


def triangulate_walk(
    coords: Sequence[Point2], walk: Sequence[int]
) -> tuple[list[tuple[int, int, int]], list[Edge]]:
    """Triangulate the region bounded by a (weakly) simple closed walk using
    diagonals between walk vertices only.  Returns (triangles, diagonals).

    Every diagonal is validated exactly: it must not cross or overlap any
    walk edge, contain no walk vertex in its interior, and its midpoint must
    lie strictly inside the region.  A valid diagonal lies strictly in the
    face interior, so it can never duplicate an existing graph edge.
    """
    if len(walk) < 3:
        raise ConstructionError("cannot triangulate a walk of length < 3")
    walk = list(walk)
    if _walk_area2(coords, walk) < 0:
        walk.reverse()
    triangles: list[tuple[int, int, int]] = []
    diagonals: list[Edge] = []
    _clip(coords, walk, triangles, diagonals)
    return triangles, diagonals


def _diagonal_ok(coords: Sequence[Point2], walk: Sequence[int], i: int, j: int) -> bool:
    n = len(walk)
    vi, vj = walk[i], walk[j]
    if vi == vj:
        return False
    pi, pj = coords[vi], coords[vj]
    if pi == pj:
        return False
    seg = Segment2(pi, pj)
    for k in range(n):
        a, b = walk[k], walk[(k + 1) % n]
        if coords[a] == coords[b]:
            continue
        rel = segment_intersect_2d(seg, Segment2(coords[a], coords[b]))
        if rel in (SegRel.PROPER_CROSSING, SegRel.OVERLAP):
            return False
        if rel in (SegRel.ENDPOINT_TOUCH, SegRel.ENDPOINT_INTERIOR):
            # touching is fine only at the diagonal's own endpoints
            touch_pts = [p for p in (coords[a], coords[b]) if point_on_segment_2d(p, pi, pj)]
            for p in touch_pts:
                if p != pi and p != pj:
                    return False
            if point_on_segment_2d(pi, coords[a], coords[b]) and pi not in (coords[a], coords[b]):
                return False
            if point_on_segment_2d(pj, coords[a], coords[b]) and pj not in (coords[a], coords[b]):
                return False
    for k in range(n):
        if k in (i, j):
            continue
        p = coords[walk[k]]
        if p in (pi, pj):
            continue
        if point_on_segment_2d(p, pi, pj):
            return False
    mid = Point2((pi.x + pj.x) / 2, (pi.y + pj.y) / 2)
    return point_in_walk(coords, walk, mid) == "inside"


def _clip(coords, walk: list[int], triangles: list, diagonals: list[Edge]) -> None:
    n = len(walk)
    if n == 3:
        if orient2d(coords[walk[0]], coords[walk[1]], coords[walk[2]]) <= 0:
            raise ConstructionError("degenerate triangle in ear clipping")
        triangles.append((walk[0], walk[1], walk[2]))
        return
    for i in range(n):
        a, b, c = walk[i - 1], walk[i], walk[(i + 1) % n]
        pa, pb, pc = coords[a], coords[b], coords[c]
        if pa == pc or orient2d(pa, pb, pc) <= 0:
            continue
        blocked = False
        for k in range(n):
            if k in ((i - 1) % n, i, (i + 1) % n):
                continue
            p = coords[walk[k]]
            if _in_closed_triangle(p, pa, pb, pc):
                blocked = True
                break
        if blocked:
            continue
        if not _diagonal_ok(coords, walk, (i - 1) % n, (i + 1) % n):
            continue
        triangles.append((a, b, c))
        diagonals.append(norm_edge(a, c))
        del walk[i]
        _clip(coords, walk, triangles, diagonals)
        return
    # no ear: exhaustive diagonal search, then split
    n = len(walk)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent on the cycle
            if _diagonal_ok(coords, walk, i, j):
                diagonals.append(norm_edge(walk[i], walk[j]))
                left = walk[i:j + 1]
                right = walk[j:] + walk[:i + 1]
                _clip(coords, left, triangles, diagonals)
                _clip(coords, right, triangles, diagonals)
                return
    raise ConstructionError(f"no valid ear or diagonal in walk of length {n}")


def _in_closed_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool:
    o1 = orient2d(a, b, p)
    o2 = orient2d(b, c, p)
    o3 = orient2d(c, a, p)
    return o1 >= 0 and o2 >= 0 and o3 >= 0


# -- scaffold ----------------------------------------------------------------

@dataclass
class Scaffold:
    """A drawing of the input graph G augmented with construction-only
    vertices and edges.  The restriction to G's ids always reproduces G: base
    vertices are never moved and base edges never removed."""

    base: Drawing2D
    coords: list[Point2] = field(default_factory=list)
    edges: set[Edge] = field(default_factory=set)
    markers: dict[str, tuple[int, ...]] = field(default_factory=dict)
    tags: dict[int, str] = field(default_factory=dict)

    @staticmethod
    def over(base: Drawing2D) -> "Scaffold":
        return Scaffold(base, list(base.coords), set(base.graph.edges))

    @property
    def n(self) -> int:
        return len(self.coords)

    def add_vertex(self, p: Point2, tag: str = "scaffold") -> int:
        self.coords.append(p)
        self.tags[len(self.coords) - 1] = tag
        return len(self.coords) - 1

    def add_edge(self, u: int, v: int) -> None:
        e = norm_edge(u, v)
        if e in self.edges:
            raise ConstructionError(f"duplicate scaffold edge {e}")
        self.edges.add(e)

    def remove_edge(self, u: int, v: int) -> None:
        e = norm_edge(u, v)
        base_edges = set(self.base.graph.edges)
        if e in base_edges:
            raise ConstructionError(f"refusing to remove base edge {e}")
        self.edges.remove(e)

    def graph(self) -> Graph:
        return make_graph(self.n, sorted(self.edges))

    def drawing(self) -> Drawing2D:
        return Drawing2D(self.graph(), tuple(self.coords))

    def validate(self) -> "Scaffold":
        for v, p in enumerate(self.base.coords):
            if self.coords[v] != p:
                raise ConstructionError(f"scaffold moved base vertex {v}")
        for e in self.base.graph.edges:
            if e not in self.edges:
                raise ConstructionError(f"scaffold dropped base edge {e}")
        issues = check_drawing_planar(self.drawing())
        if issues:
            raise ConstructionError("scaffold not planar: " + "; ".join(issues[:3]))
        return self

    def scaffold_vertices(self) -> list[int]:
        return list(range(self.base.graph.n, self.n))


@dataclass(frozen=True)
class FaceSet:
    walks: tuple[tuple[int, ...], ...]
    outer_index: int
    half_edge_face: dict[tuple[int, int], int]

    def face_of_gap(self, arriving_from: int, at: int) -> int:
        """Face of the angular gap entered by the half-edge (arriving_from -> at)."""
        return self.half_edge_face[(arriving_from, at)]

    def walk(self, idx: int) -> tuple[int, ...]:
        return self.walks[idx]


def face_set(d: Drawing2D) -> FaceSet:
    emb = embedding_from_drawing(d)
    walks = trace_faces(d.graph, emb.rotation)
    hef: dict[tuple[int, int], int] = {}
    outer = -1
    for idx, w in enumerate(walks):
        for i in range(len(w)):
            hef[(w[i], w[(i + 1) % len(w)])] = idx
        if _walk_area2(d.coords, w) < 0:
            outer = idx
    if outer < 0:
        raise ConstructionError("no outer face traced")
    return FaceSet(tuple(walks), outer, hef)


# -- enclosing triangle + bridge (bounded outer region) ----------------------

def enclosing_triangle_points(points: Sequence[Point2]) -> tuple[Point2, Point2, Point2]:
    """A right triangle with a vertical right side, strictly containing the
    bounding box inflated by a factor 2."""
    xlo, ylo, xhi, yhi = bbox2(points)
    w = xhi - xlo + 1
    h = yhi - ylo + 1
    xr = xhi + w
    return (
        Point2(xr, ylo - h),            # bottom-right
        Point2(xr, yhi + h),            # top-right
        Point2(xlo - 2 * w, (ylo + yhi) / 2),  # far left
    )


def enclose_with_triangle(s: Scaffold) -> tuple[int, int, int]:
    """Add a surrounding triangle plus a two-segment bridge from the
    drawing's max-x vertex to the bottom-right corner, keeping the scaffold
    connected so every face is bounded by a single closed walk."""
    pts = list(s.coords)
    a, b, c = enclosing_triangle_points(pts)
    star = max(range(s.n), key=lambda v: (s.coords[v].x, s.coords[v].y))
    ia = s.add_vertex(a, "triangle")
    ib = s.add_vertex(b, "triangle")
    ic = s.add_vertex(c, "triangle")
    s.add_edge(ia, ib)
    s.add_edge(ib, ic)
    s.add_edge(ic, ia)
    bend = s.add_vertex(Point2(a.x - Fraction(1, 2), s.coords[star].y), "bridge")
    s.add_edge(star, bend)
    s.add_edge(bend, ia)
    s.markers["triangle"] = (ia, ib, ic)
    s.markers["bridge"] = (star, bend, ia)
    return ia, ib, ic


# -- routing through a face ---------------------------------------------------

def _centroid(coords: Sequence[Point2], tri: tuple[int, int, int]) -> Point2:
    a, b, c = (coords[v] for v in tri)
    return Point2((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)


def route_hugging(
    coords: Sequence[Point2],
    walk: Sequence[int],
    anchor_positions: Sequence[int],
    blocked_sides: Optional[set[Edge]] = None,
) -> list[Point2]:
    """A simple polyline inside a face region from the first anchor vertex to
    the last, passing near every intermediate anchor (walk positions) in
    order.

    The region is triangulated by diagonals; each leg is a BFS in the dual
    graph from the current triangle to the fan of the next anchor's vertex.
    Waypoints alternate triangle centroids and crossed-side midpoints, so
    every polyline segment stays inside one triangle; legs consume their
    triangles, which keeps the whole polyline simple.  Anchoring a route
    along a run of boundary vertices pins its homotopy, which is how the
    guard polygons are kept on the intended side of each other.

    ``blocked_sides`` are real edges the route may never pass through
    (temporary cut edges of synthesized regions remain passable).
    """
    walk = list(walk)
    n = len(walk)
    if _walk_area2(coords, walk) < 0:
        walk = list(reversed(walk))
        anchor_positions = [n - 1 - p for p in anchor_positions]
    if len(anchor_positions) < 2:
        raise ConstructionError("need at least source and destination anchors")
    src = walk[anchor_positions[0]]
    dst = walk[anchor_positions[-1]]
    if src == dst:
        raise ConstructionError("route endpoints coincide")
    triangles, _ = triangulate_walk(coords, walk)
    blocked = blocked_sides or set()

    side_owner: dict[tuple[int, int], list[int]] = {}
    for idx, (x, y, z) in enumerate(triangles):
        for e in (norm_edge(x, y), norm_edge(y, z), norm_edge(z, x)):
            side_owner.setdefault(e, []).append(idx)
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = {i: [] for i in range(len(triangles))}
    for e, owners in side_owner.items():
        if len(owners) == 2 and e not in blocked:
            adj[owners[0]].append((owners[1], e))
            adj[owners[1]].append((owners[0], e))

    from collections import deque

    anchor_vertices = [walk[p] for p in anchor_positions]
    dead: set[int] = set()
    points: list[Point2] = []
    current: Optional[int] = None  # current triangle index

    def bfs(start_set: Sequence[int], goal: Callable[[int], bool], allow_dead: bool) -> Optional[list]:
        prev: dict[int, tuple[Optional[int], Optional[tuple[int, int]]]] = {}
        queue = deque()
        for st in start_set:
            if st not in prev:
                prev[st] = (None, None)
                queue.append(st)
        while queue:
            cur = queue.popleft()
            if goal(cur):
                chain = []
                node = cur
                while prev[node][0] is not None:
                    parent, side = prev[node]
                    chain.append((node, side))
                    node = parent
                chain.append((node, None))
                chain.reverse()
                return chain
            for nxt, side in adj[cur]:
                if nxt in prev:
                    continue
                if not allow_dead and nxt in dead and not goal(nxt):
                    continue
                prev[nxt] = (cur, side)
                queue.append(nxt)
        return None

    for leg in range(1, len(anchor_vertices)):
        target = anchor_vertices[leg]
        goal = lambda t, tv=target: tv in triangles[t]
        if current is None:
            starts = [i for i, t in enumerate(triangles) if anchor_vertices[0] in t]
            if not starts:
                raise ConstructionError("source vertex missing from the triangulation")
        else:
            starts = [current]
        chain = bfs(starts, goal, allow_dead=False)
        if chain is None:
            chain = bfs(starts, goal, allow_dead=True)  # verified geometry will arbitrate
        if chain is None:
            raise ConstructionError("face region is not route-connected")
        for tri_idx, side in chain:
            if side is not None:
                px, py = coords[side[0]], coords[side[1]]
                points.append(Point2((px.x + py.x) / 2, (px.y + py.y) / 2))
            points.append(_centroid(coords, triangles[tri_idx]))
            dead.add(tri_idx)
        current = chain[-1][0]

    path = [coords[src]] + points + [coords[dst]]
    cleaned = [path[0]]
    for p in path[1:]:
        if p != cleaned[-1]:
            cleaned.append(p)
    return cleaned[1:-1]


def route_through_face(
    coords: Sequence[Point2],
    walk: Sequence[int],
    src_pos: int,
    dst_pos: int,
    blocked_sides: Optional[set[Edge]] = None,
) -> list[Point2]:
    """Two-anchor convenience wrapper around :func:`route_hugging`."""
    return route_hugging(coords, walk, [src_pos, dst_pos], blocked_sides)


def outer_region_walk(s: Scaffold) -> tuple[list[Point2], list[int]]:
    """A bounded, weakly-simple replacement for the outer face: the region
    between a temporary enclosing triangle and the drawing, cut open along a
    temporary bridge.  Returns (extended coords, region walk) where indices
    >= s.n refer to temporary points."""
    fs = face_set(s.drawing())
    outer = list(fs.walks[fs.outer_index])
    coords = list(s.coords)
    a, b, c = enclosing_triangle_points(coords)
    star = max(range(s.n), key=lambda v: (coords[v].x, coords[v].y))
    ia = len(coords); coords.append(a)
    ib = len(coords); coords.append(b)
    ic = len(coords); coords.append(c)
    bend = len(coords); coords.append(Point2(a.x - Fraction(1, 2), coords[star].y))
    # the outer walk is clockwise; cut at star and traverse:
    # star -> bend -> A -> B -> C -> A -> bend -> star -> (outer walk) -> star
    k = outer.index(star)
    loop = outer[k:] + outer[:k]  # starts at star
    region = [star, bend, ia, ib, ic, ia, bend] + loop
    area = _walk_area2(coords, region)
    if area < 0:
        # triangle orientation must oppose the clockwise outer walk; flip it
        region = [star, bend, ia, ic, ib, ia, bend] + loop
    return coords, region


def route_in_outer_region(s: Scaffold, src: int, dst: int) -> list[Point2]:
    coords, region = outer_region_walk(s)
    src_pos = region.index(src, 7)  # positions after the bridge prefix
    dst_pos = region.index(dst, 7)
    return route_through_face(coords, region, src_pos, dst_pos, set(s.edges))


# -- spec surface: triangulate_faces and subdivide_chords --------------------

def scaffold_faces(s: Scaffold) -> FaceSet:
    return face_set(s.drawing())


def triangulate_face_of(s: Scaffold, walk: Sequence[int]) -> list[Edge]:
    """Triangulate one face region of the scaffold by adding diagonals."""
    _, diagonals = triangulate_walk(s.coords, list(walk))
    for u, v in diagonals:
        s.add_edge(u, v)
    return diagonals


def triangulate_faces(d: Drawing2D, region: Optional[Sequence[Sequence[int]]] = None) -> Scaffold:
    """Triangulate the given face walks (default: all bounded faces) of a
    drawing.  Added edges are recorded as scaffold-only diagonals."""
    validate_drawing(d)
    s = Scaffold.over(d)
    if region is None:
        fs = face_set(d)
        region = [w for i, w in enumerate(fs.walks) if i != fs.outer_index]
    for walk in region:
        if len(walk) > 3:
            triangulate_face_of(s, walk)
    s.validate()
    return s


# -- guard polygons -----------------------------------------------------------

@dataclass
class Guards:
    """Scaffold plus the inserted guard polygons for a component operation."""

    scaffold: Scaffold
    u: int
    v: int
    inner_vertices: frozenset[int]  # vertices of the guarded components, minus u and v
    c_in: tuple[int, ...]
    c_out: tuple[int, ...]
    c_ext: Optional[tuple[int, ...]]
    p_in_left: tuple[int, ...]  # u .. v inclusive
    p_in_right: tuple[int, ...]


def _insert_path(s: Scaffold, u: int, v: int, bends: Sequence[Point2], tag: str) -> tuple[int, ...]:
    if not bends:
        raise ConstructionError("guard path needs at least one bend")
    ids = [s.add_vertex(p, tag) for p in bends]
    chain = [u] + ids + [v]
    for a, b in zip(chain, chain[1:]):
        s.add_edge(a, b)
    return tuple(ids)


def _route_in_scaffold_face(
    s: Scaffold, fs: FaceSet, face_idx: int, anchor_vertices: Sequence[int]
) -> list[Point2]:
    """Route inside a scaffold face (the outer face goes through a bounded
    synthesized region), hugging the given boundary anchor vertices."""
    blocked = set(s.edges)
    if face_idx == fs.outer_index:
        coords, region = outer_region_walk(s)
        positions = []
        for a in anchor_vertices:
            positions.append(region.index(a, 7))
        return route_hugging(coords, region, positions, blocked)
    walk = list(fs.walks[face_idx])
    positions = [walk.index(a) for a in anchor_vertices]
    return route_hugging(s.coords, walk, positions, blocked)


def _outer_walk_run(fs: FaceSet, start: int, end: int, forward_hint: Optional[int] = None) -> list[int]:
    """Vertices of the outer walk from start to end (inclusive), following the
    walk direction whose first step is ``forward_hint`` when given."""
    walk = list(fs.walks[fs.outer_index])
    n = len(walk)
    k = walk.index(start)
    seq = walk[k:] + walk[:k]
    if forward_hint is not None and n > 1 and seq[1] != forward_hint:
        seq = [start] + list(reversed(seq[1:]))
    run = [start]
    for w in seq[1:]:
        run.append(w)
        if w == end:
            return run
    raise ConstructionError("outer walk run does not reach the endpoint")


def _face_walk_run(walk: Sequence[int], path: Sequence[int]) -> list[int]:
    """The anchor sequence for a path that lies on the face boundary."""
    walk = list(walk)
    n = len(walk)
    k = walk.index(path[0])
    fwd = [walk[(k + t) % n] for t in range(len(path))]
    if fwd == list(path):
        return fwd
    bwd = [walk[(k - t) % n] for t in range(len(path))]
    if bwd == list(path):
        return bwd
    raise ConstructionError("path is not a contiguous run of the face walk")


def _pick_flank_face(s: Scaffold, fs: FaceSet, path: Sequence[int], avoid: frozenset[int]) -> int:
    """Of the two faces flanking a degree-2 path, the one whose walk avoids
    the given vertex set."""
    u, b1 = path[0], path[1]
    cand = {fs.half_edge_face[(u, b1)], fs.half_edge_face[(b1, u)]}
    good = [f for f in cand if not (set(fs.walks[f]) & avoid)]
    if len(good) != 1:
        raise ConstructionError("flank face selection is ambiguous")
    return good[0]


def build_guard_polygons(
    d: Drawing2D,
    u: int,
    v: int,
    inner_range: tuple[int, int],
    mode: str = "op3",
) -> Guards:
    """Insert the guard polygons around split components inner_range=(i, j)
    (1-based, inclusive) of the split pair {u, v}:

    - P_in: a cycle through u and v with the guarded components strictly
      inside and equally many vertices on its two u-v paths,
    - P_out: a cycle through u and v strictly between P_in and the rest,
    - P_ext (mode "op4"): a cycle through u and v with everything else
      strictly inside.

    All polygons are routed through face corridors of the drawing, so they
    meet the drawing exactly in {u, v}; every claimed containment is verified
    with exact point-in-polygon tests before returning.
    """
    from .plane_graph import embedding_from_drawing, ordered_split_components

    if mode not in ("op3", "op4"):
        raise ValueError("mode must be 'op3' or 'op4'")
    validate_drawing(d)
    emb = embedding_from_drawing(d)
    if u not in emb.outer_walk or v not in emb.outer_walk:
        raise ValueError("u and v must lie on the outer face")
    comps = ordered_split_components(d.graph, emb, u, v)
    k = len(comps)
    i, j = inner_range
    if not (1 <= i <= j <= k):
        raise ValueError(f"invalid component range ({i},{j}) for k={k}")
    inner = comps[i - 1 : j]
    inner_vertices = frozenset().union(*(c.vertices for c in inner)) - {u, v}

    s = Scaffold.over(d)
    fs = face_set(d)
    rot = emb.rotation[u]
    owner: dict[Edge, int] = {}
    for idx, c in enumerate(comps):
        for e in c.edges:
            owner[e] = idx
    owner_pos = [owner[norm_edge(u, w)] for w in rot]
    inner_idx = set(range(i - 1, j))
    deg = len(rot)
    outer_list = list(emb.outer_walk)
    u_succ = outer_list[(outer_list.index(u) + 1) % len(outer_list)]
    u_pred = outer_list[(outer_list.index(u) - 1) % len(outer_list)]
    if len(inner_idx) < k:
        p_first = next(
            p for p in range(deg)
            if owner_pos[p] in inner_idx and owner_pos[p - 1] not in inner_idx
        )
    else:
        # every component is guarded: the bundle "starts" at the outer gap
        p_first = rot.index(u_succ)
    inner_arc = sum(1 for p in owner_pos if p in inner_idx)
    p_last = (p_first + inner_arc - 1) % deg

    def route_side(gap_from: int, hug_hint: int) -> list[Point2]:
        """Route a P_in path through the corridor face entered by the
        half-edge (gap_from -> u); the outer face hugs the flank starting
        toward ``hug_hint``."""
        local_fs = face_set(s.drawing())
        face_idx = local_fs.half_edge_face[(gap_from, u)]
        if face_idx == local_fs.outer_index:
            run = _outer_walk_run(local_fs, u, v, forward_hint=hug_hint)
            return _route_in_scaffold_face(s, local_fs, face_idx, run)
        return _route_in_scaffold_face(s, local_fs, face_idx, [u, v])

    left_bends = route_side(rot[p_first - 1], u_succ)
    p_in_left = (u,) + _insert_path(s, u, v, left_bends, "P_in") + (v,)
    right_bends = route_side(rot[p_last], u_pred)
    p_in_right = (u,) + _insert_path(s, u, v, right_bends, "P_in") + (v,)

    # equal vertex counts on the two u-v paths (pad by subdivision)
    def pad(path: tuple[int, ...], other_len: int) -> tuple[int, ...]:
        path = list(path)
        while len(path) < other_len:
            a, b = path[0], path[1]
            pa, pb = s.coords[a], s.coords[b]
            m = s.add_vertex(Point2((pa.x + pb.x) / 2, (pa.y + pb.y) / 2), "P_in")
            s.remove_edge(a, b)
            s.add_edge(a, m)
            s.add_edge(m, b)
            path.insert(1, m)
        return tuple(path)

    if len(p_in_left) < len(p_in_right):
        p_in_left = pad(p_in_left, len(p_in_right))
    elif len(p_in_right) < len(p_in_left):
        p_in_right = pad(p_in_right, len(p_in_left))

    c_in = p_in_left + tuple(reversed(p_in_right[1:-1]))
    s.markers["C_in"] = c_in
    s.markers["P_in_left"] = p_in_left
    s.markers["P_in_right"] = p_in_right

    # P_out flanks P_in on the non-inner side of each path
    out_bends_left = _route_flank(s, face_set(s.drawing()), p_in_left, inner_vertices)
    p_out_left = (u,) + _insert_path(s, u, v, out_bends_left, "P_out") + (v,)
    out_bends_right = _route_flank(s, face_set(s.drawing()), p_in_right, inner_vertices)
    p_out_right = (u,) + _insert_path(s, u, v, out_bends_right, "P_out") + (v,)
    c_out = p_out_left + tuple(reversed(p_out_right[1:-1]))
    s.markers["C_out"] = c_out
    s.markers["P_out_left"] = p_out_left
    s.markers["P_out_right"] = p_out_right

    c_ext: Optional[tuple[int, ...]] = None
    if mode == "op4":
        fs5 = face_set(s.drawing())
        walk5 = fs5.walks[fs5.outer_index]
        if u not in walk5 or v not in walk5:
            raise ConstructionError("outer face lost u or v while building guards")
        run1 = _outer_walk_run(fs5, u, v)
        ext_bends_1 = _route_in_scaffold_face(s, fs5, fs5.outer_index, run1)
        ext_left = (u,) + _insert_path(s, u, v, ext_bends_1, "P_ext") + (v,)
        fs6 = face_set(s.drawing())
        walk6 = list(fs6.walks[fs6.outer_index])
        kv = walk6.index(v)
        nxt = walk6[(kv + 1) % len(walk6)]
        hint = nxt if nxt not in set(ext_left) else walk6[(kv - 1) % len(walk6)]
        run2 = _outer_walk_run(fs6, v, u, forward_hint=hint)
        ext_bends_2 = _route_in_scaffold_face(s, fs6, fs6.outer_index, run2)
        ext_right = (v,) + _insert_path(s, v, u, ext_bends_2, "P_ext") + (u,)
        c_ext = ext_left + ext_right[1:-1]
        s.markers["C_ext"] = c_ext
        s.markers["P_ext_left"] = ext_left
        s.markers["P_ext_right"] = ext_right

    s.validate()
    _verify_guards(s, d, u, v, inner_vertices, c_in, c_out, c_ext)
    return Guards(s, u, v, inner_vertices, c_in, c_out, c_ext, p_in_left, p_in_right)


def _route_flank(s: Scaffold, fs: FaceSet, path: tuple[int, ...], inner_vertices: frozenset[int]) -> list[Point2]:
    face = _pick_flank_face(s, fs, path, inner_vertices)
    if face == fs.outer_index:
        coords, region = outer_region_walk(s)
        positions = [region.index(a, 7) for a in path]
        return route_hugging(coords, region, positions, set(s.edges))
    walk = list(fs.walks[face])
    anchors = _face_walk_run(walk, path)
    positions = []
    n = len(walk)
    kk = walk.index(anchors[0])
    direction = 1 if walk[(kk + 1) % n] == anchors[1] else -1
    for t in range(len(anchors)):
        positions.append((kk + direction * t) % n)
    return route_hugging(s.coords, walk, positions, set(s.edges))


def _verify_guards(s, d, u, v, inner_vertices, c_in, c_out, c_ext) -> None:
    coords = s.coords
    for w in sorted(inner_vertices):
        if point_in_walk(coords, c_in, coords[w]) != "inside":
            raise ConstructionError(f"inner vertex {w} is not strictly inside P_in")
    outer_vertices = set(range(d.graph.n)) - set(inner_vertices) - {u, v}
    for w in sorted(outer_vertices):
        if point_in_walk(coords, c_out, coords[w]) != "outside":
            raise ConstructionError(f"vertex {w} is not strictly outside P_out")
    for w in c_in:
        if w in (u, v):
            continue
        if point_in_walk(coords, c_out, coords[w]) != "inside":
            raise ConstructionError("P_in is not nested inside P_out")
    if c_ext is not None:
        inside_ext = set(range(d.graph.n)) - {u, v}
        for w in sorted(inside_ext):
            if point_in_walk(coords, c_ext, coords[w]) != "inside":
                raise ConstructionError(f"vertex {w} is not strictly inside P_ext")
        for w in c_out:
            if w in (u, v):
                continue
            if point_in_walk(coords, c_ext, coords[w]) != "inside":
                raise ConstructionError("P_out is not nested inside P_ext")


def cycle_chords(s: Scaffold, cycle: Sequence[int]) -> list[Edge]:
    on_cycle = set(cycle)
    cyc_edges = set()
    n = len(cycle)
    for i in range(n):
        cyc_edges.add(norm_edge(cycle[i], cycle[(i + 1) % n]))
    chords = []
    for e in sorted(s.edges):
        if e[0] in on_cycle and e[1] in on_cycle and e not in cyc_edges:
            chords.append(e)
    return chords


def subdivide_chords(s: Scaffold, cycle_marker: str) -> int:
    """Replace every chord (x, y) of the marked cycle by a subdivided path
    x - m - y with m joined to the apexes of the two triangles that flanked
    the chord.  Returns the number of chords removed."""
    cycle = s.markers[cycle_marker]
    chords = cycle_chords(s, cycle)
    if not chords:
        return 0
    fs = scaffold_faces(s)
    count = 0
    for x, y in chords:
        apexes = []
        for idx, walk in enumerate(fs.walks):
            if idx == fs.outer_index or len(walk) != 3:
                continue
            if x in walk and y in walk:
                apex = next(v for v in walk if v not in (x, y))
                apexes.append(apex)
        if len(apexes) != 2:
            raise ConstructionError(
                f"chord {(x, y)} of {cycle_marker} is not flanked by two triangles"
            )
        px, py = s.coords[x], s.coords[y]
        m = s.add_vertex(Point2((px.x + py.x) / 2, (px.y + py.y) / 2), f"chord-{cycle_marker}")
        s.remove_edge(x, y)
        s.add_edge(x, m)
        s.add_edge(m, y)
        s.add_edge(m, apexes[0])
        s.add_edge(m, apexes[1])
        count += 1
        fs = scaffold_faces(s)
    logger.debug("subdivided %d chords of %s", count, cycle_marker)
    return count
