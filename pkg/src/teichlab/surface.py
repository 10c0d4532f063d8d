"""Marked surfaces, ideal triangulations, dual ribbon graphs and flips.

Conventions used throughout:

  * a triangle stores its three corners counterclockwise; side ``s`` is the
    side opposite corner ``s`` and is traversed from corner ``(s+1)%3`` to
    corner ``(s+2)%3`` by the counterclockwise boundary orientation;
  * a gluing identifies side (t, s) with side (t2, s2) reversing direction,
    so every gluing set describes an oriented surface; gluing a side to
    itself is rejected;
  * corner (t, (s+1)%3) is identified with corner (t2, (s2+2)%3) and
    corner (t, (s+2)%3) with (t2, (s2+1)%3).

A triangulation is immutable; a flip returns a new one together with a
record of the quadrilateral involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class SurfaceError(ValueError):
    """Invalid combinatorial input (bad gluing, wrong counts, ...)."""


class UnsupportedConfiguration(SurfaceError):
    """Self-folded / degenerate configuration that this library rejects."""


@dataclass(frozen=True)
class MarkedSurface:
    """Genus plus the list of marked-point counts, one entry per hole.

    A hole with zero marked points is drawn as a puncture.
    """

    genus: int
    holes: tuple[int, ...]

    def __post_init__(self):
        if self.genus < 0 or any(k < 0 for k in self.holes):
            raise SurfaceError("genus and marked-point counts must be non-negative")

    @property
    def punctured_boundary_components(self) -> int:
        # each hole contributes one component if unmarked, k arcs otherwise
        return sum(1 if k == 0 else k for k in self.holes)

    def is_hyperbolic(self) -> bool:
        g, n = self.genus, self.punctured_boundary_components
        return g > 1 or (g == 1 and n > 0) or (g == 0 and n >= 3)

    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.holes)


def _norm_side(side):
    t, s = side
    return (int(t), int(s) % 3)


class IdealTriangulation:
    """An oriented triangulated surface with named vertices and edges."""

    def __init__(self, corners, gluings, edge_names=None, surface=None):
        """corners: list of corner-name triples (ccw), one per triangle.
        gluings: iterable of side pairs ((t, s), (t2, s2)); unglued sides are
        boundary.  edge_names: optional map side -> edge id (one per edge).
        """
        self.corners = tuple(tuple(c) for c in corners)
        self.num_triangles = len(self.corners)
        glue: dict[tuple[int, int], tuple[int, int]] = {}
        for a, b in gluings:
            a, b = _norm_side(a), _norm_side(b)
            if a == b:
                raise SurfaceError(f"side {a} glued to itself (non-orientable gluing)")
            for side in (a, b):
                if not (0 <= side[0] < self.num_triangles):
                    raise SurfaceError(f"side {side} refers to a missing triangle")
                if side in glue:
                    raise SurfaceError(f"side {side} glued twice")
            glue[a] = b
            glue[b] = a
        self.gluing = glue
        self.surface = surface

        self._build_edges(edge_names)
        self._build_vertices()
        self._validate()

    # -- construction helpers -------------------------------------------

    def _build_edges(self, edge_names):
        edge_names = dict(edge_names or {})
        sides = [(t, s) for t in range(self.num_triangles) for s in range(3)]
        seen = set()
        self.edge_of_side: dict[tuple[int, int], str] = {}
        self.sides_of_edge: dict[str, tuple] = {}
        counter = itertools.count()
        for side in sides:
            if side in seen:
                continue
            partner = self.gluing.get(side)
            group = (side,) if partner is None else (side, partner)
            seen.update(group)
            name = None
            for g in group:
                if g in edge_names:
                    name = edge_names[g]
            if name is None:
                name = f"e{next(counter)}"
            if name in self.sides_of_edge:
                raise SurfaceError(f"duplicate edge name {name!r}")
            for g in group:
                self.edge_of_side[g] = name
            self.sides_of_edge[name] = group
        self.edges = tuple(sorted(self.sides_of_edge))

    def _build_vertices(self):
        # union-find on corners through the gluing identifications
        parent = {(t, c): (t, c) for t in range(self.num_triangles) for c in range(3)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for (t, s), (t2, s2) in self.gluing.items():
            union((t, (s + 1) % 3), (t2, (s2 + 2) % 3))
            union((t, (s + 2) % 3), (t2, (s2 + 1) % 3))

        classes: dict[tuple[int, int], list] = {}
        for corner in parent:
            classes.setdefault(find(corner), []).append(corner)

        self.vertex_of_corner: dict[tuple[int, int], str] = {}
        self.corners_of_vertex: dict[str, tuple] = {}
        for root, members in classes.items():
            names = {self.corners[t][c] for t, c in members}
            if len(names) > 1:
                raise SurfaceError(f"gluing identifies distinct corner names {sorted(names)}")
            name = names.pop()
            if name in self.corners_of_vertex:
                raise SurfaceError(f"corner name {name!r} used for two distinct vertices")
            self.corners_of_vertex[name] = tuple(sorted(members))
            for corner in members:
                self.vertex_of_corner[corner] = name
        self.vertices = tuple(sorted(self.corners_of_vertex))

    def _validate(self):
        for t in range(self.num_triangles):
            pairs = [(s, self.gluing.get((t, s))) for s in range(3)]
            for s, partner in pairs:
                if partner is not None and partner[0] == t:
                    raise UnsupportedConfiguration(
                        f"triangle {t} has two of its sides identified "
                        "(self-folded triangle: unsupported special configuration)")
        if self.surface is not None:
            ms = self.surface
            if not ms.is_hyperbolic():
                raise SurfaceError("surface is not hyperbolic")
            # Euler count: V - E + T must match the capped surface
            V = len(self.vertices)
            E = len(self.edges)
            boundary_holes = sum(1 for k in ms.holes if k > 0)
            expected = 2 - 2 * ms.genus - boundary_holes
            if V - E + self.num_triangles != expected:
                raise SurfaceError(
                    f"Euler count mismatch: V-E+T = {V - E + self.num_triangles}, "
                    f"expected {expected}")
            if sum(ms.holes) != len(self.boundary_edges()):
                raise SurfaceError("marked-point count does not match boundary edges")

    # -- basic queries ----------------------------------------------------

    def is_internal(self, edge: str) -> bool:
        return len(self.sides_of_edge[edge]) == 2

    def internal_edges(self):
        return tuple(e for e in self.edges if self.is_internal(e))

    def boundary_edges(self):
        return tuple(e for e in self.edges if not self.is_internal(e))

    def edge_endpoints(self, edge: str):
        """Vertex names (start, end) following the first incident side."""
        (t, s) = self.sides_of_edge[edge][0]
        return (self.vertex_of_corner[(t, (s + 1) % 3)],
                self.vertex_of_corner[(t, (s + 2) % 3)])

    def rotate_ccw(self, corner):
        """Next corner counterclockwise around the same vertex, or None at
        the boundary.  Crosses side (t, c+1)."""
        t, c = corner
        partner = self.gluing.get((t, (c + 1) % 3))
        if partner is None:
            return None
        t2, s2 = partner
        return (t2, (s2 + 1) % 3)

    def rotate_cw(self, corner):
        t, c = corner
        partner = self.gluing.get((t, (c + 2) % 3))
        if partner is None:
            return None
        t2, s2 = partner
        return (t2, (s2 + 2) % 3)

    def vertex_fan(self, vertex: str):
        """Corners around a vertex in ccw order.

        Returns (corners, closed): for a puncture the fan is a full cycle
        (closed=True); for a marked point it starts at the clockwise-most
        corner and ends at the boundary.
        """
        start = self.corners_of_vertex[vertex][0]
        corner, closed = start, True
        for _ in range(len(self.corners_of_vertex[vertex]) + 1):
            prev = self.rotate_cw(corner)
            if prev is None:
                closed = False
                break
            corner = prev
            if corner == start:
                break
        fan = [corner]
        for _ in range(len(self.corners_of_vertex[vertex]) - 1):
            nxt = self.rotate_ccw(fan[-1])
            if nxt is None or (closed and nxt == fan[0]):
                break
            fan.append(nxt)
        return tuple(fan), closed

    def is_puncture(self, vertex: str) -> bool:
        _, closed = self.vertex_fan(vertex)
        return closed

    def punctures(self):
        return tuple(v for v in self.vertices if self.is_puncture(v))

    # -- flips -------------------------------------------------------------

    def flip(self, edge: str):
        """Flip the diagonal of the quadrilateral around an internal edge.

        Returns (new_triangulation, FlipMove).  The new diagonal keeps the
        edge id.  Rejected when the edge is a boundary edge, bounds a
        self-folded configuration, or the flip would create one.
        """
        if edge not in self.sides_of_edge:
            raise SurfaceError(f"edge {edge!r} not found")
        if not self.is_internal(edge):
            raise SurfaceError(f"cannot flip boundary edge {edge!r}")
        (t1, s1), (t2, s2) = self.sides_of_edge[edge]
        if t1 == t2:
            raise UnsupportedConfiguration(
                f"edge {edge!r} bounds a self-folded triangle")

        # quadrilateral (ccw): P1 = apex of t1, P2, P3 = apex of t2, P4
        names = self.corners
        P1 = names[t1][s1]
        P2 = names[t1][(s1 + 1) % 3]
        P3 = names[t2][s2]
        P4 = names[t1][(s1 + 2) % 3]
        side_a = (t1, (s1 + 2) % 3)   # P1 -> P2
        side_b = (t2, (s2 + 1) % 3)   # P2 -> P3
        side_c = (t2, (s2 + 2) % 3)   # P3 -> P4
        side_d = (t1, (s1 + 1) % 3)   # P4 -> P1
        quad_edges = tuple(self.edge_of_side[s] for s in (side_a, side_b, side_c, side_d))
        if self.edge_of_side[side_a] == self.edge_of_side[side_b] or \
                self.edge_of_side[side_c] == self.edge_of_side[side_d]:
            raise UnsupportedConfiguration(
                f"flip at {edge!r} would create a self-folded triangle")

        new_corners = list(self.corners)
        new_corners[t1] = (P1, P2, P3)   # sides: 0 = B, 1 = new diagonal, 2 = A
        new_corners[t2] = (P1, P3, P4)   # sides: 0 = C, 1 = D, 2 = new diagonal

        relocation = {side_a: (t1, 2), side_b: (t1, 0),
                      side_c: (t2, 0), side_d: (t2, 1)}

        def moved(side):
            return relocation.get(side, side)

        new_gluings = []
        handled = set()
        for a, b in self.gluing.items():
            if a in handled or b in handled:
                continue
            handled.update((a, b))
            if self.edge_of_side[a] == edge:
                continue
            new_gluings.append((moved(a), moved(b)))
        new_gluings.append(((t1, 1), (t2, 2)))

        edge_names = {}
        for side, name in self.edge_of_side.items():
            if name == edge:
                continue
            edge_names[moved(side)] = name
        edge_names[(t1, 1)] = edge

        flipped = IdealTriangulation(new_corners, new_gluings, edge_names,
                                     surface=self.surface)
        move = FlipMove(edge=edge, quad_vertices=(P1, P2, P3, P4),
                        quad_edges=quad_edges)
        return flipped, move

    # -- dual graph ----------------------------------------------------------

    def ribbon_graph(self):
        return RibbonGraph.from_triangulation(self)

    # -- equality up to relabeling ---------------------------------------------

    def _encode_from(self, root_t, root_rot):
        """Canonical BFS encoding starting at a rooted, rotated triangle."""
        order = {root_t: 0}
        rot = {root_t: root_rot}
        queue = [root_t]
        code = []
        while queue:
            t = queue.pop(0)
            row = []
            for k in range(3):
                s = (k + rot[t]) % 3
                partner = self.gluing.get((t, s))
                if partner is None:
                    row.append(("b",))
                else:
                    t2, s2 = partner
                    if t2 not in order:
                        order[t2] = len(order)
                        rot[t2] = s2
                        queue.append(t2)
                    row.append(("g", order[t2], (s2 - rot[t2]) % 3))
            corners = tuple(self.corners[t][(k + rot[t]) % 3] for k in range(3))
            code.append((tuple(row), corners))
        if len(order) != self.num_triangles:
            return None  # disconnected start (cannot happen for connected surfaces)
        return tuple(code)

    def canonical_key(self):
        """A label-independent key: equal keys <=> isomorphic labeled surfaces
        (vertex names respected, triangle/edge numbering not)."""
        best = None
        for t in range(self.num_triangles):
            for r in range(3):
                enc = self._encode_from(t, r)
                if enc is not None and (best is None or enc < best):
                    best = enc
        return best

    def is_isomorphic_to(self, other: "IdealTriangulation") -> bool:
        return self.canonical_key() == other.canonical_key()

    # -- serialization -------------------------------------------------------

    def to_json_dict(self):
        gl = []
        done = set()
        for a, b in sorted(self.gluing.items()):
            if a in done:
                continue
            done.update((a, b))
            gl.append([list(a), list(b)])
        return {
            "triangles": [list(c) for c in self.corners],
            "gluings": gl,
            "boundary": sorted(self.boundary_edges()),
            "marked_points": sorted(v for v in self.vertices if not self.is_puncture(v)),
            "edge_names": {f"{t},{s}": name for (t, s), name in sorted(self.edge_of_side.items())},
        }

    @classmethod
    def from_json_dict(cls, data, surface=None):
        gluings = [(tuple(a), tuple(b)) for a, b in data.get("gluings", [])]
        edge_names = None
        if "edge_names" in data:
            edge_names = {}
            for key, name in data["edge_names"].items():
                t, s = key.split(",")
                edge_names[(int(t), int(s))] = name
        return cls(data["triangles"], gluings, edge_names, surface=surface)

    def __repr__(self):
        return (f"IdealTriangulation({self.num_triangles} triangles, "
                f"{len(self.internal_edges())} internal edges, "
                f"vertices {list(self.vertices)})")


@dataclass(frozen=True)
class FlipMove:
    """Record of a flip: the edge and the ccw quadrilateral around it.

    quad_vertices = (P1, P2, P3, P4) with the old diagonal P2-P4 and the new
    one P1-P3; quad_edges = (A, B, C, D) the ccw sides P1P2, P2P3, P3P4, P4P1.
    """

    edge: str
    quad_vertices: tuple
    quad_edges: tuple


class RibbonGraph:
    """Dual trivalent graph of an ideal triangulation.

    Vertices are triangles; each carries the ccw cyclic order of its three
    half-edges (by side index).  Boundary edges of the triangulation become
    legs ending in univalent vertices at the marked points.
    """

    def __init__(self, triangulation: IdealTriangulation):
        self.t = triangulation

    @classmethod
    def from_triangulation(cls, t):
        return cls(t)

    @property
    def trivalent_vertices(self):
        return tuple(range(self.t.num_triangles))

    @property
    def edges(self):
        return self.t.edges

    def incident_edges_ccw(self, triangle: int):
        """The three edges at a trivalent vertex in ccw cyclic order."""
        return tuple(self.t.edge_of_side[(triangle, s)] for s in range(3))

    def legs(self):
        return self.t.boundary_edges()

    def faces(self):
        """Face cycles as tuples of (triangle, side) with the face on the left;
        one face per puncture plus one arc per boundary chain."""
        # walk half-edge orbits: from side (t, s), the next side of the same face
        nxt = {}
        for t in range(self.t.num_triangles):
            for s in range(3):
                partner = self.t.gluing.get((t, s))
                if partner is None:
                    continue
                t2, s2 = partner
                # after crossing into t2 over s2, turn to the ccw-next side
                nxt[(t, s)] = (t2, (s2 + 1) % 3)
        faces = []
        seen = set()
        for start in sorted(nxt):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            cur = nxt[start]
            while cur != start:
                cycle.append(cur)
                seen.add(cur)
                cur = nxt[cur]
            faces.append(tuple(cycle))
        return faces

    def face_vertex(self, face):
        """The triangulation vertex a face cycle surrounds."""
        t, s = face[0]
        return self.t.vertex_of_corner[(t, (s + 2) % 3)]


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def polygon_disc(n: int) -> IdealTriangulation:
    """Disc with n >= 3 marked boundary points, fan-triangulated from v1.

    Boundary edges are named b2..b{n+1 mod} as b{i} for the side v_i v_{i+1};
    diagonals d3..d{n-1} for v1 v_i.
    """
    if n < 3:
        raise SurfaceError("a disc needs at least 3 marked points")
    corners = []
    edge_names = {}
    gluings = []
    for j in range(n - 2):
        v = (f"v1", f"v{j + 2}", f"v{j + 3}")
        corners.append(v)
        edge_names[(j, 0)] = f"b{j + 2}"          # v_{j+2} v_{j+3}
    edge_names[(0, 2)] = "b1"                      # v1 v2
    edge_names[(n - 3, 1)] = f"b{n}"               # v_n v1
    for i in range(3, n):
        gluings.append(((i - 3, 1), (i - 2, 2)))   # diagonal v1 v_i
        edge_names[(i - 3, 1)] = f"d{i}"
    return IdealTriangulation(
        corners, gluings, edge_names,
        surface=MarkedSurface(0, (n,)))


def once_punctured_torus() -> IdealTriangulation:
    """Torus with a single puncture: two triangles, edges a, b, c."""
    corners = [("p", "p", "p"), ("p", "p", "p")]
    gluings = [((0, 2), (1, 0)), ((0, 0), (1, 1)), ((0, 1), (1, 2))]
    edge_names = {(0, 2): "a", (0, 0): "b", (0, 1): "c"}
    return IdealTriangulation(corners, gluings, edge_names,
                              surface=MarkedSurface(1, (0,)))


def sphere_with_punctures(n: int) -> IdealTriangulation:
    """Sphere with n >= 3 punctures: the double of a fan-triangulated n-gon.

    Front triangles 0..n-3 and back triangles n-2..2n-5; polygon edges are
    named s{i}, front diagonals d{i}, back diagonals D{i}.
    """
    if n < 3:
        raise SurfaceError("a sphere needs at least 3 punctures")
    m = n - 2
    corners = []
    for j in range(m):
        corners.append((f"p1", f"p{j + 2}", f"p{j + 3}"))
    for j in range(m):
        corners.append((f"p1", f"p{j + 3}", f"p{j + 2}"))
    B = m  # back triangle offset
    gluings = []
    edge_names = {}
    for j in range(m):
        gluings.append(((j, 0), (B + j, 0)))       # polygon edge p_{j+2} p_{j+3}
        edge_names[(j, 0)] = f"s{j + 2}"
    gluings.append(((0, 2), (B, 1)))               # polygon edge p1 p2
    edge_names[(0, 2)] = "s1"
    gluings.append(((m - 1, 1), (B + m - 1, 2)))   # polygon edge p_n p1
    edge_names[(m - 1, 1)] = f"s{n}"
    for i in range(3, n):
        gluings.append(((i - 3, 1), (i - 2, 2)))   # front diagonal p1 p_i
        edge_names[(i - 3, 1)] = f"d{i}"
        gluings.append(((B + i - 3, 2), (B + i - 2, 1)))  # back diagonal
        edge_names[(B + i - 3, 2)] = f"D{i}"
    return IdealTriangulation(corners, gluings, edge_names,
                              surface=MarkedSurface(0, (0,) * n))


_LIBRARY = {
    "triangle": lambda: polygon_disc(3),
    "square": lambda: polygon_disc(4),
    "pentagon": lambda: polygon_disc(5),
    "hexagon": lambda: polygon_disc(6),
    "once_punctured_torus": once_punctured_torus,
    "sphere3": lambda: sphere_with_punctures(3),
    "sphere4": lambda: sphere_with_punctures(4),
    "sphere5": lambda: sphere_with_punctures(5),
}


def named_surface(name: str) -> IdealTriangulation:
    """Built-in surface library used by the CLI and the test-suite."""
    try:
        return _LIBRARY[name]()
    except KeyError:
        raise SurfaceError(f"unknown surface {name!r}; choices: {sorted(_LIBRARY)}")


def build_triangulation(spec) -> IdealTriangulation:
    """Build a validated triangulation from a MarkedSurface or explicit data.

    For a MarkedSurface only the stock families are constructed (discs,
    once-punctured torus, spheres with punctures); anything else must be
    given by explicit gluing data.
    """
    if isinstance(spec, IdealTriangulation):
        return spec
    if isinstance(spec, MarkedSurface):
        if not spec.is_hyperbolic():
            raise SurfaceError(f"{spec} is not hyperbolic")
        if spec.genus == 0 and len(spec.holes) == 1 and spec.holes[0] >= 3:
            return polygon_disc(spec.holes[0])
        if spec.genus == 1 and spec.holes == (0,):
            return once_punctured_torus()
        if spec.genus == 0 and all(k == 0 for k in spec.holes):
            return sphere_with_punctures(len(spec.holes))
        raise SurfaceError(
            f"no stock triangulation for {spec}; provide explicit gluing data")
    if isinstance(spec, dict):
        return IdealTriangulation.from_json_dict(spec)
    raise TypeError(f"cannot build a triangulation from {spec!r}")
