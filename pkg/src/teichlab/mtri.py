"""Subdivision of an ideal triangulation into an m-triangulation, its index
sets, the oriented-small-edge exchange matrix and the resulting seed.

Index conventions.  Points of the m-triangulation of a triangle are written
in barycentric coordinates (x0, x1, x2), x0+x1+x2 = m, xi >= 0, relative to
the triangle's ccw-ordered corners.  Corner points (two zero entries) never
index coordinates.  A point is addressed

  ("t", triangle, (x0, x1, x2))   interior point, all xi >= 1,
  ("e", edge, k)                  k-th point along the edge, 1 <= k <= m-1,

where k is measured from the start of the edge's first stored side.
Points on boundary edges belong to the index set but are frozen.

The small edges of the subdivision that do not lie on a side of the original
triangle are oriented parallel to that side.  Two opposite conventions are
possible; the default ("cw") is the one under which the vertex and edge
coordinate formulas of the flags module are the monomials prescribed by the
exchange matrix.  The m=2 matrix then coincides with the left/right vertex
count of the dual trivalent graph, which `epsilon_from_ribbon` computes
independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .surface import IdealTriangulation, FlipMove, RibbonGraph


Address = tuple


@dataclass(frozen=True)
class ExchangeSeed:
    """Cluster datum (I, J, epsilon) with epsilon skew-symmetric on I."""

    I: tuple
    J: tuple
    epsilon: dict = field(compare=False)

    def __post_init__(self):
        jset = set(self.J)
        if not jset <= set(self.I):
            raise ValueError("J must be a subset of I")
        for (i, j), v in self.epsilon.items():
            if self.epsilon.get((j, i), 0) != -v:
                raise ValueError(f"epsilon not skew-symmetric at ({i}, {j})")

    def eps(self, i, j) -> int:
        return self.epsilon.get((i, j), 0)

    def is_frozen(self, i) -> bool:
        return i not in set(self.J)

    def rows(self):
        return self.I

    def to_json_dict(self):
        triplets = sorted(
            [list(map(_address_str, (i, j))) + [v] for (i, j), v in self.epsilon.items() if v != 0 and (i, j) <= (j, i)],
            key=str)
        return {
            "I": [_address_str(i) for i in self.I],
            "J": [_address_str(j) for j in self.J],
            "epsilon": triplets,
        }


def _address_str(a):
    if isinstance(a, tuple):
        if a and a[0] == "t":
            return f"t:{a[1]}:{','.join(map(str, a[2]))}"
        if a and a[0] == "e":
            return f"e:{a[1]}:{a[2]}"
    return str(a)


def seed_from_matrix(labels, matrix, frozen=()):
    """Seed from a dense integer matrix (row i, column j) with given labels."""
    labels = tuple(labels)
    eps = {}
    n = len(labels)
    for i in range(n):
        for j in range(n):
            if matrix[i][j]:
                eps[(labels[i], labels[j])] = int(matrix[i][j])
    J = tuple(l for l in labels if l not in set(frozen))
    return ExchangeSeed(I=labels, J=J, epsilon=eps)


class MTriangulation:
    """The m-triangulation of an ideal triangulation with its oriented small
    edges and index sets."""

    def __init__(self, t: IdealTriangulation, m: int, orientation: str = "cw"):
        if m < 2:
            raise ValueError("m must be at least 2")
        if orientation not in ("cw", "ccw"):
            raise ValueError("orientation must be 'cw' or 'ccw'")
        self.t = t
        self.m = m
        self.orientation = orientation
        self._index()

    # -- addressing -----------------------------------------------------

    def address(self, triangle: int, bary) -> Address:
        """Canonical address of the m-triangulation point with barycentric
        coordinates `bary` in `triangle`.  Corner points are rejected."""
        x0, x1, x2 = bary
        if x0 + x1 + x2 != self.m or min(x0, x1, x2) < 0:
            raise ValueError(f"{bary} is not a barycentric triple for m={self.m}")
        zeros = [i for i, x in enumerate((x0, x1, x2)) if x == 0]
        if len(zeros) >= 2:
            raise ValueError("corner points do not index coordinates")
        if not zeros:
            return ("t", triangle, (x0, x1, x2))
        s = zeros[0]
        edge = self.t.edge_of_side[(triangle, s)]
        # distance from the side's start corner (s+1): equals x_{s+2}
        k = bary[(s + 2) % 3]
        first = self.t.sides_of_edge[edge][0]
        if first != (triangle, s):
            k = self.m - k
        return ("e", edge, k)

    def occurrences(self, address: Address):
        """All (triangle, barycentric) incarnations of an index."""
        if address[0] == "t":
            return ((address[1], address[2]),)
        _, edge, k = address
        out = []
        for n, (tri, s) in enumerate(self.t.sides_of_edge[edge]):
            kk = k if n == 0 else self.m - k
            bary = [0, 0, 0]
            bary[s] = 0
            bary[(s + 1) % 3] = self.m - kk
            bary[(s + 2) % 3] = kk
            out.append((tri, tuple(bary)))
        return tuple(out)

    def _index(self):
        m = self.m
        idx = set()
        for tri in range(self.t.num_triangles):
            for x0 in range(m + 1):
                for x1 in range(m + 1 - x0):
                    x2 = m - x0 - x1
                    if sum(1 for x in (x0, x1, x2) if x == 0) >= 2:
                        continue
                    idx.add(self.address(tri, (x0, x1, x2)))
        self.index_set = tuple(sorted(idx))
        frozen = {a for a in idx if a[0] == "e" and not self.t.is_internal(a[1])}
        self.frozen = tuple(sorted(frozen))
        self.mutable = tuple(sorted(idx - frozen))
        self._epsilon = self._build_epsilon()

    # -- the oriented small edges and the exchange matrix ------------------

    def small_edges(self, triangle: int):
        """Oriented internal small edges of one triangle, as barycentric pairs.

        With the default convention the arrows parallel to side s run against
        the ccw boundary traversal of that side.
        """
        m = self.m
        arrows = []
        for x0 in range(m + 1):
            for x1 in range(m + 1 - x0):
                x2 = m - x0 - x1
                p = (x0, x1, x2)
                # parallel to side 2 (ccw direction: corner0 -> corner1)
                if x0 >= 1 and x2 >= 1:
                    arrows.append((p, (x0 - 1, x1 + 1, x2)))
                # parallel to side 0 (corner1 -> corner2)
                if x1 >= 1 and x0 >= 1:
                    arrows.append((p, (x0, x1 - 1, x2 + 1)))
                # parallel to side 1 (corner2 -> corner0)
                if x2 >= 1 and x1 >= 1:
                    arrows.append((p, (x0 + 1, x1, x2 - 1)))
        if self.orientation == "cw":
            arrows = [(q, p) for p, q in arrows]
        return arrows

    def _build_epsilon(self):
        eps: dict[tuple[Address, Address], int] = {}
        for tri in range(self.t.num_triangles):
            for p, q in self.small_edges(tri):
                a, b = self.address(tri, p), self.address(tri, q)
                eps[(a, b)] = eps.get((a, b), 0) + 1
                eps[(b, a)] = eps.get((b, a), 0) - 1
        return {k: v for k, v in eps.items() if v != 0}

    def epsilon(self, p: Address, q: Address) -> int:
        return self._epsilon.get((p, q), 0)

    def seed(self) -> ExchangeSeed:
        return ExchangeSeed(I=self.index_set, J=self.mutable, epsilon=dict(self._epsilon))

    def neighbors(self, p: Address):
        return tuple(sorted(q for (a, q), v in self._epsilon.items() if a == p and v))


def m_triangulate(t: IdealTriangulation, m: int, orientation: str = "cw") -> MTriangulation:
    """Build the m-triangulation of an ideal triangulation."""
    return MTriangulation(t, m, orientation)


def exchange_matrix(mt: MTriangulation) -> ExchangeSeed:
    """The seed of an m-triangulation: index sets plus the skew matrix that
    counts oriented small edges between index points."""
    return mt.seed()


def epsilon_from_ribbon(t: IdealTriangulation, orientation: str = "cw"):
    """The m=2 exchange matrix computed directly on the dual trivalent graph:
    +1 for every trivalent vertex where edge j immediately follows edge i in
    ccw order (default convention), summed over vertices.

    Independent of `MTriangulation`; used as a cross-check of the small-edge
    orientation convention.
    """
    rib = RibbonGraph(t)
    eps: dict[tuple[str, str], int] = {}
    sign = 1 if orientation == "cw" else -1
    for v in rib.trivalent_vertices:
        around = rib.incident_edges_ccw(v)
        for k in range(3):
            i, j = around[k], around[(k + 1) % 3]
            if i == j:
                continue
            eps[(i, j)] = eps.get((i, j), 0) + sign
            eps[(j, i)] = eps.get((j, i), 0) - sign
    return {k: v for k, v in eps.items() if v != 0}


# ---------------------------------------------------------------------------
# Transport of indices through a flip
# ---------------------------------------------------------------------------


def simplex_coords(mt: MTriangulation, edge: str, address: Address):
    """Coordinates of an index of the flip quadrilateral at `edge` in the
    4-vertex model, or None when the index lies outside the quadrilateral.

    Model: the quadrilateral corners P1 P2 P3 P4 (ccw) span a simplex
    x1+x2+x3+x4 = m; before the flip the two triangles are the faces x3 = 0
    (triangle t1 = P1 P2 P4, with corner s1 at P1) and x1 = 0 (t2 = P3 P4 P2,
    corner s2 at P3); the old diagonal is x1 = x3 = 0 and the new one
    x2 = x4 = 0.
    """
    (t1, s1), (t2, s2) = mt.t.sides_of_edge[edge]
    for tri, bary in mt.occurrences(address):
        if tri == t1:
            return (bary[s1], bary[(s1 + 1) % 3], 0, bary[(s1 + 2) % 3])
        if tri == t2:
            return (0, bary[(s2 + 2) % 3], bary[s2], bary[(s2 + 1) % 3])
    return None


def flip_index_transport(mt: MTriangulation, move: FlipMove,
                         mt_after: MTriangulation) -> dict:
    """Canonical bijection from the index set before a flip to the one after.

    Indices outside the flipped quadrilateral are fixed; indices inside it
    (including the four sides, whose points keep their planar position but
    may be reparametrized) move by the planar overlay of the two
    subdivisions: in the 4-vertex model this is p -> p + t*(1,-1,1,-1) with
    t = min(x2, x4).
    """
    (t1, s1), (t2, s2) = mt.t.sides_of_edge[move.edge]
    mapping = {}
    for address in mt.index_set:
        coords = simplex_coords(mt, move.edge, address)
        if coords is None:
            mapping[address] = address
            continue
        x1, x2, x3, x4 = coords
        t = min(x2, x4)
        y1, y2, y3, y4 = x1 + t, x2 - t, x3 + t, x4 - t
        # after the flip, triangle slot t1 holds (P1, P2, P3) and slot t2
        # holds (P1, P3, P4); both readings agree on the new diagonal
        if y4 == 0:
            mapping[address] = mt_after.address(t1, (y1, y2, y3))
        else:
            mapping[address] = mt_after.address(t2, (y1, y3, y4))
    if set(mapping.values()) != set(mt_after.index_set):
        raise AssertionError("index transport is not a bijection")
    return mapping
