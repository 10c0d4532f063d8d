"""Configurations of affine flags over the rationals: determinant invariants,
cross- and triple ratios, coordinate extraction and the Plucker-type exchange
identity.

An affine flag in an m-dimensional space is an m x m matrix of rows
v1, ..., vm; the flag's j-dimensional subspace is the span of the first j
rows, and the decoration is the chain of wedge products v1 ^ ... ^ vj.  All
determinant computations are exact and work verbatim over Fraction entries or
over symbolic ring elements.
"""

from __future__ import annotations

import random
from fractions import Fraction


class NonGenericConfiguration(ValueError):
    """A determinant that must not vanish does; names the failing minor."""


# ---------------------------------------------------------------------------
# small exact linear algebra (generic over commutative ring entries)
# ---------------------------------------------------------------------------


def det(rows):
    """Determinant by cofactor expansion; exact for any commutative ring."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        a = rows[0][j]
        if isinstance(a, (int, Fraction)) and a == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return rows[0][0] * 0
    return total


def det_permanent_expansion(rows):
    """Independent determinant oracle: signed sum over all permutations."""
    n = len(rows)
    total = Fraction(0)
    import itertools
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        # count inversions for the signature
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if seen[i] > seen[j])
        term = Fraction(1)
        ok = True
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term if inv % 2 == 0 else -term
    return total


def mat_mul(a, b):
    n, k, m2 = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m2)] for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][t] * v[t] for t in range(len(v))) for i in range(len(a))]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_inv(rows):
    """Inverse of a square matrix by Gauss-Jordan elimination; exact over
    Fraction or any field-like entries supporting /, -, == 0."""
    n = len(rows)
    nz = next((x for r in rows for x in r if x != 0), None)
    if nz is None:
        raise NonGenericConfiguration("matrix is singular")
    one = nz / nz
    zero = one - one
    a = [[x for x in r] + [one if i == j else zero for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise NonGenericConfiguration("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [r[n:] for r in a]


def row_reduce(rows):
    """Row echelon form with first-nonzero pivoting; returns (rref, pivots)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    cols = len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


# ---------------------------------------------------------------------------
# affine flags
# ---------------------------------------------------------------------------


class AffineFlag:
    """An m x m rational matrix whose row prefixes span the flag subspaces."""

    __slots__ = ("rows",)

    def __init__(self, rows, check_unimodular=False):
        rows = [list(r) for r in rows]
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise ValueError("affine flag matrix must be square")
        self.rows = rows
        if check_unimodular and det(rows) != 1:
            raise ValueError("affine flag decoration must have determinant 1")

    @property
    def dim(self):
        return len(self.rows)

    def prefix(self, k):
        return self.rows[:k]

    def rescaled(self, factors):
        """Rescale row j by factors[j] (torus action on the decoration)."""
        return AffineFlag([[factors[i] * x for x in row]
                           for i, row in enumerate(self.rows)])

    def transformed(self, g):
        """Left action: rows become images under the matrix g (row * g^T)."""
        return AffineFlag([mat_vec(g, row) for row in self.rows])

    def __repr__(self):
        return f"AffineFlag({self.rows})"


def random_unimodular(m, rng: random.Random, steps=None):
    """A random SL_m(Z) matrix built from elementary row operations."""
    a = identity(m)
    steps = steps if steps is not None else 3 * m * m
    for _ in range(steps):
        i, j = rng.randrange(m), rng.randrange(m)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
    return a


def random_flag(m, rng: random.Random) -> AffineFlag:
    return AffineFlag(random_unimodular(m, rng))


def stacked_delta(flag_rows_counts):
    """det of the rows v1..va of several flags stacked in the given order.

    flag_rows_counts: iterable of (AffineFlag, count)."""
    rows = []
    for flag, k in flag_rows_counts:
        if k < 0:
            raise ValueError("negative row count")
        rows.extend(flag.prefix(k))
    return det(rows)


def delta_vertex(X: AffineFlag, Y: AffineFlag, Z: AffineFlag, triple):
    """Determinant of x1..xa, y1..yb, z1..zc for a+b+c = m."""
    a, b, c = triple
    if a + b + c != X.dim:
        raise ValueError(f"{triple} does not sum to the flag dimension {X.dim}")
    return stacked_delta([(X, a), (Y, b), (Z, c)])


def delta_edge(X: AffineFlag, Y: AffineFlag, pair):
    a, b = pair
    if a + b != X.dim:
        raise ValueError(f"{pair} does not sum to the flag dimension {X.dim}")
    return stacked_delta([(X, a), (Y, b)])


def delta_quad(X, Y, Z, T, quad):
    a, b, c, d = quad
    if a + b + c + d != X.dim:
        raise ValueError(f"{quad} does not sum to the flag dimension {X.dim}")
    return stacked_delta([(X, a), (Y, b), (Z, c), (T, d)])


def cross_ratio(v1, v2, v3, v4):
    """Cross-ratio of four vectors spanning lines in a 2-dimensional space:
    Delta(1,2) Delta(3,4) / (Delta(1,4) Delta(2,3)).

    Normalized so that (infinity, -1, 0, t) given by (1,0), (-1,1), (0,1),
    (t,1) evaluates to t; invariant under rescaling each vector.
    """
    d = lambda u, v: u[0] * v[1] - u[1] * v[0]
    denom = d(v1, v4) * d(v2, v3)
    if isinstance(denom, (int, Fraction)) and denom == 0:
        raise NonGenericConfiguration("cross-ratio of coincident points")
    return d(v1, v2) * d(v3, v4) / denom


def triple_ratio(A1: AffineFlag, A2: AffineFlag, A3: AffineFlag):
    """Triple ratio of three flags in a 3-dimensional space, written through
    six stacked determinants.  Independent of the affine-flag lifts."""
    if A1.dim != 3:
        raise ValueError("triple ratio requires 3-dimensional flags")
    n1 = delta_vertex(A1, A2, A3, (2, 1, 0))
    n2 = delta_vertex(A1, A2, A3, (0, 2, 1))
    n3 = delta_vertex(A1, A2, A3, (1, 0, 2))
    d1 = delta_vertex(A1, A2, A3, (2, 0, 1))
    d2 = delta_vertex(A1, A2, A3, (1, 2, 0))
    d3 = delta_vertex(A1, A2, A3, (0, 1, 2))
    denom = d1 * d2 * d3
    if isinstance(denom, (int, Fraction)) and denom == 0:
        raise NonGenericConfiguration("degenerate triple of flags")
    return n1 * n2 * n3 / denom


def ptolemy_verify(X, Y, Z, T, abar):
    """Check the exchange identity for a quadruple of affine flags:

        D_{a+1100} D_{a+0011} + D_{a+1001} D_{a+0110} = D_{a+1010} D_{a+0101}

    for abar summing to m-2.  Returns (holds, residual)."""
    a = tuple(abar)
    if sum(a) != X.dim - 2 or min(a) < 0:
        raise ValueError("abar must be non-negative and sum to m-2")

    def D(shift):
        return delta_quad(X, Y, Z, T, tuple(x + s for x, s in zip(a, shift)))

    lhs = D((1, 1, 0, 0)) * D((0, 0, 1, 1)) + D((1, 0, 0, 1)) * D((0, 1, 1, 0))
    rhs = D((1, 0, 1, 0)) * D((0, 1, 0, 1))
    residual = lhs - rhs
    holds = residual == 0 if not hasattr(residual, "is_zero") else residual.is_zero()
    return holds, residual


# ---------------------------------------------------------------------------
# quotient configurations
# ---------------------------------------------------------------------------


def quotient_map(subspace_rows, dim):
    """Exact projection V -> V/W for W spanned by subspace_rows.

    Returns a function sending a vector to its coordinates in the complement
    basis determined by row reduction with first-nonzero pivoting.
    """
    rref, pivots = row_reduce(subspace_rows)
    rref = [r for r in rref if any(x != 0 for x in r)]
    if len(rref) != len(subspace_rows):
        raise NonGenericConfiguration("subspace rows are linearly dependent")
    free = [c for c in range(dim) if c not in pivots]

    def project(v):
        v = list(v)
        for row, piv in zip(rref, pivots):
            if v[piv] != 0:
                f = v[piv]
                v = [x - f * y for x, y in zip(v, row)]
        return [v[c] for c in free]

    return project


def induced_flag(flag: AffineFlag, skip: int, project, qdim: int) -> AffineFlag:
    """The flag induced in a quotient V/W when the first `skip` rows of the
    flag lie in W: rows skip+1, ..., skip+qdim project to a basis chain."""
    rows = [project(r) for r in flag.rows[skip:skip + qdim]]
    return AffineFlag(rows)


# ---------------------------------------------------------------------------
# coordinate charts
# ---------------------------------------------------------------------------


class CoordinateChart:
    """A triangulation together with one affine flag per triangle corner.

    `flags` maps either vertex names or corners (t, c) to AffineFlag; vertex
    names are resolved through the triangulation.  Per-corner assignment is
    what monodromy reconstruction produces on surfaces where a vertex class
    sees different flag lifts at different corners.
    """

    def __init__(self, triangulation, m, flags):
        self.t = triangulation
        self.m = m
        self.corner_flag = {}
        for t in range(triangulation.num_triangles):
            for c in range(3):
                name = triangulation.corners[t][c]
                if (t, c) in flags:
                    self.corner_flag[(t, c)] = flags[(t, c)]
                elif name in flags:
                    self.corner_flag[(t, c)] = flags[name]
                else:
                    raise ValueError(f"no flag for corner {(t, c)} (vertex {name})")

    def triangle_flags(self, tri):
        return tuple(self.corner_flag[(tri, c)] for c in range(3))


def _vertex_x(chart: CoordinateChart, tri, bary):
    """Vertex coordinate at an interior point: the alternating product of the
    six surrounding determinants, with flags read clockwise."""
    F0, F1, F2 = chart.triangle_flags(tri)
    # clockwise reading: (X, Y, Z) at corners (0, 2, 1)
    X, Y, Z = F0, F2, F1
    a, b, c = bary[0], bary[2], bary[1]
    num = (delta_vertex(X, Y, Z, (a - 1, b + 1, c))
           * delta_vertex(X, Y, Z, (a, b - 1, c + 1))
           * delta_vertex(X, Y, Z, (a + 1, b, c - 1)))
    den = (delta_vertex(X, Y, Z, (a + 1, b - 1, c))
           * delta_vertex(X, Y, Z, (a, b + 1, c - 1))
           * delta_vertex(X, Y, Z, (a - 1, b, c + 1)))
    if isinstance(den, (int, Fraction)) and den == 0:
        raise NonGenericConfiguration(
            f"non-generic configuration at vertex index {(tri, bary)}")
    return num / den


def _edge_x(chart: CoordinateChart, edge, k):
    """Edge coordinate at the k-th point of an internal edge.

    Quadrilateral (P1, P2, P3, P4) ccw with the edge running P2 -> P4 in the
    first triangle's frame; the point sits k steps from P2.  The four flags
    enter as (X, Y, Z, T) = (P2, P1, P4, P3) and the exponent pair is
    (m-k, k) at (X, Z).
    """
    t = chart.t
    (t1, s1), (t2, s2) = t.sides_of_edge[edge]
    m = chart.m
    f1 = chart.corner_flag[(t1, s1)]
    f2 = chart.corner_flag[(t1, (s1 + 1) % 3)]
    f3 = chart.corner_flag[(t2, s2)]
    f4 = chart.corner_flag[(t1, (s1 + 2) % 3)]
    X, Y, Z, T = f2, f1, f4, f3
    a, b = m - k, k
    num = (delta_vertex(X, Z, T, (a, b - 1, 1))
           * delta_vertex(X, Y, Z, (a - 1, 1, b)))
    den = (delta_vertex(X, Z, T, (a - 1, b, 1))
           * delta_vertex(X, Y, Z, (a, 1, b - 1)))
    if isinstance(den, (int, Fraction)) and den == 0:
        raise NonGenericConfiguration(
            f"non-generic configuration at edge index ({edge}, {k})")
    return num / den


def x_coordinates(chart: CoordinateChart, mt=None):
    """All X-coordinates of the chart, indexed by the mutable index set of
    its m-triangulation."""
    from .mtri import m_triangulate

    mt = mt or m_triangulate(chart.t, chart.m)
    out = {}
    for address in mt.mutable:
        if address[0] == "t":
            out[address] = _vertex_x(chart, address[1], address[2])
        else:
            out[address] = _edge_x(chart, address[1], address[2])
    return out


def a_coordinates(chart: CoordinateChart, mt=None):
    """All determinant coordinates of the chart, indexed by the full index
    set.  Vertex points use the stored ccw corner order; edge points stack
    (m-k) rows of the flag at the edge start and k rows at the end."""
    from .mtri import m_triangulate

    mt = mt or m_triangulate(chart.t, chart.m)
    out = {}
    for address in mt.index_set:
        if address[0] == "t":
            tri, bary = address[1], address[2]
            F0, F1, F2 = chart.triangle_flags(tri)
            out[address] = delta_vertex(F0, F1, F2, bary)
        else:
            _, edge, k = address
            (t1, s1) = mt.t.sides_of_edge[edge][0]
            start = chart.corner_flag[(t1, (s1 + 1) % 3)]
            end = chart.corner_flag[(t1, (s1 + 2) % 3)]
            out[address] = delta_edge(start, end, (chart.m - k, k))
    return out


def x_from_epsilon_product(chart: CoordinateChart, mt, address, a_values):
    """|X_address| computed as the epsilon-monomial in the unsigned
    determinant coordinates; cross-check for the closed formulas."""
    num = den = Fraction(1)
    for (p, q), v in mt._epsilon.items():
        if p != address or v == 0:
            continue
        val = abs(a_values[q])
        if val == 0:
            raise NonGenericConfiguration(f"vanishing minor at {q}")
        if v > 0:
            num *= val ** v
        else:
            den *= val ** (-v)
    return num / den
