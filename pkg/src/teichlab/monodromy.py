"""Reconstruction of framed local systems from X-coordinates, loop
monodromies, trace polynomials, and the explicit rank-2 connections.

The reconstruction uses a basis ("snake") per oriented corner pair of each
triangle: the state (t, i -> j) carries a projective basis whose rows realize
the flag at corner i by prefixes and the flag at corner j by suffixes.  Three
elementary transports connect the states:

  ROT   (t, i->j) => (t, i->k)   a lower-triangular product of elementary
                                 matrices and partial-scalar diagonals in the
                                 triangle's vertex coordinates;
  SWAP  (t, i->j) => (t, j->i)   the reversal  e_r -> (-1)^{r-1} e_{m+1-r};
  CROSS (t, i->j) => (t', i'->j') through the shared edge, a diagonal matrix
                                 in the edge coordinates.

Around every triangle the six states close up into a hexagon whose cycle is
a scalar matrix, and every internal edge closes a rectangle; both are
asserted.  Monodromies are products of elementary transports along loops and
are projective: traces are reported for the unimodular lift when the
determinant is an m-th power, otherwise for the representative normalized to
positive leading coefficient.
"""

from __future__ import annotations

from fractions import Fraction

from .exactalg import LaurentPolynomial, RationalFunction
from .flags import AffineFlag, det, mat_mul, identity, mat_inv, NonGenericConfiguration
from .mtri import m_triangulate
from . import flags as _flags


class ConnectionError_(ValueError):
    pass


# ---------------------------------------------------------------------------
# elementary matrices
# ---------------------------------------------------------------------------


def _one_like(x):
    if isinstance(x, RationalFunction):
        return RationalFunction.from_scalar(x.vars, 1)
    if isinstance(x, LaurentPolynomial):
        return LaurentPolynomial.constant(x.vars, 1)
    return Fraction(1)


def _zero_like(x):
    return _one_like(x) - _one_like(x)


def f_matrix(m, i, one=Fraction(1)):
    """Lower elementary matrix: adds row i to row i+1 (1-indexed)."""
    zero = one - one
    a = [[one if r == c else zero for c in range(m)] for r in range(m)]
    a[i][i - 1] = one
    return a


def h_matrix(m, i, x):
    """diag(x, ..., x, 1, ..., 1) with i leading x entries (1-indexed)."""
    one = _one_like(x)
    zero = one - one
    return [[(x if r < i else one) if r == c else zero for c in range(m)]
            for r in range(m)]


def s_matrix(m, one=Fraction(1)):
    """The basis reversal e_r -> (-1)^{r-1} e_{m+1-r}."""
    zero = one - one
    a = [[zero for _ in range(m)] for _ in range(m)]
    for r in range(m):
        a[r][m - 1 - r] = one if r % 2 == 0 else zero - one
    return a


def snake_matrix(m, vertex_x):
    """Rotation matrix between two snakes sharing a corner.

    `vertex_x` maps triples (alpha, beta, gamma) with sum m-3 to the vertex
    coordinate; for m = 2 no coordinate enters and the result is the single
    elementary matrix.
    """
    one = Fraction(1)
    for v in vertex_x.values():
        one = _one_like(v)
        break
    blocks = None
    for j in range(m - 1, 0, -1):
        block = identity(m) if one == Fraction(1) else [[one if r == c else one - one for c in range(m)] for r in range(m)]
        for i in range(j, m - 1):
            x = vertex_x[(m - i - 2, i - j, j - 1)]
            block = mat_mul(block, h_matrix(m, i + 1, x))
            block = mat_mul(block, f_matrix(m, i, one))
        block = mat_mul(block, f_matrix(m, m - 1, one))
        blocks = block if blocks is None else mat_mul(blocks, block)
    return blocks


def edge_matrix(m, edge_x):
    """diag(x0 x1 ... x_{m-2}, x1 ... x_{m-2}, ..., x_{m-2}, 1) from the
    m-1 coordinates x0..x_{m-2} attached to an edge."""
    one = _one_like(edge_x[0]) if edge_x else Fraction(1)
    zero = one - one
    diag = []
    for r in range(m):
        prod = one
        for a in range(r, m - 1):
            prod = prod * edge_x[a]
        diag.append(prod)
    return [[diag[r] if r == c else zero for c in range(m)] for r in range(m)]


def _scale_rows(mat, factor):
    return [[factor * x for x in row] for row in mat]


def projectively_equal(a, b):
    """True when two square matrices differ by an invertible scalar."""
    n = len(a)
    for r in range(n):
        for c in range(n):
            ok = not (isinstance(b[r][c], (int, Fraction)) and b[r][c] == 0) \
                if isinstance(b[r][c], (int, Fraction)) else not b[r][c].is_zero()
            if ok:
                lam_num, lam_den = a[r][c], b[r][c]
                for i in range(n):
                    for j in range(n):
                        lhs = a[i][j] * lam_den
                        rhs = b[i][j] * lam_num
                        if lhs != rhs:
                            return False
                return True
    raise ValueError("comparison with the zero matrix")


def is_scalar_matrix(a):
    n = len(a)
    return projectively_equal(a, identity(n))


# ---------------------------------------------------------------------------
# the connection
# ---------------------------------------------------------------------------


# the six states of a triangle in hexagon order; entry k is (i, j) and the
# transport k -> k+1 alternates ROT (even k) and SWAP (odd k)
_HEX_ORDER = [(0, 1), (0, 2), (2, 0), (2, 1), (1, 2), (1, 0)]


class FramedLocalSystem:
    """Transport matrices between snake states of a triangulated surface,
    built from X-coordinates (any field-like values: Fraction or
    RationalFunction)."""

    def __init__(self, triangulation, m, x_values, check=True):
        self.t = triangulation
        self.m = m
        self.mt = m_triangulate(triangulation, m)
        self.x = dict(x_values)
        missing = [a for a in self.mt.mutable if a not in self.x]
        if missing:
            raise ConnectionError_(f"missing X-values for {missing[:3]} ...")
        some = next(iter(self.x.values())) if self.x else Fraction(1)
        self._one = _one_like(some)
        if check:
            self.assert_cycle_conditions()

    # elementary transports ------------------------------------------------

    def _vertex_coords_in_frame(self, tri, frame):
        """Vertex X-values of a triangle reindexed by a corner frame
        (A, B, C): alpha+1 rows at A etc."""
        out = {}
        A, B, C = frame
        for alpha in range(self.m - 2):
            for beta in range(self.m - 2 - alpha):
                gamma = self.m - 3 - alpha - beta
                bary = [0, 0, 0]
                bary[A], bary[B], bary[C] = alpha + 1, beta + 1, gamma + 1
                out[(alpha, beta, gamma)] = self.x[("t", tri, tuple(bary))]
        return out

    def rot(self, tri, i, j):
        """Matrix of (tri, i->j) => (tri, i->k)."""
        k = 3 - i - j
        coords = self._vertex_coords_in_frame(tri, (i, j, k))
        return snake_matrix(self.m, coords) if self.m >= 3 else f_matrix(self.m, 1, self._one)

    def swap(self):
        return s_matrix(self.m, self._one)

    def cross(self, tri, i, j):
        """Matrix of (tri, i->j) => (tri', i'->j') through the side opposite
        the third corner; i and j must be the endpoints of that side."""
        s = 3 - i - j
        edge = self.t.edge_of_side[(tri, s)]
        if not self.t.is_internal(edge):
            raise ConnectionError_(f"cannot cross boundary edge {edge}")
        m = self.m
        # the k-th point of the edge counts from the canonical start;
        # crossing from the canonical first side in its traversal direction
        # (i = (s+1)%3 -> j = (s+2)%3) uses x_a = X(point a+1 from start)
        first = self.t.sides_of_edge[edge][0]
        forward = (first == (tri, s)) == (i == (s + 1) % 3)
        xs = []
        for a in range(m - 1):
            kk = a + 1 if forward else m - 1 - a
            xs.append(self.x[("e", edge, kk)])
        return edge_matrix(m, xs)

    def cross_target(self, tri, i, j):
        s = 3 - i - j
        t2, s2 = self.t.gluing[(tri, s)]
        # corner (s+1) of tri is identified with (s2+2) of t2 and vice versa
        m1 = {(s + 1) % 3: (s2 + 2) % 3, (s + 2) % 3: (s2 + 1) % 3}
        return t2, m1[i], m1[j]

    # composite transports --------------------------------------------------

    def hexagon_transport(self, tri, frm, to):
        """Transport matrix between two states of the same triangle, walking
        the hexagon cycle."""
        a = _HEX_ORDER.index(frm)
        b = _HEX_ORDER.index(to)
        g = identity(self.m) if self._one == Fraction(1) else \
            [[self._one if r == c else self._one - self._one for c in range(self.m)] for r in range(self.m)]
        cur = a
        while cur != b:
            i, j = _HEX_ORDER[cur]
            if cur % 2 == 0:
                step = self.rot(tri, i, j)
            else:
                step = self.swap()
            g = mat_mul(step, g)
            cur = (cur + 1) % 6
        return g

    def hexagon_cycle(self, tri):
        g = self.hexagon_transport(tri, (0, 1), (1, 0))
        i, j = _HEX_ORDER[5]
        return mat_mul(self.swap(), g)

    def rectangle_cycle(self, edge):
        (t1, s1), (t2, s2) = self.t.sides_of_edge[edge]
        i1, j1 = (s1 + 1) % 3, (s1 + 2) % 3
        g = self.cross(t1, i1, j1)
        t2_, i2, j2 = self.cross_target(t1, i1, j1)
        g = mat_mul(self.hexagon_transport(t2_, (i2, j2), (j2, i2)), g)
        g = mat_mul(self.cross(t2_, j2, i2), g)
        t1_, j1_, i1_ = self.cross_target(t2_, j2, i2)
        g = mat_mul(self.hexagon_transport(t1_, (j1_, i1_), (i1_, j1_)), g)
        return g

    def assert_cycle_conditions(self):
        for tri in range(self.t.num_triangles):
            if not is_scalar_matrix(self.hexagon_cycle(tri)):
                raise ConnectionError_(f"hexagon cycle at triangle {tri} is not scalar")
        for edge in self.t.internal_edges():
            if not is_scalar_matrix(self.rectangle_cycle(edge)):
                raise ConnectionError_(f"rectangle cycle at edge {edge} is not scalar")

    # loops ------------------------------------------------------------------

    def loop_monodromy(self, edges, start_triangle=None):
        """Monodromy along the closed dual path crossing the given edges.

        `edges` is a cyclic sequence of internal edges; consecutive edges
        (and the last/first pair) must share a triangle.  The result is the
        transport matrix of the full loop read in the frame of the starting
        state, well-defined up to a scalar.
        """
        if not edges:
            return identity(self.m)
        tri = start_triangle
        if tri is None:
            # a triangle containing the first edge, entered by the last one
            (a1, _), *rest = self.t.sides_of_edge[edges[-1]]
            tri = a1
        g = None
        state = None
        for e in edges:
            side = next((s for s in range(3)
                         if self.t.edge_of_side[(tri, s)] == e), None)
            if side is None:
                raise ConnectionError_(f"edge {e} is not a side of triangle {tri}")
            i, j = (side + 1) % 3, (side + 2) % 3
            if state is None:
                state = (tri, i, j)
                start_state = state
                g = identity(self.m) if self._one == Fraction(1) else \
                    [[self._one if r == c else self._one - self._one for c in range(self.m)] for r in range(self.m)]
            else:
                g = mat_mul(self.hexagon_transport(state[0], (state[1], state[2]), (i, j)), g)
            g = mat_mul(self.cross(tri, i, j), g)
            t2, i2, j2 = self.cross_target(tri, i, j)
            state = (t2, i2, j2)
            tri = t2
        if tri != start_state[0]:
            raise ConnectionError_("path does not close up")
        g = mat_mul(self.hexagon_transport(tri, (state[1], state[2]),
                                           (start_state[1], start_state[2])), g)
        return g

    # flags and extraction ----------------------------------------------------

    def local_frames(self, tri):
        """Dominating affine flags of the three corners of a triangle, in the
        frame of the state (tri, 0->1)."""
        flags = {}
        for c in range(3):
            to = (c + 1) % 3
            g = self.hexagon_transport(tri, (0, 1), (c, to))
            flags[(tri, c)] = AffineFlag(g)
        return flags

    def quad_frames(self, edge):
        """Dominating affine flags at the four corners of the quadrilateral
        around an internal edge, all in one frame; returned as a map
        corner (t, c) -> AffineFlag covering both adjacent triangles."""
        (t1, s1), (t2, s2) = self.t.sides_of_edge[edge]
        out = {}
        for c in range(3):
            g = self.hexagon_transport(t1, (0, 1), (c, (c + 1) % 3))
            out[(t1, c)] = AffineFlag(g)
        i, j = (s1 + 1) % 3, (s1 + 2) % 3
        base = mat_mul(self.cross(t1, i, j), self.hexagon_transport(t1, (0, 1), (i, j)))
        t2_, i2, j2 = self.cross_target(t1, i, j)
        for c in range(3):
            g = mat_mul(self.hexagon_transport(t2_, (i2, j2), (c, (c + 1) % 3)), base)
            out[(t2_, c)] = AffineFlag(g)
        return out

    def extract_x(self):
        """Recompute all X-coordinates from the developed flags; the inverse
        of the construction (up to exact equality of values)."""

        class _LocalChart:
            def __init__(self, t, m, corner_flag):
                self.t, self.m, self.corner_flag = t, m, corner_flag

            def triangle_flags(self, tri):
                return tuple(self.corner_flag[(tri, c)] for c in range(3))

        out = {}
        for a in self.mt.mutable:
            if a[0] == "t":
                tri = a[1]
                chart = _LocalChart(self.t, self.m, self.local_frames(tri))
                out[a] = _flags._vertex_x(chart, tri, a[2])
            else:
                edge = a[1]
                chart = _LocalChart(self.t, self.m, self.quad_frames(edge))
                out[a] = _flags._edge_x(chart, edge, a[2])
        return out


def build_connection(triangulation, m, x_values, check=True) -> FramedLocalSystem:
    """Framed local system with the given X-coordinates (all invertible)."""
    return FramedLocalSystem(triangulation, m, x_values, check=check)


def extract_x(system: FramedLocalSystem):
    return system.extract_x()


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


def _matrix_det(mat):
    return det(mat)


def _monomial_mth_root(value, m):
    """The m-th root of +-(rational) * monomial, as RationalFunction, or None."""
    if isinstance(value, RationalFunction):
        nu = value.num.as_unit()
        du = value.den.as_unit()
        if nu is None or du is None:
            return None
        (ne, nc), (de, dc) = nu, du
        exps = tuple(a - b for a, b in zip(ne, de))
        coeff = nc / dc
        if any(e % m for e in exps):
            return None
        root = _fraction_mth_root(abs(coeff), m)
        if root is None:
            return None
        mono = LaurentPolynomial.monomial(value.num.vars,
                                          tuple(e // m for e in exps), root)
        return RationalFunction(mono)
    if isinstance(value, (int, Fraction)):
        root = _fraction_mth_root(abs(Fraction(value)), m)
        return root
    return None


def _fraction_mth_root(q: Fraction, m: int):
    if q <= 0:
        return None

    def iroot(n):
        lo, hi = 0, max(2, int(round(n ** (1.0 / m))) + 2)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** m < n:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** m == n else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def trace_polynomial(system: FramedLocalSystem, edges, start_triangle=None):
    """Trace of the loop monodromy, cleared to a Laurent polynomial.

    The projective monodromy is normalized to the unimodular lift when the
    determinant admits an exact m-th root; the trace is then made sign
    definite positive (trace of a projective matrix is defined up to the
    scalar normalization).  A non-Laurent trace raises.
    """
    g = system.loop_monodromy(edges, start_triangle)
    m = system.m
    d = _matrix_det(g)
    root = _monomial_mth_root(d, m)
    if root is not None and not (isinstance(root, RationalFunction) and root.is_zero()):
        inv = 1 / root if isinstance(root, Fraction) else root.inv()
        g = _scale_rows(g, inv)
    tr = g[0][0]
    for r in range(1, m):
        tr = tr + g[r][r]
    if isinstance(tr, RationalFunction):
        lp = tr.as_laurent()
        if lp is None:
            raise ConnectionError_("trace is not a Laurent polynomial")
    elif isinstance(tr, LaurentPolynomial):
        lp = tr
    else:
        return tr
    if not lp.is_sign_definite():
        return lp
    if lp.terms and next(iter(lp.sorted_terms()))[1] < 0:
        lp = -lp
    return lp


# ---------------------------------------------------------------------------
# explicit rank-2 connections
# ---------------------------------------------------------------------------


def pgl2_x_connection_step(xk, turn, one=Fraction(1)):
    """One step of the rank-2 framed connection: crossing edge k and turning
    left or right; the crossing matrix is [[0, -X_k], [1, 0]] and the turn
    matrix g = [[1, 1], [-1, 0]] satisfies g^3 = -1."""
    zero = one - one
    f = [[zero, zero - xk], [one, zero]]
    g = [[one, one], [zero - one, zero]]
    ginv = [[zero, zero - one], [one, one]]
    return mat_mul(f, g if turn == "L" else ginv)


def pgl2_loop_monodromy(x_values, steps, one=Fraction(1)):
    """Monodromy of a loop given as a sequence of (edge, turn) pairs over the
    rank-2 triangle connection."""
    m = None
    for edge, turn in steps:
        s = pgl2_x_connection_step(x_values[edge], turn, one)
        m = s if m is None else mat_mul(s, m)
    return m


def sl2_decorated_step(a_values, edge, turn, corner, one=Fraction(1)):
    """One step of the decorated rank-2 connection: crossing edge `edge` then
    turning through `corner` = (i, j, k) meaning from edge i to edge j across
    the corner opposite edge k."""
    zero = one - one
    ak = a_values[edge]
    d = [[zero, zero - ak], [one / ak, zero]]
    i, j, k = corner
    u = [[one, zero],
         [a_values[k] / (a_values[i] * a_values[j]), one]]
    if turn == "R":
        u = [[one, zero], [zero - u[1][0], one]]
    return mat_mul(u, d)
