"""Seed mutations for the exchange matrix and for X- and A-coordinates over
an arbitrary semifield, and flips realized as mutation programs.

A mutation at k replaces

  epsilon'_ij = -epsilon_ij                      if k in {i, j}
  epsilon'_ij = epsilon_ij
                + (|eps_ik| eps_kj + eps_ik |eps_kj|) / 2   otherwise

  X'_k = 1/X_k,   X'_i = X_i (1 + X_k)^{-eps_ik}     (eps_ik <= 0)
                  X'_i = X_i (1 + 1/X_k)^{-eps_ik}   (eps_ik >= 0)

  A'_k = (prod_{eps_kj > 0} A_j^{eps_kj} + prod_{eps_kj < 0} A_j^{-eps_kj}) / A_k

with all other A's fixed.  The A-rule is the exchange-relation form, which is
what matches the determinant coordinates of flag configurations; it is
involutive together with the epsilon rule.  All three rules are subtraction
free, so the same code runs over exact rationals, rational functions and
tropical numbers.

A flip at an edge of an ideal triangulation acts on the m-triangulation seed
as a program of m-1 steps: in the planar overlay of the quadrilateral, step i
mutates the indices sitting at the centers of the unit squares of the
i x (m-i) rectangle centered at the diamond.  Mutations within one step
commute (their epsilon entries vanish), so each step is a set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Semifield, PositiveRationals, SymbolicSemifield, TropicalSemifield
from .mtri import (ExchangeSeed, MTriangulation, _address_str, flip_index_transport,
                   m_triangulate, simplex_coords)
from .surface import IdealTriangulation


class MutationError(ValueError):
    pass


def mutate_epsilon(seed: ExchangeSeed, k) -> ExchangeSeed:
    """Mutate the exchange matrix in the direction k (involutive)."""
    if seed.is_frozen(k):
        raise MutationError(f"cannot mutate frozen index {k}")
    new = {}
    for i in seed.I:
        for j in seed.I:
            if i == j:
                continue
            v = seed.eps(i, j)
            if k in (i, j):
                w = -v
            else:
                a, b = seed.eps(i, k), seed.eps(k, j)
                w = v + (abs(a) * b + a * abs(b)) // 2
            if w:
                new[(i, j)] = w
    return ExchangeSeed(I=seed.I, J=seed.J, epsilon=new)


def mutate_x(seed: ExchangeSeed, coords: dict, k, semifield: Semifield):
    """Mutate X-coordinates (a map J -> semifield element) at k.

    Returns (mutated seed, new coordinates)."""
    if seed.is_frozen(k):
        raise MutationError(f"cannot mutate frozen index {k}")
    one = semifield.one()
    xk = coords[k]
    new = {}
    for i, xi in coords.items():
        if i == k:
            new[i] = semifield.div(one, xk)
            continue
        e = seed.eps(i, k)
        if e == 0:
            new[i] = xi
        elif e < 0:
            new[i] = semifield.mul(xi, semifield.pow(semifield.add(one, xk), -e))
        else:
            factor = semifield.add(one, semifield.div(one, xk))
            new[i] = semifield.div(xi, semifield.pow(factor, e))
    return mutate_epsilon(seed, k), new


def mutate_a(seed: ExchangeSeed, coords: dict, k, semifield: Semifield):
    """Mutate A-coordinates (a map I -> semifield element) at k via the
    exchange relation; the seed matrix mutates alongside.

    Returns (mutated seed, new coordinates)."""
    if seed.is_frozen(k):
        raise MutationError(f"cannot mutate frozen index {k}")
    one = semifield.one()
    plus, minus = one, one
    for j in seed.I:
        e = seed.eps(k, j)
        if e > 0:
            plus = semifield.mul(plus, semifield.pow(coords[j], e))
        elif e < 0:
            minus = semifield.mul(minus, semifield.pow(coords[j], -e))
    new = dict(coords)
    new[k] = semifield.div(semifield.add(plus, minus), coords[k])
    return mutate_epsilon(seed, k), new


# ---------------------------------------------------------------------------
# Mutation programs and flips
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MutationProgram:
    """An ordered list of steps; each step is a set of indices mutated
    simultaneously, which must pairwise commute (epsilon = 0)."""

    steps: tuple

    def __iter__(self):
        return iter(self.steps)

    def total_mutations(self):
        return sum(len(s) for s in self.steps)

    def to_json_list(self):
        return [[_address_str(i) for i in sorted(step)] for step in self.steps]


def flip_program(t: IdealTriangulation, m: int, edge: str) -> MutationProgram:
    """The mutation program realizing the flip at an internal edge on the
    m-triangulation seed.

    Step i (i = 1..m-1) mutates the indices of the diamond whose planar
    positions are the unit-square centers of the i x (m-i) rectangle; these
    positions are (u, v) with u = x2-x4 along the old diagonal and
    v = x1-x3 along the new one, both stepping by 2.
    """
    mt = m_triangulate(t, m)
    if not t.is_internal(edge):
        raise MutationError(f"cannot flip boundary edge {edge!r}")
    (t1, s1), (t2, s2) = t.sides_of_edge[edge]
    if t1 == t2:
        raise MutationError(f"edge {edge!r} bounds a self-folded triangle")

    # planar positions of the diamond indices, in the simplex model of the
    # quadrilateral (see mtri.simplex_coords): u runs along the old
    # diagonal, v along the new one
    pos = {}
    for a in mt.index_set:
        coords = simplex_coords(mt, edge, a)
        if coords is None:
            continue
        x1, x2, x3, x4 = coords
        pos[(x2 - x4, x1 - x3)] = a
    steps = []
    for i in range(1, m):
        us = range(-(m - i - 1), m - i, 2)
        vs = range(-(i - 1), i, 2)
        step = tuple(sorted(pos[(u, v)] for u in us for v in vs))
        steps.append(step)
    return MutationProgram(steps=tuple(steps))


def apply_program(program: MutationProgram, seed: ExchangeSeed, coords: dict,
                  kind: str, semifield: Semifield):
    """Run a mutation program on X- or A-coordinates (kind 'x' or 'a').

    Within a step the mutated indices must pairwise commute; they are applied
    in sorted order, and the commutation guarantees the result is
    schedule-independent.  Returns (seed, coords).
    """
    if kind not in ("x", "a"):
        raise ValueError("kind must be 'x' or 'a'")
    mutate = mutate_x if kind == "x" else mutate_a
    for step in program:
        for i in step:
            for j in step:
                if i < j and seed.eps(i, j) != 0:
                    raise MutationError(
                        f"indices {i} and {j} of one step do not commute")
        for k in sorted(step):
            seed, coords = mutate(seed, coords, k, semifield)
    return seed, coords


def apply_program_epsilon(program: MutationProgram, seed: ExchangeSeed) -> ExchangeSeed:
    for step in program:
        for k in sorted(step):
            seed = mutate_epsilon(seed, k)
    return seed


# ---------------------------------------------------------------------------
# Symbolic assignments
# ---------------------------------------------------------------------------


def symbolic_coordinates(indices, prefix: str):
    """A symbolic semifield plus the coordinate map index -> variable."""
    indices = tuple(indices)
    names = tuple(f"{prefix}{n}" for n in range(len(indices)))
    field = SymbolicSemifield(names)
    coords = {i: field.var(nm) for i, nm in zip(indices, names)}
    return field, coords, dict(zip(indices, names))


def flip_seed_check(t: IdealTriangulation, m: int, edge: str):
    """Run the flip program on the m-triangulation seed and compare the
    mutated matrix with the one of the flipped triangulation under the
    canonical index transport.  Returns (ok, details)."""
    mt = m_triangulate(t, m)
    seed = mt.seed()
    program = flip_program(t, m, edge)
    mutated = apply_program_epsilon(program, seed)
    t2, move = t.flip(edge)
    mt2 = m_triangulate(t2, m)
    transport = flip_index_transport(mt, move, mt2)
    bad = []
    for i in seed.I:
        for j in seed.I:
            if i >= j:
                continue
            want = mt2.epsilon(transport[i], transport[j])
            got = mutated.eps(i, j)
            if want != got:
                bad.append((i, j, got, want))
    return (not bad), bad
