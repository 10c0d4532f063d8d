"""Exact cluster coordinates, laminations and monodromy on ideal-triangulated
surfaces.

The package is organized around one module per subsystem:

  exactalg    exact rationals, Laurent polynomials, semifields
  surface     marked surfaces, ideal triangulations, flips, ribbon graphs
  mtri        m-triangulations, index sets, exchange matrices, seeds
  cluster     seed / coordinate mutations and flip programs
  flags       configurations of affine flags and their invariants
  monodromy   graph connections, monodromy matrices, trace polynomials
  lamination  rank-2 laminations, coordinates, pairings
  canonical   canonical curve-to-function maps and hole involutions
  wpform      Poisson structures, the symplectic 2-form and its symbol
  cli         command-line interface
"""

__version__ = "0.1.0"
