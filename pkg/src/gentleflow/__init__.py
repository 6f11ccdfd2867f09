"""gentleflow: exact-arithmetic combinatorics of gentle algebras.

Fringed quivers, strings/routes/bands, the arrow-flow tracing algorithm,
turbulence polyhedra with their clique/bundle/vortex decompositions, and the
quotient map to g-polyhedra and g-vector fans.
"""

__version__ = "0.1.0"
