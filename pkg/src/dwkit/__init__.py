"""dwkit: abelian Dijkgraaf-Witten state sums and lens space classification.

Submodules
----------
abelian    exact phases, finite abelian groups, Smith normal form, Gauss sums
complexes  delta-complexes, builders, orientation, first homology
fields     flat colourings, gauge orbits, field spaces with boundary conditions
cocycles   group cochains, coboundary, builtin cocycles, slant product
invariant  state sums, matrix elements, gluing and product formulas
lens       closed-form lens invariants and homotopy classification
cli        command line front end
"""

__version__ = "0.1.0"
