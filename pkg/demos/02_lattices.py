"""
Lattices and Fitting ideals
===========================

Normal forms of integer matrices, indices of p-local lattices and the
order of a finitely presented module.
"""

from conglab.lattice import (
    FinPresModule,
    LatticeBasis,
    elementary_divisors,
    fitting_order,
    hermite_normal_form,
    lattice_index,
)

R = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
print("elementary divisors:", elementary_divisors(R))
print("Hermite form:\n", hermite_normal_form(R))

# Z^3 / R has order 2 * 6 * 12; its 2- and 3-parts come from the Fitting ideal
M = FinPresModule.from_relations(R)
for p in (2, 3, 5):
    print(f"v_{p} of the order of Z^3/R:", fitting_order(M, p))

# Index of a sublattice of Z_3^2, computed at precision 3^20
full = LatticeBasis.span([[1, 0], [0, 1]], 3, 20)
sub = LatticeBasis.span([[3, 1], [0, 9]], 3, 20)
print("[Z_3^2 : L] = 3 ^", lattice_index(full, sub, 3))
print("(3, 10) in L:", sub.contains([3, 10]), " (1, 3) in L:", sub.contains([1, 3]))
