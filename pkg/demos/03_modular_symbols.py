"""
Hecke operators on modular symbols
==================================

Build the cuspidal modular symbols of prime level and compare the Hecke
eigenvalues at level 11 with the coefficients of q * prod (1 - q^n)^2 (1 - q^11n)^2.
"""

from conglab.modsym import build_space, genus, hecke_matrix

space = build_space(11)
print("level 11: genus", genus(11), "cuspidal rank", space.rank)
for ell in (2, 3, 5, 7):
    print(f"  a_{ell} =", hecke_matrix(space, ell).as_lists()[0][0])

# Level 37 has two newforms; T_2 shows them as distinct eigenvalues 0 and -2
T2 = hecke_matrix(build_space(37), 2)
print("level 37, T_2 =", T2.as_lists())

# The Eisenstein eigenvalue of T_l is 1 + l; cusp forms congruent to it
# show up as T_l - (1 + l) failing to be invertible mod p
space = build_space(113)
T3 = hecke_matrix(space, 3)
print("level 113: rank", space.rank, "Eisenstein eigenvalue of T_3:", T3.eisenstein_eigenvalue)
