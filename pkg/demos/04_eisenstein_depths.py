"""
Eisenstein congruences at prime level
=====================================

For a prime level N and a prime p dividing the numerator of (N - 1)/12,
compare the length of T/I (Hecke algebra over the Eisenstein ideal) with
the sum of the congruence depths of the eigenforms, one Galois orbit at a time.
"""

from conglab.eisenstein import analyze, export_table, mazur_sweep

for N, p in [(11, 5), (113, 2), (401, 5)]:
    row, comp, orbits = analyze(N, p)
    print(f"N={N} p={p}: rank {row.rank}, length of T/I {row.order_T_mod_J}, total depth {row.total_depth} -> {row.verdict}")
    for orb in orbits:
        print(f"    orbit of degree {orb.degree} (e={orb.ramification}, f={orb.residue_degree}), depth {orb.normalized_depth}")

# The same component as an eigenvalue table, ready for the general analysis
_, comp, orbits = analyze(113, 2)
table = export_table(comp, orbits)
print("exported table:", len(table["systems"]), "systems over", len(table["generators"]), "generators")

rows = mazur_sweep(60)
print("sweep up to 60:", sum(r.verdict == "equality" for r in rows), "of", len(rows), "rows balance")
