"""
Factoring over Q_p
==================

Split a polynomial into irreducible factors over Q_p and read off the
ramification of each piece.
"""

import numpy as np

from conglab.dvr import PadicPoly, ValuationRing, factor_over_qp, newton_polygon

# (x^2 - 5)(x^2 + 2)(x - 3) at p = 5: a ramified quadratic, an unramified
# quadratic and a linear factor.  Coefficients run low-to-high.
coeffs = np.polynomial.polynomial.polymul(np.polynomial.polynomial.polymul([-5, 0, 1], [2, 0, 1]), [-3, 1])
f = PadicPoly.from_ints([int(c) for c in coeffs], 5, 40)

print("Newton polygon:", newton_polygon(f))
for fac in factor_over_qp(f):
    c = fac.certificate
    print(f"degree {fac.degree}: e={c.ramification} f={c.residue_degree} ({c.kind})")

# Arithmetic in the ring of integers of Q_5(sqrt 5)
O = ValuationRing(5, 20, [-5, 0, 1])
pi = O.uniformizer()
print("valuations of pi, pi^2, 5:", O.varpi_valuation(pi), O.varpi_valuation(O.mul(pi, pi)), O.varpi_valuation(O.scalar(5)))
