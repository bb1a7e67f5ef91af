"""Exact computation of congruence depths between eigensystems.

The package covers p-adic arithmetic (``dvr``), integer and p-local lattices
(``lattice``), the commutative algebra of finite-index ideals in blocked
subalgebras (``congruence``), weight-2 modular symbols of prime level
(``modsym``) and the Eisenstein analysis built on top of them
(``eisenstein``).
"""

__version__ = "0.1.0"
