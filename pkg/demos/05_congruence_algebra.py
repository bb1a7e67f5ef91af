"""
Congruence depths in a blocked algebra
======================================

T is an order inside a product of local rings O^{n_1} x ... x O^{n_s} and J a
finite-index ideal.  When J is principal, the length of T/J equals the sum of
the lengths of the block quotients T_i/J_i.  Without principality the sum can
be strictly larger.
"""

from conglab.congruence import (
    EigenTable,
    depth_report,
    find_simultaneous_generator,
    random_instance,
    strict_fixture,
    strict_fixture_non_ideal,
    compare_block_orders,
)
from conglab.errors import NotIdeal

# A reproducible random instance with three blocks over Z_5
T, J = random_instance(3, 5, seed=4)
rep = compare_block_orders(T, J)
print("random instance:", rep.order_T_mod_J, "vs", rep.block_orders, "->", rep.verdict)
alpha, how = find_simultaneous_generator(T, J)
print("  simultaneous block generator found by", how)

# The smallest case where J is not principal: T = {(a, b): a = b mod 5}
T, J = strict_fixture(5)
rep = compare_block_orders(T, J)
print("non-principal J:", rep.order_T_mod_J, "vs", sum(rep.block_orders), "->", rep.verdict)

try:
    strict_fixture_non_ideal(5)
except NotIdeal as exc:
    print("rejected as an ideal:", exc)

# Eigenvalue systems: the distinguished one is congruent to a mod 25 and to b mod 5
table = EigenTable(
    5,
    20,
    ["T2", "T3"],
    [("eis", [(3,), (4,)]), ("a", [(28,), (29,)]), ("b", [(8,), (9,)])],
    "eis",
)
rep = depth_report(table)
print("table:", dict(zip(rep.labels, map(str, rep.depths))), "length of T/J:", rep.order_T_mod_J, "->", rep.verdict)
