import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conglab.congruence import (
    BlockedAmbient,
    EigenTable,
    FiniteIndexIdeal,
    Subalgebra,
    annihilator_ideal,
    block_project,
    depth_report,
    find_block_generator,
    find_simultaneous_generator,
    maximal_ideal,
    quotient_order,
    random_instance,
    strict_fixture,
    strict_fixture_non_ideal,
    compare_block_orders,
)
from conglab.errors import HypothesisViolated, InfiniteQuotient, NotIdeal, NotPrincipal, NotSubalgebra, SchemaError
from conglab.tables import dump_table, load_table, table_from_dict, table_to_dict

from oracles import coset_count, vp

DATA = Path(__file__).parent / "data"
RAMIFIED = [-3, 0, 1]  # Z_3[sqrt 3]
UNRAMIFIED = [2, 0, 1]  # Z_5[sqrt -2], residue field of order 25


def full(amb):
    return amb.span([[int(i == j) for j in range(amb.dim)] for i in range(amb.dim)])


# --- the strict-inequality fixtures ------------------------------------------


@pytest.mark.parametrize("p,modulus", [(5, None), (7, None), (3, RAMIFIED)])
def test_strict_fixture(p, modulus):
    T, J = strict_fixture(p, modulus=modulus)
    t = T.ambient.t
    f = T.ambient.ring.f
    T1 = block_project(T, 0)
    assert T1.lattice == full(T1.ambient)
    J2 = block_project(J, 1)
    pi = T.ambient.ring.uniformizer()
    assert J2.lattice == J2.ambient.o_span([list(pi)])
    assert quotient_order(T, J) == f
    rep = compare_block_orders(T, J)
    assert rep.block_orders == [f, f]
    assert rep.verdict == "strict-inequality"
    assert rep.principal is False
    assert t == T.ambient.ring.degree


@pytest.mark.parametrize("p,modulus", [(5, None), (3, RAMIFIED)])
def test_strict_fixture_non_ideal_rejected(p, modulus):
    with pytest.raises(NotIdeal):
        strict_fixture_non_ideal(p, modulus=modulus)


def test_principal_ideal_in_strict_algebra():
    T, _ = strict_fixture(5)
    amb = T.ambient
    J = FiniteIndexIdeal.generated_by(T, [amb.scalar(5)])
    assert quotient_order(T, J) == 2
    rep = compare_block_orders(T, J)
    assert rep.block_orders == [1, 1] and rep.verdict == "equality" and rep.principal


def test_simultaneous_generator_on_strict_fixture():
    T, J = strict_fixture(5)
    alpha, _ = find_simultaneous_generator(T, J)
    assert J.contains(alpha)
    for i in range(2):
        Ti, Ji = block_project(T, i), block_project(J, i)
        a = T.ambient.project(alpha, i)
        assert Ti.ambient.span([Ti.ambient.mul(a, t) for t in Ti.basis]) == Ji.lattice
    # (p, p) is the expected kind of answer: valuation one in each coordinate
    assert all(vp(x, 5) == 1 for x in alpha)


def test_diagonal_algebra_projects_to_O():
    amb = BlockedAmbient(5, 20, (1, 1, 1))
    T = Subalgebra(amb, amb.span([amb.one()]), check=False)
    for i in range(3):
        Ti = block_project(T, i)
        assert Ti.lattice == full(Ti.ambient)
    with pytest.raises(NotSubalgebra):
        Subalgebra(amb, T.lattice)


def test_non_local_rejected():
    amb = BlockedAmbient(5, 20, (1, 1))
    with pytest.raises(NotSubalgebra):
        Subalgebra(amb, full(amb))


# --- block generators --------------------------------------------------------


def test_block_generator_dvr():
    amb = BlockedAmbient(5, 20, (1,))
    T = Subalgebra(amb, full(amb))
    J = FiniteIndexIdeal.generated_by(T, [[125]])
    g = find_block_generator(T, J)
    assert vp(g[0], 5) == 3
    unit = find_block_generator(T, FiniteIndexIdeal(T, T.lattice))
    assert vp(unit[0], 5) == 0


def test_block_generator_not_principal():
    """The maximal ideal of {(a, b): a = b mod p} needs two generators."""
    p = 5
    amb = BlockedAmbient(p, 20, (2,))
    T = Subalgebra(amb, amb.span([[1, 1], [p, 0]]))
    m = FiniteIndexIdeal(T, maximal_ideal(T))
    with pytest.raises(NotPrincipal):
        find_block_generator(T, m)
    # brute force over small elements: nothing of height <= p^2 generates m
    for a in range(0, p * p + 1, p):
        for b in range(0, p * p + 1, p):
            if (a, b) == (0, 0) or not m.contains([a, b]):
                continue
            assert amb.span([amb.mul([a, b], t) for t in T.basis]) != m.lattice


def test_hypothesis_violated_small_field():
    T, J = random_instance(3, 2, seed=1)
    with pytest.raises(HypothesisViolated):
        find_simultaneous_generator(T, J)


# --- random instances ----------------------------------------------------------


def _instance_invariants(T, J):
    T.validate()
    J.validate()
    assert T.is_local()


@given(st.integers(0, 10**6), st.sampled_from([5, 7]), st.integers(1, 4))
def test_block_sum_bounds_order(seed, p, s):
    T, J = random_instance(s, p, seed=seed)
    _instance_invariants(T, J)
    rep = compare_block_orders(T, J, seed=seed)
    assert sum(rep.block_orders) >= rep.order_T_mod_J
    if rep.principal:
        assert rep.verdict == "equality"
    assert rep.hypotheses_hold


@given(st.integers(0, 10**6), st.sampled_from([3, 5, 7]), st.integers(1, 4))
def test_inductive_generator(seed, p, s):
    """The proof's construction alone (no random trials) yields a simultaneous generator."""
    if p - 1 < s - 1:
        return
    T, J = random_instance(s, p, seed=seed)
    alpha, method = find_simultaneous_generator(T, J, random_trials=0)
    assert method == "induction"
    assert J.contains(alpha)
    for i in range(s):
        Ti, Ji = block_project(T, i), block_project(J, i)
        a = T.ambient.project(alpha, i)
        assert Ti.ambient.span([Ti.ambient.mul(a, t) for t in Ti.basis]) == Ji.lattice


@given(st.integers(0, 10**6), st.sampled_from([5, 7]), st.integers(1, 3))
def test_principal_ideal_equality_and_norm(seed, p, s):
    """For J = alpha T the order equals the block sum and the norm valuation of alpha."""
    T, _ = random_instance(s, p, seed=seed)
    amb = T.ambient
    rng = random.Random(seed)
    mb = [list(c) for c in maximal_ideal(T).columns]
    coeffs = [rng.randrange(p) for _ in mb]
    alpha = [sum(c * b[k] for c, b in zip(coeffs, mb)) % amb.q for k in range(amb.dim)]
    if any(x == 0 for x in alpha):
        return
    J = FiniteIndexIdeal.generated_by(T, [alpha])
    rep = compare_block_orders(T, J)
    norm = sum(vp(x, p) for x in alpha)
    assert rep.order_T_mod_J == sum(rep.block_orders) == norm
    assert rep.principal and rep.verdict == "equality"


@given(st.integers(0, 10**6))
def test_quotient_order_matches_coset_count(seed):
    """#T/J by enumerating Z^n / (coordinates of J in T) for small indices."""
    T, J = random_instance(2, 5, seed=seed)
    X = [T.lattice.coordinates(c) for c in J.basis]
    q = 5**T.lattice.reliable_precision
    cols = [[x % q for x in row] for row in X]
    rows = [list(r) for r in zip(*cols)]
    order = quotient_order(T, J)
    if 5 ** (order * len(rows)) > 10**6:
        return
    # lift to integers: the relations plus p^order times the identity generate the same quotient
    mod = 5**order
    rel = [[x % mod for x in r] for r in rows]
    assert coset_count(rel, len(rows), mod) == 5**order


def test_extension_ring_instances():
    for seed in range(4):
        T, J = random_instance(2, 5, seed=seed, modulus=UNRAMIFIED)
        rep = compare_block_orders(T, J)
        assert sum(rep.block_orders) >= rep.order_T_mod_J
        assert T.ambient.residue_field_order == 25


def test_golden_instance():
    T, J = random_instance(2, 5, seed=1)
    doc = {
        "blocks": list(T.ambient.block_sizes),
        "T": [list(c) for c in T.lattice.columns],
        "J": [list(c) for c in J.lattice.columns],
        "order": quotient_order(T, J),
        "block_orders": compare_block_orders(T, J).block_orders,
    }
    golden = json.loads((DATA / "golden_instance.json").read_text())
    assert doc == golden


# --- eigenvalue tables ---------------------------------------------------------


def _table(values, p=5, K=20, mod=None):
    labels = [f"s{i}" for i in range(len(values))]
    gens = [f"g{j}" for j in range(len(values[0]))]
    return EigenTable(p, K, gens, list(zip(labels, values)), "s0", mod)


def test_two_system_table():
    t = _table([[(0,)], [(25,)]])
    res = annihilator_ideal(t)
    assert res.order == 2 and res.congruence_module_order == 2
    rep = depth_report(t)
    assert rep.normalized_total == 2 and rep.verdict == "equality"


def test_duplicate_distinguished_system():
    with pytest.raises(InfiniteQuotient):
        annihilator_ideal(_table([[(3,), (4,)], [(3,), (4,)]]))


def test_duplicates_merged():
    rep = depth_report(_table([[(0,)], [(5,)], [(5,)]]))
    assert rep.labels == ["s1"]
    assert rep.notes and "s2" in rep.notes[0]


def test_engineered_depths():
    """Depths (1, 2) with one generator: T = Z_5[(0, 5, 25)], J principal, 3 = 3."""
    rep = depth_report(_table([[(0,)], [(5,)], [(25,)]]))
    assert [int(d) for d in rep.depths] == [1, 2]
    assert rep.order_T_mod_J == 3 and rep.normalized_total == 3
    assert rep.principal and rep.verdict == "equality"


def test_non_congruent_system():
    rep = depth_report(_table([[(0,)], [(1,)]]))
    assert rep.normalized_total == 0 and rep.order_T_mod_J == 0


def test_strict_table():
    """Two generators separating three systems at depth one: J not principal, 2 > 1."""
    rep = depth_report(_table([[(0,), (0,)], [(5,), (0,)], [(0,), (5,)]]))
    assert rep.normalized_total == 2
    assert rep.order_T_mod_J == 1
    assert rep.principal is False and rep.verdict == "strict-inequality"


@given(
    st.lists(st.lists(st.integers(0, 624), min_size=2, max_size=2), min_size=2, max_size=5),
    st.integers(0, 1000),
)
def test_depth_inequality_and_congruence_module(values, seed):
    p = 5
    vals = [[(v,) for v in row] for row in values]
    try:
        rep = depth_report(_table(vals, p=p), seed=seed)
    except InfiniteQuotient:
        return
    assert rep.congruence_module_order == rep.order_T_mod_J
    if rep.residue_field_ok or rep.principal:
        assert rep.normalized_total >= rep.normalized_order


def test_ramified_table():
    """Over Z_3[sqrt 3]: lambda_1 = sqrt 3 gives depth 1/2 and order 1 over O, 1/2 normalized."""
    t = _table([[(0, 0)], [(0, 1)]], p=3, mod=RAMIFIED)
    rep = depth_report(t)
    assert rep.depths == [Fraction(1, 2)]
    assert rep.normalized_total == Fraction(1, 2) == rep.normalized_order


def test_table_json_roundtrip(tmp_path):
    t = _table([[(0,)], [(25,)]])
    path = tmp_path / "t.json"
    dump_table(t, path)
    back = load_table(path)
    assert table_to_dict(back) == table_to_dict(t)
    doc = json.loads(path.read_text())
    assert doc["prime"] == "5" and doc["systems"][1]["values"] == ["25"]


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("prime"),
        lambda d: d.update(distinguished="nope"),
        lambda d: d.update(prime="five"),
        lambda d: d["systems"][1].update(values=["1", "2"]),
        lambda d: d.update(generators=[]),
        lambda d: d.update(ext_modulus=["1", "1", "1", "1"]),
    ],
)
def test_schema_violations(mutate):
    d = table_to_dict(_table([[(0,)], [(25,)]]))
    mutate(d)
    with pytest.raises(SchemaError):
        table_from_dict(d)


def test_interface_alias():
    from conglab.congruence import verify_kr12

    assert verify_kr12 is compare_block_orders
