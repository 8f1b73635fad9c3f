import pytest
from hypothesis import given, strategies as st

import oracle
from poswfs.catalog import enumerate_posets, enumerate_s_posets
from poswfs.errors import BudgetExceeded, PreconditionError, StructureError
from poswfs.order import Poset, antichain, chain, posets_isomorphic, singleton
from poswfs.pomonoid import named_pomonoid, trivial_monoid, u2
from poswfs.sposet import (
    SPoset,
    SPosetMap,
    are_isomorphic,
    as_s_poset,
    canonical_form,
    compose,
    curry,
    disjoint_union,
    exponential,
    exponential_data,
    fibre,
    hom_s_poset,
    identity_map,
    iter_homs,
    product,
    quotient_theta,
    regular_s_poset,
    trivial_action,
    uncurry,
    validate_s_poset,
    validate_s_poset_map,
)

U2 = u2()
CAT_U2 = enumerate_s_posets(U2, 2).objects


def chain_ab():
    return Poset.from_pairs(["a", "b"], [("a", "b")])


def test_regular_and_trivial_actions_validate():
    assert validate_s_poset(regular_s_poset(U2))
    assert validate_s_poset(trivial_action(chain(3), U2))
    assert validate_s_poset(as_s_poset(antichain(3)))


def test_swapping_action_is_invalid():
    A = SPoset.from_labels(U2, chain_ab(), {("a", "1"): "a", ("a", "s"): "b",
                                             ("b", "1"): "b", ("b", "s"): "a"})
    assert not validate_s_poset(A)


def test_trivial_action_shapes():
    A = trivial_action(chain(2), U2)
    assert A.is_trivial() and all(len(set(row)) == 1 for row in A.act)
    assert posets_isomorphic(as_s_poset(chain_ab()).carrier, chain_ab())
    one = trivial_action(singleton(), U2)
    for A in CAT_U2:
        assert len(hom_s_poset(A, one)) == 1


def test_disjoint_union():
    one = as_s_poset(singleton())
    U, i, j = disjoint_union(one, one)
    assert posets_isomorphic(U.carrier, antichain(2))
    U, _, _ = disjoint_union(as_s_poset(chain(2)), one)
    assert len(U) == 3 and sum(bin(u).count("1") for u in U.carrier.up) == 4
    with pytest.raises(StructureError):
        disjoint_union(one, as_s_poset(Poset((), ())))


def test_products():
    B = as_s_poset(chain(3))
    X, _, p2 = product(as_s_poset(singleton()), B)
    assert posets_isomorphic(X.carrier, B.carrier)
    grid, _, _ = product(as_s_poset(chain(2)), as_s_poset(chain(2)))
    diamond = Poset.from_pairs(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])
    assert posets_isomorphic(grid.carrier, diamond)
    SS, _, _ = product(regular_s_poset(U2), regular_s_poset(U2))
    assert len(SS) == 4 and validate_s_poset(SS)


def test_fibres():
    A = trivial_action(chain(3), U2)
    idm = identity_map(A)
    for b in range(len(A)):
        fb = fibre(idm, b)
        assert len(fb.poset) == 1 and fb.is_sub_s_poset
    # with a non-trivial action the singleton fibre over 1 is not closed: 1.s = s
    R = regular_s_poset(U2)
    assert not fibre(identity_map(R), 0).is_sub_s_poset
    assert fibre(identity_map(R), 1).is_sub_s_poset
    X = as_s_poset(antichain(2))
    B = as_s_poset(chain(2))
    XB, _, p2 = product(X, B)
    for b in range(len(B)):
        assert posets_isomorphic(fibre(p2, b).poset, X.carrier)
    one = trivial_action(singleton(), U2)
    to_one = SPosetMap(R, one, (0, 0))
    fb = fibre(to_one, 0)
    assert fb.is_sub_s_poset and posets_isomorphic(fb.poset, R.carrier)


# -- hom enumeration -----------------------------------------------------------------------

def test_hom_chain_chain():
    C = as_s_poset(chain(2))
    assert len(hom_s_poset(C, C)) == 3


def test_hom_regular_free_generator_rule():
    S = regular_s_poset(U2)
    homs = [f.table for f in hom_s_poset(S, S)]
    # a map out of the regular object is fixed by the image x of 1, with f(t) = x.t
    rule = [tuple(S.act[x][t] for t in range(len(U2))) for x in range(len(S))]
    rule = [t for t in rule if validate_s_poset_map(SPosetMap(S, S, t))]
    assert homs == sorted(rule) == [(0, 1), (1, 1)]


@pytest.mark.parametrize("name", ["trivial", "u2", "z2", "chain3"])
def test_hom_matches_oracle_in_lexicographic_order(name):
    objects = enumerate_s_posets(named_pomonoid(name), 2).objects
    for A in objects:
        for B in objects:
            assert [f.table for f in iter_homs(A, B)] == oracle.all_s_maps(A, B)


def test_hom_budget():
    A = as_s_poset(antichain(4))
    with pytest.raises(BudgetExceeded) as exc:
        list(iter_homs(A, A, budget=10))
    assert exc.value.bound == 10


def test_env_budget_override(monkeypatch):
    A = as_s_poset(antichain(4))
    monkeypatch.setenv("POSWFS_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        list(iter_homs(A, A))


def test_compose_laws():
    C = as_s_poset(chain(3))
    maps = hom_s_poset(C, C)
    f, g, h = maps[1], maps[3], maps[5]
    assert compose(f, identity_map(C)) == f and compose(identity_map(C), f) == f
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    with pytest.raises(StructureError):
        compose(f, identity_map(as_s_poset(chain(2))))


# -- exponentials and currying ------------------------------------------------------------

def test_exponential_examples():
    B = as_s_poset(chain(2))
    one = as_s_poset(singleton())
    assert are_isomorphic(exponential(one, B), B)
    assert len(exponential(B, B)) == 3
    for P in enumerate_posets(2):
        for Q in enumerate_posets(2):
            E = exponential(as_s_poset(P), as_s_poset(Q))
            assert len(E) == len(oracle.all_monotone(P, Q))


def test_exponential_validates_over_u2():
    for A in CAT_U2:
        for B in CAT_U2:
            assert validate_s_poset(exponential(A, B))


@given(st.sampled_from(CAT_U2), st.sampled_from(CAT_U2), st.sampled_from(CAT_U2))
def test_currying_round_trip(A, B, C):
    AB = product(A, B)[0]
    exp = exponential_data(B, C)
    left = hom_s_poset(AB, C)
    right = {h.table for h in hom_s_poset(A, exp.obj)}
    curried = set()
    for g in left:
        h = curry(g, A, B, exp)
        assert h.table in right
        assert uncurry(h, A, B, exp, AB).table == g.table
        curried.add(h.table)
    assert curried == right


# -- theta quotient ---------------------------------------------------------------------

def test_theta_trivial_action_is_identity():
    A = as_s_poset(chain(3))
    Q, eta = quotient_theta(A)
    assert posets_isomorphic(Q, A.carrier) and eta.table == (0, 1, 2)


def test_theta_collapses():
    act = {("a", "1"): "a", ("a", "s"): "b", ("b", "1"): "b", ("b", "s"): "b"}
    # on the antichain this action is not monotone in s (1 <= s forces a <= b)
    assert validate_s_poset(SPoset.from_labels(U2, antichain(2), act)).reason == "monotone action"
    A = SPoset.from_labels(U2, chain_ab(), act)
    assert validate_s_poset(A)
    assert len(quotient_theta(A)[0]) == 1
    assert len(quotient_theta(regular_s_poset(U2))[0]) == 1


# -- isomorphism and catalogs ---------------------------------------------------------------

def test_isomorphism_examples():
    S = regular_s_poset(U2)
    assert are_isomorphic(S, S)
    assert not are_isomorphic(as_s_poset(chain(2)), as_s_poset(antichain(2)))
    one = trivial_action(singleton(), U2)
    left = disjoint_union(S, one)[0]
    right = disjoint_union(one, S)[0]
    assert are_isomorphic(left, right)
    assert canonical_form(left) == canonical_form(right)


def test_poset_counts():
    exact = [len(enumerate_posets(n, exact=True)) for n in range(1, 7)]
    assert exact[:4] == [oracle.poset_count(n) for n in range(1, 5)]
    assert exact == [1, 2, 5, 16, 63, 318]
    with pytest.raises(PreconditionError):
        enumerate_posets(7)


def test_s_poset_catalog_counts():
    def exact(name, n):
        return sum(1 for A in enumerate_s_posets(named_pomonoid(name), n).objects if len(A) == n)

    assert exact("trivial", 2) == 2
    assert exact("u2", 1) == 1
    assert exact("u2", 2) == 3
    # oracle: raw relation matrices and action tables, deduplicated by permutation
    for name in ("trivial", "u2", "z2", "u2-discrete"):
        S = named_pomonoid(name)
        assert [exact(name, n) for n in (1, 2, 3)] == [oracle.s_poset_count(S, n) for n in (1, 2, 3)]
    # golden cumulative sizes used throughout the suites
    assert [len(enumerate_s_posets(named_pomonoid(n), 3))
            for n in ("trivial", "u2", "chain3", "z2", "u2-discrete")] == [8, 15, 25, 12, 35]
    with pytest.raises(PreconditionError):
        enumerate_s_posets(U2, 5)


def test_catalog_is_deterministic_and_iso_free():
    a = enumerate_s_posets(U2, 3).objects
    b = enumerate_s_posets(u2(), 3).objects
    assert a == b
    keys = [canonical_form(A) for A in a]
    assert len(set(keys)) == len(keys)
    assert all(validate_s_poset(A) for A in a)
    assert trivial_monoid() == enumerate_s_posets(trivial_monoid(), 1).pomonoid
