import pytest

import oracle
from poswfs.catalog import catalog_maps, embedding_catalog, enumerate_posets, enumerate_s_posets
from poswfs.errors import PreconditionError, StructureError
from poswfs.lifting import (
    LiftingSquare,
    cd_es_diagonal,
    cd_es_factorization,
    diagonalizes,
    find_diagonal,
    image_factorization,
    is_injective_object,
    is_slice_injective,
    iter_diagonals,
    iter_squares,
    non_split_witness_square,
    triangles_commute,
    verify_wfs,
)
from poswfs.morphisms import (
    is_down_closed_embedding,
    is_s_poset_embedding,
    is_split_epi,
    is_surjective,
)
from poswfs.order import MonotoneMap, Poset, antichain, chain, is_complete, singleton
from poswfs.fibrewise import is_fibration
from poswfs.pomonoid import named_pomonoid, u2
from poswfs.sposet import (
    SPosetMap,
    as_s_map,
    as_s_poset,
    compose,
    disjoint_union,
    identity_map,
    product,
    regular_s_poset,
    trivial_action,
    validate_s_poset_map,
)

U2 = u2()
OBJ_U2_2 = enumerate_s_posets(U2, 2).objects
MAPS_U2_2 = catalog_maps(OBJ_U2_2)
TRIV3 = [as_s_poset(P) for P in enumerate_posets(3)]
EMB_TRIV3 = embedding_catalog(TRIV3)


def chain_ab():
    return as_s_poset(Poset.from_pairs(["a", "b"], [("a", "b")]))


def non_split_epi():
    return as_s_map(MonotoneMap(antichain(2), chain(2), (0, 1)))


def test_square_must_commute():
    f = non_split_epi()
    with pytest.raises(StructureError):
        LiftingSquare(identity_map(f.dom), f, identity_map(f.dom), SPosetMap(f.cod, f.cod, (1, 1)))


def test_identity_square():
    C = chain_ab()
    for u in catalog_maps([C]):
        sq = LiftingSquare(identity_map(C), identity_map(C), u, u)
        assert find_diagonal(sq) == u


def test_no_diagonal_for_top_inclusion_against_non_split_epi():
    # l = {b} -> {a < b}, r = antichain -> chain; the diagonal would need a <= b in the antichain
    C = chain_ab()
    point = as_s_poset(Poset.from_pairs(["b"], []))
    l = SPosetMap(point, C, (1,))
    r = non_split_epi()
    u = SPosetMap(point, r.dom, (1,))
    v = SPosetMap(C, r.cod, (0, 1))
    sq = LiftingSquare(l, r, u, v)
    assert find_diagonal(sq) is None
    assert oracle.diagonals(sq) == []
    assert not is_down_closed_embedding(l)


def test_diagonal_search_matches_oracle():
    for l in MAPS_U2_2[::7]:
        for r in MAPS_U2_2[::5]:
            for sq in iter_squares(l, r):
                found = [d.table for d in iter_diagonals(sq)]
                assert found == oracle.diagonals(sq)
                for d in iter_diagonals(sq):
                    assert triangles_commute(sq, d)


def test_diagonalizes_against_identities():
    for f in MAPS_U2_2:
        assert diagonalizes(f, identity_map(f.cod))
        assert diagonalizes(identity_map(f.dom), f)


# -- factorization and the explicit diagonal ----------------------------------------------------

def test_factorization_examples():
    one = as_s_poset(singleton())
    i, fbar = cd_es_factorization(identity_map(one))
    assert len(i.cod) == 2 and fbar.table == (0, 0)
    S = regular_s_poset(U2)
    to_one = SPosetMap(S, trivial_action(singleton(), U2), (0, 0))
    i, fbar = cd_es_factorization(to_one)
    assert len(i.cod) == 3


def test_factorization_postconditions_on_catalog():
    for f in catalog_maps(enumerate_s_posets(U2, 3).objects):
        i, fbar = cd_es_factorization(f)
        assert compose(i, fbar).table == f.table
        assert is_down_closed_embedding(i)
        assert is_split_epi(fbar)
        # the inclusion of the codomain summand is a section
        j = SPosetMap(fbar.cod, fbar.dom, tuple(len(f.dom) + y for y in range(len(f.cod))))
        assert validate_s_poset_map(j)
        assert compose(j, fbar) == identity_map(fbar.cod)


def test_explicit_diagonal_on_union_inclusion():
    X = regular_s_poset(U2)
    Z = trivial_action(chain(2), U2)
    U, i, j = disjoint_union(X, Z)
    for v in catalog_maps([U])[:10]:
        sq = LiftingSquare(i, identity_map(U), compose(i, v), v)
        k = cd_es_diagonal(sq)
        assert k.table == v.table


def test_explicit_diagonal_on_factorization_square():
    # square (i, f) with u = id and v = fbar; f must be a split epi for the construction
    for f in MAPS_U2_2:
        if not is_split_epi(f):
            continue
        i, fbar = cd_es_factorization(f)
        sq = LiftingSquare(i, f, identity_map(f.dom), fbar)
        k = cd_es_diagonal(sq)
        assert triangles_commute(sq, k)
        assert k.table in [d.table for d in iter_diagonals(sq)]


def test_explicit_diagonal_needs_a_summand():
    C = chain_ab()
    point = as_s_poset(Poset.from_pairs(["a"], []))
    l = SPosetMap(point, C, (0,))
    sq = LiftingSquare(l, identity_map(C), l, identity_map(C))
    with pytest.raises(PreconditionError):
        cd_es_diagonal(sq)


def test_down_closed_embedding_fails_to_lift_against_a_split_epi():
    # {a} -> {a < b} is down-closed; r: {a} + {b < c} -> {a < b} is split by a->b, b->c
    C = chain_ab()
    point = as_s_poset(Poset.from_pairs(["a"], []))
    l = SPosetMap(point, C, (0,))
    src = as_s_poset(Poset.from_pairs(["a", "b", "c"], [("b", "c")]))
    r = SPosetMap(src, C, (0, 0, 1))
    assert is_down_closed_embedding(l) and is_split_epi(r)
    sq = LiftingSquare(l, r, SPosetMap(point, src, (0,)), identity_map(C))
    assert find_diagonal(sq) is None and oracle.diagonals(sq) == []
    assert not diagonalizes(l, r)


# -- witness square -------------------------------------------------------------------------

def test_witness_square_law():
    for f in MAPS_U2_2:
        sq = non_split_witness_square(f)
        assert is_s_poset_embedding(sq.l)
        d = find_diagonal(sq)
        assert (d is not None) == bool(is_split_epi(f))


def test_witness_square_split_case_uses_section():
    f = SPosetMap(chain_ab(), as_s_poset(singleton()), (0, 0))
    g = is_split_epi(f).witness
    sq = non_split_witness_square(f)
    n = len(f.dom)
    h = SPosetMap(sq.l.cod, f.dom, tuple(range(n)) + g.table)
    assert triangles_commute(sq, h)


def test_witness_square_non_split():
    assert find_diagonal(non_split_witness_square(non_split_epi())) is None


# -- injectivity -------------------------------------------------------------------------------

def test_singleton_is_injective():
    assert is_injective_object(as_s_poset(singleton()), EMB_TRIV3)


def test_object_injectivity_is_completeness():
    # over the trivial monoid, Emb-injective posets are exactly the complete ones
    for A in TRIV3:
        rep = is_injective_object(A, EMB_TRIV3)
        assert bool(rep) == bool(is_complete(A.carrier))
        assert bool(rep) == (bool(is_complete(A.carrier))
                             and bool(is_fibration(identity_map(A))))
    assert not is_injective_object(as_s_poset(antichain(2)), EMB_TRIV3)


def test_slice_injective_examples():
    B = as_s_poset(chain(2))
    assert is_slice_injective(identity_map(B), EMB_TRIV3)
    _, _, p2 = product(as_s_poset(singleton()), B)
    assert is_slice_injective(p2, EMB_TRIV3)
    f = non_split_epi()
    assert not is_slice_injective(f, [non_split_witness_square(f).l])


# -- the verification harness --------------------------------------------------------------------

def test_image_factorization_is_a_factorization_system():
    rep = verify_wfs(is_surjective, is_s_poset_embedding, TRIV3, image_factorization,
                     check_unique=True)
    assert rep.ok and rep.complete and rep.unique_diagonals
    assert rep.counts == {"maps": 476, "left": 86, "right": 57, "squares": 16619}


def test_cd_es_lifting_fails_at_size_three():
    rep = verify_wfs(is_down_closed_embedding, is_split_epi, enumerate_s_posets(U2, 3).objects,
                     cd_es_factorization)
    assert rep.factorization_ok and rep.left_retract_closed and rep.right_retract_closed
    assert not rep.lifting_ok
    assert rep.counterexamples[0]["condition"] == "lifting"


def test_cd_es_passes_at_size_two():
    rep = verify_wfs(is_down_closed_embedding, is_split_epi, OBJ_U2_2, cd_es_factorization)
    assert rep.ok


def test_exploratory_identity_not_bottom():
    S = named_pomonoid("u2-discrete")
    rep = verify_wfs(is_down_closed_embedding, is_split_epi, enumerate_s_posets(S, 3).objects,
                     cd_es_factorization, max_counterexamples=0)
    # golden values from the exploratory run
    assert (rep.factorization_ok, rep.lifting_ok, rep.left_retract_closed,
            rep.right_retract_closed) == (True, False, True, True)
    assert rep.counts == {"maps": 3918, "left": 123, "right": 149, "squares": 68674}


def test_budget_marks_report_incomplete():
    rep = verify_wfs(is_down_closed_embedding, is_split_epi, OBJ_U2_2, cd_es_factorization,
                     budget=3)
    assert not rep.complete
