"""Named verification suites: exhaustive finite checks with machine-readable verdicts."""

from __future__ import annotations

import hashlib
import json
from typing import Callable

from .catalog import (
    catalog_maps,
    embedding_catalog,
    enumerate_posets,
    enumerate_s_posets,
    trivially_acted,
)
from .errors import BudgetExceeded, PoswfsError, PreconditionError, StructureError
from .fibrewise import (
    adjunction_check,
    characterization_check,
    emb_top_factorization,
    fibres_complete,
    functor_G_B,
    functor_H_B,
    functor_H_B_on_map,
    is_cofibration,
    is_fibration,
    is_topological,
    regular_injective_envelope,
    transpose,
)
from .lifting import (
    cd_es_diagonal,
    cd_es_factorization,
    diagonalizes,
    find_diagonal,
    is_slice_injective,
    iter_squares,
    non_split_witness_square,
    triangles_commute,
    verify_wfs,
)
from .morphisms import (
    direct_summand_decomposition,
    is_down_closed_embedding,
    is_s_poset_embedding,
    is_split_epi,
    is_unitary_mono,
)
from .order import (
    antichain,
    chain,
    complete_by_lattice,
    complete_by_subsets,
    is_complete,
    is_order_embedding,
    lu_closure,
    macneille_completion,
    posets_isomorphic,
)
from .pomonoid import named_pomonoid
from .serialize import to_jsonable
from .sposet import (
    SPosetMap,
    as_s_poset,
    compose,
    curry,
    exponential_data,
    iter_homs,
    iter_monotone,
    product,
    quotient_theta,
    search_tables,
    uncurry,
    validate_s_poset_map,
)

MAX_COUNTEREXAMPLES = 20


class _Collector:
    def __init__(self):
        self.items: list = []
        self.total = 0

    def add(self, kind: str, data) -> None:
        self.total += 1
        self.items.append({"kind": kind, "data": to_jsonable(data)})

    def dump(self) -> list:
        keyed = sorted(self.items, key=lambda d: json.dumps(d, sort_keys=True))
        return keyed[:MAX_COUNTEREXAMPLES]


def _result(criterion: str, ok: bool, checks: dict, bad: _Collector, **extra) -> dict:
    out = {"criterion": criterion, "verdict": "PASS" if ok else "FAIL", "checks": checks,
           "counterexample_count": bad.total, "counterexamples": bad.dump()}
    out.update(extra)
    return out


# -- 1 ---------------------------------------------------------------------------------------

def suite_macneille(max_size: int = 5, **_) -> dict:
    bad = _Collector()
    n_posets = 0
    for P in enumerate_posets(max_size):
        n_posets += 1
        Pbar, emb = macneille_completion(P)
        if not is_complete(Pbar):
            bad.add("completion not complete", P)
        if bool(complete_by_subsets(Pbar)) != bool(complete_by_lattice(Pbar)):
            bad.add("completeness methods disagree", Pbar)
        if bool(complete_by_subsets(P)) != bool(complete_by_lattice(P)):
            bad.add("completeness methods disagree", P)
        if not is_order_embedding(emb):
            bad.add("down-set map not an embedding", P)
        if is_complete(P) and not posets_isomorphic(P, Pbar):
            bad.add("complete poset not a fixed point", P)
        for A in range(P.full + 1):
            c = lu_closure(P, A)
            if c & A != A or lu_closure(P, c) != c:
                bad.add("LU is not a closure", {"poset": P, "subset": A})
    diamond = macneille_completion(antichain(2))[0]
    grid = product(as_s_poset(chain(2)), as_s_poset(chain(2)))[0].carrier
    antichain_ok = len(diamond) == 4 and posets_isomorphic(diamond, grid)
    if not antichain_ok:
        bad.add("antichain-2 completion is not the diamond", diamond)
    chains_ok = all(posets_isomorphic(chain(n), macneille_completion(chain(n))[0])
                    for n in range(1, max_size + 1))
    if not chains_ok:
        bad.add("chain completion not a fixed point", max_size)
    checks = {"posets": n_posets, "antichain2_diamond": antichain_ok, "chains_fixed": chains_ok}
    return _result("MacNeille completion is complete, embeds, and fixes complete posets",
                   bad.total == 0, checks, bad)


# -- 2 ---------------------------------------------------------------------------------------

def suite_lemma_downclosed(max_size: int = 3, pomonoids=("trivial", "u2", "chain3"),
                           budget: int | None = None, **_) -> dict:
    bad = _Collector()
    checks = {}
    for name in pomonoids:
        S = named_pomonoid(name)
        cat = enumerate_s_posets(S, max_size)
        n_emb = n_cd = n_summand = n_unitary = 0
        for f in embedding_catalog(cat.objects, budget):
            n_emb += 1
            if not is_down_closed_embedding(f):
                continue
            n_cd += 1
            has_summand = direct_summand_decomposition(f) is not None
            unitary = is_unitary_mono(f)
            n_summand += has_summand
            n_unitary += unitary
            if not has_summand:
                bad.add(f"{name}: down-closed embedding without direct summand", f)
            if not unitary:
                bad.add(f"{name}: down-closed embedding not unitary", f)
        checks[name] = {"objects": len(cat), "embeddings": n_emb, "down_closed": n_cd,
                        "with_summand": n_summand, "unitary": n_unitary}
    return _result("down-closed embedding implies direct summand and unitary",
                   bad.total == 0, checks, bad)


# -- 3 ---------------------------------------------------------------------------------------

def suite_wfs_cd_es(pomonoid: str = "u2", max_size: int = 3, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    S = named_pomonoid(pomonoid)
    objects = enumerate_s_posets(S, max_size).objects
    rep = verify_wfs(is_down_closed_embedding, lambda f: is_split_epi(f, budget), objects,
                     cd_es_factorization, budget, max_counterexamples=10**9)
    if not rep.complete:
        raise BudgetExceeded("wfs verification", budget or 0)
    for c in rep.counterexamples:
        bad.add(c["condition"], c["data"])

    maps = catalog_maps(objects, budget)
    lefts = [f for f in maps if is_down_closed_embedding(f)]
    rights = [g for g in maps if is_split_epi(g, budget)]
    pair_failures = 0
    squares = constructive_ok = constructive_failed = 0
    summand_left_failures = 0
    for l in lefts:
        summand = direct_summand_decomposition(l) is not None
        for r in rights:
            if not diagonalizes(l, r, budget):
                pair_failures += 1
                summand_left_failures += summand
                bad.add("pair without diagonal", {"l": l, "r": r})
            for sq in iter_squares(l, r, budget):
                squares += 1
                try:
                    d = cd_es_diagonal(sq, budget=budget)
                except PreconditionError as exc:
                    constructive_failed += 1
                    bad.add(f"constructive diagonal: {exc}", sq)
                    continue
                if triangles_commute(sq, d):
                    constructive_ok += 1
                else:
                    constructive_failed += 1
                    bad.add("constructive diagonal fails a triangle", sq)

    checks = {
        "objects": len(objects),
        "maps": rep.counts.get("maps"),
        "left_maps": len(lefts),
        "right_maps": len(rights),
        "factorization": rep.factorization_ok,
        "lifting": rep.lifting_ok,
        "left_retract_closed": rep.left_retract_closed,
        "right_retract_closed": rep.right_retract_closed,
        "pairs_failing_diagonalizes": pair_failures,
        "pairs_failing_with_summand_left": summand_left_failures,
        "squares": squares,
        "constructive_diagonal_ok": constructive_ok,
        "constructive_diagonal_failed": constructive_failed,
    }
    ok = rep.ok and pair_failures == 0 and constructive_failed == 0
    return _result("(C_D, E_S) satisfies factorization, lifting and retract closure", ok, checks, bad,
                   exploratory=_exploratory_cd_es(max_size, budget))


def _exploratory_cd_es(max_size: int, budget: int | None) -> dict:
    """Same harness over ``u2-discrete`` (identity not the bottom); recorded, never asserted."""
    S = named_pomonoid("u2-discrete")
    objects = enumerate_s_posets(S, max_size).objects
    rep = verify_wfs(is_down_closed_embedding, lambda f: is_split_epi(f, budget), objects,
                     cd_es_factorization, budget, max_counterexamples=0)
    return {"pomonoid": "u2-discrete", "objects": len(objects), "factorization": rep.factorization_ok,
            "lifting": rep.lifting_ok, "left_retract_closed": rep.left_retract_closed,
            "right_retract_closed": rep.right_retract_closed, "counts": rep.counts}


# -- 4 ---------------------------------------------------------------------------------------

def suite_emb_box_split(pomonoid: str = "u2", max_size: int = 3, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    S = named_pomonoid(pomonoid)
    objects = enumerate_s_posets(S, max_size).objects
    n = n_split = 0
    for f in catalog_maps(objects, budget):
        n += 1
        lifted = find_diagonal(non_split_witness_square(f), budget) is not None
        split = bool(is_split_epi(f, budget))
        n_split += split
        if lifted != split:
            bad.add("diagonal existence differs from split epi", f)
    checks = {"objects": len(objects), "maps": n, "split_epis": n_split}
    return _result("witness square has a diagonal iff the map is a split epi", bad.total == 0, checks, bad)


# -- 5 ---------------------------------------------------------------------------------------

def suite_fibrewise_equivalence(max_size: int = 3, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    objects = [as_s_poset(P) for P in enumerate_posets(max_size)]
    H = embedding_catalog(objects, budget)
    n = n_inj = 0
    for f in catalog_maps(objects, budget):
        n += 1
        inj = bool(is_slice_injective(f, H, budget))
        fib = bool(fibres_complete(f)) and bool(is_fibration(f)) and bool(is_cofibration(f))
        top = bool(is_topological(f))
        n_inj += inj
        if not (inj == fib == top):
            bad.add("three-way disagreement",
                    {"map": f, "slice_injective": inj, "fibrewise": fib, "topological": top})
    checks = {"posets": len(objects), "embeddings": len(H), "maps": n, "injective": n_inj}
    return _result("slice injectivity = complete fibres + (co)fibration = topological",
                   bad.total == 0, checks, bad)


# -- 6, 7 --------------------------------------------------------------------------------------

def _slice_family(S, max_dom: int, max_cod: int, budget):
    doms = enumerate_s_posets(S, max_dom).objects
    cods = trivially_acted(S, max_cod)
    return [f for A in doms for B in cods for f in iter_homs(A, B, budget=budget)]


def suite_envelope_injective(pomonoid: str = "u2", max_dom: int = 2, max_cod: int = 2,
                             emb_size: int = 3, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    S = named_pomonoid(pomonoid)
    H = embedding_catalog(enumerate_s_posets(S, emb_size).objects, budget)
    instances = _slice_family(S, max_dom, max_cod, budget)
    for f in instances:
        env = regular_injective_envelope(f, budget)
        if not (validate_s_poset_map(env.e) and is_s_poset_embedding(env.e)):
            bad.add("envelope map is not an embedding", f)
        if compose(env.e, env.env).table != f.table:
            bad.add("envelope triangle does not commute", f)
        rep = is_slice_injective(env.env, H, budget)
        if not rep:
            bad.add("envelope not injective", {"map": f, "square": rep.witness})
    checks = {"instances": len(instances), "embeddings": len(H)}
    return _result("envelope embeds f and is injective over the base", bad.total == 0, checks, bad)


def suite_characterization(pomonoid: str = "u2", max_dom: int = 2, max_cod: int = 2,
                           emb_size: int = 3, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    S = named_pomonoid(pomonoid)
    H = embedding_catalog(enumerate_s_posets(S, emb_size).objects, budget)
    instances = _slice_family(S, max_dom, max_cod, budget)
    outcomes = {"agree": 0, "disagree": 0, "sections-empty": 0}
    lhs_true_empty = 0
    for f in instances:
        rep = characterization_check(f, H, budget)
        outcome = rep.witness["outcome"]
        outcomes[outcome] += 1
        if outcome == "sections-empty" and rep.witness["lhs"]:
            lhs_true_empty += 1
        if outcome == "disagree":
            bad.add("sides disagree", {"map": f, "detail": rep.witness})
    checks = {"instances": len(instances), "embeddings": len(H), "outcomes": outcomes,
              "sections_empty_with_injective_lhs": lhs_true_empty}
    return _result("slice injectivity matches section pairing plus injective sections object",
                   outcomes["disagree"] == 0, checks, bad)


# -- 8 ---------------------------------------------------------------------------------------

def _theta_universal(A, P, budget) -> tuple[int, list]:
    """Checks that every theta-invariant monotone ``g: A -> P`` factors uniquely through eta."""
    Q, eta = quotient_theta(A)
    problems = []
    checked = 0
    for g in search_tables(A.carrier, P, budget=budget, what="theta search"):
        invariant = all(g[A.act[a][s]] == g[a] for a in range(len(A)) for s in range(len(A.over)))
        masks = [P.full] * len(Q)
        for a, q in enumerate(eta.table):
            masks[q] &= 1 << g[a]
        factors = list(search_tables(Q, P, allowed=masks, budget=budget, what="theta search")) \
            if all(masks) else []
        checked += 1
        if invariant and len(factors) != 1:
            problems.append({"A": A, "P": P, "g": list(g), "factorizations": len(factors)})
        if not invariant and factors:
            problems.append({"A": A, "P": P, "g": list(g), "factorizations": len(factors)})
    return checked, problems


def suite_adjunction(pomonoid: str = "u2", max_dom: int = 2, max_p: int = 2,
                     theta_size: int = 3, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    S = named_pomonoid(pomonoid)
    from .order import singleton
    from .sposet import trivial_action

    one = singleton("*")
    B = trivial_action(one, S)
    pairs = 0
    for A in enumerate_s_posets(S, max_dom).objects:
        f = next(iter_homs(A, B, budget=budget))
        for P in enumerate_posets(max_p):
            for l in iter_monotone(P, one, budget=budget):
                pairs += 1
                rep = adjunction_check(f, l, budget)
                if not rep:
                    bad.add(f"adjunction: {rep.reason}", {"f": f, "l": l})

    # H_B(G_B(l)) is l up to the unit
    round_trips = 0
    for Bp in enumerate_posets(max_p):
        for P in enumerate_posets(max_p):
            for l in iter_monotone(P, Bp, budget=budget):
                round_trips += 1
                Gl = functor_G_B(l, S)
                Hl = functor_H_B(Gl)
                _, eta = quotient_theta(Gl.dom)
                bijective = len(set(eta.table)) == len(P) == len(Hl.dom)
                iso = bijective and all(P.leq(a, b) == Hl.dom.leq(eta.table[a], eta.table[b])
                                        for a in range(len(P)) for b in range(len(P)))
                if not iso or any(Hl.table[eta.table[a]] != l.table[a] for a in range(len(P))):
                    bad.add("H_B G_B l is not isomorphic to l", l)

    theta_checked = 0
    for A in enumerate_s_posets(S, theta_size).objects:
        for P in enumerate_posets(theta_size):
            checked, problems = _theta_universal(A, P, budget)
            theta_checked += checked
            for p in problems:
                bad.add("theta universal property", p)

    natural = _naturality_spot_check(S, budget)
    if not natural:
        bad.add("naturality spot check failed", pomonoid)
    checks = {"adjunction_pairs": pairs, "round_trips": round_trips,
              "theta_maps_checked": theta_checked, "naturality_spot_check": natural}
    return _result("H_B is left adjoint to G_B", bad.total == 0, checks, bad)


def _naturality_spot_check(S, budget) -> bool:
    """``transpose(h . g) = transpose(h) . H_B(g)`` for one concrete triple."""
    from .order import chain as _chain
    from .sposet import regular_s_poset, trivial_action

    one = trivial_action(_chain(1), S)
    A = regular_s_poset(S)
    A2 = product(A, A)[0]
    g = SPosetMap(A2, A, tuple(k // len(A) for k in range(len(A2))))
    P = trivial_action(_chain(2), S)
    ok = True
    for h in iter_homs(A, P, budget=budget):
        lhs = transpose(compose(g, h))
        rhs_map = functor_H_B_on_map(g)
        rhs = tuple(transpose(h).table[q] for q in rhs_map.table)
        ok &= lhs.table == rhs
    return ok and next(iter_homs(A, one, budget=budget), None) is not None


# -- 9 ---------------------------------------------------------------------------------------

def suite_pogroup_topological(pomonoid: str = "z2", max_size: int = 3,
                              budget: int | None = None, **_) -> dict:
    bad = _Collector()
    S = named_pomonoid(pomonoid)
    H = embedding_catalog(enumerate_s_posets(S, max_size).objects, budget)
    objects = trivially_acted(S, max_size)
    n = n_top = n_inj = n_fact = 0
    for f in catalog_maps(objects, budget):
        n += 1
        top = bool(is_topological(f))
        inj = bool(is_slice_injective(f, H, budget))
        n_top += top
        n_inj += inj
        if top and not inj:
            bad.add("topological but not injective", f)
        e, p = emb_top_factorization(f, budget)
        good = (bool(validate_s_poset_map(e)) and bool(validate_s_poset_map(p))
                and is_s_poset_embedding(e) and bool(is_topological(p, max_size=64))
                and compose(e, p).table == f.table
                and e.cod.is_trivial())
        n_fact += good
        if not good:
            bad.add("no (Emb, Top) factorization", f)
    checks = {"embeddings": len(H), "maps": n, "topological": n_top, "injective": n_inj,
              "factorizations": n_fact}
    return _result("over a pogroup, topological maps with trivial action are injective",
                   bad.total == 0, checks, bad)


# -- 10 --------------------------------------------------------------------------------------

def _currying(A, B, C, budget) -> list[str]:
    AB = product(A, B)[0]
    exp = exponential_data(B, C, budget)
    left = list(iter_homs(AB, C, budget=budget))
    right = list(iter_homs(A, exp.obj, budget=budget))
    problems = []
    if len(left) != len(right):
        problems.append(f"hom counts differ: {len(left)} vs {len(right)}")
    right_tables = {h.table for h in right}
    images = set()
    for g in left:
        h = curry(g, A, B, exp)
        if h.table not in right_tables:
            problems.append("curried map is not an S-poset map")
            continue
        images.add(h.table)
        if uncurry(h, A, B, exp, AB).table != g.table:
            problems.append("uncurry does not invert curry")
    if images != right_tables:
        problems.append("currying is not a bijection")
    return problems


def suite_cartesian_closed(trivial_size: int = 2, u2_size: int = 2, budget: int | None = None, **_) -> dict:
    bad = _Collector()
    triples: dict[str, int] = {}
    for name, size in (("trivial", trivial_size), ("u2", u2_size)):
        triples[name] = 0
        objects = enumerate_s_posets(named_pomonoid(name), size).objects
        for A in objects:
            for B in objects:
                for C in objects:
                    triples[name] += 1
                    for p in _currying(A, B, C, budget):
                        bad.add(f"{name}: {p}", {"A": A, "B": B, "C": C})
    return _result("hom(A x B, C) is in bijection with hom(A, C^B)", bad.total == 0 and triples["u2"] >= 3,
                   {"triples": triples}, bad)


SUITES: dict[str, Callable[..., dict]] = {
    "macneille": suite_macneille,
    "lemma-downclosed": suite_lemma_downclosed,
    "wfs-cd-es": suite_wfs_cd_es,
    "emb-box-split": suite_emb_box_split,
    "fibrewise-equivalence": suite_fibrewise_equivalence,
    "envelope-injective": suite_envelope_injective,
    "characterization": suite_characterization,
    "adjunction": suite_adjunction,
    "pogroup-topological": suite_pogroup_topological,
    "cartesian-closed": suite_cartesian_closed,
}


def run_suite(suite: str, params: dict | None = None) -> dict:
    """Runs a named suite and returns ``{"manifest": ..., "report": ...}``.

    Budget overruns produce a ``BUDGET_EXCEEDED`` outcome rather than a verdict.
    """
    if suite not in SUITES:
        raise StructureError(f"unknown suite {suite!r}; known: {sorted(SUITES)}")
    params = dict(params or {})
    digest = hashlib.sha256(json.dumps({"suite": suite, "params": params},
                                       sort_keys=True).encode()).hexdigest()
    try:
        report = SUITES[suite](**params)
        outcome = report["verdict"]
    except BudgetExceeded as exc:
        report = {"verdict": "BUDGET_EXCEEDED", "error": str(exc)}
        outcome = "BUDGET_EXCEEDED"
    manifest = {
        "command": f"suite {suite}",
        "suite": suite,
        "params": params,
        "input_digest": digest,
        "budgets": {"hom_budget": params.get("budget")},
        "deterministic": True,
        "outcome": outcome,
    }
    return {"manifest": manifest, "report": report}
