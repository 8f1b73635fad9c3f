"""The diagonal-lifting relation, factorizations and injectivity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .errors import BudgetExceeded, PreconditionError, StructureError
from .morphisms import (
    direct_summand_decomposition,
    inverse,
    is_down_closed_embedding,
    is_split_epi,
    is_split_mono,
)
from .report import ClassReport, failed, passed
from .sposet import (
    SPoset,
    SPosetMap,
    compose,
    disjoint_union,
    fibre_mask,
    identity_map,
    search_tables,
)


@dataclass(frozen=True)
class LiftingSquare:
    """Commutative square ``r . u = v . l`` with ``l: A -> B``, ``r: C -> D``."""

    l: SPosetMap
    r: SPosetMap
    u: SPosetMap
    v: SPosetMap

    def __post_init__(self):
        l, r, u, v = self.l, self.r, self.u, self.v
        if u.dom != l.dom or u.cod != r.dom or v.dom != l.cod or v.cod != r.cod:
            raise StructureError("square maps do not fit together")
        if any(r.table[u.table[a]] != v.table[l.table[a]] for a in range(len(l.dom))):
            raise StructureError("square does not commute")


def _diagonal_masks(l, r, u, v) -> list[int] | None:
    masks = [fibre_mask(r, v.table[b]) for b in range(len(l.cod))]
    for a, b in enumerate(l.table):
        masks[b] &= 1 << u.table[a]
    if not all(masks):
        return None
    return masks


def iter_diagonals(sq: LiftingSquare, budget: int | None = None) -> Iterator[SPosetMap]:
    masks = _diagonal_masks(sq.l, sq.r, sq.u, sq.v)
    if masks is None:
        return
    B, C = sq.l.cod, sq.r.dom
    for t in search_tables(B.carrier, C.carrier, B.act, C.act, masks, budget, "diagonal search"):
        yield SPosetMap(B, C, t)


def find_diagonal(sq: LiftingSquare, budget: int | None = None) -> SPosetMap | None:
    """First diagonal ``d`` with ``d . l = u`` and ``r . d = v``; None proves there is none."""
    return next(iter_diagonals(sq, budget), None)


def triangles_commute(sq: LiftingSquare, d: SPosetMap) -> bool:
    return (compose(sq.l, d).table == sq.u.table) and (compose(d, sq.r).table == sq.v.table)


def iter_squares(l: SPosetMap, r: SPosetMap, budget: int | None = None) -> Iterator[LiftingSquare]:
    """All commutative squares on ``(l, r)``: ``u`` in hom order, then compatible ``v``."""
    A, B, C, D = l.dom, l.cod, r.dom, r.cod
    if A.over != C.over:
        raise StructureError("maps are over different pomonoids")
    for ut in search_tables(A.carrier, C.carrier, A.act, C.act, budget=budget, what="square search"):
        masks = [D.carrier.full] * len(B)
        for a, b in enumerate(l.table):
            masks[b] &= 1 << r.table[ut[a]]
        if not all(masks):
            continue
        u = SPosetMap(A, C, ut)
        for vt in search_tables(B.carrier, D.carrier, B.act, D.act, masks, budget, "square search"):
            yield LiftingSquare(l, r, u, SPosetMap(B, D, vt))


def diagonalizes(l: SPosetMap, r: SPosetMap, budget: int | None = None) -> ClassReport:
    """``l`` has the left lifting property against ``r``; witness is the first unliftable square."""
    for sq in iter_squares(l, r, budget):
        if find_diagonal(sq, budget) is None:
            return failed("unliftable square", sq)
    return passed()


# -- the (down-closed embedding, split epi) pair -------------------------------------------

def cd_es_factorization(f: SPosetMap) -> tuple[SPosetMap, SPosetMap]:
    """``f = fbar . i`` through ``X + Y`` with ``fbar`` equal to ``f`` on X and the identity on Y."""
    X, Y = f.dom, f.cod
    U, i, _ = disjoint_union(X, Y)
    n = len(X)
    fbar = SPosetMap(U, Y, f.table + tuple(range(len(Y))))
    return i, fbar


def cd_es_diagonal(sq: LiftingSquare, section: SPosetMap | None = None,
                   budget: int | None = None) -> SPosetMap:
    """The explicit diagonal: ``u`` on the image of ``l``, ``h . v`` on its complement."""
    l, r, u, v = sq.l, sq.r, sq.u, sq.v
    if not is_down_closed_embedding(l):
        raise PreconditionError("left map is not a down-closed embedding")
    dec = direct_summand_decomposition(l)
    if dec is None:
        raise PreconditionError("image of the left map is not a direct summand")
    if section is None:
        rep = is_split_epi(r, budget)
        if not rep:
            raise PreconditionError("right map is not a split epimorphism")
        section = rep.witness
    _, iso = dec
    n = len(l.dom)
    # k on X + Z; transported back along iso
    k = []
    for b in range(len(l.cod)):
        j = iso.table[b]
        k.append(u.table[j] if j < n else section.table[v.table[b]])
    d = SPosetMap(l.cod, r.dom, tuple(k))
    if not triangles_commute(sq, d):
        raise PreconditionError("constructed map does not fill the square")
    return d


def non_split_witness_square(f: SPosetMap) -> LiftingSquare:
    """Square ``(i: A -> A+B, f, id_A, fbar)`` with ``fbar = f`` on A and the identity on B."""
    A, B = f.dom, f.cod
    U, i, _ = disjoint_union(A, B)
    fbar = SPosetMap(U, B, f.table + tuple(range(len(B))))
    return LiftingSquare(i, f, identity_map(A), fbar)


def image_factorization(f: SPosetMap) -> tuple[SPosetMap, SPosetMap]:
    """``f = m . e`` with ``e`` onto the image (induced order) and ``m`` its inclusion."""
    Y = f.cod
    img = sorted(set(f.table))
    where = {y: k for k, y in enumerate(img)}
    carrier = Y.carrier.restrict(f.image())
    M = SPoset(Y.over, carrier, tuple(tuple(where[x] for x in Y.act[y]) for y in img))
    e = SPosetMap(f.dom, M, tuple(where[y] for y in f.table))
    m = SPosetMap(M, Y, tuple(img))
    return e, m


# -- injectivity ------------------------------------------------------------------------------

def is_injective_object(I: SPoset, H: Sequence[SPosetMap], budget: int | None = None) -> ClassReport:
    """Every ``u: U -> I`` extends along every ``h: U -> V`` in H; witness on failure is ``(h, u)``.

    An empty carrier is never injective.
    """
    if len(I) == 0:
        return failed("empty object")
    for h in H:
        U, V = h.dom, h.cod
        for ut in search_tables(U.carrier, I.carrier, U.act, I.act, budget=budget,
                                what="injectivity search"):
            masks = [I.carrier.full] * len(V)
            for a, b in enumerate(h.table):
                masks[b] &= 1 << ut[a]
            if not all(masks) or next(search_tables(V.carrier, I.carrier, V.act, I.act, masks,
                                                    budget, "extension search"), None) is None:
                return failed("no extension", (h, SPosetMap(U, I, ut)))
    return passed()


def is_slice_injective(f: SPosetMap, H: Sequence[SPosetMap], budget: int | None = None) -> ClassReport:
    """``f`` as an object over its codomain is injective against every ``h`` in H."""
    for h in H:
        rep = diagonalizes(h, f, budget)
        if not rep:
            return failed("unliftable square", rep.witness)
    return passed()


# -- WFS verification harness ---------------------------------------------------------------

@dataclass
class WfsReport:
    factorization_ok: bool = True
    lifting_ok: bool = True
    left_retract_closed: bool = True
    right_retract_closed: bool = True
    counterexamples: list = field(default_factory=list)
    complete: bool = True
    scale: str = ""
    counts: dict = field(default_factory=dict)
    unique_diagonals: bool | None = None

    @property
    def ok(self) -> bool:
        return (self.factorization_ok and self.lifting_ok and self.left_retract_closed
                and self.right_retract_closed)


class _Cached:
    """Memoizes a predicate on maps between persistent catalog objects."""

    def __init__(self, pred: Callable[[SPosetMap], object]):
        self.pred = pred
        self.memo: dict = {}

    def __call__(self, f: SPosetMap) -> bool:
        key = (id(f.dom), id(f.cod), f.table)
        if key not in self.memo:
            self.memo[key] = bool(self.pred(f))
        return self.memo[key]


def verify_wfs(left: Callable, right: Callable, catalog: Sequence[SPoset],
               factorizer: Callable[[SPosetMap], tuple[SPosetMap, SPosetMap]],
               budget: int | None = None, check_unique: bool = False,
               max_counterexamples: int = 20) -> WfsReport:
    """Checks factorization, lifting and both retract closures over all catalog maps.

    The result is evidence at the catalog's scale, not a proof of the class equalities.
    """
    objects = list(catalog)
    report = WfsReport(scale=f"{len(objects)} objects, max size {max((len(A) for A in objects), default=0)}")
    if check_unique:
        report.unique_diagonals = True
    L, R = _Cached(left), _Cached(right)
    split_mono = _Cached(lambda f: is_split_mono(f, budget))
    split_epi = _Cached(lambda f: is_split_epi(f, budget))

    def note(kind, data):
        if len(report.counterexamples) < max_counterexamples:
            report.counterexamples.append({"condition": kind, "data": data})

    try:
        maps = [f for A in objects for B in objects
                for f in _homs(A, B, budget)]
        out_of: dict[int, list[SPosetMap]] = {}
        for f in maps:
            out_of.setdefault(id(f.dom), []).append(f)
        report.counts["maps"] = len(maps)

        for h in maps:
            f, g = factorizer(h)
            if compose(f, g).table != h.table or not left(f) or not right(g):
                report.factorization_ok = False
                note("factorization", h)

        lefts = [f for f in maps if L(f)]
        rights = [g for g in maps if R(g)]
        report.counts["left"] = len(lefts)
        report.counts["right"] = len(rights)
        squares = 0
        for l in lefts:
            for r in rights:
                for sq in iter_squares(l, r, budget):
                    squares += 1
                    diags = iter_diagonals(sq, budget)
                    d = next(diags, None)
                    if d is None:
                        report.lifting_ok = False
                        note("lifting", sq)
                        break
                    if check_unique and next(diags, None) is not None:
                        report.unique_diagonals = False
                        note("uniqueness", sq)
        report.counts["squares"] = squares

        for f in maps:
            for alpha in out_of.get(id(f.cod), []):
                if split_mono(alpha) and L(compose(f, alpha)) and not L(f):
                    report.left_retract_closed = False
                    note("left retract", (f, alpha))
        for beta in maps:
            if not split_epi(beta):
                continue
            for fp in out_of.get(id(beta.cod), []):
                if R(compose(beta, fp)) and not R(fp):
                    report.right_retract_closed = False
                    note("right retract", (fp, beta))
    except BudgetExceeded:
        report.complete = False
    return report


def _homs(A, B, budget):
    for t in search_tables(A.carrier, B.carrier, A.act, B.act, budget=budget):
        yield SPosetMap(A, B, t)
