"""Slice-category checks: fibrations, topological maps, sections, envelopes, adjunction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConstructionError, InternalInconsistency, PreconditionError, StructureError
from .lifting import is_injective_object, is_slice_injective
from .morphisms import is_s_poset_embedding
from .order import MonotoneMap, Poset, bits, is_complete, macneille_completion
from .pomonoid import Pomonoid
from .report import ClassReport, failed, passed
from .sposet import (
    SPoset,
    SPosetMap,
    as_s_map,
    compose,
    fixed_masks,
    product,
    quotient_theta,
    regular_s_poset,
    search_tables,
    table_label,
    trivial_action,
    validate_s_poset,
    validate_s_poset_map,
)

TOPOLOGICAL_SIZE_LIMIT = 12


def _parts(f) -> tuple[Poset, Poset, tuple[int, ...]]:
    if isinstance(f, SPosetMap):
        return f.dom.carrier, f.cod.carrier, f.table
    return f.dom, f.cod, f.table


def _fibres(X: Poset, B: Poset, t) -> list[int]:
    masks = [0] * len(B)
    for x, b in enumerate(t):
        masks[b] |= 1 << x
    return masks


def _least_in(P: Poset, mask: int) -> int | None:
    for i in bits(mask):
        if P.up[i] & mask == mask:
            return i
    return None


def _greatest_in(P: Poset, mask: int) -> int | None:
    for i in bits(mask):
        if P.down[i] & mask == mask:
            return i
    return None


def is_fibration(f) -> ClassReport:
    """For ``f(x) <= b`` the fibre over b above x has a minimum; witness ``(x, b)``."""
    X, B, t = _parts(f)
    fib = _fibres(X, B, t)
    for x in range(len(X)):
        for b in bits(B.up[t[x]]):
            if _least_in(X, fib[b] & X.up[x]) is None:
                return failed("no minimum above x in the fibre", (X.elements[x], B.elements[b]))
    return passed()


def is_cofibration(f) -> ClassReport:
    X, B, t = _parts(f)
    fib = _fibres(X, B, t)
    for x in range(len(X)):
        for b in bits(B.down[t[x]]):
            if _greatest_in(X, fib[b] & X.down[x]) is None:
                return failed("no maximum below x in the fibre", (X.elements[x], B.elements[b]))
    return passed()


def fibres_complete(f) -> ClassReport:
    """Completeness of every fibre; an empty fibre counts as a failure.

    The witness maps each codomain label to ``complete``, ``incomplete`` or ``empty``.
    """
    X, B, t = _parts(f)
    status = {}
    for b, mask in enumerate(_fibres(X, B, t)):
        if not mask:
            status[B.elements[b]] = "empty"
        else:
            status[B.elements[b]] = "complete" if is_complete(X.restrict(mask)) else "incomplete"
    ok = all(v == "complete" for v in status.values())
    return ClassReport(ok, status, "" if ok else "fibre not complete")


def is_topological(f, max_size: int = TOPOLOGICAL_SIZE_LIMIT) -> ClassReport:
    """Every structured source ``b <= f(x), x in F`` has an initial lift; witness ``(b, F)``.

    The lift must be the greatest element of ``{y : f(y) <= b, y <= F}`` and must lie
    in the fibre over b.  All subsets F are scanned.
    """
    X, B, t = _parts(f)
    if len(X) > max_size:
        raise PreconditionError(f"topological check is limited to {max_size} elements")
    n = len(X)
    for b in range(len(B)):
        above = [x for x in range(n) if B.leq(b, t[x])]
        below_b = sum(1 << y for y in range(n) if B.leq(t[y], b))
        # lower-bound masks of all subsets of `above`, built incrementally
        lbs = [X.full]
        for k, x in enumerate(above):
            lbs += [m & X.down[x] for m in lbs]
        for code, lb in enumerate(lbs):
            cand = lb & below_b
            top = _greatest_in(X, cand)
            if top is None or t[top] != b:
                F = [X.elements[above[k]] for k in range(len(above)) if code >> k & 1]
                return failed("no initial lift", (B.elements[b], F))
    return passed()


@dataclass
class FibrewiseReport:
    fibres_complete: dict
    fibration: ClassReport
    cofibration: ClassReport
    topological: ClassReport
    fibrewise_ok: bool = field(init=False)

    def __post_init__(self):
        self.fibrewise_ok = (all(v == "complete" for v in self.fibres_complete.values())
                             and self.fibration.verdict and self.cofibration.verdict)


def fibrewise_report(f, max_size: int = TOPOLOGICAL_SIZE_LIMIT) -> FibrewiseReport:
    return FibrewiseReport(fibres_complete(f).witness, is_fibration(f), is_cofibration(f),
                           is_topological(f, max_size))


# -- sections ----------------------------------------------------------------------------

def sections_object(f: SPosetMap, budget: int | None = None) -> SPoset | None:
    """The S-poset of ``h: S x B -> X`` with ``f . h`` the projection, or None if there are none."""
    X, B = f.dom, f.cod
    S = X.over
    SB = product(regular_s_poset(S), B)[0]
    fib = _fibres(X.carrier, B.carrier, f.table)
    masks = [fib[k % len(B)] for k in range(len(SB))]
    tables = list(search_tables(SB.carrier, X.carrier, SB.act, X.act, masks, budget,
                                "sections search"))
    if not tables:
        return None
    pos = {h: k for k, h in enumerate(tables)}
    nb = len(B)
    up, act = [], []
    for h in tables:
        up.append(sum(1 << k for k, g in enumerate(tables)
                      if all(X.carrier.leq(x, y) for x, y in zip(h, g))))
        row = []
        for s in range(len(S)):
            g = tuple(h[S.mult[s][u] * nb + b] for u in range(len(S)) for b in range(nb))
            if g not in pos:
                raise ConstructionError("sections are not closed under the action")
            row.append(pos[g])
        act.append(tuple(row))
    carrier = Poset(tuple(table_label(X, h) for h in tables), tuple(up))
    return SPoset(S, carrier, tuple(act))


def pairing_is_section(f: SPosetMap, budget: int | None = None) -> ClassReport:
    """Looks for ``r: X x B -> X`` over B with ``r(x, f(x)) = x``; witness is ``r``."""
    X, B = f.dom, f.cod
    XB = product(X, B)[0]
    nb = len(B)
    fib = _fibres(X.carrier, B.carrier, f.table)
    masks = [fib[k % nb] for k in range(len(XB))]
    for x in range(len(X)):
        masks[x * nb + f.table[x]] &= 1 << x
    for t in search_tables(XB.carrier, X.carrier, XB.act, X.act, masks, budget, "retraction search"):
        return passed(SPosetMap(XB, X, t))
    return failed("pairing is not a section")


def min_in_fibre(f: SPosetMap, r: SPosetMap, x: int, b: int) -> int:
    """``r(x, b)``, checked to be the least fibre element over b above x."""
    X, B = f.dom.carrier, f.cod.carrier
    if not B.leq(f.table[x], b):
        raise PreconditionError("need f(x) <= b")
    xb = r.table[x * len(B) + b]
    fib = _fibres(X, B, f.table)[b]
    if not fib >> xb & 1 or not X.leq(x, xb):
        raise InternalInconsistency("r(x, b) is not in the fibre above x")
    if (fib & X.up[x]) & ~X.up[xb]:
        raise InternalInconsistency("r(x, b) is not minimal")
    return xb


# -- envelope -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Envelope:
    env: SPosetMap      # second projection  Abar^(S) x B -> B
    e: SPosetMap        # A -> Abar^(S) x B
    power: SPoset       # Abar^(S)


def monotone_power(Abar: Poset, S: Pomonoid, budget: int | None = None) -> tuple[SPoset, list]:
    """Monotone maps ``S -> Abar``, pointwise order, ``(phi.s)(t) = phi(st)``."""
    phis = list(search_tables(S.carrier, Abar, budget=budget, what="monotone power search"))
    pos = {p: k for k, p in enumerate(phis)}
    up = tuple(sum(1 << k for k, q in enumerate(phis)
                   if all(Abar.leq(x, y) for x, y in zip(p, q))) for p in phis)
    act = tuple(tuple(pos[tuple(p[S.mult[s][u]] for u in range(len(S)))] for s in range(len(S)))
                for p in phis)
    return SPoset(S, Poset(tuple(table_label(Abar, p) for p in phis), up), act), phis


def regular_injective_envelope(f: SPosetMap, budget: int | None = None) -> Envelope:
    """Embeds ``f: A -> B`` over B into the projection ``Abar^(S) x B -> B``.

    ``e(a) = (s -> down(a.s), f(a))``; the embedding, equivariance and the
    triangle over B are all checked before returning.
    """
    A, B = f.dom, f.cod
    S = A.over
    Abar, down = macneille_completion(A.carrier)
    power, phis = monotone_power(Abar, S, budget)
    pos = {p: k for k, p in enumerate(phis)}
    prod, _, pi = product(power, B)
    nb = len(B)
    first = []
    for a in range(len(A)):
        phi = tuple(down.table[A.act[a][s]] for s in range(len(S)))
        if phi not in pos:
            raise ConstructionError("s -> down(a.s) is not monotone")
        first.append(pos[phi])
    e = SPosetMap(A, prod, tuple(first[a] * nb + f.table[a] for a in range(len(A))))
    if not validate_s_poset_map(e):
        raise ConstructionError("envelope map is not an S-poset map")
    if not is_s_poset_embedding(e):
        raise ConstructionError("envelope map is not an embedding")
    if compose(e, pi).table != f.table:
        raise ConstructionError("envelope triangle does not commute")
    for a in range(len(A)):
        for s in range(len(S)):
            if power.act[first[a]][s] != first[A.act[a][s]]:
                raise ConstructionError("first component is not equivariant")
    return Envelope(pi, e, power)


# -- the Emb-Top check for trivial actions -----------------------------------------------------

def emb_top_factorization(f: SPosetMap, budget: int | None = None) -> tuple[SPosetMap, SPosetMap]:
    """Factor a map between trivially acted S-posets as embedding then topological map.

    The plain-poset envelope over the trivial monoid is computed and then
    equipped with the trivial S-action.
    """
    if not (f.dom.is_trivial() and f.cod.is_trivial()):
        raise PreconditionError("Emb-Top factorization needs trivial actions")
    S = f.dom.over
    env = regular_injective_envelope(as_s_map(f.underlying()), budget)
    Y = trivial_action(env.env.dom.carrier, S)
    e = SPosetMap(f.dom, Y, env.e.table)
    p = SPosetMap(Y, f.cod, env.env.table)
    return e, p


# -- characterization ---------------------------------------------------------------------

def characterization_check(f: SPosetMap, emb_catalog: Sequence[SPosetMap],
                           budget: int | None = None) -> ClassReport:
    """Compares slice injectivity of ``f`` with (pairing is a section) and (sections injective).

    ``witness["outcome"]`` is ``agree``, ``disagree`` or ``sections-empty``;
    only ``disagree`` gives a false verdict.
    """
    lhs = is_slice_injective(f, emb_catalog, budget).verdict
    pairing = pairing_is_section(f, budget).verdict
    sec = sections_object(f, budget)
    if sec is None:
        detail = {"lhs": lhs, "pairing": pairing, "sections_size": 0,
                  "sections_injective": None, "outcome": "sections-empty"}
        return ClassReport(True, detail, "sections empty")
    sec_inj = is_injective_object(sec, emb_catalog, budget).verdict
    rhs = pairing and sec_inj
    outcome = "agree" if lhs == rhs else "disagree"
    detail = {"lhs": lhs, "pairing": pairing, "sections_size": len(sec),
              "sections_injective": sec_inj, "outcome": outcome}
    return ClassReport(lhs == rhs, detail, "" if lhs == rhs else "sides disagree")


# -- the functors G_B and H_B -------------------------------------------------------------------

def functor_G_B(l: MonotoneMap, S: Pomonoid) -> SPosetMap:
    """Equip both ends of a monotone map with the trivial S-action."""
    return as_s_map(l, S)


def _require_trivial(B: SPoset) -> None:
    if not B.is_trivial():
        raise PreconditionError("the base S-poset must carry the trivial action")


def functor_H_B(f: SPosetMap) -> MonotoneMap:
    """``[a] -> f(a)`` on ``A/theta``."""
    _require_trivial(f.cod)
    Q, eta = quotient_theta(f.dom)
    table = [None] * len(Q)
    for a, q in enumerate(eta.table):
        if table[q] is None:
            table[q] = f.table[a]
        elif table[q] != f.table[a]:
            raise InternalInconsistency("map is not constant on a theta class")
    return MonotoneMap(Q, f.cod.carrier, tuple(table))


def functor_H_B_on_map(g: SPosetMap) -> MonotoneMap:
    """``H_B`` on a morphism ``g: A' -> A`` over B: ``[a'] -> [g(a')]``."""
    Q1, eta1 = quotient_theta(g.dom)
    Q2, eta2 = quotient_theta(g.cod)
    table = [None] * len(Q1)
    for a, q in enumerate(eta1.table):
        v = eta2.table[g.table[a]]
        if table[q] is not None and table[q] != v:
            raise InternalInconsistency("H_B(g) is not well defined")
        table[q] = v
    return MonotoneMap(Q1, Q2, tuple(table))


def transpose(h: SPosetMap) -> MonotoneMap:
    """``hbar([a]) = h(a)`` for an S-poset map into a trivially acted S-poset."""
    _require_trivial(h.cod)
    Q, eta = quotient_theta(h.dom)
    table = [None] * len(Q)
    for a, q in enumerate(eta.table):
        if table[q] is not None and table[q] != h.table[a]:
            raise InternalInconsistency("transpose is not well defined")
        table[q] = h.table[a]
    return MonotoneMap(Q, h.cod.carrier, tuple(table))


def adjunction_check(f: SPosetMap, l: MonotoneMap, budget: int | None = None) -> ClassReport:
    """Checks ``hom(H_B f, l) ~ hom(f, G_B l)`` by enumerating both sides.

    The witness is ``(|left|, |right|)``.
    """
    _require_trivial(f.cod)
    if l.cod != f.cod.carrier:
        raise StructureError("l must map into the base poset of f")
    S = f.dom.over
    Hf = functor_H_B(f)
    Q, P = Hf.dom, l.dom
    lfib = _fibres(P, l.cod, l.table)
    left = list(search_tables(Q, P, allowed=[lfib[b] for b in Hf.table], budget=budget,
                              what="adjunction search"))
    Gl = functor_G_B(l, S)
    right = list(search_tables(f.dom.carrier, P, f.dom.act, Gl.dom.act,
                               [lfib[b] for b in f.table], budget, "adjunction search"))
    counts = (len(left), len(right))
    left_set = set(left)
    images = set()
    for h in right:
        hbar = transpose(SPosetMap(f.dom, Gl.dom, h)).table
        if hbar not in left_set:
            return failed("transpose leaves the left hom-set", counts)
        images.add(hbar)
    if len(images) != len(right):
        return failed("transposition is not injective", counts)
    if images != left_set:
        return failed("transposition is not surjective", counts)
    _, eta = quotient_theta(f.dom)
    for k in left:
        back = tuple(k[q] for q in eta.table)
        if back not in set(right):
            return failed("k . eta is not over B", counts)
    return passed(counts)
