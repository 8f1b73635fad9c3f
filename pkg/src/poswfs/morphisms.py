"""Membership predicates for the morphism classes of Pos-S."""

from __future__ import annotations

from .errors import PreconditionError
from .order import _embeds, bits, is_down_closed_subset
from .report import ClassReport, failed, passed
from .sposet import (
    SPoset,
    SPosetMap,
    compose,
    disjoint_union,
    fixed_masks,
    fibre_mask,
    identity_map,
    iter_homs,
)

__all__ = [
    "compose",
    "identity_map",
    "is_injective",
    "is_surjective",
    "is_s_poset_embedding",
    "is_down_closed_embedding",
    "is_split_epi",
    "is_split_mono",
    "is_unitary_mono",
    "direct_summand_decomposition",
    "is_retract_of",
    "inverse",
]


def is_injective(f: SPosetMap) -> bool:
    return len(set(f.table)) == len(f.table)


def is_surjective(f: SPosetMap) -> bool:
    return f.image() == f.cod.carrier.full


def is_s_poset_embedding(f: SPosetMap) -> bool:
    return _embeds(f.dom.carrier, f.cod.carrier, f.table)


def _action_closed(A: SPoset, mask: int) -> bool:
    return all(mask >> x & 1 for a in bits(mask) for x in A.act[a])


def is_down_closed_embedding(f: SPosetMap) -> bool:
    im = f.image()
    return (is_s_poset_embedding(f)
            and bool(is_down_closed_subset(f.cod.carrier, im))
            and _action_closed(f.cod, im))


def is_split_epi(f: SPosetMap, budget: int | None = None) -> ClassReport:
    """Searches for a section ``g`` with ``f . g = id``; the witness is the first one found."""
    masks = [fibre_mask(f, b) for b in range(len(f.cod))]
    if not all(masks):
        return failed("not surjective")
    for g in iter_homs(f.cod, f.dom, masks, budget):
        return passed(g)
    return failed("no section")


def is_split_mono(f: SPosetMap, budget: int | None = None) -> ClassReport:
    if not is_injective(f):
        return failed("not injective")
    masks = fixed_masks(len(f.cod), f.dom.carrier.full, {y: a for a, y in enumerate(f.table)})
    for g in iter_homs(f.cod, f.dom, masks, budget):
        return passed(g)
    return failed("no retraction")


def is_unitary_mono(f: SPosetMap) -> bool:
    if not is_injective(f):
        raise PreconditionError("unitary check needs an injective map")
    im = f.image()
    for y in bits(f.cod.carrier.full & ~im):
        if any(im >> x & 1 for x in f.cod.act[y]):
            return False
    return True


def direct_summand_decomposition(f: SPosetMap):
    """``(Z, iso)`` with ``iso: cod -> dom + Z`` sending ``f(x)`` to ``x``, or None.

    ``Z`` is the complement of the image; it may be empty when ``f`` is onto.
    """
    if not is_s_poset_embedding(f):
        raise PreconditionError("direct summand decomposition needs an embedding")
    Y = f.cod
    im = f.image()
    rest = Y.carrier.full & ~im
    if not (_action_closed(Y, im) and _action_closed(Y, rest)):
        return None
    for y in bits(im):
        if (Y.carrier.up[y] | Y.carrier.down[y]) & rest:
            return None
    keep = bits(rest)
    pos = {y: k for k, y in enumerate(keep)}
    Z = SPoset(Y.over, Y.carrier.restrict(rest),
               tuple(tuple(pos[x] for x in Y.act[y]) for y in keep))
    U, _, _ = disjoint_union(f.dom, Z, allow_empty=True)
    back = {y: a for a, y in enumerate(f.table)}
    n = len(f.dom)
    table = tuple(back[y] if y in back else n + pos[y] for y in range(len(Y)))
    return Z, SPosetMap(Y, U, table)


def inverse(iso: SPosetMap) -> SPosetMap:
    table = [0] * len(iso.table)
    for a, y in enumerate(iso.table):
        table[y] = a
    return SPosetMap(iso.cod, iso.dom, tuple(table))


def is_retract_of(g: SPosetMap, f: SPosetMap, budget: int | None = None) -> ClassReport:
    """``g: A -> C`` is a retract of ``f: A -> B`` in the coslice under A.

    Witness is ``(alpha, beta)`` with ``beta.alpha = 1_C``, ``alpha.g = f`` and ``beta.f = g``.
    """
    if g.dom != f.dom:
        raise PreconditionError("retract check needs maps with a common domain")
    C, B = g.cod, f.cod
    amask = [B.carrier.full] * len(C)
    for a, c in enumerate(g.table):
        amask[c] &= 1 << f.table[a]
    for alpha in iter_homs(C, B, amask, budget):
        bmask = [C.carrier.full] * len(B)
        for c, b in enumerate(alpha.table):
            bmask[b] &= 1 << c
        for a, b in enumerate(f.table):
            bmask[b] &= 1 << g.table[a]
        for beta in iter_homs(B, C, bmask, budget):
            return passed((alpha, beta))
    return failed("no retract data")
