"""S-posets, S-poset maps and the object-level constructions on them."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import BudgetExceeded, StructureError
from .order import (
    ISO_SIZE_LIMIT,
    MonotoneMap,
    Poset,
    bits,
    block_orderings,
    check_table,
    relabel_rows,
)
from .pomonoid import Pomonoid, trivial_monoid
from .report import ClassReport, failed, passed

DEFAULT_HOM_BUDGET = 10**7


def resolve_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("POSWFS_BUDGET")
    return int(env) if env else DEFAULT_HOM_BUDGET


@dataclass(frozen=True)
class SPoset:
    over: Pomonoid
    carrier: Poset
    act: tuple[tuple[int, ...], ...]  # act[a][s] = a.s

    def __len__(self) -> int:
        return len(self.carrier)

    @property
    def elements(self) -> tuple[str, ...]:
        return self.carrier.elements

    def is_trivial(self) -> bool:
        return all(all(x == a for x in row) for a, row in enumerate(self.act))

    @classmethod
    def from_labels(cls, over: Pomonoid, carrier: Poset, act: dict[tuple[str, str], str]) -> "SPoset":
        rows = []
        for a in carrier.elements:
            row = []
            for s in over.elements:
                if (a, s) not in act:
                    raise StructureError(f"action undefined on ({a},{s})")
                row.append(carrier.index(act[(a, s)]))
            rows.append(tuple(row))
        return cls(over, carrier, tuple(rows))


@dataclass(frozen=True)
class SPosetMap:
    dom: SPoset
    cod: SPoset
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]

    @classmethod
    def from_labels(cls, dom: SPoset, cod: SPoset, table: dict[str, str]) -> "SPosetMap":
        if set(table) != set(dom.elements):
            raise StructureError("map table is not total on the domain")
        return cls(dom, cod, tuple(cod.carrier.index(table[e]) for e in dom.elements))

    def image(self) -> int:
        m = 0
        for t in self.table:
            m |= 1 << t
        return m

    def underlying(self) -> MonotoneMap:
        return MonotoneMap(self.dom.carrier, self.cod.carrier, self.table)


# -- validation ------------------------------------------------------------------

def _check_act_shape(A: SPoset) -> None:
    n, k = len(A.carrier), len(A.over)
    if len(A.act) != n or any(len(r) != k for r in A.act):
        raise StructureError(f"action table is not {n}x{k}")
    for row in A.act:
        for v in row:
            if not 0 <= v < n:
                raise StructureError(f"action value {v} outside the carrier")


def validate_s_poset(A: SPoset) -> ClassReport:
    _check_act_shape(A)
    S, P, act, lab, slab = A.over, A.carrier, A.act, A.elements, A.over.elements
    e = S.identity
    for a in range(len(P)):
        if act[a][e] != a:
            return failed("unit", (lab[a],))
    for a in range(len(P)):
        for s in range(len(S)):
            for t in range(len(S)):
                if act[a][S.mult[s][t]] != act[act[a][s]][t]:
                    return failed("associativity", (lab[a], slab[s], slab[t]))
    for a in range(len(P)):
        for a2 in bits(P.up[a]):
            for s in range(len(S)):
                for s2 in bits(S.carrier.up[s]):
                    if not P.leq(act[a][s], act[a2][s2]):
                        return failed("monotone action", (lab[a], lab[a2], slab[s], slab[s2]))
    return passed()


def validate_s_poset_map(f: SPosetMap) -> ClassReport:
    if f.dom.over != f.cod.over:
        raise StructureError("domain and codomain are over different pomonoids")
    check_table(f.table, len(f.dom), len(f.cod))
    P, Q, t = f.dom.carrier, f.cod.carrier, f.table
    for a in range(len(P)):
        for a2 in bits(P.up[a]):
            if not Q.leq(t[a], t[a2]):
                return failed("not monotone", (P.elements[a], P.elements[a2]))
    for a in range(len(P)):
        for s in range(len(f.dom.over)):
            if t[f.dom.act[a][s]] != f.cod.act[t[a]][s]:
                return failed("not equivariant", (P.elements[a], f.dom.over.elements[s]))
    return passed()


# -- basic morphisms --------------------------------------------------------------

def identity_map(A: SPoset) -> SPosetMap:
    return SPosetMap(A, A, tuple(range(len(A))))


def compose(f: SPosetMap, g: SPosetMap) -> SPosetMap:
    """``g . f``: first ``f``, then ``g``."""
    if f.cod is not g.dom and f.cod != g.dom:
        raise StructureError("maps are not composable")
    return SPosetMap(f.dom, g.cod, tuple(g.table[x] for x in f.table))


# -- constructions ------------------------------------------------------------------

def trivial_action(P: Poset, S: Pomonoid) -> SPoset:
    return SPoset(S, P, tuple(tuple(a for _ in range(len(S))) for a in range(len(P))))


def as_s_poset(P: Poset) -> SPoset:
    """A plain poset as an S-poset over the trivial monoid."""
    return trivial_action(P, trivial_monoid())


def as_s_map(f: MonotoneMap, S: Pomonoid | None = None) -> SPosetMap:
    S = S or trivial_monoid()
    return SPosetMap(trivial_action(f.dom, S), trivial_action(f.cod, S), f.table)


def regular_s_poset(S: Pomonoid) -> SPoset:
    """S acting on itself by right multiplication."""
    return SPoset(S, S.carrier, S.mult)


def _same_over(A: SPoset, B: SPoset) -> None:
    if A.over != B.over:
        raise StructureError("S-posets are over different pomonoids")


def disjoint_union(A: SPoset, B: SPoset, allow_empty: bool = False) -> tuple[SPoset, SPosetMap, SPosetMap]:
    _same_over(A, B)
    if not allow_empty and (len(A) == 0 or len(B) == 0):
        raise StructureError("disjoint union of an empty S-poset")
    n = len(A)
    elements = tuple(f"0:{a}" for a in A.elements) + tuple(f"1:{b}" for b in B.elements)
    up = A.carrier.up + tuple(u << n for u in B.carrier.up)
    act = A.act + tuple(tuple(x + n for x in row) for row in B.act)
    U = SPoset(A.over, Poset(elements, up), act)
    inA = SPosetMap(A, U, tuple(range(n)))
    inB = SPosetMap(B, U, tuple(range(n, n + len(B))))
    return U, inA, inB


def product(A: SPoset, B: SPoset) -> tuple[SPoset, SPosetMap, SPosetMap]:
    """Componentwise order, diagonal action; element ``(a, b)`` sits at ``a*|B| + b``."""
    _same_over(A, B)
    m = len(B)
    elements, up, act = [], [], []
    for a in range(len(A)):
        for b in range(m):
            elements.append(f"({A.elements[a]},{B.elements[b]})")
            mask = 0
            for a2 in bits(A.carrier.up[a]):
                for b2 in bits(B.carrier.up[b]):
                    mask |= 1 << (a2 * m + b2)
            up.append(mask)
            act.append(tuple(A.act[a][s] * m + B.act[b][s] for s in range(len(A.over))))
    X = SPoset(A.over, Poset(tuple(elements), tuple(up)), tuple(act))
    pA = SPosetMap(X, A, tuple(k // m for k in range(len(X))))
    pB = SPosetMap(X, B, tuple(k % m for k in range(len(X))))
    return X, pA, pB


class EmptyFibre:
    def __repr__(self) -> str:
        return "EMPTY_FIBRE"

    def __bool__(self) -> bool:
        return False


EMPTY_FIBRE = EmptyFibre()


@dataclass(frozen=True)
class Fibre:
    mask: int
    poset: Poset
    is_sub_s_poset: bool
    s_poset: SPoset | None  # restricted action, present iff is_sub_s_poset


def fibre_mask(f: SPosetMap, b: int) -> int:
    m = 0
    for a, x in enumerate(f.table):
        if x == b:
            m |= 1 << a
    return m


def fibre(f: SPosetMap, b: int) -> Fibre | EmptyFibre:
    mask = fibre_mask(f, b)
    if not mask:
        return EMPTY_FIBRE
    keep = bits(mask)
    P = f.dom.carrier.restrict(mask)
    closed = all(mask >> x & 1 for a in keep for x in f.dom.act[a])
    sub = None
    if closed:
        pos = {a: k for k, a in enumerate(keep)}
        sub = SPoset(f.dom.over, P, tuple(tuple(pos[x] for x in f.dom.act[a]) for a in keep))
    return Fibre(mask, P, closed, sub)


# -- hom enumeration ------------------------------------------------------------------

@dataclass(frozen=True)
class _Step:
    lower: tuple[int, ...]   # earlier b with b <= a
    upper: tuple[int, ...]   # earlier b with a <= b
    selfs: tuple[int, ...]   # s with a.s = a
    back: tuple[tuple[int, int], ...]    # (s, c) with c = a.s earlier
    forced: tuple[tuple[int, int], ...]  # (b, s) with b earlier and b.s = a


def _plan(P: Poset, act) -> list[_Step]:
    n = len(P)
    steps = []
    for a in range(n):
        lower = tuple(b for b in range(a) if P.leq(b, a))
        upper = tuple(b for b in range(a) if P.leq(a, b))
        if act is None:
            steps.append(_Step(lower, upper, (), (), ()))
            continue
        k = len(act[a]) if n else 0
        selfs = tuple(s for s in range(k) if act[a][s] == a)
        back = tuple((s, act[a][s]) for s in range(k) if act[a][s] < a)
        forced = tuple((b, s) for b in range(a) for s in range(k) if act[b][s] == a)
        steps.append(_Step(lower, upper, selfs, back, forced))
    return steps


def search_tables(dom: Poset, cod: Poset, dom_act=None, cod_act=None,
                  allowed: Sequence[int] | None = None,
                  budget: int | None = None, what: str = "hom search") -> Iterator[tuple[int, ...]]:
    """Depth-first enumeration of monotone (and, given actions, equivariant) tables.

    ``allowed[a]`` is a bitmask restricting the value at ``a``.  Tables come out
    in lexicographic order.  Every assigned prefix node counts against the budget.
    """
    limit = resolve_budget(budget)
    n = len(dom)
    full = cod.full
    masks = [full] * n if allowed is None else [m & full for m in allowed]
    if n == 0:
        yield ()
        return
    plan = _plan(dom, dom_act)
    cup, cdown = cod.up, cod.down
    t = [0] * n
    nodes = 0

    def candidates(a: int) -> list[int]:
        st = plan[a]
        mask = masks[a]
        for b, s in st.forced:
            mask &= 1 << cod_act[t[b]][s]
        for b in st.lower:
            mask &= cup[t[b]]
        for b in st.upper:
            mask &= cdown[t[b]]
        if not mask:
            return []
        out = []
        for x in bits(mask):
            row = cod_act[x] if cod_act is not None else None
            if all(row[s] == x for s in st.selfs) and all(row[s] == t[c] for s, c in st.back):
                out.append(x)
        return out

    stack = [iter(())] * n
    stack[0] = iter(candidates(0))
    a = 0
    while a >= 0:
        x = next(stack[a], None)
        if x is None:
            a -= 1
            continue
        nodes += 1
        if nodes > limit:
            raise BudgetExceeded(what, limit)
        t[a] = x
        if a == n - 1:
            yield tuple(t)
        else:
            a += 1
            stack[a] = iter(candidates(a))


def iter_homs(A: SPoset, B: SPoset, allowed: Sequence[int] | None = None,
              budget: int | None = None) -> Iterator[SPosetMap]:
    _same_over(A, B)
    for t in search_tables(A.carrier, B.carrier, A.act, B.act, allowed, budget):
        yield SPosetMap(A, B, t)


def hom_s_poset(A: SPoset, B: SPoset, budget: int | None = None) -> list[SPosetMap]:
    return list(iter_homs(A, B, budget=budget))


def iter_monotone(P: Poset, Q: Poset, allowed: Sequence[int] | None = None,
                  budget: int | None = None) -> Iterator[MonotoneMap]:
    for t in search_tables(P, Q, allowed=allowed, budget=budget, what="monotone map search"):
        yield MonotoneMap(P, Q, t)


def fixed_masks(n: int, full: int, fixed: dict[int, int]) -> list[int]:
    masks = [full] * n
    for a, x in fixed.items():
        masks[a] &= 1 << x
    return masks


# -- exponentials ------------------------------------------------------------------

def table_label(B: SPoset | Poset, table: Sequence[int]) -> str:
    el = B.elements
    return "[" + ",".join(el[x] for x in table) + "]"


@dataclass(frozen=True)
class Exponential:
    obj: SPoset
    domain: SPoset               # S x A, acted on both components
    codomain: SPoset
    tables: tuple[tuple[int, ...], ...]  # obj element k is the map tables[k]: S x A -> B


def exponential_data(A: SPoset, B: SPoset, budget: int | None = None) -> Exponential:
    _same_over(A, B)
    S = A.over
    SA = product(regular_s_poset(S), A)[0]
    tables = [t for t in search_tables(SA.carrier, B.carrier, SA.act, B.act, budget=budget,
                                       what="exponential hom search")]
    pos = {t: k for k, t in enumerate(tables)}
    na = len(A)
    n = len(tables)
    up = []
    for f in tables:
        mask = 0
        for k, g in enumerate(tables):
            if all(B.carrier.leq(x, y) for x, y in zip(f, g)):
                mask |= 1 << k
        up.append(mask)
    act = []
    for f in tables:
        row = []
        for s in range(len(S)):
            g = tuple(f[S.mult[s][t] * na + a] for t in range(len(S)) for a in range(na))
            row.append(pos[g])
        act.append(tuple(row))
    carrier = Poset(tuple(table_label(B, f) for f in tables), tuple(up))
    return Exponential(SPoset(S, carrier, tuple(act)), SA, B, tuple(tables))


def exponential(A: SPoset, B: SPoset, budget: int | None = None) -> SPoset:
    """``B^A = hom(S x A, B)``, pointwise order, ``(f.s)(t, a) = f(st, a)``."""
    return exponential_data(A, B, budget).obj


# -- the quotient A/theta ------------------------------------------------------------

def quotient_theta(A: SPoset) -> tuple[Poset, MonotoneMap]:
    """Poset reflection of A by the identification ``a ~ a.s``."""
    n = len(A)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        for x in A.act[a]:
            ra, rx = find(a), find(x)
            if ra != rx:
                parent[max(ra, rx)] = min(ra, rx)
    cls_of = [find(a) for a in range(n)]
    while True:
        reps = sorted(set(cls_of))
        idx = {r: k for k, r in enumerate(reps)}
        m = len(reps)
        rel = [1 << k for k in range(m)]
        for a in range(n):
            for b in bits(A.carrier.up[a]):
                rel[idx[cls_of[a]]] |= 1 << idx[cls_of[b]]
        for k in range(m):  # Warshall
            for i in range(m):
                if rel[i] >> k & 1:
                    rel[i] |= rel[k]
        merge = {}
        for i in range(m):
            for j in bits(rel[i]):
                if j < i and rel[j] >> i & 1:
                    merge[i] = min(merge.get(i, i), j)
        if not merge:
            break
        new_rep = {}
        for i in range(m):
            j = i
            while j in merge:
                j = merge[j]
            new_rep[reps[i]] = reps[j]
        cls_of = [new_rep[c] for c in cls_of]
    members = {r: [a for a in range(n) if cls_of[a] == r] for r in reps}
    labels = tuple("[" + ",".join(A.elements[a] for a in members[r]) + "]" for r in reps)
    Q = Poset(labels, tuple(rel))
    eta = MonotoneMap(A.carrier, Q, tuple(idx[c] for c in cls_of))
    return Q, eta


# -- isomorphism ---------------------------------------------------------------------

def _s_invariants(A: SPoset) -> list[tuple]:
    P = A.carrier
    out = []
    for a in range(len(A)):
        fixed = sum(1 for x in A.act[a] if x == a)
        out.append((P.down[a].bit_count(), P.up[a].bit_count(), fixed))
    return out


def _s_canonical(A: SPoset, limit: int) -> tuple[tuple, tuple[int, ...]]:
    if len(A) > limit:
        raise BudgetExceeded("S-poset isomorphism search", limit)
    best = None
    for order in block_orderings(_s_invariants(A)):
        where = {old: new for new, old in enumerate(order)}
        key = (relabel_rows(A.carrier.up, order),
               tuple(tuple(where[x] for x in A.act[old]) for old in order))
        if best is None or key < best[0]:
            best = (key, order)
    if best is None:
        return (((), ()), ())
    return best


def canonical_form(A: SPoset, limit: int = ISO_SIZE_LIMIT) -> tuple:
    return (len(A),) + _s_canonical(A, limit)[0]


def s_poset_isomorphism(A: SPoset, B: SPoset, limit: int = ISO_SIZE_LIMIT) -> SPosetMap | None:
    if A.over != B.over or len(A) != len(B):
        return None
    ka, oa = _s_canonical(A, limit)
    kb, ob = _s_canonical(B, limit)
    if ka != kb:
        return None
    table = [0] * len(A)
    for k in range(len(A)):
        table[oa[k]] = ob[k]
    return SPosetMap(A, B, tuple(table))


def are_isomorphic(A: SPoset, B: SPoset, limit: int = ISO_SIZE_LIMIT) -> bool:
    return s_poset_isomorphism(A, B, limit) is not None


# -- currying --------------------------------------------------------------------------

def curry(g: SPosetMap, A: SPoset, B: SPoset, exp: Exponential) -> SPosetMap:
    """``g: A x B -> C`` becomes ``a -> ((t, b) -> g(a.t, b))`` in ``C^B``."""
    S = A.over
    nb = len(B)
    pos = {t: k for k, t in enumerate(exp.tables)}
    table = []
    for a in range(len(A)):
        h = tuple(g.table[A.act[a][t] * nb + b] for t in range(len(S)) for b in range(nb))
        if h not in pos:
            raise StructureError("curried map is not an element of the exponential")
        table.append(pos[h])
    return SPosetMap(A, exp.obj, tuple(table))


def uncurry(h: SPosetMap, A: SPoset, B: SPoset, exp: Exponential, AB: SPoset) -> SPosetMap:
    """``h: A -> C^B`` becomes ``(a, b) -> h(a)(1, b)``."""
    nb = len(B)
    e = A.over.identity
    table = tuple(exp.tables[h.table[a]][e * nb + b] for a in range(len(A)) for b in range(nb))
    return SPosetMap(AB, exp.codomain, table)
