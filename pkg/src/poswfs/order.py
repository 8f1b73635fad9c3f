"""Finite posets, monotone maps and the Dedekind-MacNeille completion.

Elements are addressed by position; subsets are int bitmasks over those
positions.  ``up[i]`` holds the mask of all ``j`` with ``e_i <= e_j`` and
``down[i]`` the mask of all ``j`` with ``e_j <= e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterable, Sequence

from .errors import BudgetExceeded, StructureError
from .report import ClassReport, failed, passed

COMPLETE_SCAN_CUTOFF = 20
ISO_SIZE_LIMIT = 8


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class Poset:
    elements: tuple[str, ...]
    up: tuple[int, ...]
    down: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.elements)
        down = [0] * n
        for i, row in enumerate(self.up):
            for j in bits(row):
                down[j] |= 1 << i
        object.__setattr__(self, "down", tuple(down))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    # -- construction -------------------------------------------------------

    @classmethod
    def from_matrix(cls, elements: Sequence[str], leq: Sequence[Sequence[bool]],
                    allow_empty: bool = False) -> "Poset":
        report = validate_poset(elements, leq, allow_empty=allow_empty)
        if not report:
            raise StructureError(f"not a poset: {report.reason} {report.witness}")
        return cls._from_matrix_unchecked(elements, leq)

    @classmethod
    def _from_matrix_unchecked(cls, elements, leq) -> "Poset":
        up = tuple(sum(1 << j for j, v in enumerate(row) if v) for row in leq)
        return cls(tuple(elements), up)

    @classmethod
    def from_pairs(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "Poset":
        """Reflexive-transitive closure of the given ``a <= b`` pairs."""
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            up[idx[a]] |= 1 << idx[b]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                for j in bits(up[i]):
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        leq = [[bool(up[i] >> j & 1) for j in range(n)] for i in range(n)]
        return cls.from_matrix(elements, leq)

    # -- queries ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructureError(f"unknown element {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for e in labels:
            m |= 1 << self.index(e)
        return m

    def labels(self, mask: int) -> list[str]:
        return [self.elements[i] for i in bits(mask)]

    def matrix(self) -> list[list[bool]]:
        n = len(self)
        return [[self.leq(i, j) for j in range(n)] for i in range(n)]

    def top(self) -> int | None:
        for i, d in enumerate(self.down):
            if d == self.full:
                return i
        return None

    def bottom(self) -> int | None:
        for i, u in enumerate(self.up):
            if u == self.full:
                return i
        return None

    def restrict(self, mask: int) -> "Poset":
        """Induced subposet on ``mask`` (positions kept in ascending order)."""
        keep = bits(mask)
        elements = tuple(self.elements[i] for i in keep)
        up = tuple(sum(1 << k for k, j in enumerate(keep) if self.leq(i, j)) for i in keep)
        return Poset(elements, up)

    def dual(self) -> "Poset":
        return Poset(self.elements, self.down)


def chain(n: int, prefix: str = "") -> Poset:
    names = [f"{prefix}{i}" for i in range(n)]
    return Poset(tuple(names), tuple(((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)))


def antichain(n: int, names: Sequence[str] | None = None) -> Poset:
    names = list(names) if names is not None else [chr(ord("a") + i) for i in range(n)]
    return Poset(tuple(names), tuple(1 << i for i in range(n)))


def singleton(name: str = "*") -> Poset:
    return Poset((name,), (1,))


def empty_poset() -> Poset:
    return Poset((), ())


# -- validation ---------------------------------------------------------------

def validate_poset(elements: Sequence[str], leq: Sequence[Sequence[bool]],
                   allow_empty: bool = False) -> ClassReport:
    n = len(elements)
    if len(leq) != n or any(len(row) != n for row in leq):
        raise StructureError(f"relation matrix is not {n}x{n}")
    if len(set(elements)) != n:
        raise StructureError("duplicate element labels")
    if n == 0 and not allow_empty:
        return failed("empty")
    for i in range(n):
        if not leq[i][i]:
            return failed("reflexivity", (elements[i],))
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                return failed("antisymmetry", (elements[i], elements[j]))
    for i in range(n):
        for j in range(n):
            if not leq[i][j]:
                continue
            for k in range(n):
                if leq[j][k] and not leq[i][k]:
                    return failed("transitivity", (elements[i], elements[j], elements[k]))
    return passed()


# -- monotone maps --------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    dom: Poset
    cod: Poset
    table: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.table[i]

    @classmethod
    def from_labels(cls, dom: Poset, cod: Poset, table: dict[str, str]) -> "MonotoneMap":
        if set(table) != set(dom.elements):
            raise StructureError("map table is not total on the domain")
        return cls(dom, cod, tuple(cod.index(table[e]) for e in dom.elements))

    def image(self) -> int:
        m = 0
        for t in self.table:
            m |= 1 << t
        return m


def identity_monotone(P: Poset) -> MonotoneMap:
    return MonotoneMap(P, P, tuple(range(len(P))))


def check_table(table: Sequence[int], n_dom: int, n_cod: int) -> None:
    if len(table) != n_dom:
        raise StructureError(f"table has {len(table)} entries for a domain of size {n_dom}")
    for t in table:
        if not (0 <= t < n_cod):
            raise StructureError(f"table value {t} outside codomain of size {n_cod}")


def is_monotone(f: MonotoneMap) -> ClassReport:
    check_table(f.table, len(f.dom), len(f.cod))
    P, Q, t = f.dom, f.cod, f.table
    for i in range(len(P)):
        for j in bits(P.up[i]):
            if not Q.leq(t[i], t[j]):
                return failed("not monotone", (P.elements[i], P.elements[j]))
    return passed()


def _embeds(P: Poset, Q: Poset, t: Sequence[int]) -> bool:
    n = len(P)
    if len(set(t)) != n:
        return False
    return all(P.leq(i, j) == Q.leq(t[i], t[j]) for i in range(n) for j in range(n))


def is_order_embedding(f: MonotoneMap) -> bool:
    check_table(f.table, len(f.dom), len(f.cod))
    return _embeds(f.dom, f.cod, f.table)


# -- bounds and completeness ----------------------------------------------------

def upper_bounds(P: Poset, A: int) -> int:
    m = P.full
    for a in bits(A):
        m &= P.up[a]
    return m


def lower_bounds(P: Poset, A: int) -> int:
    m = P.full
    for a in bits(A):
        m &= P.down[a]
    return m


def lu_closure(P: Poset, A: int) -> int:
    return lower_bounds(P, upper_bounds(P, A))


def _greatest(P: Poset, mask: int) -> int | None:
    for i in bits(mask):
        if P.down[i] & mask == mask:
            return i
    return None


def _least(P: Poset, mask: int) -> int | None:
    for i in bits(mask):
        if P.up[i] & mask == mask:
            return i
    return None


def inf_of(P: Poset, A: int) -> int | None:
    return _greatest(P, lower_bounds(P, A))


def sup_of(P: Poset, A: int) -> int | None:
    return _least(P, upper_bounds(P, A))


def complete_by_subsets(P: Poset) -> ClassReport:
    if len(P) == 0:
        return failed("empty poset has no sup of the empty set", 0)
    # largest masks first, so a missing join of proper elements is reported before
    # the (equally valid) missing bottom
    for A in range(P.full, -1, -1):
        if sup_of(P, A) is None:
            return failed("missing supremum", A)
        if inf_of(P, A) is None:
            return failed("missing infimum", A)
    return passed()


def complete_by_lattice(P: Poset) -> ClassReport:
    if len(P) == 0 or P.top() is None or P.bottom() is None:
        return failed("missing top or bottom", 0)
    n = len(P)
    for i in range(n):
        for j in range(i + 1, n):
            A = (1 << i) | (1 << j)
            if sup_of(P, A) is None:
                return failed("missing binary join", A)
            if inf_of(P, A) is None:
                return failed("missing binary meet", A)
    return passed()


def is_complete(P: Poset, cutoff: int = COMPLETE_SCAN_CUTOFF) -> ClassReport:
    """Every subset, the empty one included, has an inf and a sup.

    The witness on failure is the bitmask of an offending subset.
    """
    if len(P) <= cutoff:
        return complete_by_subsets(P)
    return complete_by_lattice(P)


def is_down_closed_subset(P: Poset, A: int) -> ClassReport:
    for a in bits(A):
        outside = P.down[a] & ~A
        if outside:
            b = bits(outside)[0]
            return failed("not down-closed", (P.elements[b], P.elements[a]))
    return passed()


def is_up_closed_subset(P: Poset, A: int) -> bool:
    return all(P.up[a] & ~A == 0 for a in bits(A))


# -- MacNeille completion -------------------------------------------------------

def macneille_cuts(P: Poset) -> list[int]:
    cuts = [A for A in range(P.full + 1) if lu_closure(P, A) == A]
    cuts.sort(key=lambda m: (m.bit_count(), m))
    return cuts


def cut_label(P: Poset, A: int) -> str:
    return "{" + ",".join(P.labels(A)) + "}"


def macneille_completion(P: Poset) -> tuple[Poset, MonotoneMap]:
    """LU-closed subsets ordered by inclusion, with ``a -> down(a)``."""
    cuts = macneille_cuts(P)
    pos = {c: k for k, c in enumerate(cuts)}
    up = tuple(sum(1 << k2 for k2, c2 in enumerate(cuts) if c & c2 == c) for c in cuts)
    Pbar = Poset(tuple(cut_label(P, c) for c in cuts), up)
    emb = MonotoneMap(P, Pbar, tuple(pos[P.down[a]] for a in range(len(P))))
    return Pbar, emb


# -- isomorphism ------------------------------------------------------------------

def _blocks(invariants: Sequence) -> list[list[int]]:
    order = sorted(range(len(invariants)), key=lambda i: (invariants[i], i))
    blocks: list[list[int]] = []
    for i in order:
        if blocks and invariants[blocks[-1][0]] == invariants[i]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def block_orderings(invariants: Sequence) -> Iterable[tuple[int, ...]]:
    """All orderings of positions that sort them by ``invariants``.

    Only permutations inside equal-invariant blocks are produced, so the
    least key over them is still an isomorphism invariant.
    """
    blocks = _blocks(invariants)
    for parts in product(*(permutations(b) for b in blocks)):
        yield tuple(i for part in parts for i in part)


def poset_invariants(P: Poset) -> list[tuple[int, int]]:
    return [(P.down[i].bit_count(), P.up[i].bit_count()) for i in range(len(P))]


def relabel_rows(rows: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    """Rows of a bitmask relation re-expressed with ``order[k]`` at position ``k``."""
    where = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        r = 0
        for j in bits(rows[old]):
            r |= 1 << where[j]
        out.append(r)
    return tuple(out)


def poset_canonical(P: Poset, limit: int = ISO_SIZE_LIMIT) -> tuple[tuple, tuple[int, ...]]:
    """Least relation encoding over invariant-respecting orderings, and that ordering."""
    if len(P) > limit:
        raise BudgetExceeded("poset isomorphism search", limit)
    best = None
    for order in block_orderings(poset_invariants(P)):
        key = relabel_rows(P.up, order)
        if best is None or key < best[0]:
            best = (key, order)
    if best is None:
        return ((), ())
    return best


def poset_isomorphism(P: Poset, Q: Poset) -> MonotoneMap | None:
    if len(P) != len(Q):
        return None
    kp, op = poset_canonical(P)
    kq, oq = poset_canonical(Q)
    if kp != kq:
        return None
    table = [0] * len(P)
    for k in range(len(P)):
        table[op[k]] = oq[k]
    return MonotoneMap(P, Q, tuple(table))


def posets_isomorphic(P: Poset, Q: Poset) -> bool:
    return poset_isomorphism(P, Q) is not None
