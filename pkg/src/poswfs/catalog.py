"""Exhaustive catalogs of small posets, S-posets and the maps between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from string import ascii_lowercase

from .errors import PreconditionError
from .order import Poset, bits, is_down_closed_subset, poset_canonical
from .pomonoid import Pomonoid
from .sposet import (
    SPoset,
    SPosetMap,
    canonical_form,
    iter_homs,
    search_tables,
    validate_s_poset,
)

MAX_POSET_SIZE = 6


def _canonical_poset(P: Poset) -> tuple[tuple, Poset]:
    key, order = poset_canonical(P)
    where = {old: new for new, old in enumerate(order)}
    up = [0] * len(P)
    for old in order:
        up[where[old]] = sum(1 << where[j] for j in bits(P.up[old]))
    return key, Poset(tuple(ascii_lowercase[: len(P)]), tuple(up))


@lru_cache(maxsize=None)
def _posets_by_size(n: int) -> tuple[Poset, ...]:
    if n == 1:
        return (Poset(("a",), (1,)),)
    seen: dict[tuple, Poset] = {}
    for P in _posets_by_size(n - 1):
        k = len(P)
        # the new element is maximal; its strict down-set is any down-set of P
        for D in range(P.full + 1):
            if not is_down_closed_subset(P, D):
                continue
            up = [u | ((1 << k) if D >> i & 1 else 0) for i, u in enumerate(P.up)]
            up.append(1 << k)
            Q = Poset(tuple(ascii_lowercase[: k + 1]), tuple(up))
            key, canon = _canonical_poset(Q)
            seen.setdefault(key, canon)
    return tuple(seen[k] for k in sorted(seen))


def enumerate_posets(n: int, exact: bool = False) -> list[Poset]:
    """All posets with at most ``n`` elements (exactly ``n`` if ``exact``), up to isomorphism."""
    if n > MAX_POSET_SIZE:
        raise PreconditionError(f"poset enumeration is capped at {MAX_POSET_SIZE} elements")
    if n < 1:
        return []
    sizes = [n] if exact else range(1, n + 1)
    return [P for k in sizes for P in _posets_by_size(k)]


@dataclass(frozen=True)
class Catalog:
    pomonoid: Pomonoid
    objects: tuple[SPoset, ...]
    max_size: int
    generation_params: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.objects)

    def __iter__(self):
        return iter(self.objects)


def _actions(S: Pomonoid, P: Poset):
    """All valid monotone right actions of S on P, as act tables."""
    n, k, e = len(P), len(S), S.identity
    others = [s for s in range(k) if s != e]
    endos = list(search_tables(P, P, what="action search"))
    rho: dict[int, tuple[int, ...]] = {e: tuple(range(n))}

    def consistent(s: int) -> bool:
        for t, rt in rho.items():
            for s1, t1 in ((s, t), (t, s)):
                u = S.mult[s1][t1]
                if u in rho:
                    r1, r2 = rho[s1], rho[t1]
                    if any(rho[u][a] != r2[r1[a]] for a in range(n)):
                        return False
            lo, hi = (t, s) if S.leq(t, s) else (s, t)
            if S.leq(lo, hi) and any(not P.leq(rho[lo][a], rho[hi][a]) for a in range(n)):
                return False
        return True

    def rec(i: int):
        if i == len(others):
            yield tuple(tuple(rho[s][a] for s in range(k)) for a in range(n))
            return
        s = others[i]
        for r in endos:
            rho[s] = r
            if consistent(s):
                yield from rec(i + 1)
            del rho[s]

    yield from rec(0)


def enumerate_s_posets(S: Pomonoid, n: int) -> Catalog:
    """All S-posets with at most ``n`` elements up to isomorphism."""
    cap = 4 if len(S) <= 3 else 3
    if n > cap:
        raise PreconditionError(f"S-poset enumeration over |S|={len(S)} is capped at {cap} elements")
    objects, seen = [], set()
    for P in enumerate_posets(n):
        for act in _actions(S, P):
            A = SPoset(S, P, act)
            if not validate_s_poset(A):
                continue
            key = canonical_form(A)
            if key in seen:
                continue
            seen.add(key)
            objects.append(A)
    return Catalog(S, tuple(objects), n, {"pomonoid": S.name, "max_size": n})


def trivially_acted(S: Pomonoid, n: int) -> list[SPoset]:
    from .sposet import trivial_action

    return [trivial_action(P, S) for P in enumerate_posets(n)]


def catalog_maps(objects, budget: int | None = None) -> list[SPosetMap]:
    """Every S-poset map between every ordered pair of catalog objects."""
    out = []
    for A in objects:
        for B in objects:
            out.extend(iter_homs(A, B, budget=budget))
    return out


def embedding_catalog(objects, budget: int | None = None) -> list[SPosetMap]:
    from .morphisms import is_s_poset_embedding

    return [f for f in catalog_maps(objects, budget) if is_s_poset_embedding(f)]
