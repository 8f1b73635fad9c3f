"""Finite partially ordered monoids."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import permutations, product

from .errors import StructureError
from .order import Poset, bits
from .report import ClassReport, failed, passed


@dataclass(frozen=True)
class Pomonoid:
    carrier: Poset
    mult: tuple[tuple[int, ...], ...]
    identity: int
    name: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.carrier)

    @property
    def elements(self) -> tuple[str, ...]:
        return self.carrier.elements

    def mul(self, s: int, t: int) -> int:
        return self.mult[s][t]

    def leq(self, s: int, t: int) -> bool:
        return self.carrier.leq(s, t)

    @classmethod
    def from_labels(cls, carrier: Poset, mult: dict[tuple[str, str], str], identity: str,
                    name: str = "") -> "Pomonoid":
        n = len(carrier)
        rows = []
        for s in carrier.elements:
            row = []
            for t in carrier.elements:
                if (s, t) not in mult:
                    raise StructureError(f"multiplication undefined on ({s},{t})")
                row.append(carrier.index(mult[(s, t)]))
            rows.append(tuple(row))
        if len(mult) != n * n:
            raise StructureError("multiplication table has entries outside the carrier")
        return cls(carrier, tuple(rows), carrier.index(identity), name)


def validate_pomonoid(S: Pomonoid) -> ClassReport:
    n = len(S.carrier)
    if len(S.mult) != n or any(len(r) != n for r in S.mult):
        raise StructureError(f"multiplication table is not {n}x{n}")
    if not 0 <= S.identity < n:
        raise StructureError("identity outside the carrier")
    for row in S.mult:
        for v in row:
            if not 0 <= v < n:
                raise StructureError(f"product {v} outside the carrier")
    if n == 0:
        return failed("empty")
    m, e, lab = S.mult, S.identity, S.elements
    for s in range(n):
        if m[e][s] != s or m[s][e] != s:
            return failed("identity", (lab[s],))
    for s in range(n):
        for t in range(n):
            st = m[s][t]
            for u in range(n):
                if m[st][u] != m[s][m[t][u]]:
                    return failed("associativity", (lab[s], lab[t], lab[u]))
    P = S.carrier
    for s in range(n):
        for t in bits(P.up[s]):
            for s2 in range(n):
                for t2 in bits(P.up[s2]):
                    if not P.leq(m[s][s2], m[t][t2]):
                        return failed("compatibility", (lab[s], lab[t], lab[s2], lab[t2]))
    return passed()


def identity_is_bottom(S: Pomonoid) -> bool:
    return S.carrier.up[S.identity] == S.carrier.full


def is_pogroup(S: Pomonoid) -> bool:
    n = len(S)
    return all(any(S.mult[s][t] == S.identity and S.mult[t][s] == S.identity for t in range(n))
               for s in range(n))


# -- standard examples ------------------------------------------------------------

def _build(name, elements, pairs, table, identity="1") -> Pomonoid:
    carrier = Poset.from_pairs(elements, pairs)
    return Pomonoid.from_labels(carrier, table, identity, name)


def trivial_monoid() -> Pomonoid:
    return _build("trivial", ["1"], [], {("1", "1"): "1"})


def u2() -> Pomonoid:
    """``{1 < s}`` with ``s*s = s``; identity is the bottom."""
    return _build("u2", ["1", "s"], [("1", "s")],
                  {("1", "1"): "1", ("1", "s"): "s", ("s", "1"): "s", ("s", "s"): "s"})


def u2_discrete() -> Pomonoid:
    return _build("u2-discrete", ["1", "s"], [],
                  {("1", "1"): "1", ("1", "s"): "s", ("s", "1"): "s", ("s", "s"): "s"})


def chain3() -> Pomonoid:
    """``{1 < s < t}`` with ``xy = max(x, y)``."""
    el = ["1", "s", "t"]
    table = {(x, y): el[max(i, j)] for i, x in enumerate(el) for j, y in enumerate(el)}
    return _build("chain3", el, [("1", "s"), ("s", "t")], table)


def z2() -> Pomonoid:
    return _build("z2", ["1", "g"], [],
                  {("1", "1"): "1", ("1", "g"): "g", ("g", "1"): "g", ("g", "g"): "1"})


@lru_cache(maxsize=None)
def _registry() -> dict:
    return json.loads(resources.files("poswfs").joinpath("data/pomonoids.json").read_text())


@lru_cache(maxsize=None)
def named_pomonoid(name: str) -> Pomonoid:
    """Resolve a pomonoid from the bundled registry file."""
    from .serialize import pomonoid_from_json

    registry = _registry()
    if name not in registry:
        raise StructureError(f"unknown pomonoid {name!r}; known: {sorted(registry)}")
    return pomonoid_from_json(registry[name], name=name)


def registry_names() -> list[str]:
    return sorted(_registry())


# -- opt-in enumeration --------------------------------------------------------------

def _pomonoid_key(S: Pomonoid) -> tuple:
    n = len(S)
    best = None
    for perm in permutations(range(n)):
        # perm[old] = new
        if perm[S.identity] != 0:
            continue
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        leq = tuple(tuple(S.carrier.leq(inv[i], inv[j]) for j in range(n)) for i in range(n))
        mult = tuple(tuple(perm[S.mult[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
        key = (leq, mult)
        if best is None or key < best:
            best = key
    return best


def enumerate_pomonoids(n: int) -> list[Pomonoid]:
    """All pomonoids with exactly ``n`` elements, up to isomorphism (``n <= 3``)."""
    from .catalog import enumerate_posets

    if n > 3:
        raise StructureError("pomonoid enumeration is capped at 3 elements")
    out, seen = [], set()
    for P in enumerate_posets(n, exact=True):
        for e in range(n):
            free = [(s, t) for s in range(n) for t in range(n) if s != e and t != e]
            for values in product(range(n), repeat=len(free)):
                rows = [[0] * n for _ in range(n)]
                for s in range(n):
                    rows[e][s] = s
                    rows[s][e] = s
                for (s, t), v in zip(free, values):
                    rows[s][t] = v
                S = Pomonoid(P, tuple(tuple(r) for r in rows), e)
                if not validate_pomonoid(S):
                    continue
                key = _pomonoid_key(S)
                if key in seen:
                    continue
                seen.add(key)
                out.append(S)
    return out
