"""JSON forms of every artifact, with canonical key ordering."""

from __future__ import annotations

import dataclasses
import json
from typing import Any

from .errors import StructureError
from .order import MonotoneMap, Poset
from .pomonoid import Pomonoid, registry_names, trivial_monoid
from .report import ClassReport
from .sposet import Fibre, SPoset, SPosetMap, trivial_action


def _req(d: dict, key: str):
    if not isinstance(d, dict) or key not in d:
        raise StructureError(f"missing field {key!r}")
    return d[key]


def poset_to_json(P: Poset) -> dict:
    return {"elements": list(P.elements), "leq": P.matrix()}


def poset_from_json(d: dict) -> Poset:
    elements = [str(e) for e in _req(d, "elements")]
    leq = _req(d, "leq")
    if not isinstance(leq, list) or not all(isinstance(r, list) for r in leq):
        raise StructureError("leq must be a list of rows")
    return Poset.from_matrix(elements, [[bool(v) for v in row] for row in leq])


def pomonoid_to_json(S: Pomonoid) -> dict:
    el = S.elements
    mult = {f"{el[s]},{el[t]}": el[S.mult[s][t]] for s in range(len(S)) for t in range(len(S))}
    return {"carrier": poset_to_json(S.carrier), "identity": el[S.identity], "mult": mult}


def pomonoid_from_json(d: dict, name: str = "") -> Pomonoid:
    from .pomonoid import validate_pomonoid

    carrier = poset_from_json(_req(d, "carrier"))
    if any("," in e for e in carrier.elements):
        raise StructureError("pomonoid element labels may not contain commas")
    mult = {}
    for key, val in _req(d, "mult").items():
        parts = key.split(",")
        if len(parts) != 2:
            raise StructureError(f"bad multiplication key {key!r}")
        mult[(parts[0], parts[1])] = val
    S = Pomonoid.from_labels(carrier, mult, _req(d, "identity"), name or d.get("name", ""))
    report = validate_pomonoid(S)
    if not report:
        raise StructureError(f"not a pomonoid: {report.reason} {report.witness}")
    return S


def _over_to_json(S: Pomonoid):
    if S.name and S.name in registry_names():
        from .pomonoid import named_pomonoid

        if named_pomonoid(S.name) == S:
            return S.name
    return pomonoid_to_json(S)


def _over_from_json(v) -> Pomonoid:
    from .pomonoid import named_pomonoid

    if v is None:
        return trivial_monoid()
    if isinstance(v, str):
        return named_pomonoid(v)
    return pomonoid_from_json(v)


def s_poset_to_json(A: SPoset) -> dict:
    d = poset_to_json(A.carrier)
    el, sl = A.elements, A.over.elements
    d["over"] = _over_to_json(A.over)
    d["act"] = {f"{el[a]},{sl[s]}": el[A.act[a][s]] for a in range(len(A)) for s in range(len(A.over))}
    return d


def s_poset_from_json(d: dict, over: Pomonoid | None = None) -> SPoset:
    from .sposet import validate_s_poset

    S = over if over is not None else _over_from_json(d.get("over") if isinstance(d, dict) else None)
    P = poset_from_json(d)
    if "act" not in d:
        return trivial_action(P, S)
    act = {}
    for key, val in d["act"].items():
        if "," not in key:
            raise StructureError(f"bad action key {key!r}")
        a, s = key.rsplit(",", 1)
        act[(a, s)] = val
    A = SPoset.from_labels(S, P, act)
    report = validate_s_poset(A)
    if not report:
        raise StructureError(f"not an S-poset: {report.reason} {report.witness}")
    return A


def map_to_json(f) -> dict:
    if isinstance(f, SPosetMap):
        dom, cod = s_poset_to_json(f.dom), s_poset_to_json(f.cod)
        de, ce = f.dom.elements, f.cod.elements
    else:
        dom, cod = poset_to_json(f.dom), poset_to_json(f.cod)
        de, ce = f.dom.elements, f.cod.elements
    return {"dom": dom, "cod": cod, "table": {de[a]: ce[x] for a, x in enumerate(f.table)}}


def _table(d: dict, dom_elements, cod: Poset) -> tuple[int, ...]:
    table = _req(d, "table")
    if not isinstance(table, dict) or set(table) != set(dom_elements):
        raise StructureError("map table is not total on the domain")
    return tuple(cod.index(str(table[e])) for e in dom_elements)


def map_from_json(d: dict) -> SPosetMap:
    """An S-poset map; plain posets are read as S-posets over the trivial monoid."""
    dom_d, cod_d = _req(d, "dom"), _req(d, "cod")
    over = d.get("over") or dom_d.get("over") or cod_d.get("over")
    S = _over_from_json(over)
    dom = s_poset_from_json(dom_d, S)
    cod = s_poset_from_json(cod_d, S)
    return SPosetMap(dom, cod, _table(d, dom.elements, cod.carrier))


def monotone_from_json(d: dict) -> MonotoneMap:
    dom = poset_from_json(_req(d, "dom"))
    cod = poset_from_json(_req(d, "cod"))
    return MonotoneMap(dom, cod, _table(d, dom.elements, cod))


def square_from_json(d: dict):
    from .lifting import LiftingSquare

    maps = {k: map_from_json(_req(d, k)) for k in ("l", "r", "u", "v")}
    # share objects between the four maps so the square fits together by value
    return LiftingSquare(maps["l"], maps["r"], maps["u"], maps["v"])


def to_jsonable(obj: Any) -> Any:
    """Recursively converts reports, maps and objects into plain JSON values."""
    from .lifting import LiftingSquare, WfsReport

    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, ClassReport):
        return {"verdict": obj.verdict, "reason": obj.reason, "witness": to_jsonable(obj.witness)}
    if isinstance(obj, (SPosetMap, MonotoneMap)):
        return map_to_json(obj)
    if isinstance(obj, SPoset):
        return s_poset_to_json(obj)
    if isinstance(obj, Poset):
        return poset_to_json(obj)
    if isinstance(obj, Pomonoid):
        return pomonoid_to_json(obj)
    if isinstance(obj, LiftingSquare):
        return {k: map_to_json(getattr(obj, k)) for k in ("l", "r", "u", "v")}
    if isinstance(obj, Fibre):
        return {"poset": poset_to_json(obj.poset), "is_sub_s_poset": obj.is_sub_s_poset}
    if isinstance(obj, WfsReport):
        d = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        d["ok"] = obj.ok
        return d
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


# -- staged validation: axiom failures become reports, shape errors raise ----------------------

def document_kind(d: dict) -> str:
    if not isinstance(d, dict):
        raise StructureError("document must be a JSON object")
    if "l" in d and "r" in d:
        return "square"
    if "table" in d:
        return "map"
    if "mult" in d:
        return "pomonoid"
    if "act" in d or "over" in d:
        return "s-poset"
    return "poset"


def _poset_report(d: dict) -> tuple[Poset | None, ClassReport]:
    from .order import validate_poset

    elements = [str(e) for e in _req(d, "elements")]
    leq = _req(d, "leq")
    if not isinstance(leq, list) or not all(isinstance(r, list) for r in leq):
        raise StructureError("leq must be a list of rows")
    rows = [[bool(v) for v in row] for row in leq]
    rep = validate_poset(elements, rows)
    if not rep:
        return None, ClassReport(False, rep.witness, f"poset: {rep.reason}")
    return Poset._from_matrix_unchecked(elements, rows), rep


def _s_poset_report(d: dict, S: Pomonoid) -> tuple:
    from .sposet import SPoset, validate_s_poset

    P, rep = _poset_report(d)
    if P is None:
        return None, rep
    if "act" not in d:
        return trivial_action(P, S), rep
    act = {}
    for key, val in d["act"].items():
        if "," not in key:
            raise StructureError(f"bad action key {key!r}")
        a, s = key.rsplit(",", 1)
        act[(a, s)] = val
    A = SPoset.from_labels(S, P, act)
    rep = validate_s_poset(A)
    if not rep:
        return None, ClassReport(False, rep.witness, f"S-poset: {rep.reason}")
    return A, rep


def validate_document(d: dict) -> tuple[str, ClassReport]:
    """Checks a poset / pomonoid / S-poset / map document and reports the first failing axiom."""
    from .pomonoid import validate_pomonoid
    from .sposet import validate_s_poset_map

    kind = document_kind(d)
    if kind == "poset":
        return kind, _poset_report(d)[1]
    if kind == "pomonoid":
        P, rep = _poset_report(_req(d, "carrier"))
        if P is None:
            return kind, rep
        mult = {}
        for key, val in _req(d, "mult").items():
            parts = key.split(",")
            if len(parts) != 2:
                raise StructureError(f"bad multiplication key {key!r}")
            mult[(parts[0], parts[1])] = val
        rep = validate_pomonoid(Pomonoid.from_labels(P, mult, _req(d, "identity")))
        return kind, rep if rep else ClassReport(False, rep.witness, f"pomonoid: {rep.reason}")
    if kind == "s-poset":
        return kind, _s_poset_report(d, _over_from_json(d.get("over")))[1]
    if kind == "square":
        square_from_json(d)  # raises when the maps do not fit or the square does not commute
        return kind, ClassReport(True)
    dom_d, cod_d = _req(d, "dom"), _req(d, "cod")
    S = _over_from_json(d.get("over") or dom_d.get("over") or cod_d.get("over"))
    dom, rep = _s_poset_report(dom_d, S)
    if dom is None:
        return kind, ClassReport(False, rep.witness, f"domain {rep.reason}")
    cod, rep = _s_poset_report(cod_d, S)
    if cod is None:
        return kind, ClassReport(False, rep.witness, f"codomain {rep.reason}")
    rep = validate_s_poset_map(SPosetMap(dom, cod, _table(d, dom.elements, cod.carrier)))
    return kind, rep
