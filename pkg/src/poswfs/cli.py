"""Command-line front end.

Exit codes: 0 PASS, 1 FAIL, 2 malformed input or unmet precondition, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import json
import sys
from pathlib import Path

from .catalog import enumerate_posets, enumerate_s_posets
from .errors import BudgetExceeded, ConstructionError, PoswfsError
from .fibrewise import (
    adjunction_check,
    emb_top_factorization,
    fibrewise_report,
    is_topological,
    regular_injective_envelope,
)
from .lifting import cd_es_factorization, find_diagonal, image_factorization, verify_wfs
from .morphisms import (
    is_down_closed_embedding,
    is_injective,
    is_s_poset_embedding,
    is_split_epi,
    is_split_mono,
    is_surjective,
    is_unitary_mono,
)
from .order import is_complete, macneille_completion
from .pomonoid import named_pomonoid, registry_names
from .report import ClassReport, failed, passed
from .serialize import (
    dumps,
    map_from_json,
    monotone_from_json,
    poset_from_json,
    square_from_json,
    validate_document,
)
from .suites import SUITES, run_suite

PASS, FAIL, INPUT_ERROR, BUDGET = 0, 1, 2, 3


def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise PoswfsError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise PoswfsError(f"{path} is not valid JSON: {exc}") from exc


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _unitary(f, budget=None) -> ClassReport:
    if not is_injective(f):
        return failed("not injective")
    return passed() if is_unitary_mono(f) else failed("image complement is not absorbing")


def _as_report(pred):
    def run(f, budget=None):
        return ClassReport(bool(pred(f)))
    return run


CLASSES = {
    "emb": _as_report(is_s_poset_embedding),
    "cd": _as_report(is_down_closed_embedding),
    "es": lambda f, budget=None: is_split_epi(f, budget),
    "split-mono": lambda f, budget=None: is_split_mono(f, budget),
    "unitary": _unitary,
    "top": lambda f, budget=None: is_topological(f),
    "surj": _as_report(is_surjective),
}

FACTORIZERS = {
    ("cd", "es"): lambda f, budget=None: cd_es_factorization(f),
    ("emb", "top"): emb_top_factorization,
    ("surj", "emb"): lambda f, budget=None: image_factorization(f),
}


# -- commands ------------------------------------------------------------------------------

def cmd_validate(args) -> tuple[int, dict]:
    kind, rep = validate_document(_load(args.file))
    return (PASS if rep else FAIL), {"kind": kind, "outcome": _verdict(rep.verdict), "report": rep}


def cmd_complete(args) -> tuple[int, dict]:
    P = poset_from_json(_load(args.file))
    Pbar, emb = macneille_completion(P)
    return PASS, {"outcome": "PASS", "input_complete": is_complete(P), "completion": Pbar,
                  "embedding": emb}


def cmd_factor(args) -> tuple[int, dict]:
    f = map_from_json(_load(args.map))
    left, right = args.system.split("-")
    first, second = FACTORIZERS[(left, right)](f, args.hom_budget)
    return PASS, {"outcome": "PASS", "system": args.system, "left": first, "right": second}


def cmd_lift(args) -> tuple[int, dict]:
    d = find_diagonal(square_from_json(_load(args.square)), args.hom_budget)
    return (PASS if d else FAIL), {"outcome": _verdict(d is not None), "diagonal": d}


def cmd_check_class(args) -> tuple[int, dict]:
    f = map_from_json(_load(args.map))
    rep = CLASSES[args.cls](f, args.hom_budget)
    return (PASS if rep else FAIL), {"class": args.cls, "outcome": _verdict(rep.verdict), "report": rep}


def cmd_fibrewise(args) -> tuple[int, dict]:
    f = map_from_json(_load(args.map))
    rep = fibrewise_report(f, args.max_size)
    return (PASS if rep.fibrewise_ok else FAIL), {"outcome": _verdict(rep.fibrewise_ok), "report": rep}


def cmd_envelope(args) -> tuple[int, dict]:
    env = regular_injective_envelope(map_from_json(_load(args.slice)), args.hom_budget)
    payload = {"outcome": "PASS", "envelope": env.env, "embedding": env.e}
    if args.out:
        Path(args.out).write_text(dumps(payload))
    return PASS, payload


def cmd_adjoint_check(args) -> tuple[int, dict]:
    f = map_from_json(_load(args.slice))
    l = monotone_from_json(_load(args.monotone))
    rep = adjunction_check(f, l, args.hom_budget)
    return (PASS if rep else FAIL), {"outcome": _verdict(rep.verdict), "report": rep}


def cmd_wfs_verify(args) -> tuple[int, dict]:
    if (args.left, args.right) not in FACTORIZERS:
        raise PoswfsError(f"no factorization known for ({args.left}, {args.right}); "
                          f"known: {sorted(FACTORIZERS)}")
    S = named_pomonoid(args.pomonoid)
    objects = enumerate_s_posets(S, args.max_size).objects
    budget = args.hom_budget
    left, right = CLASSES[args.left], CLASSES[args.right]
    factor = FACTORIZERS[(args.left, args.right)]
    rep = verify_wfs(lambda f: left(f, budget), lambda f: right(f, budget), objects,
                     lambda f: factor(f, budget), budget)
    outcome = "BUDGET_EXCEEDED" if not rep.complete else _verdict(rep.ok)
    payload = {"outcome": outcome, "pomonoid": args.pomonoid, "max_size": args.max_size,
               "left": args.left, "right": args.right, "report": rep}
    if args.out:
        Path(args.out).write_text(dumps(payload))
    return (BUDGET if not rep.complete else PASS if rep.ok else FAIL), payload


def cmd_enumerate(args) -> tuple[int, dict]:
    if args.kind == "posets":
        items = enumerate_posets(args.max_size)
    else:
        items = enumerate_s_posets(named_pomonoid(args.pomonoid), args.max_size).objects
    return PASS, {"outcome": "PASS", "kind": args.kind, "count": len(items), "items": items}


def _param(text: str) -> tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.replace("-", "_"), json.loads(value)
    except json.JSONDecodeError:
        return key.replace("-", "_"), value


def cmd_suite(args) -> tuple[int, dict]:
    params = dict(args.param or [])
    if args.max_size is not None:
        params["max_size"] = args.max_size
    if args.hom_budget is not None:
        params["budget"] = args.hom_budget
    result = run_suite(args.name, params)
    if args.out:
        Path(args.out).write_text(dumps(result))
    code = {"PASS": PASS, "FAIL": FAIL, "BUDGET_EXCEEDED": BUDGET}[result["manifest"]["outcome"]]
    return code, result


# -- parser ------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poswfs", description=__doc__.splitlines()[0])
    p.add_argument("--hom-budget", type=int, default=None,
                   help="search-node budget (default: $POSWFS_BUDGET or 10^7)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a poset, pomonoid, S-poset, map or square")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("complete", help="Dedekind-MacNeille completion of a poset")
    s.add_argument("file")
    s.set_defaults(func=cmd_complete)

    s = sub.add_parser("factor", help="factor a map through a known system")
    s.add_argument("--map", required=True)
    s.add_argument("--system", choices=["cd-es", "emb-top", "surj-emb"], default="cd-es")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("lift", help="search for a diagonal in a lifting square")
    s.add_argument("--square", required=True)
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("check-class", help="test membership of a map in a class")
    s.add_argument("--class", dest="cls", choices=sorted(CLASSES), required=True)
    s.add_argument("--map", required=True)
    s.set_defaults(func=cmd_check_class)

    s = sub.add_parser("fibrewise", help="fibre completeness, (co)fibration and topological tests")
    s.add_argument("--map", required=True)
    s.add_argument("--max-size", type=int, default=12, help="size limit for the topological scan")
    s.set_defaults(func=cmd_fibrewise)

    s = sub.add_parser("envelope", help="injective envelope of a slice object")
    s.add_argument("--slice", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_envelope)

    s = sub.add_parser("adjoint-check", help="hom-set bijection for the quotient/trivial-action pair")
    s.add_argument("--slice", required=True)
    s.add_argument("--monotone", required=True)
    s.set_defaults(func=cmd_adjoint_check)

    s = sub.add_parser("wfs-verify", help="check the weak factorization axioms over a catalog")
    s.add_argument("--left", choices=sorted(CLASSES), required=True)
    s.add_argument("--right", choices=sorted(CLASSES), required=True)
    s.add_argument("--pomonoid", choices=registry_names(), default="u2")
    s.add_argument("--max-size", type=int, default=3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_wfs_verify)

    s = sub.add_parser("enumerate", help="list posets or S-posets up to isomorphism")
    s.add_argument("--kind", choices=["posets", "s-posets"], default="posets")
    s.add_argument("--pomonoid", choices=registry_names(), default="trivial")
    s.add_argument("--max-size", type=int, default=3)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("suite", help="run a named verification suite")
    s.add_argument("name", choices=sorted(SUITES))
    s.add_argument("--param", action="append", type=_param, metavar="KEY=VALUE")
    s.add_argument("--max-size", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, payload = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return FAIL
    except (PoswfsError, TypeError, ValueError, AttributeError) as exc:
        # wrongly typed JSON fields surface as one of the builtin errors
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    try:
        sys.stdout.write(dumps(payload))
        sys.stdout.flush()
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); the exit code still stands
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
