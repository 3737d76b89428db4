"""Command-line front end.

Subcommands:

* ``catalog``   -- list the built-in constructions with their parameters
                   and the classical theorems their proofs lean on;
* ``build``     -- instantiate a construction and emit it as a script
                   (or as JSON with the script embedded);
* ``verify``    -- run the checks of a construction or of a ``.opdom``
                   script file, symbolically and optionally numerically;
* ``rules``     -- print the inference-rule ledger;
* ``spectrum``  -- report what is known about the spectrum of the main
                   expression of a script;
* ``domain``    -- print the (simplified) natural domains of a script's
                   bindings;
* ``adjoint``   -- compute the formal adjoint of a script's main
                   expression.

Exit codes from ``verify``: 0 when every check is Proved or Holds, 1
when any check is Refuted or Fails, 2 when any check stays Unknown or
Inapplicable, 3 when the declared facts contradict each other.  Usage
errors (unknown names, malformed scripts, bad flags) exit with 2 as
usual for command-line tools.

The environment variable OPDOM_SEED overrides the default seed 0;  an
explicit ``--seed`` beats both.  All output is deterministic given the
flags and the seed, and JSON output is canonical (sorted keys), so
identical invocations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions as cons
from .constructions import check_construction
from .dsl import (
    SyntaxErr,
    construction_script,
    emit,
    parse,
    run_construction,
    script_construction,
)
from .engine import Engine, RULES, derivation_lines
from .exprs import dom_text, to_text
from .facts import InconsistentFacts


def _default_seed() -> int:
    try:
        return int(os.environ.get("OPDOM_SEED", "0"))
    except ValueError:
        return 0


def _emit_json(obj) -> int:
    print(json.dumps(obj, indent=2, sort_keys=True))
    return 0


def _fail(msg: str) -> int:
    print(f"opdom: {msg}", file=sys.stderr)
    return 2


# -- construction / script loading -------------------------------------------------


def _gathered_params(args) -> dict:
    out = {}
    for key in ("n", "alpha", "lift", "style", "flavor"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if getattr(args, "sizes", None):
        out["sizes"] = tuple(args.sizes)
    return out


def _build_named(name: str, params: dict):
    try:
        return cons.build(name, **params), None
    except KeyError as ex:
        return None, str(ex).strip('"')
    except ValueError as ex:
        return None, str(ex)


def _load_script(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _script_engine(path: str):
    con = script_construction(_load_script(path))
    return con, Engine(con.fact_base())


# -- catalog -----------------------------------------------------------------------


def _entry_anchors(entry) -> list:
    con = cons.build(entry.name)
    try:
        rep = check_construction(con)
    except InconsistentFacts:
        return []
    seen = set()
    for cr in rep.reports:
        if cr.derivation is None:
            continue
        for node in cr.derivation.walk():
            a = _anchor_of(node.rule)
            if a:
                seen.add(a)
    return sorted(seen)


def _anchor_of(rule_name: str) -> str:
    r = RULES.get(rule_name)
    return r.anchor if r else ""


def cmd_catalog(args) -> int:
    rows = []
    for entry in cons.CATALOG:
        rows.append(
            {
                "name": entry.name,
                "summary": entry.summary,
                "params": [
                    {"name": p, "default": d, "doc": doc} for p, d, doc in entry.params
                ],
                "anchors": _entry_anchors(entry),
            }
        )
    if args.format == "json":
        return _emit_json(rows)
    for row in rows:
        print(f"{row['name']}")
        print(f"    {row['summary']}")
        if row["params"]:
            ps = ", ".join(f"{p['name']}={p['default']!r} ({p['doc']})" for p in row["params"])
            print(f"    parameters: {ps}")
        if row["anchors"]:
            print(f"    rests on: {'; '.join(row['anchors'])}")
    return 0


# -- build -------------------------------------------------------------------------


def cmd_build(args) -> int:
    con, err = _build_named(args.name, _gathered_params(args))
    if con is None:
        return _fail(err)
    text = emit(construction_script(con))
    if args.emit == "json":
        return _emit_json(
            {
                "name": con.name,
                "summary": con.summary,
                "params": dict(con.params),
                "expression": to_text(con.expr),
                "notes": list(con.notes),
                "script": text,
            }
        )
    print(f"# {con.name}: {con.summary}")
    for note in con.notes:
        print(f"# note: {note}")
    print(text, end="")
    return 0


# -- verify ------------------------------------------------------------------------


def _looks_like_file(target: str) -> bool:
    return (
        target.endswith(".opdom")
        or os.path.sep in target
        or os.path.isfile(target)
    )


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    numeric = bool(args.numeric) and not args.symbolic
    if _looks_like_file(args.target):
        if not os.path.isfile(args.target):
            return _fail(f"no such script: {args.target}")
        try:
            script = _load_script(args.target)
        except SyntaxErr as ex:
            return _fail(f"{args.target}: {ex}")
        con = script_construction(script)
        label = args.target
    else:
        con, err = _build_named(args.target, _gathered_params(args))
        if con is None:
            return _fail(err)
        label = con.name
    code, report = run_construction(
        con,
        numeric=numeric,
        trials=args.trials,
        dim=args.dim,
        seed=seed,
        tol=args.tol,
    )
    report = {"target": label, "seed": seed, **report}
    if args.format == "json":
        _emit_json(report)
        return code
    if "inconsistent" in report:
        print(report["inconsistent"])
        print(f"exit {code}")
        return code
    for entry in report["checks"]:
        print(f"{entry['verdict']:12s} | {entry['check']}")
        if entry.get("detail"):
            print(f"{'':12s} | {entry['detail']}")
        if "witness" in entry:
            w = entry["witness"]
            i, j = w["entry"]
            print(f"{'':12s} | witness: entry ({i},{j}) = {w['value']} at seed {w['seed']}")
        if "residual" in entry and entry.get("numeric") == "Holds":
            print(f"{'':12s} | residual: {entry['residual']}")
        if entry.get("anchors"):
            print(f"{'':12s} | anchors: {'; '.join(entry['anchors'])}")
        if args.derivations and "derivation" in entry:
            for line in _derivation_text(entry["derivation"]):
                print(f"{'':12s} | {line}")
    print(f"exit {code}")
    return code


def _derivation_text(d: dict, indent: int = 0) -> list:
    pad = "  " * indent
    line = f"{pad}[{d['rule_id']}] {d['conclusion']}"
    if d.get("anchor"):
        line += f"  ({d['anchor']})"
    out = [line]
    for p in d.get("premises", ()):
        out.extend(_derivation_text(p, indent + 1))
    return out


# -- rules -------------------------------------------------------------------------


def cmd_rules(args) -> int:
    if args.format == "json":
        return _emit_json(
            [
                {"rule_id": r.name, "statement": r.statement, "anchor": r.anchor}
                for r in RULES.values()
            ]
        )
    width = max(len(name) for name in RULES)
    for r in RULES.values():
        tail = f"  [{r.anchor}]" if r.anchor else ""
        print(f"{r.name:{width}s}  {r.statement}{tail}")
    return 0


# -- script inspection ---------------------------------------------------------------


def cmd_spectrum(args) -> int:
    try:
        con, eng = _script_engine(args.file)
    except (OSError, SyntaxErr) as ex:
        return _fail(str(ex))
    target = con.expr
    ans = eng.spectrum(target)
    payload = {
        "expression": to_text(target),
        "value": str(ans.value) if ans.value is not None else None,
        "constraints": [
            {"kind": kind, "set": str(sset)} for kind, sset, _ in ans.constraints
        ],
    }
    if args.format == "json":
        return _emit_json(payload)
    if ans.value is not None:
        print(f"spectrum({payload['expression']}) = {payload['value']}")
        if ans.derivation is not None:
            for line in derivation_lines(ans.derivation, 1):
                print(line)
        return 0
    print(f"spectrum({payload['expression']}): Unknown")
    if not ans.constraints:
        print("  no constraints derived")
        return 0
    for kind, sset, der in ans.constraints:
        print(f"  constraint: {kind} {sset}")
        if der is not None:
            for line in derivation_lines(der, 2):
                print(line)
    return 0


def cmd_domain(args) -> int:
    try:
        con, eng = _script_engine(args.file)
    except (OSError, SyntaxErr) as ex:
        return _fail(str(ex))
    rows = []
    seen = []
    for a in con.atoms:
        rows.append((a.name, dom_text(eng.domain(a))))
        seen.append(a)
    for name, e in con.named_exprs().items():
        rows.append((name, dom_text(eng.domain(e))))
        seen.append(e)
    if not any(con.expr is e for e in seen):
        rows.append((to_text(con.expr), dom_text(eng.domain(con.expr))))
    if args.format == "json":
        return _emit_json({"domains": {n: d for n, d in rows}})
    for name, d in rows:
        print(f"dom({name}) = {d}")
    return 0


def cmd_adjoint(args) -> int:
    try:
        con, eng = _script_engine(args.file)
    except (OSError, SyntaxErr) as ex:
        return _fail(str(ex))
    r = eng.adjoint(con.expr)
    payload = {
        "expression": to_text(con.expr),
        "adjoint": to_text(r.expr),
        "relation": r.tag.name,
        "notes": list(r.notes),
    }
    if args.format == "json":
        return _emit_json(payload)
    rel = "=" if r.tag.name == "EQUAL" else r.tag.name.lower()
    print(f"adj({payload['expression']}) {rel} {payload['adjoint']}")
    for note in r.notes:
        print(f"  note: {note}")
    return 0


# -- argument wiring --------------------------------------------------------------


def _add_format(p):
    p.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )


def _add_params(p):
    p.add_argument("--n", type=int, default=None, help="size parameter, where accepted")
    p.add_argument(
        "--alpha", default=None, help="scalar parameter such as 5/2 or i, where accepted"
    )
    lift = p.add_mutually_exclusive_group()
    lift.add_argument(
        "--lift", dest="lift", action="store_true", default=None,
        help="use the operator-entry variant, where accepted",
    )
    lift.add_argument(
        "--no-lift", dest="lift", action="store_false",
        help="use the plain variant, where accepted",
    )
    p.add_argument("--style", default=None, help="style parameter, where accepted")
    p.add_argument("--flavor", default=None, help="flavor parameter, where accepted")
    p.add_argument(
        "--sizes", type=int, nargs="+", default=None,
        help="truncation sizes, where accepted",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="opdom",
        description="symbolic and numeric checks for unbounded-operator constructions",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list built-in constructions")
    _add_format(c)
    c.set_defaults(fn=cmd_catalog)

    b = sub.add_parser("build", help="instantiate a construction as a script")
    b.add_argument("name", help="construction name")
    _add_params(b)
    b.add_argument(
        "--emit", choices=("dsl", "json"), default="dsl", help="output form"
    )
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", help="check a construction or a .opdom script")
    v.add_argument("target", help="construction name or script path")
    _add_params(v)
    v.add_argument("--numeric", action="store_true", help="also sample finite models")
    v.add_argument(
        "--symbolic", action="store_true", help="symbolic checks only (the default)"
    )
    v.add_argument("--trials", type=int, default=12, help="numeric trials")
    v.add_argument("--dim", type=int, default=None, help="model dimension per space unit")
    v.add_argument(
        "--seed", type=int, default=None,
        help="sampling seed (default: OPDOM_SEED or 0)",
    )
    v.add_argument(
        "--tol", type=float, default=1e-9, help="tolerance for float cross-checks"
    )
    v.add_argument(
        "--derivations", action="store_true", help="print derivation trees in text mode"
    )
    _add_format(v)
    v.set_defaults(fn=cmd_verify)

    r = sub.add_parser("rules", help="print the inference-rule ledger")
    _add_format(r)
    r.set_defaults(fn=cmd_rules)

    for name, fn, blurb in (
        ("spectrum", cmd_spectrum, "spectral information for a script's main expression"),
        ("domain", cmd_domain, "natural domains of a script's bindings"),
        ("adjoint", cmd_adjoint, "formal adjoint of a script's main expression"),
    ):
        s = sub.add_parser(name, help=blurb)
        s.add_argument("file", help=".opdom script path")
        _add_format(s)
        s.set_defaults(fn=fn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
