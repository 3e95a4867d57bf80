"""Command line interface.

Diagrams are given inline (``x4o3o``) or as ``@file`` pointing at an inline
string or a JSON document.  Every subcommand takes ``--json`` for a
machine-readable envelope.  Exit codes: 0 success, 1 a verification or
classification came out negative, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .decoration import is_degenerate
from .diagram import (
    classify_components,
    group_order,
    parse,
    serialize_document,
    serialize_inline,
)
from .errors import (
    BudgetExceeded,
    Degenerate,
    NotFiniteType,
    ParseError,
    UnknownName,
    UnsupportedDimension,
    WythoffError,
)
from .face_lattice import (
    build_lattice,
    diamond_report,
    euler_ok,
    f_vector_formula,
    flag_report,
    lattice_document,
)
from .geometry import (
    off_document,
    polar_dual_check,
    realization_document,
    realize,
    ridge_reflection_check,
    verify_realization,
)
from .regular import (
    is_flag_transitive,
    known_f_vector,
    oracle_gap_reason,
    regular_catalog,
    ruled_verdict,
)

_USAGE_ERRORS = (
    ParseError,
    NotFiniteType,
    Degenerate,
    UnknownName,
    UnsupportedDimension,
    BudgetExceeded,
)


def _load_diagram(arg: str):
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            arg = fh.read().strip()
    return parse(arg)


def _emit(args, payload: dict, ok: bool = True) -> int:
    if args.json:
        payload = {"ok": ok, **payload}
        print(json.dumps(payload, indent=2))
    else:
        for line in payload.get("lines", []):
            print(line)
    return 0 if ok else 1


def _write_text(path: str | None, text: str):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagram_ref(d) -> str:
    try:
        return serialize_inline(d)
    except WythoffError:
        return json.dumps(serialize_document(d))


def _cmd_validate(args) -> int:
    d = _load_diagram(args.diagram)
    tags = classify_components(d)
    degenerate = is_degenerate(d)
    lines = [
        f"diagram: {_diagram_ref(d)}",
        f"components: {' x '.join(str(t) for t in tags)}",
        f"group order: {group_order(d)}",
        f"degenerate: {'yes' if degenerate else 'no'}",
    ]
    return _emit(
        args,
        {
            "diagram": _diagram_ref(d),
            "components": [str(t) for t in tags],
            "order": group_order(d),
            "degenerate": degenerate,
            "lines": lines,
        },
    )


def _cmd_order(args) -> int:
    d = _load_diagram(args.diagram)
    order = group_order(d)
    return _emit(args, {"order": order, "lines": [str(order)]})


def _cmd_faces(args) -> int:
    from .decoration import (
        decoration_from_selection,
        start_decoration,
        valid_selection_sets,
    )

    d = _load_diagram(args.diagram)
    start = start_decoration(d)
    total = group_order(d)
    ranks = [args.rank] if args.rank is not None else list(range(d.rank))
    entries = []
    lines = []
    for k in ranks:
        for sel in sorted(valid_selection_sets(start, k), key=sorted):
            dec = decoration_from_selection(start, sel)
            stab = dec.stabilizer_nodes()
            count = total // group_order(d.induced(stab)) if stab else total
            names = [d.node_ids[v] for v in sorted(sel)]
            entries.append({"rank": k, "selection": names, "count": count})
            lines.append(f"rank {k}  S={{{','.join(names)}}}  faces={count}")
    return _emit(args, {"faces": entries, "lines": lines})


def _cmd_fvector(args) -> int:
    d = _load_diagram(args.diagram)
    payload = {}
    lines = []
    ok = True
    if args.method in ("formula", "both"):
        fv = f_vector_formula(d)
        payload["formula"] = list(fv)
        lines.append("formula:    " + " ".join(map(str, fv)))
    if args.method in ("enum", "both"):
        lat = build_lattice(d, budget=args.budget, with_covers=False)
        fv = lat.f_vector
        payload["enumerated"] = list(fv)
        lines.append("enumerated: " + " ".join(map(str, fv)))
    if args.method == "both":
        ok = payload["formula"] == payload["enumerated"]
        lines.append("agreement: " + ("yes" if ok else "NO"))
    return _emit(args, {**payload, "lines": lines}, ok)


def _cmd_lattice(args) -> int:
    d = _load_diagram(args.diagram)
    doc = lattice_document(build_lattice(d, budget=args.budget))
    _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_vertices(args) -> int:
    d = _load_diagram(args.diagram)
    real = realize(d, budget=args.budget)
    lines = [
        " ".join(f"{v: .12f}" for v in p) for p in real.points
    ]
    return _emit(
        args,
        {"vertices": [[float(v) for v in p] for p in real.points], "lines": lines},
    )


def _cmd_export(args) -> int:
    d = _load_diagram(args.diagram)
    real = realize(d, budget=args.budget)
    if args.format == "off":
        _write_text(args.out, off_document(real))
    else:
        _write_text(args.out, json.dumps(realization_document(real), indent=2) + "\n")
    return 0


def _cmd_check(args) -> int:
    d = _load_diagram(args.diagram)
    lat = build_lattice(d, budget=args.budget)
    results = {}
    fv_formula = f_vector_formula(d)
    results["f_vector"] = lat.f_vector == fv_formula
    results["euler"] = euler_ok(lat)
    results["diamond"] = diamond_report(lat).ok
    fr = flag_report(lat)
    results["flag_degree"] = fr.degree_ok
    results["flag_connected"] = fr.connected
    real = realize(lat)
    for name, rep in verify_realization(real).items():
        results[name] = rep.ok
    ok = all(results.values())
    lines = [f"{name}: {'ok' if good else 'FAIL'}" for name, good in results.items()]
    lines.append(f"overall: {'ok' if ok else 'FAIL'}")
    return _emit(args, {"checks": results, "lines": lines}, ok)


def _cmd_is_regular(args) -> int:
    d = _load_diagram(args.diagram)
    v = ruled_verdict(d)
    payload = {
        "regular": v.regular,
        "name": v.name,
        "reason": v.reason,
        "witness": list(v.witness) if v.witness else None,
    }
    lines = [
        f"regular: {'yes' if v.regular else 'no'}",
        f"name: {v.name}" if v.name else f"reason: {v.reason}",
    ]
    if v.witness:
        k, a, b = v.witness
        lines.append(f"witness: rank {k} has face types S={a} and S={b}")
    if args.oracle:
        flag = is_flag_transitive(d, budget=args.budget)
        payload["flag_transitive"] = flag
        lines.append(f"flag transitive under the generating group: {'yes' if flag else 'no'}")
        if v.regular and not flag:
            payload["gap"] = oracle_gap_reason(d)
            lines.append(f"gap: {payload['gap']}")
    return _emit(args, {**payload, "lines": lines}, v.regular)


def _cmd_classify(args) -> int:
    catalog = regular_catalog(args.dim, kmax=args.kmax)
    entries = []
    lines = []
    for name, constructions in catalog.items():
        refs = [_diagram_ref(c) for c in constructions]
        entries.append(
            {
                "name": name,
                "f_vector": list(known_f_vector(name)),
                "constructions": refs,
            }
        )
        lines.append(f"{name}  f={known_f_vector(name)}  constructions: {'; '.join(refs)}")
    return _emit(args, {"dimension": args.dim, "polytopes": entries, "lines": lines})


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wythoff",
        description="Wythoff polytopes from decorated Coxeter diagrams",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, diagram=True):
        sp = sub.add_parser(name, help=help_)
        if diagram:
            sp.add_argument("diagram", help="inline diagram like x4o3o, or @file")
        sp.add_argument("--json", action="store_true", help="JSON output envelope")
        sp.add_argument(
            "--budget",
            type=int,
            default=None,
            help="group enumeration cap (default WYTHOFF_BUDGET or 2000000)",
        )
        sp.set_defaults(fn=fn)
        return sp

    add("validate", _cmd_validate, "parse and identify the diagram")
    add("order", _cmd_order, "reflection group order by formula")
    sp = add("faces", _cmd_faces, "face types and counts by formula")
    sp.add_argument("--rank", type=int, default=None)
    sp = add("fvector", _cmd_fvector, "f-vector")
    sp.add_argument("--method", choices=("enum", "formula", "both"), default="both")
    sp = add("lattice", _cmd_lattice, "full face lattice as JSON")
    sp.add_argument("--out", default=None)
    add("vertices", _cmd_vertices, "vertex coordinates")
    sp = add("export", _cmd_export, "geometry export")
    sp.add_argument("--format", choices=("off", "json"), default="json")
    sp.add_argument("--out", default=None)
    add("check", _cmd_check, "run all structural and numeric checks")
    sp = add("is-regular", _cmd_is_regular, "regularity classification")
    sp.add_argument("--oracle", action="store_true", help="also run the flag-transitivity oracle")
    sp = add("classify", _cmd_classify, "catalog of regular polytopes", diagram=False)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--kmax", type=int, default=12)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except WythoffError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
