"""Command-line front end.

Verbs: gen {rg-ctp|rg-ctp2|set-ctp1|triviality-chain}, check
{indisc|itp|ctp1|itp2|ip|dividing|chain}, transform
{dup-colors|color-tp|ctp1-to-tp1|ctp2-case1|ctp2-case2}, qftp, export dot.

Reports are JSON on standard output with a one-line human summary on
standard error.  Exit status: 0 check passed / construction succeeded,
1 check failed, 2 usage or input error.  Set TREEPROP_LOG=DEBUG|INFO for
verbose logging.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .constructions import (
    BlockParams,
    block_transform_case2,
    canonical_block_params,
    duplicate_colors,
    extract_ip_case1,
    gen_random_graph_witness,
    gen_set_ctp1_witness,
    gen_triviality_chain,
    transform_ctp1_to_tp1,
    trivial_coloring,
)
from .errors import Case2Required, ConstructionError, InputError
from .index_structures import (
    ArrayIndex,
    ColoredOrder,
    IndexTree,
    parse_qtype,
    qftp_order,
    render_qtype,
)
from .properties import (
    DEFAULT_PATH_BUDGET,
    DEFAULT_SEED,
    WitnessFamily,
    check_c_tp1,
    check_generalized_dividing,
    check_generalized_tp,
    check_generalized_tp2,
    check_ip,
    verify_dividing_chain,
)
from .indiscernibility import check_indiscernible
from .serialize import (
    chain_from_json,
    chain_to_json,
    delta_from_json,
    dump_json,
    family_from_json,
    family_to_json,
    load_json_file,
    parse_point,
    witness_from_json,
    witness_to_json,
)

log = logging.getLogger("treeprop")


def _color_order(text: str) -> ColoredOrder:
    """A color string like RGRG: one color per character, palette in order
    of first appearance."""
    if not text:
        raise InputError("empty color string")
    palette = []
    for ch in text:
        if ch not in palette:
            palette.append(ch)
    return ColoredOrder(tuple(palette), tuple(text))


def _emit(data, path: str | None) -> None:
    text = dump_json(data, path)
    if not path:
        sys.stdout.write(text)


def _report_exit(name: str, report) -> int:
    sys.stdout.write(dump_json(report.to_json()))
    failure = report.first_failure
    if report.passed:
        vac = [c.name for c in report.clauses if c.vacuous]
        extra = f" (vacuous: {', '.join(vac)})" if vac else ""
        print(f"{name}: PASS{extra}", file=sys.stderr)
        return 0
    print(f"{name}: FAIL clause={failure.name}", file=sys.stderr)
    return 1


def _load_witness(args) -> WitnessFamily:
    w = witness_from_json(load_json_file(args.witness))
    if getattr(args, "q", None) or getattr(args, "k", None):
        spec_q = parse_qtype(args.q) if args.q else None
        spec_k = args.k if not args.q else None
        w = WitnessFamily(w.index, dict(w.assignment), w.template, w.structure,
                          spec_q=spec_q, spec_k=spec_k)
    return w


def _load_delta(args):
    if not getattr(args, "delta", None):
        raise InputError("this check needs --delta (a JSON list of templates)")
    return delta_from_json(load_json_file(args.delta))


# ---------------------------------------------------------------------------
# gen

def _cmd_gen(args) -> int:
    if args.what in ("rg-ctp", "rg-ctp2"):
        order = _color_order(args.order or "RG")
        if args.what == "rg-ctp2" or args.mode == "array":
            if args.rows is None:
                raise InputError("array generation needs --rows")
            w = gen_random_graph_witness("array", args.rows, order)
        else:
            if args.height is None:
                raise InputError("tree generation needs --height")
            w = gen_random_graph_witness("tree", args.height, order)
        _emit(witness_to_json(w), args.output)
    elif args.what == "set-ctp1":
        if args.height is None:
            raise InputError("set-ctp1 generation needs --height")
        w = gen_set_ctp1_witness(args.height, _color_order(args.order or "RG"))
        _emit(witness_to_json(w), args.output)
    elif args.what == "triviality-chain":
        chain = gen_triviality_chain(args.length)
        _emit(chain_to_json(chain), args.output)
    else:
        raise InputError(f"unknown generator {args.what!r}")
    print(f"gen {args.what}: ok", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# check

def _cmd_check(args) -> int:
    what = args.what
    if what == "itp":
        return _report_exit("itp", check_generalized_tp(_load_witness(args)))
    if what == "ctp1":
        return _report_exit("ctp1", check_c_tp1(_load_witness(args)))
    if what == "itp2":
        report = check_generalized_tp2(_load_witness(args),
                                       path_budget=args.path_budget, seed=args.seed)
        return _report_exit("itp2", report)
    if what == "indisc":
        fam, _ = family_from_json(load_json_file(args.witness))
        report = check_indiscernible(fam, _need_arity(args), _load_delta(args))
        return _report_exit("indisc", report)
    if what == "ip":
        fam, template = family_from_json(load_json_file(args.witness))
        if template is None:
            raise InputError("the family file must carry a template for the ip check")
        report = check_ip(fam, template, _load_delta(args), _need_arity(args))
        return _report_exit("ip", report)
    if what == "dividing":
        fam, template = family_from_json(load_json_file(args.witness))
        if template is None:
            raise InputError("the family file must carry a template")
        if not args.q:
            raise InputError("check dividing needs --q")
        if args.pivot is None:
            raise InputError("check dividing needs --pivot")
        report = check_generalized_dividing(
            fam, template, parse_qtype(args.q),
            parse_point(fam.index, args.pivot), _load_delta(args), _need_arity(args))
        return _report_exit("dividing", report)
    if what == "chain":
        chain = chain_from_json(load_json_file(args.witness))
        return _report_exit("chain", verify_dividing_chain(chain))
    raise InputError(f"unknown check {what!r}")


def _need_arity(args) -> int:
    if args.arity is None:
        raise InputError("this check needs an explicit --arity bound")
    return args.arity


# ---------------------------------------------------------------------------
# transform

def _cmd_transform(args) -> int:
    what = args.what
    w = _load_witness(args)
    if what == "dup-colors":
        if not args.order:
            raise InputError("dup-colors needs --order (the enlarged palette string)")
        out = duplicate_colors(w, tuple(_color_order(args.order).palette))
        _emit(witness_to_json(out), args.output)
    elif what == "color-tp":
        if not args.order:
            raise InputError("color-tp needs --order (the palette string to cycle)")
        out = trivial_coloring(w, tuple(_color_order(args.order).palette))
        _emit(witness_to_json(out), args.output)
    elif what == "ctp1-to-tp1":
        if args.height is None or args.width is None:
            raise InputError("ctp1-to-tp1 needs --height and --width for the output")
        out, _psi = transform_ctp1_to_tp1(w, args.height, args.width)
        _emit(witness_to_json(out), args.output)
    elif what == "ctp2-case1":
        extraction = extract_ip_case1(w)
        payload = family_to_json(extraction.family, extraction.template)
        payload["column"] = extraction.column
        payload["alternating"] = [f.to_json() for f in extraction.alternating]
        payload["justification"] = [f.to_json() for f in extraction.justification]
        _emit(payload, args.output)
    elif what == "ctp2-case2":
        if args.k is None:
            raise InputError("ctp2-case2 needs --k (the even block height K)")
        params = canonical_block_params(w, args.k)
        out = block_transform_case2(w, params)
        _emit(witness_to_json(out), args.output)
    else:
        raise InputError(f"unknown transform {what!r}")
    print(f"transform {what}: ok", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# qftp / export

def _cmd_qftp(args) -> int:
    if not args.order or args.tuple is None:
        raise InputError("qftp needs --order and --tuple")
    order = _color_order(args.order)
    try:
        tup = tuple(int(t) for t in args.tuple.split(",")) if args.tuple else ()
    except ValueError:
        raise InputError(f"bad tuple {args.tuple!r}") from None
    print(render_qtype(qftp_order(order, tup)))
    return 0


_FILLS = {"R": "lightcoral", "G": "palegreen", "B": "lightskyblue", "Y": "khaki"}
_FALLBACK_FILLS = ("lightgray", "wheat", "plum", "paleturquoise", "lightpink",
                   "thistle", "moccasin", "powderblue")


def _fill(palette, color) -> str:
    if color is None:
        return "white"
    if color in _FILLS:
        return _FILLS[color]
    return _FALLBACK_FILLS[list(palette).index(color) % len(_FALLBACK_FILLS)]


def export_dot(w: WitnessFamily) -> str:
    """Render a tree or array witness as a deterministic DOT digraph."""
    lines = ["digraph witness {", '  node [shape=box, style=filled];']
    if isinstance(w.index, IndexTree):
        tree = w.index
        for node in tree.nodes():
            key = ",".join(str(e) for e in node)
            value = w.assignment.get(node)
            label = "(" + ",".join(value) + ")" if value is not None else "()"
            fill = _fill(tree.branching.palette, tree.color(node))
            lines.append(f'  "{key}" [label="{label}", fillcolor="{fill}"];')
        for node in tree.nodes():
            if node:
                parent = ",".join(str(e) for e in node[:-1])
                key = ",".join(str(e) for e in node)
                lines.append(f'  "{parent}" -> "{key}";')
    elif isinstance(w.index, ArrayIndex):
        arr = w.index
        for i in range(arr.rows):
            row_keys = []
            for j in range(arr.row_order.size):
                key = f"{i},{j}"
                value = w.assignment[(i, j)]
                fill = _fill(arr.row_order.palette, arr.color((i, j)))
                lines.append(f'  "{key}" [label="({",".join(value)})", fillcolor="{fill}"];')
                row_keys.append(key)
            lines.append("  { rank=same; " + "; ".join(f'"{k}"' for k in row_keys) + "; }")
        for i in range(arr.rows - 1):
            lines.append(f'  "{i},0" -> "{i + 1},0" [style=invis];')
    else:
        raise InputError("nothing to draw: the witness is order-indexed")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _cmd_export(args) -> int:
    w = _load_witness(args)
    text = export_dot(w)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    print("export dot: ok", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-w", "--witness", help="input witness/family/chain JSON file")
    p.add_argument("--q", help='inconsistency type, e.g. "R<G"')
    p.add_argument("--k", type=int, help="inconsistency count k / block height K")
    p.add_argument("--height", type=int, help="tree height")
    p.add_argument("--rows", type=int, help="array row count")
    p.add_argument("--width", type=int, help="output tree width")
    p.add_argument("--length", type=int, default=5, help="chain length")
    p.add_argument("--order", help="color string, e.g. RGRG")
    p.add_argument("--tuple", help="comma-separated positions, e.g. 0,1")
    p.add_argument("--delta", help="JSON file with a list of formula templates")
    p.add_argument("--arity", type=int, help="arity bound for indiscernibility")
    p.add_argument("--pivot", help="index point key of the divided instance")
    p.add_argument("--path-budget", type=int, default=DEFAULT_PATH_BUDGET,
                   help="max column-choice functions to enumerate")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="seed for sampled path enumeration")
    p.add_argument("--mode", choices=["tree", "array"], default="tree")
    p.add_argument("-o", "--output", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeprop",
        description="Generate, check, transform and render finite tree-property witnesses.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb, choices, handler in (
        ("gen", ["rg-ctp", "rg-ctp2", "set-ctp1", "triviality-chain"], _cmd_gen),
        ("check", ["indisc", "itp", "ctp1", "itp2", "ip", "dividing", "chain"], _cmd_check),
        ("transform", ["dup-colors", "color-tp", "ctp1-to-tp1", "ctp2-case1", "ctp2-case2"],
         _cmd_transform),
    ):
        p = sub.add_parser(verb)
        p.add_argument("what", choices=choices)
        _add_common(p)
        p.set_defaults(func=handler)

    p = sub.add_parser("qftp")
    _add_common(p)
    p.set_defaults(func=_cmd_qftp)

    p = sub.add_parser("export")
    p.add_argument("what", choices=["dot"])
    _add_common(p)
    p.set_defaults(func=_cmd_export)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("TREEPROP_LOG", "").upper()
    if level:
        logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                            stream=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging()
    try:
        return args.func(args)
    except InputError as err:
        sys.stdout.write(dump_json({"error": str(err)}))
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Case2Required as err:
        sys.stdout.write(dump_json({"error": str(err), "next": "transform ctp2-case2"}))
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ConstructionError as err:
        sys.stdout.write(dump_json({"error": str(err)}))
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
