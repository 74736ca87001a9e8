"""Command-line front door: validate, eval, render, term, diff, serve.

Results go to stdout, diagnostics to stderr. Exit codes: 0 on success, 1 for
errors or violations in the input, 2 for usage errors (argparse's own
convention, shared by malformed values passed to flags).
"""

from __future__ import annotations

import argparse
import os
import json
import sys


from .document import AdtDocument, attach_domain, set_valuation_value
from .domains import (
    DEFAULT_REGISTRY,
    ValueKind,
    encode_value,
    format_value,
    load_domain_definitions,
)
from .errors import AdtError, TermParseError
from .evaluation import evaluate
from .ioexport import export_svg, export_tikz, load, save
from .layout import LayoutConfig, layout
from .model import Player, iter_nodes, validate_tree
from .service import DEFAULT_LISTEN, run_server
from .terms import tree_to_term
from .termtext import lint_term, parse_term, print_term
from .treediff import Delete, Relabel, tree_edit_distance, reconcile

_KIND_HINT = {
    ValueKind.BOOLEAN: "a boolean (true/false)",
    ValueKind.UNIT_INTERVAL: "a probability in [0,1]",
    ValueKind.EXTENDED_NATURAL_LEVEL: "a natural number or inf",
    ValueKind.EXTENDED_NON_NEGATIVE_REAL: "a non-negative number or inf",
}


class UsageError(Exception):
    pass


def _read_document(path: str) -> AdtDocument:
    with open(path, "rb") as handle:
        return load(handle.read(), DEFAULT_REGISTRY)


def _parse_value(raw: str, kind: ValueKind):
    text = raw.strip().lower()
    if kind is ValueKind.BOOLEAN:
        if text in ("true", "false"):
            return text == "true"
        raise UsageError(f"expected {_KIND_HINT[kind]}, got {raw!r}")
    if text == "inf":
        return float("inf")
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"expected {_KIND_HINT[kind]}, got {raw!r}") from None


def _parse_set_option(option: str) -> tuple[Player, str, str]:
    key, sep, raw = option.partition("=")
    if not sep:
        raise UsageError(f"--set takes p:label=value or o:label=value, got {option!r}")
    side, sep, label = key.partition(":")
    if not sep or side not in ("p", "o") or not label:
        raise UsageError(f"--set key must look like p:label or o:label, got {key!r}")
    return Player(side), label, raw


def _load_custom_domains(path: str | None) -> None:
    if path:
        load_domain_definitions(path, DEFAULT_REGISTRY)


def _output(data: bytes, target: str | None) -> None:
    if target and target != "-":
        with open(target, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.buffer.write(data)


# --- subcommands --------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        doc = _read_document(args.file)
    except AdtError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    violations = validate_tree(doc.root)
    if violations:  # unreachable via load(), reachable via future formats
        for violation in violations:
            print(str(violation))
        return 1
    print(f"ok: {args.file}")
    return 0


def _resolve_instance(doc: AdtDocument, args) -> tuple[AdtDocument, str]:
    if args.instance:
        doc.instance(args.instance)  # raises UnknownInstanceError early
        return doc, args.instance
    if not args.domain:
        raise UsageError("eval needs --instance or --domain")
    params = {}
    for option in args.param or []:
        name, sep, raw = option.partition("=")
        if not sep:
            raise UsageError(f"--param takes name=value, got {option!r}")
        params[name] = _parse_value(raw, ValueKind.EXTENDED_NON_NEGATIVE_REAL)
    return attach_domain(doc, DEFAULT_REGISTRY, args.domain, params)


def cmd_eval(args) -> int:
    _load_custom_domains(args.domains)
    doc = _read_document(args.file)
    doc, instance_id = _resolve_instance(doc, args)
    inst = doc.instance(instance_id)
    domain = DEFAULT_REGISTRY.instantiate(inst.domain_id, inst.params)
    for option in args.set or []:
        player, label, raw = _parse_set_option(option)
        value = _parse_value(raw, domain.value_kind)
        doc = set_valuation_value(doc, DEFAULT_REGISTRY, instance_id, player, label, value)
    inst = doc.instance(instance_id)
    result = evaluate(doc.root, domain, inst.valuation)

    postorder = list(iter_nodes(doc.root))[::-1]
    if args.json:
        payload = {
            "domainId": inst.domain_id,
            "nodes": [
                {"id": n.id, "label": n.label, "value": encode_value(result.per_node[n.id])}
                for n in postorder
            ],
            "rootValue": encode_value(result.root_value),
            "rootDisplay": encode_value(result.root_display),
            "dependenceWarning": result.dependence_warning,
        }
        print(json.dumps(payload, indent=1))
    else:
        for node in postorder:
            print(f"{node.label}\t{format_value(result.per_node[node.id])}")
        print(f"root\t{format_value(result.root_value)}")
        if domain.root_predicate is not None:
            print(f"rootDisplay\t{format_value(result.root_display)}")
        if result.dependence_warning:
            print("warning: shared labels; bottom-up probability assumes independence",
                  file=sys.stderr)
    return 0


def cmd_render(args) -> int:
    _load_custom_domains(args.domains)
    doc = _read_document(args.file)
    overlay = None
    if args.overlay:
        inst = doc.instance(args.overlay)
        domain = DEFAULT_REGISTRY.instantiate(inst.domain_id, inst.params)
        overlay = evaluate(doc.root, domain, inst.valuation)
    config = LayoutConfig()
    result = layout(doc.root, config, respect_fold=args.fold)
    if args.format == "svg":
        data = export_svg(doc.root, result, config, overlay)
    else:
        data = export_tikz(doc.root, result, config, overlay)
    _output(data, args.output)
    return 0


def cmd_term(args) -> int:
    doc = _read_document(args.file)
    if args.apply is None:
        term = tree_to_term(doc.root)
        print(print_term(term))
        for finding in lint_term(term):
            print(f"lint: {finding}", file=sys.stderr)
        return 0
    if not args.output:
        raise UsageError("term --apply needs -o for the reshaped document")
    with open(args.apply, "r", encoding="utf-8") as handle:
        term = parse_term(handle.read())
    new_doc, summary = reconcile(doc, term, DEFAULT_REGISTRY)
    _output(save(new_doc), args.output)
    print(
        f"matched {summary.matched}, inserted {summary.inserted}, deleted {summary.deleted}",
        file=sys.stderr,
    )
    return 0


def _script_record(op) -> dict:
    if isinstance(op, Relabel):
        return {"op": "relabel", "nodeA": op.node_a, "nodeB": op.node_b}
    if isinstance(op, Delete):
        return {"op": "delete", "nodeA": op.node_a}
    return {"op": "insert", "nodeB": op.node_b, "parentB": op.parent_b, "position": op.position}


def cmd_diff(args) -> int:
    a = _read_document(args.a)
    b = _read_document(args.b)
    result = tree_edit_distance(a.root, b.root)
    if args.json:
        payload = {
            "distance": result.cost,
            "script": [_script_record(op) for op in result.script],
            "mapping": result.mapping,
        }
        print(json.dumps(payload, indent=1))
    else:
        print(f"distance\t{format_value(result.cost)}")
        for op in result.script:
            record = _script_record(op)
            print("\t".join(str(v) for v in record.values()))
    return 0


def cmd_serve(args) -> int:
    _load_custom_domains(args.domains)
    run_server(listen=args.listen, docs_dir=args.dir, ui_dir=args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adtrees",
        description="Attack-defense tree modeling and bottom-up quantitative analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an .adt file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate an attribute bottom-up")
    p.add_argument("file")
    p.add_argument("--instance", help="existing domain instance id from the file")
    p.add_argument("--domain", help="registered domain id to attach for this run")
    p.add_argument("--param", action="append", help="domain parameter, e.g. k=10")
    p.add_argument("--set", action="append", help="override a value, e.g. p:bribe=100")
    p.add_argument("--json", action="store_true")
    p.add_argument("--domains", help="JSON file with custom domain definitions")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="export SVG or TikZ")
    p.add_argument("file")
    p.add_argument("--format", choices=("svg", "tikz"), required=True)
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.add_argument("--overlay", help="domain instance id whose values to print on nodes")
    p.add_argument("--fold", action="store_true", help="respect fold state")
    p.add_argument("--domains", help="JSON file with custom domain definitions")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("term", help="print the term, or apply an edited term")
    p.add_argument("file")
    p.add_argument("--apply", help="file containing the edited term")
    p.add_argument("-o", "--output", help="where to write the reshaped document")
    p.set_defaults(func=cmd_term)

    p = sub.add_parser("diff", help="tree edit distance between two files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("serve", help="run the HTTP document service")
    p.add_argument("--listen", default=os.environ.get("ADTREES_LISTEN", DEFAULT_LISTEN))
    p.add_argument("--dir", default=os.environ.get("ADTREES_DIR"),
                   help="directory of .adt files to preload")
    p.add_argument("--ui", help="directory with the built web UI to serve at /ui")
    p.add_argument("--domains", help="JSON file with custom domain definitions")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except TermParseError as exc:
        span = exc.span
        print(f"error at line {span.start_line} col {span.start_col}: {exc}", file=sys.stderr)
        return 1
    except AdtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
