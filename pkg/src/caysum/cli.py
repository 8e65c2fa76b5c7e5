"""Command-line front end.

Exit status: 0 on success, 1 when a verified statement fails or a
self-check disagrees, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import codes, graph
from .groups import (
    GroupError,
    coset_table,
    enumerate_subgroups,
    enumeration_cap,
    involution_profile,
    is_normal_subgroup,
    parse_generators,
    parse_group_spec,
    subgroup,
    subgroup_class_sizes,
)
from .perm import PermutationError, format_cycles
from .verify import VerificationError, VerificationReport, classify, verify_family, verify_preliminaries

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"3..5"`` -> (3, 5); a bare ``"4"`` -> (4, 4)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected a..b") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


# -- rendering -----------------------------------------------------------------

_TABLE_COLUMNS = ("order", "case", "i_min", "verdict", "lemma32", "generators")


def render_report(report, mode: str = "table") -> str:
    """Render a verification report (object or dict) as JSON or a table."""
    data = report.to_dict() if isinstance(report, VerificationReport) else report
    if mode == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    if mode != "table":
        raise ValueError(f"unknown render mode {mode!r}")
    rows = sorted(data.get("rows", []), key=lambda r: (r["order"], r["fingerprint"]))
    cells = [_TABLE_COLUMNS]
    for r in rows:
        cells.append((
            str(r["order"]),
            r["case"],
            "-" if r["i_min"] is None else str(r["i_min"]),
            r["verdict"],
            "yes" if r["lemma32_found"] else "no",
            " ; ".join(r["generators"]) or "()",
        ))
    widths = [max(len(row[i]) for row in cells) for i in range(len(_TABLE_COLUMNS))]
    lines = []
    title = data.get("family")
    if title is not None:
        lines.append(f"# {title} n={data.get('n')}")
    for k, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    summary = data.get("summary")
    if summary:
        lines.append(
            f"total={summary['total']} perfect={summary['perfect_count']} "
            f"theorem_holds={summary['theorem_holds']} lemma32_fired={summary['lemma32_fired']}/{summary['non_perfect_proper']}"
        )
    return "\n".join(lines)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# -- commands -----------------------------------------------------------------


def _ambient_and_subgroup(args):
    G = parse_group_spec(args.ambient)
    H = subgroup(G, parse_generators(args.subgroup, G.degree))
    return G, H


def cmd_info(args) -> int:
    G = parse_group_spec(args.group)
    classes = [{"representative": c.label, "size": c.size, "square": c.is_square_class} for c in G.classes]
    doc = {"degree": G.degree, "order": G.order, "generators": [format_cycles(g) for g in G.generators], "classes": classes}
    if args.json:
        _emit(args, _dump(doc))
    else:
        lines = [f"degree {G.degree}, order {G.order}", f"generators: {' ; '.join(doc['generators']) or '()'}", "classes:"]
        for c in classes:
            lines.append(f"  {c['representative']:<24} size {c['size']:<5} {'square' if c['square'] else 'non-square'}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_decide(args) -> int:
    G, H = _ambient_and_subgroup(args)
    cert = codes.decide_subgroup_perfect_code(G, H)
    doc = cert.to_dict()
    if args.json:
        _emit(args, _dump(doc))
    else:
        lines = [f"verdict: {cert.verdict}"]
        if cert.is_perfect:
            lines.append("witness S (class representatives): " + (" ; ".join(cert.witness_S) or "(empty)"))
        else:
            ref = cert.refutation
            lines.append(f"refutation: {ref['mode']} over {len(ref['usable_classes'])} usable classes, "
                         f"{ref['nontrivial_cosets']} nontrivial cosets, {ref['search_nodes']} search nodes")
            wit = ref["lemma32_witness"]
            if wit is not None:
                lines.append(f"left-coset refutation at x = {wit['x']}" + (" (all squares)" if wit["all_square"] else ""))
                for e in wit["per_nonsquare"]:
                    extra = f" (w = {e['w']})" if "w" in e else ""
                    lines.append(f"  z = {e['z']}: {e['reason']}{extra}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_analyze(args) -> int:
    G, H = _ambient_and_subgroup(args)
    table = coset_table(G, H, "right")
    prof = involution_profile(H)
    usable = codes.usable_classes(G, H, table)
    cert = codes.decide_subgroup_perfect_code(G, H)
    case = classify(H, G)
    doc = {
        "ambient_order": G.order,
        "subgroup_order": H.order,
        "index": table.index,
        "normal": is_normal_subgroup(G, H),
        "case": case.tag,
        "i_min": case.i_min_json(),
        "involutions_by_k": {str(k): len(v) for k, v in prof.by_k.items()},
        "usable_classes": [{"representative": u.label, "size": u.cls.size} for u in usable],
        "certificate": cert.to_dict(),
    }
    if cert.is_perfect:
        S = codes.certificate_S(G, cert)
        doc["criteria"] = {
            "graph": codes.criterion_graph(G, H, S),
            "transversal": codes.criterion_transversal(G, H, S, table),
            "index": codes.criterion_index(G, H, S),
        }
    if args.json:
        _emit(args, _dump(doc))
    else:
        lines = [f"{k}: {v}" for k, v in doc.items() if k not in ("certificate", "usable_classes")]
        lines.append("usable classes: " + (", ".join(f"{u['representative']} [{u['size']}]" for u in doc["usable_classes"]) or "none"))
        lines.append(f"verdict: {cert.verdict}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    lo, hi = parse_range(args.n)
    reports = verify_family(args.family, lo, hi, args.up_to_conjugacy, args.allow_7, args.max_order)
    holds = all(r.theorem_holds for r in reports)
    if args.json:
        _emit(args, _dump({"theorem_holds": holds, "reports": [r.to_dict() for r in reports]}))
    else:
        _emit(args, "\n\n".join(render_report(r, "table") for r in reports))
    if not holds:
        for r in reports:
            for c in r.summary["counterexamples"]:
                print(f"{r.family} n={r.n}: proper perfect subgroup of order {c['order']} ({c['case']}), "
                      f"S = {c['witness_S']}", file=sys.stderr)
    return EXIT_OK if holds else EXIT_FAILED


def cmd_prelims(args) -> int:
    rep = verify_preliminaries(args.n_max, args.with_a7)
    if args.json:
        _emit(args, _dump(rep.to_dict()))
    else:
        lines = []
        for c in rep.checks:
            status = "PASS" if c.passed else ("EXPECTED" if c.expected_failure else "FAIL")
            tail = f"  [{c.counterexample}]" if c.counterexample else ""
            lines.append(f"{status:8} n={c.n}  {c.lemma:<36} {c.detail}{tail}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if rep.all_passed else EXIT_FAILED


def cmd_subgroups(args) -> int:
    G = parse_group_spec(args.group)
    cap = args.max_order
    if args.up_to_conjugacy:
        pairs = subgroup_class_sizes(G, cap)
    else:
        pairs = [(H, 1) for H in enumerate_subgroups(G, max_order=cap)]
    items = [{"order": H.order, "generators": [format_cycles(g) for g in H.generators], "conjugates": k,
              "fingerprint": H.fingerprint} for H, k in pairs]
    if args.json:
        _emit(args, _dump({"order": G.order, "count": len(items), "subgroups": items}))
    else:
        noun = "subgroup class" if args.up_to_conjugacy else "subgroup"
        plural = "" if len(items) == 1 else ("es" if args.up_to_conjugacy else "s")
        lines = [f"{len(items)} {noun}{plural}"]
        for it in items:
            conj = f" x{it['conjugates']}" if args.up_to_conjugacy else ""
            lines.append(f"  order {it['order']:<5}{conj:<6} <{' ; '.join(it['generators'])}>")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_export_graph(args) -> int:
    G = parse_group_spec(args.ambient)
    highlight: frozenset = frozenset()
    if args.connection is not None:
        S = G.indices(parse_generators(args.connection, G.degree))
        if args.subgroup:
            highlight = frozenset(subgroup(G, parse_generators(args.subgroup, G.degree)).ambient_indices.tolist())
    elif args.subgroup:
        H = subgroup(G, parse_generators(args.subgroup, G.degree))
        cert = codes.decide_subgroup_perfect_code(G, H)
        if not cert.is_perfect:
            raise UsageError("subgroup is not a perfect code of any Cayley sum graph; pass --connection explicitly")
        S = codes.certificate_S(G, cert)
        highlight = frozenset(H.ambient_indices.tolist())
    else:
        raise UsageError("export-graph needs --connection or --subgroup")
    g = graph.build(G, S)
    _emit(args, graph.export_dot(g, highlight).rstrip("\n"))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit one JSON document")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.add_argument("--max-order", type=int, default=None, help="subgroup-enumeration cap (default $CAYSUM_MAX_ORDER or 1000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caysum", description="Subgroup perfect codes in Cayley sum graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="order and conjugacy classes of a group")
    p.add_argument("--group", required=True, help="S:n, A:n or gens:n:<expr>;<expr>")
    _common(p)
    p.set_defaults(func=cmd_info)

    for name, func, helptext in (("decide", cmd_decide, "decide whether H is a subgroup perfect code"),
                                 ("analyze", cmd_analyze, "decision plus cosets, classes and criteria")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--ambient", required=True)
        p.add_argument("--subgroup", required=True, help="generators separated by ';'")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="sweep all subgroups of S_n or A_n")
    p.add_argument("--family", required=True, choices=("symmetric", "alternating"))
    p.add_argument("--n", required=True, help="degree range a..b")
    p.add_argument("--up-to-conjugacy", action="store_true")
    p.add_argument("--allow-7", action="store_true", help="permit degree 7 (up to conjugacy only)")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("prelims", help="check the supporting permutation-group lemmas")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--with-a7", action="store_true", help="also sweep normal subgroups of A_7")
    _common(p)
    p.set_defaults(func=cmd_prelims)

    p = sub.add_parser("subgroups", help="list subgroups of a group")
    p.add_argument("--group", required=True)
    p.add_argument("--up-to-conjugacy", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("export-graph", help="DOT export of a Cayley sum graph")
    p.add_argument("--ambient", required=True)
    p.add_argument("--connection", help="connection set elements separated by ';'")
    p.add_argument("--subgroup", help="highlight this subgroup; without --connection use its witness S")
    _common(p)
    p.set_defaults(func=cmd_export_graph)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        enumeration_cap()
    except GroupError as exc:
        print(f"caysum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, GroupError, PermutationError, VerificationError, graph.ConnectionSetError) as exc:
        print(f"caysum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"caysum: self-check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
