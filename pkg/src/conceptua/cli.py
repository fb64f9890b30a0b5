"""Command-line interface.

Exit codes: 0 success, 1 law/validation failure, 2 parse error, 3 resource
limit.  All commands are deterministic for fixed inputs and seed.
"""

import argparse
import json
import sys
from pathlib import Path

from .errors import ConceptuaError, ParseError, SizeLimitError
from .io import detect_format, read_context
from .clg import concept_lattice, lattice_to_dot, lattice_to_json
from .clsn import Infomorphism, check_infomorphism
from .finrel import FinFunction
from .institution import (
    MergeSpan,
    Signature,
    SignatureMorphism,
    merge_theories,
    style_interconvert,
    theory_from_json,
    theory_to_json,
    verify_pushout_universal,
)
from .verify import negative_control_report, run_suite

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def cmd_lattice(args) -> int:
    fmt = args.informat or detect_format(args.input)
    a = read_context(_read_file(args.input), fmt)
    lat = concept_lattice(a)
    if args.format == "json":
        payload = json.dumps(lattice_to_json(lat), indent=2) + "\n"
    else:
        payload = lattice_to_dot(lat)
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)
    print(f"{lat.size} concepts")
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, seed=args.seed, cases=args.cases)
    if args.negative_control:
        reports.append(negative_control_report())
    failed = False
    for rep in reports:
        for line in rep.lines():
            print(line)
        if not rep.ok:
            failed = True
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_infomap(args) -> int:
    a = read_context(_read_file(args.context_a), detect_format(args.context_a))
    b = read_context(_read_file(args.context_b), detect_format(args.context_b))
    try:
        data = json.loads(_read_file(args.mapping))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid mapping JSON: {exc}", line=exc.lineno) from exc
    if not isinstance(data, dict) or "inst_map" not in data or "typ_map" not in data:
        raise ParseError("mapping JSON needs 'inst_map' and 'typ_map' objects")
    inst_map = FinFunction.from_map(b.instances, a.instances, data["inst_map"])
    typ_map = FinFunction.from_map(a.types, b.types, data["typ_map"])
    report = check_infomorphism(Infomorphism(a, b, inst_map, typ_map))
    print(f"relation version:   {'ok' if report.relation_version else 'FAILED'}")
    print(f"morphism version:   {'ok' if report.morphism_version else 'FAILED'}")
    print(f"adjunction version: {'ok' if report.adjunction_version else 'FAILED'}")
    if report.valid:
        print("infomorphism: valid")
        return EXIT_OK
    x, y = report.witness if report.witness else ("?", "?")
    print(f"infomorphism: INVALID, first witness pair ({x}, {y})")
    return EXIT_FAILURE


def _signature_morphism(source: Signature, target: Signature, mapping: dict) -> SignatureMorphism:
    return SignatureMorphism.of(source, target, mapping)


def cmd_merge(args) -> int:
    try:
        data = json.loads(_read_file(args.span))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid span JSON: {exc}", line=exc.lineno) from exc
    for key in ("base", "left", "right", "left_map", "right_map"):
        if key not in data:
            raise ParseError(f"span JSON is missing {key!r}")
    for side in ("left", "right"):
        entry = data[side]
        if not isinstance(entry, dict) or "signature" not in entry or \
                ("models" not in entry and "sentence" not in entry):
            raise ParseError(f"{side} theory needs 'signature' plus 'models' or 'sentence'")
    base = Signature.of(*data["base"])
    left = theory_from_json(data["left"])
    right = theory_from_json(data["right"])
    span = MergeSpan(
        base,
        _signature_morphism(base, left.signature, data["left_map"]),
        _signature_morphism(base, right.signature, data["right_map"]),
        left,
        right,
    )
    result = merge_theories(span)
    payload = theory_to_json(result.theory)
    payload["inconsistent"] = result.inconsistent
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"pushout signature: {list(result.signature.vars.elements)}")
    if result.inconsistent:
        print("warning: merged theory is inconsistent (bottom theory)")
    if args.check_universal:
        names = ("x", "y", "z")
        targets = [Signature.of(*names[:k]) for k in range(1, 4)]
        failures = verify_pushout_universal(span, result, targets)
        if failures:
            print(f"pushout universal property FAILED: {failures[0]}")
            return EXIT_FAILURE
        print("pushout universal property: ok")
    return EXIT_OK


def cmd_institution(args) -> int:
    names = ("p", "q", "r", "s", "t")
    if args.vars < 1 or args.vars > len(names):
        raise SizeLimitError(f"--vars must be between 1 and {len(names)}")
    big = Signature.of(*names[: args.vars])
    small = Signature.of(*names[: max(args.vars - 1, 0)])
    cases = [("identity", SignatureMorphism.identity(big))]
    if small.size < big.size:
        cases.append(("inclusion", SignatureMorphism.of(
            small, big, {v: v for v in small.vars.elements})))
    cases.append(("collapse", SignatureMorphism.of(
        big, big, {v: names[0] for v in big.vars.elements})))
    failed = False
    for label, sigma in cases:
        rep = style_interconvert(sigma, args.depth)
        verdict = "all four styles pass" if rep.all_pass else f"FAILED {rep.witnesses}"
        print(f"{label}: class-rel={rep.class_rel} class-adj={rep.class_adj} "
              f"conc-adj={rep.conc_adj} conc-rel={rep.conc_rel} -> {verdict}")
        if not rep.all_pass:
            failed = True
    return EXIT_FAILURE if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptua",
        description="Concept lattices, Galois adjunctions, and a lattice of theories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_lat = sub.add_parser("lattice", help="compute the concept lattice of a context file")
    p_lat.add_argument("input", help="context file (.cxt, .csv, or .json)")
    p_lat.add_argument("--format", choices=["json", "dot"], default="json",
                       help="output format (default json)")
    p_lat.add_argument("--informat", choices=["cxt", "csv", "json"],
                       help="override input format detection")
    p_lat.add_argument("--out", help="write the lattice here instead of stdout")
    p_lat.set_defaults(func=cmd_lattice)

    p_ver = sub.add_parser("verify", help="run the law suites")
    p_ver.add_argument("--suite", default="all",
                       choices=["all", "finrel", "galois", "clsn", "clg", "institution"])
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--cases", type=int, default=100)
    p_ver.add_argument("--negative-control", action="store_true",
                       help="also run corrupted fixtures that must fail (forces exit 1)")
    p_ver.set_defaults(func=cmd_verify)

    p_info = sub.add_parser("infomap", help="validate an infomorphism between two contexts")
    p_info.add_argument("context_a")
    p_info.add_argument("context_b")
    p_info.add_argument("mapping", help="JSON with 'inst_map' (B->A) and 'typ_map' (A->B)")
    p_info.set_defaults(func=cmd_infomap)

    p_mrg = sub.add_parser("merge", help="merge two theories over a signature span")
    p_mrg.add_argument("span", help="JSON span file")
    p_mrg.add_argument("--out", help="write the merged theory here instead of stdout")
    p_mrg.add_argument("--check-universal", action="store_true",
                       help="also verify the pushout universal property by search")
    p_mrg.set_defaults(func=cmd_merge)

    p_inst = sub.add_parser("institution", help="four-style institution interconversion demo")
    p_inst.add_argument("--vars", type=int, default=2)
    p_inst.add_argument("--depth", type=int, default=3)
    p_inst.add_argument("--demo", action="store_true",
                        help="accepted for compatibility; the demo always runs")
    p_inst.set_defaults(func=cmd_institution)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConceptuaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
