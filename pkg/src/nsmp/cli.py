"""Command-line front end.

Exit codes: 0 success, 1 negative answer from a predicate subcommand
(``check-matrix`` without the property, ``witness-search`` with nothing
found, ``fixtures --verify`` with a failure), 2 usage or parse error,
3 input beyond an internal size limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from .algebra import RationalMatrix, parse_matrix
from .classifier import Classification, RefutationBudget, classify, classify_all, find_refutation
from .engine import Property, check
from .errors import NsmpError, TooLargeError
from .fixtures import verify_all
from .patterns import SignPattern, canonical_form, parse_pattern

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _matrix_json(M: RationalMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in M.to_rows()]


def _pattern_json(P: SignPattern) -> list[str]:
    return [" ".join(s.token for s in row) for row in P.entries]


def _indent(text: str, pad: str = "  ") -> str:
    return "\n".join(pad + line for line in text.splitlines())


def _classification_json(c: Classification) -> dict:
    out = {"allow": c.allow.value, "require": c.require.value, "label": c.label}
    if c.witness is not None:
        A, X = c.witness
        out["witness"] = {"A": _matrix_json(A), "X": _matrix_json(X)}
    return out


def _emit(out: TextIO, args, input_, result: dict, provenance: list[str], text: str):
    if getattr(args, "json", False):
        doc = {"command": args.command, "input": input_, "result": result,
               "provenance": provenance, "seed": getattr(args, "seed", None)}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# subcommands

def _cmd_check(args, out: TextIO) -> int:
    A = parse_matrix(_read(args.file))
    prop = Property.parse(args.property)
    v = check(A, prop)
    name = prop.value
    lines = [f"{name}: {'YES' if v.has_property else 'NO'}, nullity {v.nullity}"]
    result = {"outcome": v.outcome.value, "nullity": v.nullity, "property": name}
    if v.witness is not None:
        lines += ["witness:", _indent(v.witness.format())]
        result["witness"] = _matrix_json(v.witness)
    _emit(out, args, _matrix_json(A), result, [], "\n".join(lines))
    return EXIT_OK if v.has_property else EXIT_NEGATIVE


def _cmd_classify(args, out: TextIO) -> int:
    P = parse_pattern(_read(args.file))
    c = classify(P, RefutationBudget(samples=args.samples, seed=args.seed))
    lines = [f"verdict: {c.label}", f"allow: {c.allow.value}", f"require: {c.require.value}",
             f"rules: {', '.join(c.provenance)}"]
    if c.witness is not None:
        A, X = c.witness
        lines += ["realization:", _indent(A.format()), "witness:", _indent(X.format())]
    _emit(out, args, _pattern_json(P), _classification_json(c), list(c.provenance),
          "\n".join(lines))
    return EXIT_OK


def _cmd_witness(args, out: TextIO) -> int:
    P = parse_pattern(_read(args.file))
    found = find_refutation(P, RefutationBudget(samples=args.samples, seed=args.seed))
    if found is None:
        _emit(out, args, _pattern_json(P), {"found": False}, [], "none found")
        return EXIT_NEGATIVE
    A, X = found
    text = "\n".join(["realization:", _indent(A.format()), "witness:", _indent(X.format())])
    _emit(out, args, _pattern_json(P),
          {"found": True, "A": _matrix_json(A), "X": _matrix_json(X)}, [], text)
    return EXIT_OK


def _cmd_canonical(args, out: TextIO) -> int:
    P = parse_pattern(_read(args.file))
    C, t = canonical_form(P)
    tj = t.to_json()
    text = "\n".join([C.format(),
                      f"perm: {' '.join(map(str, tj['perm']))}",
                      f"signature: {' '.join('+' if s > 0 else '-' for s in tj['signature'])}",
                      f"transposed: {str(t.transposed).lower()}",
                      f"negated: {str(t.negated).lower()}"])
    _emit(out, args, _pattern_json(P), {"canonical": _pattern_json(C), "transform": tj}, [], text)
    return EXIT_OK


def _cmd_enumerate(args, out: TextIO) -> int:
    summary = classify_all(args.n, RefutationBudget(samples=args.samples, seed=args.seed),
                           orbits_only=args.orbits, jobs=args.jobs)
    labels = summary.label_counts()
    rules = summary.rule_counts()
    order = ["Requires", "AllowsNotRequires", "AllowsUnknownRequire", "DoesNotAllow"]
    head = f"{summary.total_patterns} patterns, " + ", ".join(
        f"{labels[k]} {k}" for k in order if labels[k])
    lines = [head, "", "by rule:"]
    lines += [f"  {rule}: {count}" for rule, count in sorted(rules.items())]
    records = []
    if args.orbits:
        lines += ["", f"{len(summary.records)} orbits:"]
        for r in summary.records:
            lines.append(f"  [{' / '.join(_pattern_json(r.pattern))}]  size {r.orbit_size}  "
                         f"{r.classification.label}  ({r.classification.rule})")
    for r in summary.records:
        records.append({"pattern": _pattern_json(r.pattern),
                        "canonical": _pattern_json(r.canonical),
                        "orbit_size": r.orbit_size,
                        "provenance": list(r.classification.provenance),
                        **_classification_json(r.classification)})
    result = {"total": summary.total_patterns, "labels": dict(sorted(labels.items())),
              "rules": dict(sorted(rules.items())), "records": records}
    _emit(out, args, {"n": args.n, "orbits": args.orbits}, result, [], "\n".join(lines))
    return EXIT_OK


def _cmd_fixtures(args, out: TextIO) -> int:
    results = verify_all(RefutationBudget(seed=args.seed))
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}"
             + ("" if r.passed else f"  {r.detail}") for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} fixtures passed")
    _emit(out, args, None,
          {"fixtures": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                        for r in results], "failed": failed}, [], "\n".join(lines))
    return EXIT_NEGATIVE if (args.verify and failed) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nsmp", description="nSMP checks and sign pattern classification")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seeded: bool):
        sp.add_argument("--json", action="store_true", help="emit one JSON document")
        if seeded:
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("check-matrix", help="test a rational matrix for the nSMP or nSSP")
    sp.add_argument("file", help="matrix grid file, '-' for stdin")
    sp.add_argument("--property", default="nsmp", choices=["nsmp", "nssp"])
    common(sp, False)
    sp.set_defaults(func=_cmd_check)

    sp = sub.add_parser("classify", help="allow / require verdict for a sign pattern")
    sp.add_argument("file")
    sp.add_argument("--samples", type=int, default=200)
    common(sp, True)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("witness-search", help="random realizations that lack the nSMP")
    sp.add_argument("file")
    sp.add_argument("--samples", type=int, default=200)
    common(sp, True)
    sp.set_defaults(func=_cmd_witness)

    sp = sub.add_parser("canonical", help="canonical representative of the equivalence orbit")
    sp.add_argument("file")
    common(sp, False)
    sp.set_defaults(func=_cmd_canonical)

    sp = sub.add_parser("enumerate", help="classify every pattern of a small order")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--orbits", action="store_true", help="one representative per orbit")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--samples", type=int, default=200)
    common(sp, True)
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("fixtures", help="replay the reference fixtures")
    sp.add_argument("--verify", action="store_true", help="exit 1 if any fixture fails")
    common(sp, True)
    sp.set_defaults(func=_cmd_fixtures)
    return p


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "samples", 1) < 1 or getattr(args, "jobs", 1) < 1:
            raise _UsageError("--samples and --jobs must be positive")
        return args.func(args, out)
    except _UsageError as exc:
        err.write(f"nsmp: error: {exc}\n")
        return EXIT_USAGE
    except TooLargeError as exc:
        err.write(f"nsmp: {exc}\n")
        return EXIT_LIMIT
    except NsmpError as exc:
        err.write(f"nsmp: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
