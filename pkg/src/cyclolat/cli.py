"""Command-line interface.

Subcommands: gram, invariants, verify, complement, glue, search, reproduce.
Exit codes: 0 success / verification passed, 1 verification failed,
2 usage or input error.  All rationals in JSON output are exact strings
"a/b"; identical inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from fractions import Fraction
from pathlib import Path

from .exact_linalg import Matrix, matrix_to_text
from .ideal_lattice import check_properties, ideal_gram, load_ideal_spec
from .lattice_core import (
    GlueSpec,
    Lattice,
    LatticeError,
    cyclotomic_isometry,
    direct_sum,
    invariant_report,
    lattice_from_text,
    orthogonal_complement,
    overlattice,
    standard_lattice,
    verify_isometry,
)
from .scenarios import CASES, reproduce
from .unit_search import load_search_spec, search, search_payload

__all__ = ["main"]


class InputError(Exception):
    """Bad user input: reported on stderr with exit code 2."""


def _load_lattice(ref: str) -> Lattice:
    """A --lattice argument is a file path or a sum expression such as
    'E8+E8+U+U+U+diag(-2)'."""
    path = Path(ref)
    if path.exists():
        try:
            return lattice_from_text(path.read_text())
        except ValueError as exc:
            raise InputError(f"cannot parse lattice file {ref}: {exc}") from exc
    try:
        parts = _split_sum(ref)
        return direct_sum(*(standard_lattice(part) for part in parts))
    except LatticeError as exc:
        raise InputError(f"{ref!r} is neither a file nor a lattice expression: {exc}") from exc


def _split_sum(expr: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in expr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.json else text
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _report_text(report: dict) -> str:
    lines = [f"{key}: {value}" for key, value in report.items()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def _cmd_gram(args) -> int:
    spec = load_ideal_spec(args.spec)
    gram = ideal_gram(spec)
    text = matrix_to_text(gram)
    if args.json:
        rep = check_properties(spec, gram)
        payload = {
            "p": spec.p,
            "rank": gram.nrows,
            "matrix": text,
            "integral": rep.integral,
            "even": rep.even,
            "abs_det": str(rep.abs_det),
            "signature": list(rep.signature),
        }
        _emit(args, payload, text)
    elif args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_invariants(args) -> int:
    lattice = _load_lattice(args.lattice)
    report = invariant_report(lattice)
    _emit(args, report, _report_text(report))
    return 0


def _cmd_verify(args) -> int:
    lattice = _load_lattice(args.lattice)
    p = args.companion
    iso = cyclotomic_isometry(p)
    if iso.nrows != lattice.rank:
        raise InputError(f"companion of the {p}-th cyclotomic polynomial has rank "
                         f"{iso.nrows}, lattice has rank {lattice.rank}")
    report = verify_isometry(lattice, iso, p)
    payload = {
        "preserves_form": report.preserves_form,
        "order": report.order,
        "order_exact": report.order_exact,
        "char_poly": list(report.char_poly),
        "disc_action_trivial": report.disc_action_trivial,
        "passed": report.passed,
    }
    text = _report_text(payload)
    if not args.json and report.disc_action_trivial is not None:
        text += "discriminant action: {}\n".format(
            "trivial" if report.disc_action_trivial else "nontrivial")
    _emit(args, payload, text)
    return 0 if report.passed else 1


def _parse_vectors(text: str, length: int) -> list[tuple[Fraction, ...]]:
    vectors = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        entries = [Fraction(tok.strip()) for tok in chunk.split(",")]
        if len(entries) != length:
            raise InputError(f"vector has {len(entries)} entries, expected {length}")
        vectors.append(tuple(entries))
    if not vectors:
        raise InputError("no vectors given")
    return vectors


def _cmd_complement(args) -> int:
    cfg = configparser.ConfigParser()
    if not cfg.read(args.spec) or "complement" not in cfg:
        raise InputError(f"no [complement] section in {args.spec}")
    section = cfg["complement"]
    lattice = _load_lattice(section["lattice"])
    vectors = _parse_vectors(section["vectors"], lattice.rank)
    columns = []
    for v in vectors:
        if any(x.denominator != 1 for x in v):
            raise InputError("sublattice coordinates must be integers")
        columns.append(tuple(int(x) for x in v))
    comp = orthogonal_complement(lattice, Matrix.from_columns(columns))
    report = invariant_report(comp)
    if args.out and not args.json:
        Path(args.out).write_text(matrix_to_text(comp.gram))
        sys.stdout.write(_report_text(report))
        return 0
    _emit(args, report, _report_text(report))
    return 0


def _cmd_glue(args) -> int:
    cfg = configparser.ConfigParser()
    if not cfg.read(args.spec) or "glue" not in cfg:
        raise InputError(f"no [glue] section in {args.spec}")
    section = cfg["glue"]
    a = _load_lattice(section["lattice_a"])
    b = _load_lattice(section["lattice_b"])
    vectors = _parse_vectors(section["vectors"], a.rank + b.rank)
    ov = overlattice(GlueSpec((a, b), tuple(vectors)))
    report = invariant_report(ov.lattice)
    report["index_over_sum"] = ov.index
    if args.out and not args.json:
        Path(args.out).write_text(matrix_to_text(ov.lattice.gram))
        sys.stdout.write(_report_text(report))
        return 0
    _emit(args, report, _report_text(report))
    return 0


def _cmd_search(args) -> int:
    spec = load_search_spec(args.spec)
    solutions = search(spec, jobs=args.jobs)
    payload = search_payload(spec, solutions)
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(payload, indent=2) + "\n")
        for i, sol in enumerate(solutions):
            gram_path = out.with_name(f"{out.stem}.sol{i}.mat")
            gram_path.write_text(matrix_to_text(sol.gram))
        sys.stdout.write(f"{len(solutions)} solution(s) written to {out}\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_reproduce(args) -> int:
    try:
        report = reproduce(args.case)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = report.to_dict()
    lines = [f"{report.case}: {'PASS' if report.passed else 'FAIL'}"]
    for c in report.checks:
        lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}: "
                     f"expected {c.expected}, computed {c.computed}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclolat",
        description="exact ideal-lattice construction and isometry verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--out", metavar="FILE", help="write output to FILE")

    p = sub.add_parser("gram", help="build the Gram matrix of a twisted trace form")
    p.add_argument("--spec", required=True, metavar="FILE")
    common(p)
    p.set_defaults(func=_cmd_gram)

    p = sub.add_parser("invariants", help="rank/signature/discriminant report")
    p.add_argument("--lattice", required=True, metavar="FILE_OR_EXPR")
    common(p)
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("verify", help="verify the order-p companion isometry")
    p.add_argument("--lattice", required=True, metavar="FILE_OR_EXPR")
    p.add_argument("--companion", required=True, type=int, metavar="P")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("complement", help="orthogonal complement of a primitive sublattice")
    p.add_argument("--spec", required=True, metavar="FILE")
    common(p)
    p.set_defaults(func=_cmd_complement)

    p = sub.add_parser("glue", help="even overlattice along isotropic glue vectors")
    p.add_argument("--spec", required=True, metavar="FILE")
    common(p)
    p.set_defaults(func=_cmd_glue)

    p = sub.add_parser("search", help="exponent-box search for twists with target invariants")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    common(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("reproduce", help="run a bundled end-to-end case")
    p.add_argument("--case", required=True, metavar="NAME",
                   help="one of: " + ", ".join(CASES))
    common(p)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, LatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
