"""Command-line interface.

    boundary-kernel check FILE... [--profile P] [--fuel N] [--trace] [--format text|lines]
    boundary-kernel corpus [DIR] [--tier mandatory|stretch|all] [--format text|lines]
    boundary-kernel normalize FILE NAME [--profile P] [--fuel N] [--trace]

Exit codes: 0 when everything is accepted or passes, 1 on a rejection or a
failed expectation, 2 when the arguments or the input files cannot be used.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path
from typing import TextIO

from .errors import KernelError, ManifestError, UniverseInconsistency
from .kernel.profiles import BUILTIN, MODIFIERS, get_profile
from .reduction import DEFAULT_FUEL
from .syntax.printer import print_term
from .term import Const
from .vernacular import FileReport, Outcome, Session, describe_normalization, new_env

OK, FAIL, USAGE = 0, 1, 2


def headline(err: KernelError) -> str:
    """One-line account of a rejection: location, message and, for universe
    errors, the collapsed pair of relations."""
    where = f" at {err.span[0]}:{err.span[1]}:{err.span[2]}" if err.span else ""
    text = err.message
    if isinstance(err, UniverseInconsistency):
        text = err.trace.splitlines()[0]
    return f"{err.kind}{where}: {text}"


def digest(err: KernelError | None) -> str:
    if err is None:
        return "-"
    if isinstance(err, UniverseInconsistency):
        return err.report.digest()
    return hashlib.sha1(f"{err.kind}|{err.message}".encode()).hexdigest()[:10]


def _outcome_lines(o: Outcome, env, fmt: str, trace: bool) -> list[str]:
    if fmt == "lines":
        state = "accepted" if o.accepted else "rejected"
        return ["\t".join([o.file, o.name, state, o.kind or "-", digest(o.error)])]
    if o.command in ("Check", "Normalize"):
        if o.accepted:
            return [f"{o.command.lower()} {o.message}"]
        return [f"rejected {o.command}: {headline(o.error)}"]
    if o.accepted:
        ty = "" if o.type is None else f" : {print_term(o.type, env, o.context)}"
        return [f"ok {o.name}{ty}"]
    lines = [f"rejected {o.name}: {headline(o.error)}"]
    if trace and o.error.trace:
        lines += ["    " + ln for ln in o.error.trace.splitlines()]
    return lines


def _env_for(paths: list[Path], profile: str):
    # a prelude given on the command line is checked into an empty environment
    return new_env(profile, prelude=not paths or paths[0].stem != "prelude")


def _tracer(out: TextIO):
    def emit(step: int, kind: str, head: str | None) -> None:
        print(f"step {step}: {kind}" + (f" {head}" if head else ""), file=out)
    return emit


# ---------------------------------------------------------------------------
# commands

def cmd_check(args, out: TextIO, err: TextIO) -> int:
    paths = [Path(p) for p in args.paths]
    for p in paths:
        if not p.is_file():
            print(f"error: no such file {p}", file=err)
            return USAGE
    env = _env_for(paths, args.profile)
    session = Session(env, fuel=args.fuel, tracer=_tracer(out) if args.trace else None)
    status = OK
    for p in paths:
        try:
            report: FileReport = session.check_file(p)
        except KernelError as exc:
            print(f"error: {exc.render()}", file=err)
            return USAGE
        for o in report.outcomes:
            for line in _outcome_lines(o, env, args.format, args.trace):
                print(line, file=out)
        if not report.ok:
            status = FAIL
    return status


def cmd_corpus(args, out: TextIO, err: TextIO) -> int:
    from .corpus import Tier, evaluate_entry, load_corpus, select

    try:
        entries = select(load_corpus(args.directory), args.tier)
    except ManifestError as exc:
        print(f"error: {exc.message}", file=err)
        return USAGE
    rows, status = [], OK
    for entry in entries:
        rep = evaluate_entry(entry, fuel=args.fuel)
        gates = entry.tier is Tier.MANDATORY or args.tier == "stretch"
        if not rep.passed and gates:
            status = FAIL
        if rep.failure is not None:
            rows.append((entry.label, entry.profile, entry.tier.value, "-", "-", rep.failure, "FAIL"))
            continue
        for c in rep.checks:
            rows.append((entry.label, entry.profile, entry.tier.value, c.expectation.name,
                         c.expectation.describe(), c.observed, "pass" if c.passed else "FAIL"))
    if args.format == "lines":
        for r in rows:
            print("\t".join(r), file=out)
    else:
        head = ("entry", "profile", "tier", "declaration", "expected", "observed", "result")
        widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
        for r in [head, *rows]:
            print("  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip(), file=out)
        failed = sum(r[-1] == "FAIL" for r in rows)
        print(f"{len(entries)} entries, {len(rows)} expectations, {failed} failed", file=out)
    return status


def cmd_normalize(args, out: TextIO, err: TextIO) -> int:
    path = Path(args.path)
    if not path.is_file():
        print(f"error: no such file {path}", file=err)
        return USAGE
    env = _env_for([path], args.profile)
    session = Session(env, fuel=args.fuel)
    try:
        report = session.check_file(path)
    except KernelError as exc:
        print(f"error: {exc.render()}", file=err)
        return USAGE
    if args.name not in env.decls:
        print(f"error: {path} declares no {args.name!r}{env.suggest(args.name)}", file=err)
        return USAGE
    if not report.ok:
        bad = next(o for o in report.outcomes if not o.accepted)
        print(f"rejected {bad.name}: {headline(bad.error)}", file=err)
        return FAIL
    from .reduction import normalize

    res = normalize(env, Const(args.name), args.fuel, _tracer(out) if args.trace else None)
    print(describe_normalization(res, env), file=out)
    return OK


# ---------------------------------------------------------------------------
# entry point

def profile_name(text: str) -> str:
    try:
        get_profile(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def fuel_amount(text: str) -> int:
    try:
        n = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("fuel must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    profiles = ", ".join(BUILTIN) + "; modifiers " + ", ".join("+" + m for m in MODIFIERS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", type=profile_name, default="cic",
                        help=f"typing discipline ({profiles}); default cic")
    common.add_argument("--fuel", type=fuel_amount, default=DEFAULT_FUEL,
                        help="reduction steps allowed to Normalize (default 1000000)")
    common.add_argument("--trace", action="store_true",
                        help="print full rejection traces and reduction steps")
    common.add_argument("--format", choices=("text", "lines"), default="text",
                        help="text, or tab-separated lines for scripts")

    parser = argparse.ArgumentParser(prog="boundary-kernel",
                                     description="Check .pdx files against a typing profile.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="check files in order")
    p.add_argument("paths", nargs="+")
    p = sub.add_parser("corpus", parents=[common], help="run the corpus manifest")
    p.add_argument("directory", nargs="?", default=None,
                   help="corpus directory (default: $PARADOX_CORPUS_DIR or the bundled corpus)")
    p.add_argument("--tier", choices=("mandatory", "stretch", "all"), default="mandatory")
    p = sub.add_parser("normalize", parents=[common], help="normalise a declared constant")
    p.add_argument("path")
    p.add_argument("name")
    return parser


COMMANDS = {"check": cmd_check, "corpus": cmd_corpus, "normalize": cmd_normalize}


def main(argv: list[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with exit code 2
        return int(exc.code or 0)
    return COMMANDS[args.command](args, out, err)


if __name__ == "__main__":
    sys.exit(main())
