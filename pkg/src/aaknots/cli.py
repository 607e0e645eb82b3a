"""Command line: validate, decide, generate, invariant, canon, replay.

Exit codes: 0 success (or TRIVIAL), 3 NONTRIVIAL, 1 bad input, 2 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .decide import (
    InconsistencyError,
    InvalidInput,
    PatternNotReached,
    Status,
    decide,
    read_certificate,
    replay_lines,
)
from .diagram import DiagramError, canonical_code, emit_pd, parse_pd
from .generate import EnumConfig, enumerate_unknot_diagrams, u1_alternating
from .oracle import BudgetExceeded, determinant, format_poly, jones, kauffman_bracket
from .recognition import PreconditionError, validate

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_NONTRIVIAL = 0, 1, 2, 3
DEFAULT_M = (1, -1, 2, -2, 3, -3)


class InputProblem(Exception):
    pass


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputProblem(f"cannot read {path}: {exc.strerror or exc}") from exc


def _inputs(text: str, each_line: bool) -> list[str]:
    # generator output is one diagram per line
    if not each_line and not text.lstrip().startswith("# generate"):
        return [text]
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return [r for r in rows if r]


def _parse(text: str):
    try:
        return parse_pd(text)
    except DiagramError as exc:
        raise InputProblem(f"invalid PD input: {exc}") from exc


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _m_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace(" ", ",").split(",") if v)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals or 0 in vals:
        raise argparse.ArgumentTypeError("m values must be non-zero integers")
    return vals


def cmd_validate(args) -> int:
    lines = []
    for item in _inputs(_read(args.file), args.each_line):
        d = _parse(item)
        report = validate(d)
        lines.extend(f"{k}: {v}" for k, v in report.items())
        if args.each_line:
            lines.append("")
    _write(None, "\n".join(lines).rstrip("\n") + "\n")
    return EXIT_OK


def cmd_decide(args) -> int:
    items = _inputs(_read(args.file), args.each_line)
    code = EXIT_OK
    certs = []
    for item in items:
        d = _parse(item)
        try:
            verdict, cert = decide(d)
        except (InvalidInput, PreconditionError) as exc:
            raise InputProblem(str(exc)) from exc
        print(str(verdict))
        certs.append(cert.to_text())
        if verdict.status == Status.NONTRIVIAL:
            code = EXIT_NONTRIVIAL
    if args.certificate:
        _write(args.certificate, "\n".join(certs))
    return code


def cmd_generate(args) -> int:
    cfg = EnumConfig(args.max_crossings, frozenset(args.m or DEFAULT_M), not args.no_dedup)
    diagrams = enumerate_unknot_diagrams(cfg)
    if args.u1_alternating:
        diagrams = [u1_alternating(d) for d in diagrams]
    ms = ",".join(str(m) for m in sorted(cfg.m_values, key=lambda v: (abs(v), v)))
    head = [
        f"# generate max_crossings={cfg.max_crossings} m={ms} dedup={int(cfg.dedup)} "
        f"u1_alternating={int(args.u1_alternating)} count={len(diagrams)}"
    ]
    _write(args.out, "\n".join(head + [emit_pd(d) for d in diagrams]) + "\n")
    return EXIT_OK


def cmd_invariant(args) -> int:
    out = []
    for item in _inputs(_read(args.file), args.each_line):
        d = _parse(item)
        try:
            if args.bracket:
                out.append(format_poly(kauffman_bracket(d, args.budget)))
            elif args.jones:
                out.append(format_poly(jones(d, args.budget)))
            else:
                out.append(str(determinant(d, args.budget)))
        except BudgetExceeded as exc:
            raise InputProblem(str(exc)) from exc
    _write(None, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_canon(args) -> int:
    out = [canonical_code(_parse(item)) for item in _inputs(_read(args.file), args.each_line)]
    _write(None, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_replay(args) -> int:
    text = _read(args.file)
    try:
        source, lines = read_certificate(text)
    except (DiagramError, ValueError) as exc:
        raise InputProblem(f"invalid certificate: {exc}") from exc
    report = replay_lines(source, lines, check_jones=not args.no_jones)
    if report.ok:
        print(f"OK {len(lines)} steps, crossings {' '.join(map(str, report.crossing_counts))}, terminal {emit_pd(report.terminal) or '-'}")
        return EXIT_OK
    print(f"FAILED at step {report.failed_index}: {report.message}")
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aaknots", description="Almost alternating unknot diagrams: recognition, decision, generation.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_file(sp, each=True):
        sp.add_argument("file", nargs="?", default="-", help="PD file ('-' or omitted: stdin)")
        if each:
            sp.add_argument("--each-line", action="store_true", help="treat every non-comment line as its own diagram")

    sp = sub.add_parser("validate", help="print diagram predicates")
    add_file(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("decide", help="decide whether the diagram is the unknot")
    add_file(sp)
    sp.add_argument("--certificate", metavar="OUT", help="write the move certificate here")
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("generate", help="enumerate almost alternating unknot diagrams")
    sp.add_argument("--max-crossings", type=int, required=True)
    sp.add_argument("--m", type=_m_list, metavar="LIST", help="comma-separated non-zero m values (use --m=-1,2 for negatives)")
    sp.add_argument("--u1-alternating", action="store_true", help="emit the alternating diagrams obtained by changing the dealternator")
    sp.add_argument("--no-dedup", action="store_true", help="keep repeated diagrams")
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("invariant", help="Kauffman bracket, Jones polynomial or determinant")
    add_file(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--bracket", action="store_true")
    g.add_argument("--jones", action="store_true")
    g.add_argument("--det", action="store_true")
    sp.add_argument("--budget", type=int, default=None, help="maximum crossing count for the state sum")
    sp.set_defaults(func=cmd_invariant)

    sp = sub.add_parser("canon", help="print the canonical code")
    add_file(sp)
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("replay", help="check a certificate written by decide")
    add_file(sp, each=False)
    sp.add_argument("--no-jones", action="store_true", help="skip the Jones check per step")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InconsistencyError, PatternNotReached) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # surfaced, never swallowed silently
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
