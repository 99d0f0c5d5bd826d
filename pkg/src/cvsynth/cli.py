"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 domain or usage error,
3 unreadable or malformed file. Domain errors are reported on stderr as
``<ErrorClass>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .document import ScheduleDocument, emit, make_metadata, native_from, parse
from .errors import DocumentError, SynthesisError
from .gates import parse_target
from .oracle_verify import verify
from .scheduler import DEFAULT_MARGIN, schedule_tms_above_threshold, synthesize
from .symplectic_core import CouplingMatrix, canonical_form
from .synthesis_generic import synth_bs_amp, synth_bs_osc, synth_tms_amp, synth_tms_osc
from .synthesis_xp import synth_bs_xp, synth_tms_xp

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_DOMAIN = 2
EXIT_IO = 3

SWEEP_HEADER = ("r", "s", "alpha", "beta", "total_time", "n_blocks", "status")


def _floats(text: str, n: int, what: str) -> list:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"{what} must be {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise ValueError(f"{what} must be {n} comma-separated numbers, got {text!r}")
    return vals


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> ``n`` evenly spaced points from ``a`` to ``b`` inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must look like a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"range must look like a:b:n, got {text!r}") from None
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"range needs finite ends and n >= 1, got {text!r}")
    return np.linspace(a, b, n)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_synthesize(args) -> int:
    if args.hamiltonian is not None:
        hamiltonian = CouplingMatrix(*_floats(args.hamiltonian, 4, "--hamiltonian"))
    else:
        hamiltonian = tuple(_floats(args.canonical, 2, "--canonical"))
    native = native_from(hamiltonian)
    target = parse_target(args.target)
    schedule = synthesize(target, native, margin=args.margin, split=args.split, fuse=not args.no_fuse)
    doc = ScheduleDocument(hamiltonian, schedule, make_metadata(args.tol, args.kappa))
    _write(emit(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.schedule, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {args.schedule}: {exc.strerror}") from None
    doc = parse(text)
    report = verify(doc.schedule, doc.native(), tol=args.tol)
    sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def cmd_canonicalize(args) -> int:
    C = CouplingMatrix(*_floats(args.hamiltonian, 4, "--hamiltonian"))
    H = canonical_form(C)
    cls = H.coupling_class
    out = {
        "c1": H.c1,
        "c2": H.c2,
        "rotA": H.rot_a,
        "rotB": H.rot_b,
        "class": cls.family.value,
        "s": cls.s,
        "sign_degenerate": H.sign_degenerate,
    }
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def _sweep_point(target: str, coupling: str, r: float, s: float | None, margin: float, concatenate: bool) -> tuple:
    """(alpha, beta, total_time, n_blocks, status) for one grid point."""
    if coupling == "xp":
        d = synth_tms_xp(r) if target == "tms" else synth_bs_xp(r)
        alpha, beta = d.steps[0][1], d.steps[1][1]
        return alpha, beta, d.total_time, 1, "ok"
    if coupling == "amp":
        d = synth_tms_amp(r, s) if target == "tms" else synth_bs_amp(r, s)
        return d.alpha, d.beta, d.total_time, 1, "ok"
    if target == "bs":
        d = synth_bs_osc(r, s)
        return d.alpha, d.beta, d.total_time, 1, "ok"
    if not concatenate:
        d = synth_tms_osc(r, s)
        return d.alpha, d.beta, d.total_time, 1, "ok"
    # same block rule as the scheduler, so rows match synthesized documents
    sched = schedule_tms_above_threshold(r, s, margin)
    d = synth_tms_osc(r / sched.n_blocks, s)
    return d.alpha, d.beta, sched.total_time, sched.n_blocks, "ok" if sched.n_blocks == 1 else "concatenated"


def cmd_sweep(args) -> int:
    rs = parse_range(args.r_range)
    if args.coupling == "xp":
        ss = [None]
    elif args.s_range is None:
        raise ValueError(f"--s-range is required for the {args.coupling} coupling")
    else:
        ss = parse_range(args.s_range)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for s in ss:
        for r in rs:
            r, s_val = float(r), None if s is None else float(s)
            try:
                alpha, beta, total, n, status = _sweep_point(
                    args.target, args.coupling, r, s_val, args.margin, args.concatenate
                )
                row = [repr(alpha), repr(beta), repr(total), str(n), status]
            except SynthesisError as exc:
                row = ["", "", "", "", type(exc).__name__]
            writer.writerow([repr(r), "" if s_val is None else repr(s_val), *row])
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvsynth",
        description="Synthesize two-mode Gaussian gates from a fixed coupling and local phase shifts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="build a pulse schedule for a target gate")
    ham = p.add_mutually_exclusive_group(required=True)
    ham.add_argument("--hamiltonian", metavar="c11,c12,c21,c22", help="native coupling coefficients")
    ham.add_argument("--canonical", metavar="c1,c2", help="already canonical coupling")
    p.add_argument("--target", required=True, help="bs:<phi>, tms:<r>, sms:<r> or custom:a,b,c,d")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--margin", type=float, default=DEFAULT_MARGIN, help="safety margin below the squeezing threshold")
    p.add_argument("--split", type=int, default=1, help="split XP two-mode squeezing into this many blocks")
    p.add_argument("--no-fuse", action="store_true", help="keep a separate undo phase after every step")
    p.add_argument("--kappa", type=float, help="physical coupling strength, recorded in the metadata")
    p.add_argument("--tol", type=float, default=1e-9, help="tolerance recorded in the metadata")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="replay a schedule document against its target")
    p.add_argument("--schedule", required=True, help="schedule document (JSON)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("canonicalize", help="reduce a coupling to canonical form")
    p.add_argument("--hamiltonian", required=True, metavar="c11,c12,c21,c22")
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("sweep", help="tabulate interaction times over a parameter grid as CSV")
    p.add_argument("--target", choices=("tms", "bs"), required=True, help="gate; the r column holds phi for bs")
    p.add_argument("--coupling", choices=("amp", "osc", "xp"), default="amp")
    p.add_argument("--r-range", required=True, metavar="a:b:n")
    p.add_argument("--s-range", metavar="a:b:n", help="required unless --coupling xp")
    p.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    p.add_argument("--concatenate", action="store_true", help="split oscillatory squeezing above threshold")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SynthesisError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DocumentError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
