"""``torfan`` command line.

Exit codes: 0 success or passing verification, 1 failed verification,
2 bad input (malformed documents, violated preconditions, bad flags).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import cli_io
from .cli_io import ComplexDocument, CorpusDocument, FanDocument, InstanceDocument
from .corpus import CorpusConfig, generate_corpus
from .errors import RouteMismatch, TorfanError
from .fans import normal_fan
from .quotients import (VerificationReport, chow_fan, dual_data, fiber_fan, git_chamber_complex,
                        git_quotient_fan, verify_affine_duality, verify_fiber_duality, verify_main_theorem)
from .svg import render_svg


class InputError(Exception):
    pass


def _read(path: Optional[str]) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _instance(raw: bytes) -> InstanceDocument:
    doc = cli_io.parse_document(raw)
    if not isinstance(doc, InstanceDocument):
        raise InputError("expected an instance document")
    return doc


def _instances(raw: bytes) -> list[InstanceDocument]:
    doc = cli_io.parse_document(raw)
    if isinstance(doc, InstanceDocument):
        return [doc]
    if isinstance(doc, CorpusDocument):
        return list(doc.instances)
    raise InputError("expected an instance or corpus document")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TORFAN_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"TORFAN_SEED must be an integer, got {env!r}") from None


def _vector(text: str) -> list:
    try:
        return [cli_io._q(x.strip(), "--v") for x in text.split(",") if x.strip()]
    except TorfanError as exc:
        raise InputError(str(exc)) from None


def _emit(out, text: str):
    out.write(text)
    out.flush()


def cmd_dual(args, out) -> int:
    raw = _read(args.input)
    inst = _instance(raw)
    P, ctx = inst.polyhedron(), inst.context()
    Pp, ctxp = dual_data(P, ctx)
    doc = InstanceDocument(
        Pp.n, ctxp.pi_Z, vrep=cli_io.VRepData(Pp.vertices, Pp.rays, Pp.lineality),
        name=f"dual of {inst.name}" if inst.name else "dual",
        notes="kernel coordinates of the dual projection are the rows of the original projection"
              + ("" if P.is_cone else " extended by the height coordinate"))
    _emit(out, doc.dumps())
    return 0


def _fan_out(out, F, operation: str, raw: bytes) -> int:
    _emit(out, FanDocument.from_fan(F, operation, raw).dumps())
    return 0


def cmd_normal_fan(args, out) -> int:
    raw = _read(args.input)
    return _fan_out(out, normal_fan(_instance(raw).polyhedron()), "normal-fan", raw)


def cmd_fiber_fan(args, out) -> int:
    raw = _read(args.input)
    inst = _instance(raw)
    F = fiber_fan(inst.polyhedron(), inst.context(), args.route)
    return _fan_out(out, F, f"fiber-fan --route {args.route}", raw)


def cmd_chow_fan(args, out) -> int:
    raw = _read(args.input)
    inst = _instance(raw)
    return _fan_out(out, chow_fan(inst.polyhedron(), inst.context()), "chow-fan", raw)


def cmd_quotient_fan(args, out) -> int:
    raw = _read(args.input)
    inst = _instance(raw)
    v = _vector(args.v)
    if len(v) != inst.d:
        raise InputError(f"--v needs {inst.d} entries, got {len(v)}")
    F = git_quotient_fan(inst.polyhedron(), inst.context(), v)
    return _fan_out(out, F, f"quotient-fan --v {','.join(cli_io.fmt_qvec(v))}", raw)


def cmd_chambers(args, out) -> int:
    raw = _read(args.input)
    inst = _instance(raw)
    K = git_chamber_complex(inst.polyhedron(), inst.context())
    _emit(out, ComplexDocument.from_complex(K, "chambers", raw).dumps())
    return 0


def cmd_verify(args, out) -> int:
    raw = _read(args.input)
    insts = _instances(raw)
    seed = _seed(args)
    total = VerificationReport({"fiberduality": "fiber_duality"}.get(args.claim, args.claim), instances=0)
    for i, inst in enumerate(insts):
        P, ctx = inst.polyhedron(), inst.context()
        if args.claim == "main":
            r = verify_main_theorem(P, ctx)
        elif args.claim == "affine":
            r = verify_affine_duality(P, ctx)
        else:
            r = verify_fiber_duality(P, ctx, samples=args.samples, seed=seed)
        if not r.passed and r.witness is not None:
            r.witness = dict(r.witness, instance=i, name=inst.name)
        total.merge(r)
    _emit(out, cli_io.dumps(cli_io.report_document(total)))
    return 0 if total.passed else 1


def cmd_random_corpus(args, out) -> int:
    try:
        cfg = CorpusConfig(n=args.n, d=args.d, count=args.count, seed=_seed(args), kind=args.kind,
                           max_rows=args.max_rows)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(out, generate_corpus(cfg).dumps())
    return 0


def cmd_render(args, out) -> int:
    raw = _read(args.input)
    doc = cli_io.parse_document(raw)
    if isinstance(doc, FanDocument):
        K = doc.fan()
    elif isinstance(doc, ComplexDocument):
        K = doc.complex()
    else:
        raise InputError("render expects a fan or complex document")
    render_svg(K, args.svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torfan", description="Fiber fans, GIT chambers and toric Chow quotients.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("input", nargs="?", help="input document (default: standard input)")
        return sp

    with_input(sub.add_parser("dual", help="dual polyhedron and projection")).set_defaults(func=cmd_dual)
    with_input(sub.add_parser("normal-fan", help="inner normal fan of the polyhedron")).set_defaults(func=cmd_normal_fan)
    sp = with_input(sub.add_parser("fiber-fan", help="fiber fan of the projection"))
    sp.add_argument("--route", choices=("direct", "dual", "both"), default="both")
    sp.set_defaults(func=cmd_fiber_fan)
    with_input(sub.add_parser("chambers", help="GIT chamber complex")).set_defaults(func=cmd_chambers)
    sp = with_input(sub.add_parser("quotient-fan", help="fan of the GIT quotient at v"))
    sp.add_argument("--v", required=True, help="comma separated rationals, e.g. 1,1/2")
    sp.set_defaults(func=cmd_quotient_fan)
    with_input(sub.add_parser("chow-fan", help="fan of the toric Chow quotient")).set_defaults(func=cmd_chow_fan)
    sp = sub.add_parser("verify", help="check a duality statement on an instance or corpus")
    sp.add_argument("claim", choices=("fiberduality", "main", "affine"))
    with_input(sp)
    sp.add_argument("--samples", type=int, default=25)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("random-corpus", help="seeded random instances")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--kind", choices=("polyhedron", "cone"), default="polyhedron")
    sp.add_argument("--max-rows", type=int, default=10)
    sp.set_defaults(func=cmd_random_corpus)
    sp = with_input(sub.add_parser("render", help="draw a fan or complex document"))
    sp.add_argument("--svg", required=True, help="output path")
    sp.set_defaults(func=cmd_render)
    return p


def run_command(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(list(argv))
        # argparse leaves an optional positional unfilled when it follows flags
        if len(extra) == 1 and getattr(args, "input", "") is None and not extra[0].startswith("-"):
            args.input = extra[0]
        elif extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except RouteMismatch as exc:
        err.write(f"torfan: {exc}\n")
        return 1
    except (TorfanError, InputError, ValueError) as exc:
        err.write(f"torfan: {exc}\n")
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
