#!/usr/bin/env python3
"""Generate a seeded corpus and run one verifier over it.

    python3 scripts/verify_corpus.py --claim main --n 4 --d 2 --count 20 --seed 7
"""

import argparse
import sys
import time

from torfan.cli_io import dumps, report_document
from torfan.corpus import CorpusConfig, generate
from torfan.fans import fan_equal
from torfan.quotients import (VerificationReport, fiber_fan, verify_affine_duality, verify_fiber_duality,
                              verify_main_theorem)


def routes(P, ctx):
    r = VerificationReport("routes", instances=1, checks=1)
    cmp = fan_equal(fiber_fan(P, ctx, "direct"), fiber_fan(P, ctx, "dual"))
    if not cmp:
        r.fail({"side": cmp.side})
    return r


CHECKS = {
    "routes": (routes, "polyhedron"),
    "main": (verify_main_theorem, "polyhedron"),
    "affine": (verify_affine_duality, "cone"),
    "fiberduality": (verify_fiber_duality, "cone"),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--claim", choices=sorted(CHECKS), default="routes")
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    check, kind = CHECKS[args.claim]
    cfg = CorpusConfig(n=args.n, d=args.d, count=args.count, seed=args.seed, kind=kind)
    total = VerificationReport(args.claim)
    t0 = time.perf_counter()
    for doc in generate(cfg):
        r = check(doc.polyhedron(), doc.context())
        if not r.passed:
            r.witness = dict(r.witness or {}, name=doc.name)
        total.merge(r)
    sys.stdout.write(dumps(report_document(total)))
    print(f"{time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0 if total.passed else 1


if __name__ == "__main__":
    sys.exit(main())
