"""Acceptance criteria, one test per criterion.

Each criterion prints a single ``criterion N: PASS|FAIL`` line (collected in
the pytest terminal summary, or printed directly when run as a script).
"""

import io
import random
import sys
import time
from functools import lru_cache

import pytest

from torfan.cli import run_command
from torfan.cli_io import parse_document, parse_instance
from torfan.corpus import CorpusConfig, generate, generate_corpus
from torfan.errors import RouteMismatch
from torfan.fans import common_refinement, fan_equal, normal_fan
from torfan.polyhedra import (Polyhedron, cone, dual_cone, fiber_slice, minkowski_sum, recession_cone, relint_point,
                              whole_space)
from torfan.quotients import (chow_fan, fiber_fan, git_chamber_complex, git_quotient_fan, make_context,
                              verify_affine_duality, verify_fiber_duality, verify_main_theorem)

COMBOS = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2)]
RESULTS = {}


@lru_cache(maxsize=None)
def corpus(kind, per_combo, seed):
    docs = []
    for n, d in COMBOS:
        docs += generate(CorpusConfig(n=n, d=d, count=per_combo, seed=seed, kind=kind, max_rows=10))
    return tuple(docs)


def fixtures():
    orth = lambda n: cone([[int(i == j) for j in range(n)] for i in range(n)], n=n)
    sq = Polyhedron.from_h([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, -1, 0, -1])
    return [("orthant/sum", orth(3), make_context([[1, 1, 1]])),
            ("square/second", sq, make_context([[0, 1]])),
            ("orthant4/weights", orth(4), make_context([[1, 1, -1, -1]]))]


def record(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[k] = line
    return ok, line


def criterion_1():
    docs = corpus("polyhedron", 30, 2024)
    t0 = time.perf_counter()
    bad = []
    for doc in docs:
        P, ctx = doc.polyhedron(), doc.context()
        if not fan_equal(fiber_fan(P, ctx, "direct"), fiber_fan(P, ctx, "dual")):
            bad.append(doc.name)
    dt = time.perf_counter() - t0
    rows = max(len(doc.hrep.A) for doc in docs)
    ok = len(docs) >= 200 and not bad and dt < 60 and rows <= 10
    return record(1, ok, f"{len(docs)} instances, {len(bad)} route mismatches, {dt:.1f}s"
                         + (f", first {bad[0]}" if bad else ""))


def criterion_2():
    docs = corpus("polyhedron", 15, 7)
    t0 = time.perf_counter()
    bad = []
    bounded = sum(doc.polyhedron().is_bounded for doc in docs)
    for doc in docs:
        if not verify_main_theorem(doc.polyhedron(), doc.context()).passed:
            bad.append(doc.name)
    for name, P, ctx in fixtures():
        if not verify_main_theorem(P, ctx).passed:
            bad.append(name)
    dt = time.perf_counter() - t0
    ok = len(docs) >= 100 and 0 < bounded < len(docs) and not bad and dt < 120
    return record(2, ok, f"{len(docs)} random ({bounded} bounded) + 3 fixtures, {len(bad)} failures, {dt:.1f}s")


def criterion_3():
    docs = corpus("cone", 15, 11)
    t0 = time.perf_counter()
    bad = [doc.name for doc in docs if not verify_affine_duality(doc.polyhedron(), doc.context()).passed]
    dt = time.perf_counter() - t0
    ok = len(docs) >= 100 and not bad and dt < 120
    return record(3, ok, f"{len(docs)} cones, parts i and ii, {len(bad)} failures, {dt:.1f}s")


def criterion_4():
    docs = corpus("cone", 9, 4)
    bad, non_pointed = [], 0
    for doc in docs:
        C, ctx = doc.polyhedron(), doc.context()
        assert C.dim == C.n
        if fiber_slice(C, ctx, [0] * ctx.d).lineality:
            non_pointed += 1
        r = verify_fiber_duality(C, ctx, samples=25, seed=0)
        if not r.passed:
            bad.append(doc.name)
    ok = len(docs) >= 50 and non_pointed >= 10 and not bad
    return record(4, ok, f"{len(docs)} cones ({non_pointed} with non-pointed fibers), 25 pairs each, "
                         f"{len(bad)} failures")


def criterion_5():
    P, ctx = fixtures()[0][1:]
    F = git_quotient_fan(P, ctx, [1])
    complete = F.support == whole_space(2)
    three = len(F.maximal_cones) == 3 and all(c.dim == 2 for c in F.maximal_cones)
    rays = sorted({tuple(r) for c in F.maximal_cones for r in c.rays})
    same = bool(fan_equal(chow_fan(P, ctx), F))
    ok = complete and three and same and len(rays) == 3
    return record(5, ok, f"{len(F.maximal_cones)} maximal cones, rays {rays}, chow fan equal: {same}")


def _point(P, rng):
    x = list(relint_point(P))
    for g in list(P.rays) + list(P.lineality):
        c = rng.randint(0, 3)
        x = [a + c * b for a, b in zip(x, g)]
    for v in P.vertices:
        if rng.random() < 0.5:
            x = [(a + b) / 2 for a, b in zip(x, v)]
    return x


def criterion_6():
    polys = corpus("polyhedron", 15, 606)
    cones = corpus("cone", 15, 607)
    rng = random.Random(6)
    fails = {"involution": 0, "support": 0, "minkowski": 0, "recession": 0}
    for doc in cones:
        C = doc.polyhedron()
        fails["involution"] += dual_cone(dual_cone(C)) != C
    polytopes = corpus("polyhedron", 15, 608)
    for doc, other in zip(polys, polytopes):
        P, ctx = doc.polyhedron(), doc.context()
        fails["support"] += normal_fan(P).support != dual_cone(recession_cone(P))
        # second summand with the same recession cone: a polytope plus rec(P)
        P2 = minkowski_sum(Polyhedron.from_v(other.polyhedron().vertices), recession_cone(P))
        assert recession_cone(P2) == recession_cone(P)
        lhs = normal_fan(minkowski_sum(P, P2))
        fails["minkowski"] += not fan_equal(lhs, common_refinement([normal_fan(P), normal_fan(P2)]))
        q1, q2 = ctx.project(_point(P, rng)), ctx.project(_point(P, rng))
        fails["recession"] += recession_cone(fiber_slice(P, ctx, q1)) != recession_cone(fiber_slice(P, ctx, q2))
    counts = {"involution": len(cones), "support": len(polys), "minkowski": len(polys), "recession": len(polys)}
    ok = all(c >= 100 for c in counts.values()) and not any(fails.values())
    return record(6, ok, ", ".join(f"{k} {fails[k]}/{counts[k]} failures" for k in fails))


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    return code, out.getvalue()


def criterion_7(tmp_dir):
    docs = corpus("polyhedron", 30, 2024) + corpus("polyhedron", 15, 7) + corpus("cone", 15, 11) + corpus("cone", 9, 4)
    mismatched = 0
    for doc in docs:
        text = doc.dumps()
        back = parse_instance(text)
        mismatched += back != doc or back.dumps() != text
    cdoc = generate_corpus(CorpusConfig(n=4, d=2, count=5, seed=3))
    mismatched += parse_document(cdoc.dumps()) != cdoc
    inst = tmp_dir / "instance.json"
    inst.write_text(docs[40].dumps())
    runs = [["random-corpus", "--n", "4", "--d", "2", "--count", "5", "--seed", "3"],
            ["chow-fan", str(inst)], ["chambers", str(inst)], ["dual", str(inst)],
            ["verify", "fiberduality", "--seed", "9", str(tmp_dir / "cone.json")]]
    (tmp_dir / "cone.json").write_text(corpus("cone", 9, 4)[5].dumps())
    differing = 0
    for argv in runs:
        a, b = _cli(argv), _cli(argv)
        differing += a != b or a[0] != 0
    ok = mismatched == 0 and differing == 0
    return record(7, ok, f"{len(docs) + 1} documents round-tripped, {mismatched} mismatches; "
                         f"{len(runs)} commands run twice, {differing} differing")


def test_criterion_1_route_equivalence():
    ok, line = criterion_1()
    assert ok, line


def test_criterion_2_main_theorem():
    ok, line = criterion_2()
    assert ok, line


def test_criterion_3_affine_duality():
    ok, line = criterion_3()
    assert ok, line


def test_criterion_4_fiber_duality():
    ok, line = criterion_4()
    assert ok, line


def test_criterion_5_projective_plane():
    ok, line = criterion_5()
    assert ok, line


def test_criterion_6_structural_invariants():
    ok, line = criterion_6()
    assert ok, line


def test_criterion_7_determinism_round_trip(tmp_path):
    ok, line = criterion_7(tmp_path)
    assert ok, line


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    status = 0
    for k, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6], 1):
        ok, line = fn()
        print(line, flush=True)
        status |= not ok
    with tempfile.TemporaryDirectory() as d:
        ok, line = criterion_7(Path(d))
        print(line)
        status |= not ok
    sys.exit(status)
