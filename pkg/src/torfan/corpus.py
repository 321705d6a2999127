"""Seeded random instances for verification runs.

Generator (one ``random.Random(seed)`` drives everything, in this order):

* polyhedra: draw ``m`` in ``[min_rows, max_rows]``, an interior point ``x0``
  with entries in ``[-2, 2]``, nonzero rows ``a`` with entries in
  ``[-entry, entry]`` and set ``b = a.x0 - s`` with ``s`` in ``[1, 3]``.  The
  result is full-dimensional with ``x0`` in its interior.  Even-indexed
  instances are resampled (up to ``attempts`` times) until bounded, odd ones
  until unbounded, giving a mixed corpus.
* cones: rows as above with ``b = 0``, resampled until full-dimensional.
  Every third cone uses fewer than ``n - d`` rows so that its lineality space
  meets ``ker(pi)`` and the fibers are not pointed.
* projections: ``d x n`` integer matrices with entries in ``[-entry, entry]``,
  resampled until of full row rank.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass

from . import exact
from .cli_io import CorpusDocument, InstanceDocument, HRepData
from .polyhedra import Polyhedron


@dataclass(frozen=True)
class CorpusConfig:
    n: int = 3
    d: int = 1
    count: int = 10
    seed: int = 0
    kind: str = "polyhedron"  # or "cone"
    min_rows: int = 2
    max_rows: int = 10
    entry: int = 2
    attempts: int = 50

    def __post_init__(self):
        if not 0 <= self.d < self.n:
            raise ValueError("need 0 <= d < n")
        if self.kind not in ("polyhedron", "cone"):
            raise ValueError(f"unknown corpus kind {self.kind!r}")


def _row(rng: random.Random, n: int, entry: int) -> tuple:
    while True:
        a = tuple(rng.randint(-entry, entry) for _ in range(n))
        if any(a):
            return a


def random_projection(rng: random.Random, n: int, d: int, entry: int = 2) -> tuple:
    while True:
        M = tuple(tuple(rng.randint(-entry, entry) for _ in range(n)) for _ in range(d))
        if exact.rank(M) == d if d else True:
            return M


def random_polyhedron(rng: random.Random, cfg: CorpusConfig, bounded: bool) -> Polyhedron:
    n = cfg.n
    P = None
    for _ in range(cfg.attempts):
        m = rng.randint(cfg.min_rows, cfg.max_rows)
        x0 = [rng.randint(-2, 2) for _ in range(n)]
        A = [_row(rng, n, cfg.entry) for _ in range(m)]
        b = [exact.dot(a, x0) - rng.randint(1, 3) for a in A]
        P = Polyhedron.from_h(A, b, n=n)
        if P.is_bounded == bounded:
            return P
    return P


def random_cone(rng: random.Random, cfg: CorpusConfig, non_pointed_fibers: bool) -> Polyhedron:
    n = cfg.n
    hi = max(1, n - cfg.d - 1) if non_pointed_fibers else cfg.max_rows
    lo = 1 if non_pointed_fibers else min(cfg.min_rows, hi)
    while True:
        m = rng.randint(lo, hi)
        A = [_row(rng, n, cfg.entry) for _ in range(m)]
        C = Polyhedron.from_h(A, [0] * m, n=n)
        if C.dim == n:
            return C


def generate(cfg: CorpusConfig) -> list[InstanceDocument]:
    rng = random.Random(cfg.seed)
    out = []
    for i in range(cfg.count):
        if cfg.kind == "cone":
            P = random_cone(rng, cfg, non_pointed_fibers=(i % 3 == 2 and cfg.n - cfg.d >= 2))
        else:
            P = random_polyhedron(rng, cfg, bounded=(i % 2 == 0))
        pi = random_projection(rng, cfg.n, cfg.d, cfg.entry)
        out.append(InstanceDocument(cfg.n, pi, hrep=HRepData(P.A, P.b, P.E, P.e),
                                    name=f"{cfg.kind}-{cfg.n}-{cfg.d}-{cfg.seed}-{i}"))
    return out


def generate_corpus(cfg: CorpusConfig) -> CorpusDocument:
    return CorpusDocument(asdict(cfg), tuple(generate(cfg)))
