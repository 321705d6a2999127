"""Shared fixtures and hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from torfan.corpus import CorpusConfig, generate
from torfan.polyhedra import Polyhedron, cone
from torfan.quotients import make_context


def square():
    return Polyhedron.from_h([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, -1, 0, -1])


def segment():
    return Polyhedron.from_h([[1], [-1]], [0, -1])


def orthant(n):
    return cone([[int(i == j) for j in range(n)] for i in range(n)], n=n)


def sum_ctx(n=3):
    return make_context([[1] * n])


def instance_docs(n, d, kind="polyhedron"):
    """One seeded corpus instance per drawn seed."""
    return st.integers(0, 10**6).map(lambda s: generate(CorpusConfig(n=n, d=d, count=2, seed=s, kind=kind))[s % 2])


def dims(max_n=4):
    return st.tuples(st.integers(2, max_n), st.integers(1, 2)).filter(lambda t: t[1] < t[0])


@st.composite
def instances(draw, max_n=4, kind="polyhedron"):
    n, d = draw(dims(max_n))
    doc = draw(instance_docs(n, d, kind))
    return doc.polyhedron(), doc.context()


@st.composite
def hreps(draw, n=None, max_rows=6):
    """Arbitrary (possibly empty or lower-dimensional) H-descriptions."""
    if n is None:
        n = draw(st.integers(1, 3))
    m = draw(st.integers(0, max_rows))
    A = [draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)) for _ in range(m)]
    b = [draw(st.integers(-3, 3)) for _ in range(m)]
    k = draw(st.integers(0, 1))
    E = [draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)) for _ in range(k)]
    e = [draw(st.integers(-2, 2)) for _ in range(k)]
    return n, A, b, E, e


def rationals(lo=-5, hi=5, max_den=4):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


def point_in(P, weights):
    """A point of P from nonnegative integer weights (vertex choice, ray and lineality multiples)."""
    v = list(P.vertices[weights[0] % len(P.vertices)])
    gens = list(P.rays) + list(P.lineality)
    for g, w in zip(gens, weights[1:]):
        v = [a + w * b for a, b in zip(v, g)]
    return tuple(v)
