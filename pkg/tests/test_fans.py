from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from torfan.corpus import CorpusConfig, generate
from torfan.errors import EmptyPolyhedron, SupportMismatch
from torfan.fans import (Fan, PolyhedralComplex, common_refinement, cone_over_complex, fan_axiom_violations,
                         fan_equal, induced_fan, normal_cone, normal_fan, refine_pairwise)
from torfan.polyhedra import (Polyhedron, cone, dual_cone, face_min, fiber_slice, image, minkowski_sum,
                              recession_cone, relint_point, whole_space)
from torfan.quotients import face_of
from helpers import instances, orthant, segment, square, sum_ctx


def quadrants():
    return normal_fan(square())


def keys(cells):
    return {c.key for c in cells}


def polytopes(n):
    return st.integers(0, 10**6).map(
        lambda s: generate(CorpusConfig(n=n, d=1, count=1, seed=s))[0].polyhedron()).filter(
        lambda P: P.is_bounded)


class TestNormalCone:
    def test_square_corner(self):
        F = face_min(square(), [1, 1])
        N = normal_cone(square(), F)
        assert N == orthant(2)
        # sampled interior w pick exactly this vertex
        for w in [(1, 1), (1, 5), (Fraction(1, 3), 2)]:
            assert face_min(square(), w) == F

    def test_whole_face(self):
        F = face_min(square(), [0, 0])
        assert normal_cone(square(), F).dim == 0
        line = Polyhedron.from_v([[0, 0], [1, 0]])
        N = normal_cone(line, face_min(line, [0, 0]))
        assert N == cone(lineality=[[0, 1]], n=2)

    def test_orthant_facet(self):
        F = face_min(orthant(3), [1, 0, 0])
        assert normal_cone(orthant(3), F) == cone([[1, 0, 0]], n=3)


class TestNormalFan:
    def test_point(self):
        F = normal_fan(Polyhedron.from_v([[1, 2]]))
        assert [c.key for c in F.maximal_cones] == [whole_space(2).key]

    def test_segment(self):
        F = normal_fan(segment())
        assert keys(F.maximal_cones) == keys([cone([[1]], n=1), cone([[-1]], n=1)])
        assert len(F.cells()) == 3

    def test_square(self):
        F = quadrants()
        expected = [cone([[a, 0], [0, b]], n=2) for a in (1, -1) for b in (1, -1)]
        assert keys(F.maximal_cones) == keys(expected)

    def test_empty(self):
        with pytest.raises(EmptyPolyhedron):
            normal_fan(Polyhedron.empty(2))


class TestRefinement:
    def test_single(self):
        assert fan_equal(common_refinement([quadrants()]), quadrants())

    def test_idempotent_example(self):
        assert fan_equal(common_refinement([quadrants(), quadrants()]), quadrants())

    def test_segments_to_quadrants(self):
        a = normal_fan(Polyhedron.from_v([[0, 0], [1, 0]]))
        b = normal_fan(Polyhedron.from_v([[0, 0], [0, 1]]))
        assert len(a.maximal_cones) == 2 and a.lineality
        assert fan_equal(common_refinement([a, b]), quadrants())

    def test_support_mismatch(self):
        strip = normal_fan(Polyhedron.from_h([[1, 0], [-1, 0], [0, 1]], [0, -1, 0]))
        with pytest.raises(SupportMismatch) as info:
            common_refinement([strip, quadrants()])
        w = info.value.witness
        assert strip.support.contains(w) != quadrants().support.contains(w)

    @given(polytopes(2), polytopes(2))
    def test_commutative(self, P, Q):
        a, b = normal_fan(P), normal_fan(Q)
        assert fan_equal(common_refinement([a, b]), common_refinement([b, a]))

    @given(polytopes(3), polytopes(3), polytopes(3))
    def test_associative_and_oracle(self, P, Q, R):
        a, b, c = normal_fan(P), normal_fan(Q), normal_fan(R)
        left = common_refinement([common_refinement([a, b]), c])
        right = common_refinement([a, common_refinement([b, c])])
        flat = common_refinement([a, b, c])
        assert fan_equal(left, right) and fan_equal(left, flat)
        assert keys(flat.maximal_cones) == keys(refine_pairwise([a, b, c]))

    @given(polytopes(3))
    def test_idempotent(self, P):
        F = normal_fan(P)
        assert fan_equal(common_refinement([F, F]), F)

    @given(polytopes(2), polytopes(2))
    def test_minkowski_law_polytopes(self, P, Q):
        S = normal_fan(minkowski_sum(P, Q))
        assert fan_equal(S, common_refinement([normal_fan(P), normal_fan(Q)]))

    @given(instances(max_n=3), polytopes(3))
    def test_minkowski_law_same_recession(self, inst, Q):
        P, _ = inst
        if P.n != 3:
            return
        P2 = minkowski_sum(Q, recession_cone(P))
        assert recession_cone(P2) == recession_cone(P)
        S = normal_fan(minkowski_sum(P, P2))
        assert fan_equal(S, common_refinement([normal_fan(P), normal_fan(P2)]))


class TestInducedFan:
    def test_identity(self):
        F = quadrants()
        assert fan_equal(induced_fan([[1, 0], [0, 1]], F), F)

    def test_projective_plane(self):
        ctx = sum_ctx()
        F = induced_fan(ctx.pi_vee, [orthant(3)])
        assert len(F.maximal_cones) == 3
        assert F.support == whole_space(2)
        assert all(c.dim == 2 and len(c.rays) == 2 for c in F.maximal_cones)

    def test_quadrants_to_line(self):
        F = induced_fan([[1, 0]], quadrants())
        assert fan_equal(F, normal_fan(segment()))


class TestConeOverComplex:
    def test_point(self):
        F = cone_over_complex(PolyhedralComplex(1, [Polyhedron.from_v([[3]])]))
        assert [c.key for c in F.maximal_cones] == [cone([[3, 1]], n=2).key]

    def test_interval(self):
        K = PolyhedralComplex(1, [segment()])
        F = cone_over_complex(K)
        assert [c.key for c in F.maximal_cones] == [cone([[0, 1], [1, 1]], n=2).key]
        rays = {tuple(r) for c in F.cells() for r in c.rays}
        assert rays == {(0, 1), (1, 1)}

    def test_half_line(self):
        K = PolyhedralComplex(1, [Polyhedron.from_h([[1]], [0])])
        F = cone_over_complex(K)
        assert F.maximal_cones[0] == cone([[0, 1], [1, 0]], n=2)


class TestFanEqual:
    def test_order(self):
        cones = list(quadrants().maximal_cones)
        assert fan_equal(Fan(2, cones), Fan(2, cones[::-1]))

    def test_scaling(self):
        assert fan_equal(Fan(2, [cone([[2, 0], [0, 1]], n=2)]), Fan(2, [cone([[1, 0], [0, 1]], n=2)]))

    def test_witness(self):
        halves = normal_fan(Polyhedron.from_v([[0, 0], [1, 0]]))
        cmp = fan_equal(quadrants(), halves)
        assert not cmp
        assert cmp.witness.key in keys(quadrants().maximal_cones) | keys(halves.maximal_cones)
        own = quadrants() if cmp.side == "first" else halves
        other = halves if cmp.side == "first" else quadrants()
        assert cmp.witness.key in keys(own.maximal_cones)
        assert cmp.witness.key not in keys(other.maximal_cones)


@given(instances())
def test_normal_fan_support(inst):
    P, _ = inst
    F = normal_fan(P)
    assert F.support == dual_cone(recession_cone(P))
    assert fan_axiom_violations(F) == []
    ks = [c.key for c in F.maximal_cones]
    assert len(ks) == len(set(ks))
    for a in F.maximal_cones:
        assert not any(b is not a and b.contains_polyhedron(a) for b in F.maximal_cones)
        assert {tuple(l) for l in a.lineality} == {tuple(l) for l in F.lineality}


@given(instances(kind="cone"), st.data())
def test_projected_normal_cone_is_fiber_normal_cone(inst, data):
    C, ctx = inst
    faces = C.faces()
    F = faces[data.draw(st.integers(0, len(faces) - 1))]
    v = ctx.project(relint_point(F.polyhedron))
    Cv = fiber_slice(C, ctx, v)
    Fv = face_of(Cv, fiber_slice(F.polyhedron, ctx, v))
    assert image(normal_cone(C, F), ctx.pi_vee) == normal_cone(Cv, Fv)
