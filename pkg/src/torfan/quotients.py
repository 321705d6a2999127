"""Fiber fans, GIT chamber complexes and the duality checks built on them.

Coordinates: a :class:`ProjectionContext` fixes a basis ``K`` of the kernel
of ``pi`` and a rational section ``S`` with ``pi S = id``.  Fibers are
written in ``K``-coordinates, ``x = K t + S q``, so every fan attached to a
fiber (GIT quotient fans, fiber fans) lives in the dual of those
coordinates, where ``pi_vee`` acts as ``K^T``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional, Sequence

from . import exact
from .errors import EmptyPolyhedron, FiberEmpty, NotACone, RankDeficient, RouteMismatch
from .exact import Matrix, dot, mat_vec, qvec, transpose
from .fans import (Fan, PolyhedralComplex, cone_over_complex, fan_equal, induced_fan,
                   induced_subdivision, normal_cone, normal_fan, common_refinement)
from .polyhedra import (Face, Polyhedron, dual_cone, fiber_slice, homogenize, image,
                        minimal_face_containing, relint_point, tilde_face)


@dataclass(frozen=True, eq=False)
class ProjectionContext:
    """All maps attached to one linear projection ``pi: Q^n -> Q^d``."""

    pi_Z: Matrix
    n: int
    kernel_basis: tuple
    section: Matrix

    @property
    def d(self) -> int:
        return len(self.pi_Z)

    @property
    def k(self) -> int:
        return len(self.kernel_basis)

    @cached_property
    def pi_vee(self) -> Matrix:
        return tuple(tuple(v) for v in self.kernel_basis)

    @cached_property
    def tilde_pi(self) -> Matrix:
        rows = [tuple(r) + (0,) for r in self.pi_Z]
        rows.append(tuple([0] * self.n + [1]))
        return tuple(rows)

    @cached_property
    def tilde_pi_vee(self) -> Matrix:
        return tuple(tuple(r) + (0,) for r in self.pi_vee)

    @cached_property
    def p1(self) -> Matrix:
        return tuple(tuple(int(i == j) for j in range(self.n + 1)) for i in range(self.n))

    @cached_property
    def p2(self) -> Matrix:
        return (tuple([0] * self.n + [1]),)

    @cached_property
    def L(self) -> list:
        return exact.integer_image_basis(self.pi_Z, self.n)

    @cached_property
    def L_prime(self) -> list:
        return exact.integer_image_basis(self.pi_vee, self.n)

    @cached_property
    def L_prime_tilde(self) -> list:
        return exact.integer_image_basis(self.tilde_pi_vee, self.n + 1)

    @cached_property
    def saturated_kernel_basis(self) -> list:
        return exact.integer_kernel_basis(self.pi_Z, self.n)

    @cached_property
    def _kernel_left_inverse(self):
        K = [exact.qvec(v) for v in self.kernel_basis]
        if not K:
            return ()
        gram = [[dot(u, v) for v in K] for u in K]
        return exact.mat_mul(exact.inverse(gram), K)

    def project(self, x: Sequence) -> tuple:
        return mat_vec(self.pi_Z, qvec(x))

    def kernel_coords(self, x: Sequence) -> tuple:
        """Coordinates ``t`` of ``x - S pi(x)`` in the kernel basis."""
        x = qvec(x)
        if self.d:
            x = exact.vec_sub(x, mat_vec(self.section, self.project(x)))
        return mat_vec(self._kernel_left_inverse, x)

    def lift(self, t: Sequence, q: Sequence) -> tuple:
        """The point ``K t + S q``."""
        x = [Fraction(0)] * self.n
        for ti, kv in zip(qvec(t), self.kernel_basis):
            if ti:
                x = [a + ti * b for a, b in zip(x, kv)]
        if self.d:
            x = exact.vec_add(x, mat_vec(self.section, qvec(q)))
        return tuple(x)

    def dual(self) -> "ProjectionContext":
        """Context of ``pi_vee`` whose kernel coordinates pair naturally with Q^d."""
        rows = [tuple(r) for r in self.pi_Z]
        return make_context(self.pi_vee, kernel_basis=rows, n=self.n)

    def diagram_failures(self) -> list[str]:
        """Matrix identities the lifted and dual diagrams must satisfy."""
        bad = []
        n, d = self.n, self.d
        K = list(self.kernel_basis)
        if any(any(mat_vec(self.pi_Z, kv)) for kv in K):
            bad.append("pi o iota != 0")
        if d and exact.mat_mul(self.pi_Z, self.section, d) != exact.identity(d):
            bad.append("pi o section != id")
        Kt = [tuple(kv) + (0,) for kv in K]
        if any(any(mat_vec(self.tilde_pi, kv)) for kv in Kt):
            bad.append("tilde_pi o tilde_iota != 0")
        if [mat_vec(self.p1, kv) for kv in Kt] != [tuple(kv) for kv in K]:
            bad.append("p1 o tilde_iota != iota")
        if exact.mat_mul(self.pi_vee, self.p1, n + 1) != self.tilde_pi_vee:
            bad.append("tilde_pi_vee != pi_vee o p1")
        if d and (exact.mat_mul(self.pi_Z, self.p1, n + 1)
                  != exact.mat_mul(first_projection(d), self.tilde_pi, n + 1)):
            bad.append("pi o p1 != q1 o tilde_pi")
        if len(K) + d != n:
            bad.append("rank identity n = d + dim ker fails")
        if tuple(mat_vec(self.p2, [0] * n + [1])) != (1,):
            bad.append("p2 is not the last coordinate")
        return bad


def first_projection(d: int) -> Matrix:
    """First projection ``Q^d + Q -> Q^d``."""
    return tuple(tuple(int(i == j) for j in range(d + 1)) for i in range(d))


def make_context(pi_Z: Sequence[Sequence[int]], kernel_basis: Optional[Sequence[Sequence[int]]] = None,
                 n: Optional[int] = None) -> ProjectionContext:
    """Context for an integer ``d x n`` matrix of full row rank with ``d < n``.

    By default the kernel basis is the saturated Hermite basis of
    ``ker(pi_Z) cap Z^n``.  An explicit basis may be supplied to fix other
    kernel coordinates; it must span the rational kernel.
    """
    pi = exact.zmat(pi_Z)
    if n is None:
        if not pi:
            raise ValueError("ambient dimension required for a map to Q^0")
        n = len(pi[0])
    d = len(pi)
    if any(len(r) != n for r in pi):
        raise ValueError("ragged projection matrix")
    if d >= n:
        raise RankDeficient(f"need d < n, got d={d}, n={n}")
    if exact.rank(pi) < d:
        raise RankDeficient("projection matrix is not of full row rank")
    if kernel_basis is None:
        K = tuple(exact.integer_kernel_basis(pi, n))
    else:
        K = tuple(tuple(int(x) for x in v) for v in kernel_basis)
        if len(K) != n - d or exact.rank(K) != n - d or any(any(mat_vec(pi, v)) for v in K):
            raise ValueError("kernel_basis does not span the kernel")
    if d:
        gram = exact.mat_mul(pi, transpose(pi))
        S = exact.mat_mul(transpose(pi), exact.inverse(gram), d)
    else:
        S = tuple(() for _ in range(n))
    ctx = ProjectionContext(pi, n, K, S)
    bad = ctx.diagram_failures()
    if bad:
        raise AssertionError("projection diagrams do not commute: " + "; ".join(bad))
    return ctx


# --------------------------------------------------------------------------
# chambers, quotient fans, fiber fans


def git_chamber_complex(P: Polyhedron, ctx: ProjectionContext) -> PolyhedralComplex:
    """Subdivision of ``Q = pi(P)`` induced by the images of the faces of P."""
    if P.is_empty:
        raise EmptyPolyhedron("chamber complex of the empty polyhedron")
    return PolyhedralComplex(ctx.d, induced_subdivision(ctx.pi_Z, [P], ctx.d))


def git_quotient_fan(P: Polyhedron, ctx: ProjectionContext, v: Sequence) -> Fan:
    return normal_fan(fiber_slice(P, ctx, v))


def in_relint_image(P: Polyhedron, F: Face, ctx: ProjectionContext, q: Sequence) -> bool:
    """Whether ``q`` lies in ``pi(relint F)``."""
    try:
        Fq = fiber_slice(F.polyhedron, ctx, q)
    except FiberEmpty:
        return False
    x = ctx.lift(relint_point(Fq), q)
    return minimal_face_containing(P, [x]).active == F.active


def face_of(P: Polyhedron, Q: Polyhedron) -> Face:
    """The face of ``P`` whose point set is ``Q`` (``Q`` must be a face)."""
    F = minimal_face_containing(P, [relint_point(Q)])
    if F.polyhedron.key != Q.key:
        raise ValueError("not a face")
    return F


def coherent_subdivision(C: Polyhedron, ctx: ProjectionContext, v: Sequence) -> Fan:
    """The ``v``-induced coherent subdivision of ``pi_vee(C^vee)``.

    A face ``G`` of ``C^vee`` contributes ``pi_vee(G)`` exactly when ``v``
    lies in ``pi`` of the relative interior of the face of ``C`` normal to ``G``.
    """
    if not C.is_cone:
        raise NotACone("coherent subdivisions are defined for cones")
    fiber_slice(C, ctx, v)
    Cd = dual_cone(C)
    cells = []
    for G in Cd.faces():
        F = face_of(C, normal_cone(Cd, G))
        if in_relint_image(C, F, ctx, v):
            cells.append(image(G.polyhedron, ctx.pi_vee))
    return Fan(ctx.k, cells)


def chamber_representatives(K: PolyhedralComplex) -> list[tuple]:
    return [relint_point(c) for c in K.maximal_cells]


def _fiber_fan_direct(P: Polyhedron, ctx: ProjectionContext) -> Fan:
    K = git_chamber_complex(P, ctx)
    fans = [normal_fan(fiber_slice(P, ctx, q)) for q in chamber_representatives(K)]
    return common_refinement(fans)


def _fiber_fan_dual(P: Polyhedron, ctx: ProjectionContext) -> Fan:
    Pdual = dual_cone(homogenize(P))
    return induced_fan(ctx.tilde_pi_vee, [Pdual], ctx.k)


def fiber_fan(P: Polyhedron, ctx: ProjectionContext, route: str = "both") -> Fan:
    """Common refinement of the normal fans of all fibers of ``pi`` on ``P``.

    ``direct`` refines the normal fans of one fiber per chamber; ``dual``
    takes the fan induced by ``tilde_pi_vee`` on the normal fan of the
    homogenization; ``both`` computes the two and insists they agree.
    """
    if P.is_empty:
        raise EmptyPolyhedron("fiber fan of the empty polyhedron")
    if route == "direct":
        return _fiber_fan_direct(P, ctx)
    if route == "dual":
        return _fiber_fan_dual(P, ctx)
    if route != "both":
        raise ValueError(f"unknown route {route!r}")
    a = _fiber_fan_direct(P, ctx)
    b = _fiber_fan_dual(P, ctx)
    cmp = fan_equal(a, b)
    if not cmp:
        raise RouteMismatch("direct and dual fiber fans differ", a, b)
    return a


def chow_fan(P: Polyhedron, ctx: ProjectionContext) -> Fan:
    """Fan of the normalized toric Chow quotient (the fiber fan)."""
    return fiber_fan(P, ctx, "both")


def dual_data(P: Polyhedron, ctx: ProjectionContext, lifted: Optional[bool] = None):
    """``(P', ctx')`` for the dual quotient problem.

    For cones (unless ``lifted=True``) ``P' = P^vee`` with the map ``pi_vee``;
    otherwise ``P'`` is the dual of the homogenization with ``tilde_pi_vee``.
    The map of ``ctx'`` is written in a Z-basis of its image lattice and its
    kernel coordinates are those of the rows of ``pi`` (resp. ``tilde_pi``),
    which identifies fans of ``ctx'`` with fans in ``Q^d`` (resp. ``Q^d + Q``).
    """
    if P.is_empty:
        raise EmptyPolyhedron("dual data of the empty polyhedron")
    if lifted is None:
        lifted = not P.is_cone
    if lifted:
        Pp = dual_cone(homogenize(P))
        M = ctx.tilde_pi_vee
        kernel = ctx.tilde_pi
        n = ctx.n + 1
    else:
        if not P.is_cone:
            raise NotACone("the unlifted dual needs a cone")
        Pp = dual_cone(P)
        M = ctx.pi_vee
        kernel = ctx.pi_Z
        n = ctx.n
    basis = exact.integer_image_basis(M, n)
    B = transpose(basis, len(basis))
    Minv = exact.inverse(B)
    Mp = exact.zmat(exact.mat_mul(Minv, M, n))
    return Pp, make_context(Mp, kernel_basis=[tuple(r) for r in kernel], n=n)


# --------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    claim: str
    instances: int = 0
    status: str = "pass"
    witness: Optional[dict] = None
    checks: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, witness: dict):
        if self.status == "pass":
            self.status = "fail"
            self.witness = witness

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.instances += other.instances
        self.checks += other.checks
        if not other.passed:
            self.fail(other.witness)
        return self

    def as_dict(self) -> dict:
        return {"claim": self.claim, "instances": self.instances, "checks": self.checks,
                "status": self.status, "witness": self.witness}


def _poly_dict(P: Polyhedron) -> dict:
    from .cli_io import polyhedron_to_dict
    return polyhedron_to_dict(P)


def _ctx_dict(ctx: ProjectionContext) -> list:
    return [list(r) for r in ctx.pi_Z]


def _rand_point(rng: random.Random, P: Polyhedron, hi: int = 3) -> tuple:
    x = list(P.vertices[rng.randrange(len(P.vertices))])
    gens = list(P.rays) + list(P.lineality) + [tuple(-c for c in l) for l in P.lineality]
    for g in gens:
        c = rng.randint(0, hi)
        if c:
            x = [a + c * b for a, b in zip(x, g)]
    return tuple(x)


def sample_pairs(C: Polyhedron, Cd: Polyhedron, ctx: ProjectionContext, samples: int, seed: int):
    """Deterministic ``(v, w)`` pairs: extreme-ray images first, then random ones."""
    rng = random.Random(seed)
    vs = [ctx.project(r) for r in C.rays] + [ctx.project(C.vertices[0])]
    ws = [mat_vec(ctx.pi_vee, r) for r in Cd.rays] + [mat_vec(ctx.pi_vee, Cd.vertices[0])]
    pairs = []
    for i in range(max(len(vs), len(ws))):
        if len(pairs) >= samples:
            break
        v = vs[i] if i < len(vs) else ctx.project(_rand_point(rng, C))
        w = ws[i] if i < len(ws) else mat_vec(ctx.pi_vee, _rand_point(rng, Cd))
        pairs.append((v, w))
    while len(pairs) < samples:
        pairs.append((ctx.project(_rand_point(rng, C)), mat_vec(ctx.pi_vee, _rand_point(rng, Cd))))
    return pairs


def verify_fiber_duality(C: Polyhedron, ctx: ProjectionContext, samples: int = 25, seed: int = 0,
                         rhs: Optional[Callable] = None) -> VerificationReport:
    """Check ``N_C(tilde_face_w(C_v)) = tilde_face_v(C^vee_w)`` on sampled pairs.

    Each pair also checks the face characterization: a face ``F`` of ``C`` is
    ``tilde_face_w(C_v)`` iff ``v`` is in ``pi(relint F)`` and ``w`` is in
    ``pi_vee(relint N_C(F))``.  ``rhs`` replaces the right-hand side
    computation (used for negative controls).
    """
    report = VerificationReport("fiber_duality", instances=1)
    if not C.is_cone:
        raise NotACone("fiber duality is stated for cones")
    Cd = dual_cone(C)
    dctx = ctx.dual()
    faces = C.faces()
    normals = {F.active: face_of(Cd, normal_cone(C, F)) for F in faces}
    for v, w in sample_pairs(C, Cd, ctx, samples, seed):
        F = tilde_face(C, ctx, v, w)
        lhs = normal_cone(C, F)
        if rhs is None:
            right = tilde_face(Cd, dctx, w, v).polyhedron
        else:
            right = rhs(C, ctx, v, w)
        report.checks += 1
        if lhs.key != right.key:
            report.fail({"C": _poly_dict(C), "projection": _ctx_dict(ctx), "v": [str(x) for x in v],
                         "w": [str(x) for x in w], "lhs": _poly_dict(lhs), "rhs": _poly_dict(right)})
            continue
        for G in faces:
            predicted = (in_relint_image(C, G, ctx, v)
                         and in_relint_image(Cd, normals[G.active], dctx, w))
            report.checks += 1
            if predicted != (G.active == F.active):
                report.fail({"C": _poly_dict(C), "projection": _ctx_dict(ctx), "v": [str(x) for x in v],
                             "w": [str(x) for x in w], "face": sorted(G.active),
                             "claim": "face characterization"})
    return report


def _fan_witness(P, ctx, cmp, **extra) -> dict:
    from .cli_io import polyhedron_to_dict
    d = {"P": polyhedron_to_dict(P), "projection": _ctx_dict(ctx), "side": cmp.side,
         "cone": polyhedron_to_dict(cmp.witness) if cmp.witness is not None else None}
    d.update(extra)
    return d


def verify_main_theorem(P: Polyhedron, ctx: ProjectionContext) -> VerificationReport:
    """Cone over the chamber complex equals the Chow fan of the dual data."""
    report = VerificationReport("main", instances=1, checks=1)
    lhs = cone_over_complex(git_chamber_complex(P, ctx))
    Pp, ctxp = dual_data(P, ctx, lifted=True)
    try:
        rhs = chow_fan(Pp, ctxp)
    except RouteMismatch as exc:
        report.fail({"P": _poly_dict(P), "projection": _ctx_dict(ctx), "error": str(exc)})
        return report
    cmp = fan_equal(lhs, rhs)
    if not cmp:
        report.fail(_fan_witness(P, ctx, cmp))
    return report


def verify_affine_duality(P: Polyhedron, ctx: ProjectionContext) -> VerificationReport:
    """Both parts of affine duality for a cone ``P``."""
    if not P.is_cone:
        raise NotACone("affine duality is stated for cones")
    report = VerificationReport("affine", instances=1, checks=2)
    try:
        part1_lhs = chow_fan(P, ctx)
        part1_rhs = induced_fan(ctx.pi_vee, [dual_cone(P)], ctx.k)
        cmp = fan_equal(part1_lhs, part1_rhs)
        if not cmp:
            report.fail(_fan_witness(P, ctx, cmp, part="i"))
            return report
        chambers = git_chamber_complex(P, ctx).as_fan()
        Pp, ctxp = dual_data(P, ctx, lifted=False)
        cmp = fan_equal(chambers, chow_fan(Pp, ctxp))
        if not cmp:
            report.fail(_fan_witness(P, ctx, cmp, part="ii"))
    except RouteMismatch as exc:
        report.fail({"P": _poly_dict(P), "projection": _ctx_dict(ctx), "error": str(exc)})
    return report
