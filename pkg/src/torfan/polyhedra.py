"""Rational polyhedra with certified dual descriptions.

A :class:`Polyhedron` always carries both descriptions:

* ``A x >= b`` (irredundant facets) together with ``E x = e`` (a canonical
  basis of the equations of the affine hull), and
* ``conv(vertices) + cone(rays) + span(lineality)``.

Everything is produced by one exact double-description engine working on
the homogenization ``{(x, lam) : A x - lam b >= 0, lam >= 0}`` with integer
rows.  When lineality is present, vertices and rays are the orthogonal
projections onto the complement of the lineality space, which makes the
generator lists canonical; :attr:`Polyhedron.key` compares point sets.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import exact
from .errors import EmptyPolyhedron, FiberEmpty, NotACone, PointOutside, UnboundedDirection
from .exact import Projector, dot, frac, primitive, qvec, rank, to_integer_vector


# --------------------------------------------------------------------------
# double description


def _dd(dim: int, rows: Sequence[Sequence[int]], lin=None, rays=None, known: Sequence[Sequence[int]] = ()):
    """Add the constraints ``a . x >= 0`` for ``a`` in ``rows``.

    Starts from the cone ``span(lin) + cone(rays)`` which must be exactly the
    solution set of ``known`` with ``rays`` extreme; by default the whole
    space.  Returns ``(lin, rays)`` as integer vectors.
    """
    if lin is None:
        lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        rays = []
        known = ()
    lin = list(lin)
    rays = list(rays)
    masks = []
    for r in rays:
        m = 0
        for k, a in enumerate(known):
            if dot(a, r) == 0:
                m |= 1 << k
        masks.append(m)
    nrow = len(known)

    for a in rows:
        if not any(a):
            continue
        bit = 1 << nrow
        nrow += 1
        vals = [dot(a, l) for l in lin]
        piv = next((i for i, v in enumerate(vals) if v), None)
        if piv is not None:
            l0 = lin[piv]
            s = vals[piv]
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            new_lin = []
            for i, l in enumerate(lin):
                if i == piv:
                    continue
                v = vals[i]
                if v:
                    l = primitive([s * x - v * y for x, y in zip(l, l0)])
                new_lin.append(l)
            new_rays = []
            for r, m in zip(rays, masks):
                v = dot(a, r)
                if v:
                    r = primitive([s * x - v * y for x, y in zip(r, l0)])
                new_rays.append(r)
            masks = [m | bit for m in masks]
            new_rays.append(l0)
            masks.append(bit - 1)
            lin, rays = new_lin, new_rays
            continue

        vals = [dot(a, r) for r in rays]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        need = dim - len(lin) - 2
        out_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        out_masks = [masks[i] for i in pos] + [masks[i] | bit for i in zero]
        for p in pos:
            mp = masks[p]
            for q in neg:
                z = mp & masks[q]
                if z.bit_count() < need:
                    continue
                adjacent = True
                for k, mk in enumerate(masks):
                    if k != p and k != q and mk & z == z:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                r = primitive([vp * y - vq * x for x, y in zip(rays[p], rays[q])])
                out_rays.append(r)
                out_masks.append(z | bit)
        rays, masks = out_rays, out_masks
    return lin, rays


def _homog_point(v: Sequence[Fraction]) -> tuple[int, ...]:
    return to_integer_vector(tuple(v) + (Fraction(1),))


# --------------------------------------------------------------------------
# polyhedra


class Polyhedron:
    """Immutable rational polyhedron in Q^n with both descriptions."""

    __slots__ = ("n", "A", "b", "E", "e", "vertices", "rays", "lineality",
                 "vertex_incidence", "ray_incidence", "dim", "__dict__")

    def __init__(self, n, A, b, E, e, vertices, rays, lineality, vinc, rinc, dim):
        self.n = n
        self.A = A
        self.b = b
        self.E = E
        self.e = e
        self.vertices = vertices
        self.rays = rays
        self.lineality = lineality
        self.vertex_incidence = vinc
        self.ray_incidence = rinc
        self.dim = dim

    # -- construction ---------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Polyhedron":
        return cls(n, (), (), (tuple([0] * n),), (1,), (), (), (), (), (), -1)

    @classmethod
    def from_h(cls, A: Sequence[Sequence], b: Sequence, E: Sequence[Sequence] = (), e: Sequence = (),
               n: Optional[int] = None) -> "Polyhedron":
        """The polyhedron ``{x : A x >= b, E x = e}``."""
        if n is None:
            n = len(A[0]) if A else len(E[0])
        rows = [_homog_row(a, bi) for a, bi in zip(A, b)]
        eqs = [_homog_row(a, bi) for a, bi in zip(E, e)]
        for h in rows + eqs:
            if len(h) != n + 1:
                raise ValueError("row length does not match ambient dimension")
        lam = tuple([0] * n + [1])
        cone_rows = rows + [lam] + eqs + [tuple(-x for x in h) for h in eqs]
        lin, rays = _dd(n + 1, cone_rows)
        return _finish(n, lin, rays, rows + eqs)

    @classmethod
    def from_v(cls, vertices: Sequence[Sequence] = (), rays: Sequence[Sequence] = (),
               lineality: Sequence[Sequence] = (), n: Optional[int] = None) -> "Polyhedron":
        """``conv(vertices) + cone(rays) + span(lineality)``."""
        if n is None:
            for group in (vertices, rays, lineality):
                if group:
                    n = len(group[0])
                    break
            else:
                raise ValueError("ambient dimension required")
        if not vertices:
            return cls.empty(n)
        gens = [_homog_point(qvec(v)) for v in vertices]
        gens += [to_integer_vector(tuple(r) + (0,)) for r in rays]
        lin_in = [to_integer_vector(tuple(l) + (0,)) for l in lineality]
        gens = [g for g in gens if any(g)]
        lin_in = [l for l in lin_in if any(l)]
        # H-description of cone(gens) + span(lin_in) from its dual cone
        dual_rows = list(dict.fromkeys(gens)) + lin_in + [tuple(-x for x in l) for l in lin_in]
        dlin, drays = _dd(n + 1, dual_rows)
        cone_lin = exact.int_nullspace(list(drays) + list(dlin), n + 1)
        ldim = len(cone_lin)
        proj = Projector(cone_lin, n + 1)
        target = n + 1 - ldim - 1
        extreme = {}
        for g in gens:
            pg = proj.direction(g)
            if not any(pg):
                continue
            tight = [h for h in drays if dot(h, g) == 0]
            if rank(tight + list(dlin)) == target:
                extreme[pg] = True
        candidates = list(drays) + list(dlin)
        return _finish(n, cone_lin, list(extreme), candidates)

    # -- basic queries --------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.dim < 0

    @property
    def is_cone(self) -> bool:
        return not self.is_empty and len(self.vertices) == 1 and not any(self.vertices[0])

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.n

    @cached_property
    def key(self):
        return (self.n, self.lineality, self.vertices, self.rays)

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.is_empty:
            return f"Polyhedron(empty in Q^{self.n})"
        return (f"Polyhedron(n={self.n}, dim={self.dim}, vertices={len(self.vertices)}, "
                f"rays={len(self.rays)}, lineality={len(self.lineality)}, facets={len(self.A)})")

    @cached_property
    def vh(self) -> tuple:
        """Vertices as integer vectors ``(den * v, den)``."""
        return tuple(exact.homogeneous(v) for v in self.vertices)

    def homog_rows(self) -> list[tuple[int, ...]]:
        """Inequalities of the homogenization, excluding ``lam >= 0``."""
        return [tuple(a) + (-bi,) for a, bi in zip(self.A, self.b)]

    def homog_eqs(self) -> list[tuple[int, ...]]:
        return [tuple(a) + (-ei,) for a, ei in zip(self.E, self.e)]

    def contains(self, x: Sequence) -> bool:
        if self.is_empty:
            return False
        return self._contains_h(exact.homogeneous(x))

    def _contains_h(self, xh) -> bool:
        den = xh[-1]
        return (all(dot(a, xh) >= bi * den for a, bi in zip(self.A, self.b))
                and all(dot(a, xh) == ei * den for a, ei in zip(self.E, self.e)))

    def tight_set(self, x: Sequence) -> frozenset:
        xh = exact.homogeneous(x)
        den = xh[-1]
        return frozenset(i for i, (a, bi) in enumerate(zip(self.A, self.b)) if dot(a, xh) == bi * den)

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        for vh in other.vh:
            if not self._contains_h(vh):
                return False
        for r in other.rays:
            if any(dot(a, r) < 0 for a in self.A) or any(dot(a, r) != 0 for a in self.E):
                return False
        for l in other.lineality:
            if any(dot(a, l) != 0 for a in self.A) or any(dot(a, l) != 0 for a in self.E):
                return False
        return True

    def add_constraints(self, A: Sequence[Sequence] = (), b: Sequence = (),
                        E: Sequence[Sequence] = (), e: Sequence = ()) -> "Polyhedron":
        """Intersect with further half-spaces/hyperplanes (incremental)."""
        if self.is_empty:
            return self
        rows = [_homog_row(a, bi) for a, bi in zip(A, b)]
        eqs = [_homog_row(a, bi) for a, bi in zip(E, e)]
        new = rows + eqs + [tuple(-x for x in h) for h in eqs]
        n = self.n
        lam = tuple([0] * n + [1])
        own_rows = self.homog_rows()
        own_eqs = self.homog_eqs()
        known = own_rows + [lam] + own_eqs + [tuple(-x for x in h) for h in own_eqs]
        lin = [tuple(l) + (0,) for l in self.lineality]
        gens = [_homog_point(v) for v in self.vertices] + [tuple(r) + (0,) for r in self.rays]
        lin, rays = _dd(n + 1, new, lin, gens, known)
        return _finish(n, lin, rays, own_rows + own_eqs + rows + eqs)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if other.is_empty:
            return other
        return self.add_constraints(other.A, other.b, other.E, other.e)

    def generators_homog(self) -> list[tuple]:
        return ([tuple(v) + (Fraction(1),) for v in self.vertices]
                + [tuple(Fraction(x) for x in r) + (Fraction(0),) for r in self.rays]
                + [tuple(Fraction(x) for x in l) + (Fraction(0),) for l in self.lineality])

    # -- faces ------------------------------------------------------------

    def face_generators(self, active: Iterable[int]):
        active = frozenset(active)
        verts = [i for i, inc in enumerate(self.vertex_incidence) if active <= inc]
        rays = [i for i, inc in enumerate(self.ray_incidence) if active <= inc]
        return verts, rays

    def closure(self, active: Iterable[int]) -> Optional[frozenset]:
        """Full tight set of the face cut out by ``active``; None if empty."""
        verts, rays = self.face_generators(active)
        if not verts:
            return None
        sets = [self.vertex_incidence[i] for i in verts] + [self.ray_incidence[i] for i in rays]
        out = sets[0]
        for s in sets[1:]:
            out = out & s
        return out

    def face_polyhedron(self, active: Iterable[int]) -> "Polyhedron":
        active = frozenset(active)
        if not active:
            return self
        verts, rays = self.face_generators(active)
        if not verts:
            return Polyhedron.empty(self.n)
        n = self.n
        lin = [tuple(l) + (0,) for l in self.lineality]
        gens = [_homog_point(self.vertices[i]) for i in verts] + [tuple(self.rays[i]) + (0,) for i in rays]
        rows = self.homog_rows()
        eqs = self.homog_eqs() + [rows[i] for i in sorted(active)]
        cand = [rows[i] for i in range(len(rows)) if i not in active] + eqs
        return _finish(n, lin, gens, cand)

    def faces(self) -> list["Face"]:
        """All nonempty faces, ordered by (codimension, active set)."""
        if self.is_empty:
            return []
        start = frozenset()
        seen = {start}
        queue = [start]
        nf = len(self.A)
        while queue:
            A = queue.pop()
            for i in range(nf):
                if i in A:
                    continue
                c = self.closure(A | {i})
                if c is not None and c not in seen:
                    seen.add(c)
                    queue.append(c)
        order = sorted(seen, key=lambda s: (len(s), sorted(s)))
        return [Face(self, s) for s in order]

    def minimal_faces(self) -> list["Face"]:
        return [Face(self, self.vertex_incidence[i]) for i in range(len(self.vertices))]


class Face:
    """A nonempty face, stored as its full tight set of facet indices."""

    __slots__ = ("parent", "active", "__dict__")

    def __init__(self, parent: Polyhedron, active: Iterable[int]):
        self.parent = parent
        self.active = frozenset(active)

    def __eq__(self, other):
        return isinstance(other, Face) and self.parent.key == other.parent.key and self.active == other.active

    def __hash__(self):
        return hash((self.parent.key, self.active))

    def __repr__(self):
        return f"Face(active={sorted(self.active)}, dim={self.polyhedron.dim})"

    @cached_property
    def polyhedron(self) -> Polyhedron:
        return self.parent.face_polyhedron(self.active)


def _homog_row(a: Sequence, b) -> tuple[int, ...]:
    return to_integer_vector(tuple(a) + (-frac(b),))


def _finish(n: int, cone_lin, cone_rays, candidates) -> Polyhedron:
    """Canonical Polyhedron from the extreme data of its homogenization.

    ``cone_rays`` must contain every extreme ray of the homogenized cone
    (modulo lineality) and ``candidates`` every facet-defining row.
    """
    for l in cone_lin:
        if l[n] != 0:
            raise AssertionError("lineality of a homogenization must lie at height 0")
    lineality = tuple(exact.saturated_basis([l[:n] for l in cone_lin], n))
    proj = Projector(lineality, n)
    verts = set()
    rays = set()
    for r in cone_rays:
        lam = r[n]
        if lam > 0:
            verts.add(proj(r[:n], lam))
        elif lam == 0:
            p = proj.direction(r[:n])
            if any(p):
                rays.add(p)
        else:
            raise AssertionError("negative height in homogenization")
    if not verts:
        return Polyhedron.empty(n)
    vertices = tuple(sorted(verts))
    rays = tuple(sorted(rays))

    gens = [tuple(v) + (Fraction(1),) for v in vertices] + [tuple(r) + (0,) for r in rays]
    gens += [tuple(l) + (0,) for l in lineality]
    gens_int = [to_integer_vector(g) for g in gens]
    dim = rank(gens_int) - 1

    eq_rows = exact.integer_kernel_basis(gens_int, n + 1)
    E = tuple(tuple(h[:n]) for h in eq_rows)
    e = tuple(-h[n] for h in eq_rows)

    # A valid row is facet-defining iff its set of tight generators is
    # inclusion-maximal among proper faces; the candidates contain all facets.
    eproj = Projector(E, n) if E else None
    x0 = vertices[0]
    nv = len(vertices)
    full = (1 << (nv + len(rays))) - 1
    tight = {}
    for h in candidates:
        m = 0
        for i in range(nv):
            if dot(h, gens_int[i]) == 0:
                m |= 1 << i
        if not m:
            continue
        for j, r in enumerate(rays):
            if dot(h, r) == 0:
                m |= 1 << (nv + j)
        if m != full and m not in tight:
            tight[m] = h
    masks = list(tight)
    facets = {}
    for m in masks:
        if any(o != m and o & m == m for o in masks):
            continue
        h = tight[m]
        a, mb = h[:n], h[n]
        if eproj is not None:
            a2 = eproj(a)
            b2 = dot(a2, x0) - (dot(a, x0) + mb)
            row = to_integer_vector(tuple(a2) + (-b2,))
        else:
            row = tuple(h)
        facets[m] = row
    rows = sorted(set(facets.values()))
    A = tuple(tuple(r[:n]) for r in rows)
    b = tuple(-r[n] for r in rows)
    vinc = tuple(frozenset(i for i, r in enumerate(rows) if dot(r, gens_int[k]) == 0) for k in range(nv))
    rinc = tuple(frozenset(i for i, row in enumerate(rows) if dot(row[:n], r) == 0) for r in rays)
    return Polyhedron(n, A, b, E, e, vertices, rays, lineality, vinc, rinc, dim)


# --------------------------------------------------------------------------
# operations


def h_to_v(A, b, E=(), e=(), n=None) -> Polyhedron:
    return Polyhedron.from_h(A, b, E, e, n)


def v_to_h(vertices=(), rays=(), lineality=(), n=None) -> Polyhedron:
    return Polyhedron.from_v(vertices, rays, lineality, n)


def cone(rays=(), lineality=(), n=None) -> Polyhedron:
    if n is None:
        n = len(rays[0]) if rays else len(lineality[0])
    return Polyhedron.from_v([[0] * n], rays, lineality, n)


def whole_space(n: int) -> Polyhedron:
    return Polyhedron.from_h([], [], n=n)


def dual_cone(C: Polyhedron) -> Polyhedron:
    """``{y : y . x >= 0 for all x in C}``."""
    if not C.is_cone:
        raise NotACone("dual_cone needs a cone with apex at the origin")
    return Polyhedron.from_h(C.rays, [0] * len(C.rays), C.lineality, [0] * len(C.lineality), n=C.n)


def recession_cone(P: Polyhedron) -> Polyhedron:
    if P.is_empty:
        raise EmptyPolyhedron("recession cone of the empty polyhedron")
    return Polyhedron.from_h(P.A, [0] * len(P.A), P.E, [0] * len(P.E), n=P.n)


def homogenize(P: Polyhedron) -> Polyhedron:
    """Closed cone over ``P x {1}`` in ``Q^n + Q``."""
    if P.is_empty:
        raise EmptyPolyhedron("homogenization of the empty polyhedron is undefined")
    n = P.n
    A = [tuple(a) + (-bi,) for a, bi in zip(P.A, P.b)] + [tuple([0] * n + [1])]
    E = [tuple(a) + (-ei,) for a, ei in zip(P.E, P.e)]
    return Polyhedron.from_h(A, [0] * len(A), E, [0] * len(E), n=n + 1)


def slice_at_height(Ptilde: Polyhedron, height) -> Polyhedron:
    """``{x : (x, height) in Ptilde}``."""
    n = Ptilde.n - 1
    height = frac(height)
    A = [a[:n] for a in Ptilde.A]
    b = [bi - a[n] * height for a, bi in zip(Ptilde.A, Ptilde.b)]
    E = [a[:n] for a in Ptilde.E]
    e = [ei - a[n] * height for a, ei in zip(Ptilde.E, Ptilde.e)]
    return Polyhedron.from_h(A, b, E, e, n=n)


def image(P: Polyhedron, M: Sequence[Sequence]) -> Polyhedron:
    """Image of ``P`` under the linear map with matrix ``M`` (d x n)."""
    d = len(M)
    if P.is_empty:
        return Polyhedron.empty(d)
    verts = [exact.mat_vec(M, v) for v in P.vertices]
    rays = [exact.mat_vec(M, r) for r in P.rays]
    lin = [exact.mat_vec(M, l) for l in P.lineality]
    return Polyhedron.from_v(verts, rays, lin, n=d)


def affine_slice(P: Polyhedron, origin: Sequence, directions: Sequence[Sequence]) -> Polyhedron:
    """``{t : origin + sum_j t_j directions[j] in P}`` in Q^k."""
    k = len(directions)
    origin = qvec(origin)
    if P.is_empty:
        return Polyhedron.empty(k)
    A = [tuple(dot(a, dvec) for dvec in directions) for a in P.A]
    b = [bi - dot(a, origin) for a, bi in zip(P.A, P.b)]
    E = [tuple(dot(a, dvec) for dvec in directions) for a in P.E]
    e = [ei - dot(a, origin) for a, ei in zip(P.E, P.e)]
    # rows that vanish on the directions are constant feasibility checks
    for row, rhs in zip(A, b):
        if not any(row) and rhs > 0:
            return Polyhedron.empty(k)
    for row, rhs in zip(E, e):
        if not any(row) and rhs != 0:
            return Polyhedron.empty(k)
    keep = [(r, v) for r, v in zip(A, b) if any(r)]
    keep_e = [(r, v) for r, v in zip(E, e) if any(r)]
    return Polyhedron.from_h([r for r, _ in keep], [v for _, v in keep],
                             [r for r, _ in keep_e], [v for _, v in keep_e], n=k)


def face_min(P: Polyhedron, w: Sequence) -> Face:
    """The face of ``P`` on which ``w . x`` is minimal."""
    if P.is_empty:
        raise EmptyPolyhedron("face_min on the empty polyhedron")
    w = qvec(w)
    if any(dot(w, r) < 0 for r in P.rays) or any(dot(w, l) != 0 for l in P.lineality):
        raise UnboundedDirection(f"{tuple(map(str, w))} is unbounded below on the polyhedron")
    vals = [dot(w, v) for v in P.vertices]
    m = min(vals)
    sets = [P.vertex_incidence[i] for i, x in enumerate(vals) if x == m]
    sets += [P.ray_incidence[j] for j, r in enumerate(P.rays) if dot(w, r) == 0]
    active = sets[0]
    for s in sets[1:]:
        active = active & s
    return Face(P, active)


def minimal_face_containing(P: Polyhedron, points: Sequence[Sequence]) -> Face:
    """Smallest face of ``P`` containing every point of ``points``."""
    if P.is_empty:
        raise EmptyPolyhedron("no faces")
    active = frozenset(range(len(P.A)))
    for x in points:
        if not P.contains(x):
            raise PointOutside(f"point {tuple(map(str, qvec(x)))} is not in the polyhedron")
        active = active & P.tight_set(x)
    return Face(P, active)


def relint_point(P: Polyhedron) -> tuple:
    """Average of the vertices plus the sum of the rays; strictly interior."""
    if P.is_empty:
        raise EmptyPolyhedron("empty polyhedron has no relative interior")
    k = len(P.vertices)
    x = [sum((v[i] for v in P.vertices), Fraction(0)) / k for i in range(P.n)]
    for r in P.rays:
        x = [xi + ri for xi, ri in zip(x, r)]
    return tuple(x)


def minkowski_sum(P1: Polyhedron, P2: Polyhedron) -> Polyhedron:
    if P1.is_empty or P2.is_empty:
        raise EmptyPolyhedron("Minkowski sum with the empty polyhedron")
    if P1.n != P2.n:
        raise ValueError("ambient dimensions differ")
    verts = [exact.vec_add(u, v) for u in P1.vertices for v in P2.vertices]
    return Polyhedron.from_v(verts, list(P1.rays) + list(P2.rays),
                             list(P1.lineality) + list(P2.lineality), n=P1.n)


def fiber_slice(P: Polyhedron, ctx, q: Sequence) -> Polyhedron:
    """The fiber over ``q`` in kernel coordinates of ``ctx``."""
    q = qvec(q)
    origin = exact.mat_vec(ctx.section, q) if ctx.d else (Fraction(0),) * ctx.n
    Pq = affine_slice(P, origin, ctx.kernel_basis)
    if Pq.is_empty:
        raise FiberEmpty(f"{tuple(map(str, q))} is not in the image")
    return Pq


def tilde_face(P: Polyhedron, ctx, q: Sequence, w: Sequence) -> Face:
    """Smallest face of ``P`` containing the lift of ``face_w(P_q)``."""
    Pq = fiber_slice(P, ctx, q)
    F = face_min(Pq, w)
    x = ctx.lift(relint_point(F.polyhedron), q)
    return minimal_face_containing(P, [x])
