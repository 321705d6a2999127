"""Fans and polyhedral complexes, stored by their maximal cells."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

from . import exact
from .errors import SupportMismatch
from .exact import dot, rank, to_integer_vector
from .polyhedra import Face, Polyhedron, cone, homogenize, image, minimal_face_containing, relint_point


def _maximal_only(cells: Iterable[Polyhedron]) -> list[Polyhedron]:
    uniq = {}
    for c in cells:
        if not c.is_empty:
            uniq.setdefault(c.key, c)
    cells = sorted(uniq.values(), key=lambda c: (-c.dim, c.key))
    keep = []
    for c in cells:
        if any(k.dim > c.dim and k.contains_polyhedron(c) for k in keep):
            continue
        keep.append(c)
    return sorted(keep, key=lambda c: c.key)


class PolyhedralComplex:
    """Finite polyhedral complex given by its inclusion-maximal cells."""

    def __init__(self, n: int, cells: Iterable[Polyhedron]):
        self.n = n
        self.maximal_cells = tuple(_maximal_only(cells))

    def __len__(self):
        return len(self.maximal_cells)

    def __iter__(self):
        return iter(self.maximal_cells)

    def __repr__(self):
        return f"PolyhedralComplex(n={self.n}, maximal_cells={len(self)})"

    @cached_property
    def key(self):
        return (self.n, tuple(c.key for c in self.maximal_cells))

    def __eq__(self, other):
        return isinstance(other, PolyhedralComplex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def cells(self) -> list[Polyhedron]:
        """All cells, including lower-dimensional faces."""
        out = {}
        for c in self.maximal_cells:
            for f in c.faces():
                p = f.polyhedron
                out.setdefault(p.key, p)
        return sorted(out.values(), key=lambda c: (c.dim, c.key))

    @property
    def is_fan(self) -> bool:
        return all(c.is_cone for c in self.maximal_cells)

    def as_fan(self) -> "Fan":
        if not self.is_fan:
            raise ValueError("complex has cells that are not cones")
        return Fan(self.n, self.maximal_cells)


class Fan(PolyhedralComplex):
    """Polyhedral fan given by its maximal cones."""

    def __init__(self, n: int, cones: Iterable[Polyhedron]):
        super().__init__(n, cones)
        for c in self.maximal_cells:
            if not c.is_cone:
                raise ValueError("fan cells must be cones")
            if c.n != n:
                raise ValueError("cone in the wrong ambient space")

    def __repr__(self):
        return f"Fan(n={self.n}, maximal_cones={len(self)})"

    @property
    def maximal_cones(self) -> tuple[Polyhedron, ...]:
        return self.maximal_cells

    @property
    def lineality(self) -> tuple:
        if not self.maximal_cells:
            return ()
        return self.maximal_cells[0].lineality

    @cached_property
    def support(self) -> Polyhedron:
        """Convex hull of the support (equal to it for the convex supports used here)."""
        rays = sorted({r for c in self.maximal_cells for r in c.rays})
        lin = sorted({l for c in self.maximal_cells for l in c.lineality})
        if not self.maximal_cells:
            return Polyhedron.empty(self.n)
        return cone(rays, lin, n=self.n)

    def transform(self, M: Sequence[Sequence]) -> "Fan":
        """Image under an invertible linear map."""
        return Fan(len(M), [image(c, M) for c in self.maximal_cells])

    def refines(self, other: "Fan") -> bool:
        return all(any(t.contains_polyhedron(s) for t in other.maximal_cells) for s in self.maximal_cells)

    def cone_containing(self, y: Sequence) -> Optional[Polyhedron]:
        for c in self.maximal_cells:
            if c.contains(y):
                return c
        return None


class FanComparison(NamedTuple):
    equal: bool
    witness: Optional[Polyhedron] = None
    side: Optional[str] = None

    def __bool__(self):
        return self.equal


def fan_equal(F1: PolyhedralComplex, F2: PolyhedralComplex) -> FanComparison:
    """Exact equality of the sets of maximal cells, with a witness cell on failure."""
    if F1.n != F2.n:
        raise ValueError("fans live in different ambient spaces")
    k1 = {c.key: c for c in F1.maximal_cells}
    k2 = {c.key: c for c in F2.maximal_cells}
    for k, c in k1.items():
        if k not in k2:
            return FanComparison(False, c, "first")
    for k, c in k2.items():
        if k not in k1:
            return FanComparison(False, c, "second")
    return FanComparison(True)


# --------------------------------------------------------------------------
# normal fans


def normal_cone(P: Polyhedron, F: Face) -> Polyhedron:
    """Closed inner normal cone of the face ``F``."""
    rows = [P.A[i] for i in sorted(F.active)]
    return cone(rows, list(P.E), n=P.n)


def normal_fan(P: Polyhedron) -> Fan:
    if P.is_empty:
        from .errors import EmptyPolyhedron
        raise EmptyPolyhedron("normal fan of the empty polyhedron")
    return Fan(P.n, [normal_cone(P, F) for F in P.minimal_faces()])


# --------------------------------------------------------------------------
# refinements


def _outside(c: Polyhedron, a, b) -> bool:
    """``c`` lies in the closed half-space ``a . x <= b``."""
    return (all(dot(a, v) <= b * v[-1] for v in c.vh) and all(dot(a, r) <= 0 for r in c.rays)
            and all(dot(a, l) == 0 for l in c.lineality))


def _inside(c: Polyhedron, a, b) -> bool:
    return (all(dot(a, v) >= b * v[-1] for v in c.vh) and all(dot(a, r) >= 0 for r in c.rays)
            and all(dot(a, l) == 0 for l in c.lineality))


def _separated(c: Polyhedron, t: Polyhedron) -> bool:
    return any(_outside(c, a, bi) for a, bi in zip(t.A, t.b))


def _intersection_if_full(s: Polyhedron, t: Polyhedron, dim: int) -> Optional[Polyhedron]:
    if t.contains_polyhedron(s):
        return s
    if s.contains_polyhedron(t):
        return t if t.dim == dim else None
    if _separated(s, t) or _separated(t, s):
        return None
    i = s.intersect(t)
    return i if i.dim == dim else None


def common_refinement(fans: Sequence[PolyhedralComplex]) -> PolyhedralComplex:
    """Common refinement of fans (or complexes) with one common support."""
    fans = list(fans)
    if not fans:
        raise ValueError("need at least one fan")
    first = fans[0]
    support = _support(first)
    for F in fans[1:]:
        if isinstance(F, Fan) and isinstance(first, Fan):
            witness = _fan_support_witness(support, F)
            if witness is not None:
                raise SupportMismatch("fans have different supports", witness)
            continue
        other = _support(F)
        if other.key != support.key:
            raise SupportMismatch("fans have different supports", _support_witness(support, other))
    cells = overlay([c for F in fans for c in F.maximal_cells], support)
    if isinstance(first, Fan):
        return Fan(first.n, cells)
    return PolyhedralComplex(first.n, cells)


def refine_pairwise(fans: Sequence[PolyhedralComplex]) -> list[Polyhedron]:
    """Slow reference refinement: intersect maximal cells pairwise, fan by fan."""
    fans = list(fans)
    dim = _support(fans[0]).dim
    cells = list(fans[0].maximal_cells)
    for F in fans[1:]:
        out = {}
        for s in cells:
            for t in F.maximal_cells:
                i = _intersection_if_full(s, t, dim)
                if i is not None:
                    out.setdefault(i.key, i)
        cells = list(out.values())
    return cells


def _support(K: PolyhedralComplex) -> Polyhedron:
    if isinstance(K, Fan):
        return K.support
    verts = [v for c in K.maximal_cells for v in c.vertices]
    rays = [r for c in K.maximal_cells for r in c.rays]
    lin = [l for c in K.maximal_cells for l in c.lineality]
    return Polyhedron.from_v(verts, rays, lin, n=K.n)


def _fan_support_witness(support: Polyhedron, F: Fan):
    """A vector in exactly one of ``support`` and conv(|F|), or None.

    Both are cones, so comparing generators suffices: every generator of F
    must lie in ``support`` and every generator of ``support`` in some cone of F.
    """
    for c in F.maximal_cells:
        for g in list(c.rays) + list(c.lineality) + [tuple(-x for x in l) for l in c.lineality]:
            if not support.contains(g):
                return g
    for g in list(support.rays) + list(support.lineality) + [tuple(-x for x in l) for l in support.lineality]:
        if F.cone_containing(g) is None:
            return g
    return None


def _support_witness(s1: Polyhedron, s2: Polyhedron):
    for big, small in ((s1, s2), (s2, s1)):
        for v in big.vertices:
            if not small.contains(v):
                return v
        for r in list(big.rays) + list(big.lineality):
            x = exact.vec_add(big.vertices[0], r)
            if not small.contains(x):
                return x
        for l in big.lineality:
            x = exact.vec_sub(big.vertices[0], l)
            if not small.contains(x):
                return x
    return None


def _members(cells, y, side) -> list[int]:
    """Indices of cells containing the point ``y + eps * side`` for small eps > 0.

    ``side(g)`` decides a constraint ``g`` that is tight at ``y``; it returns
    True when the perturbed point stays on the feasible side.
    """
    yh = exact.homogeneous(y)
    den = yh[-1]
    out = []
    for i, t in enumerate(cells):
        ok = True
        for a, bi in zip(t.E, t.e):
            if dot(a, yh) != bi * den:
                ok = False
                break
        if not ok:
            continue
        for a, bi in zip(t.A, t.b):
            v = dot(a, yh) - bi * den
            if v < 0 or (v == 0 and not side(a)):
                ok = False
                break
        if ok:
            out.append(i)
    return out


def _lex_side(directions):
    def side(g):
        for u in directions:
            s = dot(g, u)
            if s:
                return s > 0
        return True
    return side


def overlay(cells: Sequence[Polyhedron], support: Polyhedron) -> list[Polyhedron]:
    """Maximal cells of the subdivision of ``support`` induced by ``cells``.

    The cell through a generic point is the intersection of all cells that
    contain it, and only cells of full dimension can contain a generic
    point.  Starting from a lexicographically perturbed interior point, the
    subdivision is explored by crossing facets: just beyond the relative
    interior point ``z`` of a facet with inner normal ``a`` lie exactly the
    cells that contain ``z`` and have every constraint tight at ``z``
    pointing against ``a``.
    """
    dim = support.dim
    if dim < 0:
        return []
    full = {}
    for c in cells:
        if c.dim == dim:
            full.setdefault(c.key, c)
    full = list(full.values())
    if dim == 0 or not full:
        return [support]
    E, e = support.E, support.e
    directions = exact.nullspace(list(E), support.n) if E else [
        tuple(int(i == j) for j in range(support.n)) for i in range(support.n)]

    def build(members):
        A = [a for i in members for a in full[i].A]
        b = [bi for i in members for bi in full[i].b]
        return Polyhedron.from_h(A, b, E, e, n=support.n)

    start = tuple(_members(full, relint_point(support), _lex_side(directions)))
    seen = {start: build(start)}
    queue = [start]
    while queue:
        c = seen[queue.pop()]
        for i, a in enumerate(c.A):
            verts = [c.vertices[k] for k, inc in enumerate(c.vertex_incidence) if i in inc]
            z = [sum((v[j] for v in verts), Fraction(0)) / len(verts) for j in range(c.n)]
            for k, inc in enumerate(c.ray_incidence):
                if i in inc:
                    z = [x + r for x, r in zip(z, c.rays[k])]
            nxt = tuple(_members(full, z, lambda g, a=a: dot(g, a) <= 0))
            if nxt and nxt not in seen:
                seen[nxt] = build(nxt)
                queue.append(nxt)
    out = {}
    for cell in seen.values():
        if cell.dim == dim:
            out.setdefault(cell.key, cell)
    return list(out.values())


def _full_images(P: Polyhedron, M, full_dim: int) -> list[Polyhedron]:
    """Images of the faces of ``P`` that map onto full-dimensional sets
    while none of their proper faces does.

    Over a generic point the cell of the induced subdivision is cut out by
    these images alone, so the remaining faces can be skipped.
    """
    vimg = [exact.mat_vec(M, v) for v in P.vertices]
    rimg = [exact.mat_vec(M, r) for r in P.rays]
    limg = [exact.mat_vec(M, l) for l in P.lineality]
    lin_part = [tuple(l) + (0,) for l in limg]
    full = []
    for F in P.faces():
        vs, rs = P.face_generators(F.active)
        gens = [to_integer_vector(vimg[i] + (1,)) for i in vs] + [rimg[j] + (0,) for j in rs]
        if rank(gens + lin_part) - 1 == full_dim:
            full.append((F.active, vs, rs))
    keep = [f for f in full if not any(g[0] > f[0] for g in full)]
    return [Polyhedron.from_v([vimg[i] for i in vs], [rimg[j] for j in rs], limg, n=len(M))
            for _, vs, rs in keep]


def induced_subdivision(M: Sequence[Sequence], sources: Iterable[Polyhedron], out_dim: int) -> list[Polyhedron]:
    """Maximal cells of the common refinement of ``{M(F)}`` over all faces F of the sources."""
    sources = list(sources)
    verts = [exact.mat_vec(M, v) for P in sources for v in P.vertices]
    rays = [exact.mat_vec(M, r) for P in sources for r in P.rays]
    lin = [exact.mat_vec(M, l) for P in sources for l in P.lineality]
    support = Polyhedron.from_v(verts, rays, lin, n=out_dim)
    images = [c for P in sources for c in _full_images(P, M, support.dim)]
    return overlay(images, support)


def induced_fan(M: Sequence[Sequence], source, out_dim: Optional[int] = None) -> Fan:
    """Fan induced by the images of all cones of ``source`` under ``M``.

    ``source`` is a :class:`Fan` or a list of cones (whose faces are all used).
    """
    if out_dim is None:
        out_dim = len(M)
    cones = source.maximal_cones if isinstance(source, Fan) else list(source)
    return Fan(out_dim, induced_subdivision(M, cones, out_dim))


def cone_over_complex(K: PolyhedralComplex) -> Fan:
    """Fan in ``Q^d + Q`` of cones over the cells placed at height one."""
    return Fan(K.n + 1, [homogenize(c) for c in K.maximal_cells])


def fan_axiom_violations(K: PolyhedralComplex) -> list[tuple[int, int]]:
    """Pairs of maximal cells whose intersection is not a face of both."""
    bad = []
    cells = K.maximal_cells
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            s, t = cells[i], cells[j]
            inter = s.intersect(t)
            if inter.is_empty:
                continue
            y = relint_point(inter)
            for c in (s, t):
                f = minimal_face_containing(c, [y]).polyhedron
                if f.key != inter.key:
                    bad.append((i, j))
                    break
    return bad
