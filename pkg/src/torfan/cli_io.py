"""The ``torfan/1`` JSON schema: documents, parsing and canonical serialization.

Every rational is written as a string, ``"3"`` or ``"-1/3"``; projection
matrices and fan rays are plain JSON integers.  Serialization is canonical
(fixed key order, two-space indent, trailing newline) so equal objects give
byte-identical text.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

from . import exact
from .errors import ParseError, RankError, SchemaError
from .fans import Fan, PolyhedralComplex
from .polyhedra import Polyhedron, cone

SCHEMA = "torfan/1"


def fmt_q(x) -> str:
    x = exact.frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_qvec(v) -> list[str]:
    return [fmt_q(x) for x in v]


def _render(obj, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if all(not isinstance(x, (list, dict)) for x in obj):
            return "[" + ", ".join(json.dumps(x, ensure_ascii=False) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _render(x, level + 1) for x in obj) + "\n" + end + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(obj: dict) -> str:
    """Canonical text: two-space indent, flat lists of scalars kept on one line."""
    return _render(obj, 0) + "\n"


def sha256(data: Union[str, bytes]) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


# --------------------------------------------------------------------------
# low-level field readers with path diagnostics


def _q(x, path: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"{path}: expected a rational string or integer, got {x!r}")
    try:
        return exact.frac(x)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{path}: cannot parse {x!r} as an exact rational") from None


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        q = _q(x, path)
        if q.denominator != 1:
            raise SchemaError(f"{path}: expected an integer, got {x!r}")
        return int(q)
    return x


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(f"{path}: expected a list")
    return x


def _qmatrix(x, path: str, width: int) -> tuple:
    rows = []
    for i, row in enumerate(_list(x, path)):
        row = _list(row, f"{path}[{i}]")
        if len(row) != width:
            raise SchemaError(f"{path}[{i}]: expected {width} entries, got {len(row)}")
        rows.append(tuple(_q(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)))
    return tuple(rows)


def _zmatrix(x, path: str, width: Optional[int]) -> tuple:
    rows = []
    for i, row in enumerate(_list(x, path)):
        row = _list(row, f"{path}[{i}]")
        if width is not None and len(row) != width:
            raise SchemaError(f"{path}[{i}]: expected {width} entries, got {len(row)}")
        rows.append(tuple(_int(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)))
    return tuple(rows)


def _qvector(x, path: str, length: int) -> tuple:
    x = _list(x, path)
    if len(x) != length:
        raise SchemaError(f"{path}: expected {length} entries, got {len(x)}")
    return tuple(_q(v, f"{path}[{i}]") for i, v in enumerate(x))


def _dim(doc: dict, path: str) -> int:
    if "ambient_dim" not in doc:
        raise SchemaError(f"{path}: missing field 'ambient_dim'")
    n = _int(doc["ambient_dim"], f"{path}.ambient_dim")
    if n < 0:
        raise SchemaError(f"{path}.ambient_dim: must be nonnegative")
    return n


def _check_keys(doc: dict, allowed: set, path: str):
    extra = sorted(set(doc) - allowed)
    if extra:
        raise SchemaError(f"{path}: unknown field {extra[0]!r}")


def load_json(text: Union[str, bytes]) -> dict:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError("document: expected a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"schema: expected {SCHEMA!r}, got {doc.get('schema')!r}")
    return doc


# --------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class HRepData:
    """``{x : A x >= b, E x = e}``."""

    A: tuple
    b: tuple
    E: tuple = ()
    e: tuple = ()


@dataclass(frozen=True)
class VRepData:
    vertices: tuple
    rays: tuple = ()
    lineality: tuple = ()


@dataclass(frozen=True)
class InstanceDocument:
    ambient_dim: int
    projection: tuple
    hrep: Optional[HRepData] = None
    vrep: Optional[VRepData] = None
    name: str = ""
    notes: str = ""

    @property
    def n(self) -> int:
        return self.ambient_dim

    @property
    def d(self) -> int:
        return len(self.projection)

    def polyhedron(self) -> Polyhedron:
        if self.hrep is not None:
            h = self.hrep
            return Polyhedron.from_h(h.A, h.b, h.E, h.e, n=self.ambient_dim)
        v = self.vrep
        return Polyhedron.from_v(v.vertices, v.rays, v.lineality, n=self.ambient_dim)

    def context(self):
        from .quotients import make_context
        return make_context(self.projection, n=self.ambient_dim)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"schema": SCHEMA, "kind": "instance"}
        if self.name:
            out["name"] = self.name
        if self.notes:
            out["notes"] = self.notes
        poly: dict[str, Any] = {}
        if self.hrep is not None:
            h = self.hrep
            body = {"ambient_dim": self.ambient_dim,
                    "inequalities": [fmt_qvec(r) for r in h.A], "rhs": fmt_qvec(h.b)}
            if h.E:
                body["equations"] = [fmt_qvec(r) for r in h.E]
                body["equation_rhs"] = fmt_qvec(h.e)
            poly["hrep"] = body
        else:
            v = self.vrep
            body = {"ambient_dim": self.ambient_dim, "vertices": [fmt_qvec(r) for r in v.vertices]}
            if v.rays:
                body["rays"] = [fmt_qvec(r) for r in v.rays]
            if v.lineality:
                body["lineality"] = [fmt_qvec(r) for r in v.lineality]
            poly["vrep"] = body
        out["polyhedron"] = poly
        out["projection"] = [list(r) for r in self.projection]
        return out

    def dumps(self) -> str:
        return dumps(self.to_dict())


def instance_from_dict(doc: dict, path: str = "document") -> InstanceDocument:
    _check_keys(doc, {"schema", "kind", "name", "notes", "polyhedron", "projection"}, path)
    if doc.get("kind", "instance") != "instance":
        raise SchemaError(f"{path}.kind: expected 'instance', got {doc.get('kind')!r}")
    name = doc.get("name", "")
    notes = doc.get("notes", "")
    if not isinstance(name, str) or not isinstance(notes, str):
        raise SchemaError(f"{path}: name and notes must be strings")
    poly = doc.get("polyhedron")
    if not isinstance(poly, dict):
        raise SchemaError(f"{path}.polyhedron: expected an object")
    if len(poly) != 1 or not ({"hrep", "vrep"} & set(poly)):
        raise SchemaError(f"{path}.polyhedron: expected exactly one of 'hrep' or 'vrep'")
    hrep = vrep = None
    if "hrep" in poly:
        p = f"{path}.polyhedron.hrep"
        h = poly["hrep"]
        if not isinstance(h, dict):
            raise SchemaError(f"{p}: expected an object")
        _check_keys(h, {"ambient_dim", "inequalities", "rhs", "equations", "equation_rhs"}, p)
        n = _dim(h, p)
        A = _qmatrix(h.get("inequalities", []), f"{p}.inequalities", n)
        b = _qvector(h.get("rhs", []), f"{p}.rhs", len(A))
        E = _qmatrix(h.get("equations", []), f"{p}.equations", n)
        e = _qvector(h.get("equation_rhs", []), f"{p}.equation_rhs", len(E))
        hrep = HRepData(A, b, E, e)
    else:
        p = f"{path}.polyhedron.vrep"
        v = poly["vrep"]
        if not isinstance(v, dict):
            raise SchemaError(f"{p}: expected an object")
        _check_keys(v, {"ambient_dim", "vertices", "rays", "lineality"}, p)
        n = _dim(v, p)
        verts = _qmatrix(v.get("vertices", []), f"{p}.vertices", n)
        if not verts:
            raise SchemaError(f"{p}.vertices: at least one point is required")
        vrep = VRepData(verts, _qmatrix(v.get("rays", []), f"{p}.rays", n),
                        _qmatrix(v.get("lineality", []), f"{p}.lineality", n))
    if "projection" not in doc:
        raise SchemaError(f"{path}: missing field 'projection'")
    proj = _zmatrix(doc["projection"], f"{path}.projection", n)
    if len(proj) >= n:
        raise RankError(f"{path}.projection: need fewer rows than the ambient dimension ({len(proj)} >= {n})")
    if proj and exact.rank(proj) < len(proj):
        raise RankError(f"{path}.projection: matrix is not of full row rank")
    return InstanceDocument(n, proj, hrep, vrep, name, notes)


def parse_instance(text: Union[str, bytes]) -> InstanceDocument:
    """Parse one instance document; raises ParseError, SchemaError or RankError."""
    return instance_from_dict(load_json(text))


def instance_from_polyhedron(P: Polyhedron, projection, name: str = "", notes: str = "",
                             form: str = "hrep") -> InstanceDocument:
    proj = tuple(tuple(int(x) for x in r) for r in projection)
    if form == "hrep":
        return InstanceDocument(P.n, proj, hrep=HRepData(P.A, P.b, P.E, P.e), name=name, notes=notes)
    return InstanceDocument(P.n, proj, vrep=VRepData(P.vertices, P.rays, P.lineality), name=name, notes=notes)


# --------------------------------------------------------------------------
# polyhedra, fans, complexes, reports


def polyhedron_to_dict(P: Polyhedron) -> dict:
    return {
        "ambient_dim": P.n,
        "dim": P.dim,
        "inequalities": [fmt_qvec(r) for r in P.A],
        "rhs": fmt_qvec(P.b),
        "equations": [fmt_qvec(r) for r in P.E],
        "equation_rhs": fmt_qvec(P.e),
        "vertices": [fmt_qvec(v) for v in P.vertices],
        "rays": [list(r) for r in P.rays],
        "lineality": [list(r) for r in P.lineality],
    }


def polyhedron_document(P: Polyhedron, operation: str = "", input_text: Union[str, bytes] = b"") -> dict:
    out = {"schema": SCHEMA, "kind": "polyhedron"}
    out.update(polyhedron_to_dict(P))
    out["provenance"] = {"operation": operation, "input_sha256": sha256(input_text)}
    return out


@dataclass(frozen=True)
class FanDocument:
    ambient_dim: int
    lineality: tuple
    maximal_cones: tuple
    operation: str = ""
    input_sha256: str = ""

    @classmethod
    def from_fan(cls, F: Fan, operation: str = "", input_text: Union[str, bytes] = b"") -> "FanDocument":
        return cls(F.n, tuple(F.lineality), tuple(tuple(c.rays) for c in F.maximal_cones),
                   operation, sha256(input_text))

    def fan(self) -> Fan:
        return Fan(self.ambient_dim, [cone(rays, self.lineality, n=self.ambient_dim) for rays in self.maximal_cones])

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "fan",
            "ambient_dim": self.ambient_dim,
            "lineality": [list(r) for r in self.lineality],
            "maximal_cones": [[list(r) for r in rays] for rays in self.maximal_cones],
            "provenance": {"operation": self.operation, "input_sha256": self.input_sha256},
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())


def fan_from_dict(doc: dict, path: str = "document") -> FanDocument:
    _check_keys(doc, {"schema", "kind", "ambient_dim", "lineality", "maximal_cones", "provenance"}, path)
    n = _dim(doc, path)
    lin = _zmatrix(doc.get("lineality", []), f"{path}.lineality", n)
    cones = tuple(_zmatrix(c, f"{path}.maximal_cones[{i}]", n)
                  for i, c in enumerate(_list(doc.get("maximal_cones", []), f"{path}.maximal_cones")))
    prov = doc.get("provenance", {})
    if not isinstance(prov, dict):
        raise SchemaError(f"{path}.provenance: expected an object")
    return FanDocument(n, lin, cones, str(prov.get("operation", "")), str(prov.get("input_sha256", "")))


@dataclass(frozen=True)
class ComplexDocument:
    ambient_dim: int
    cells: tuple  # (vertices, rays, lineality) triples
    operation: str = ""
    input_sha256: str = ""

    @classmethod
    def from_complex(cls, K: PolyhedralComplex, operation: str = "",
                     input_text: Union[str, bytes] = b"") -> "ComplexDocument":
        cells = tuple((c.vertices, c.rays, c.lineality) for c in K.maximal_cells)
        return cls(K.n, cells, operation, sha256(input_text))

    def complex(self) -> PolyhedralComplex:
        return PolyhedralComplex(self.ambient_dim, [Polyhedron.from_v(v, r, l, n=self.ambient_dim)
                                                    for v, r, l in self.cells])

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "complex",
            "ambient_dim": self.ambient_dim,
            "maximal_cells": [{"vertices": [fmt_qvec(v) for v in vs], "rays": [list(r) for r in rs],
                               "lineality": [list(r) for r in ls]} for vs, rs, ls in self.cells],
            "provenance": {"operation": self.operation, "input_sha256": self.input_sha256},
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())


def complex_from_dict(doc: dict, path: str = "document") -> ComplexDocument:
    _check_keys(doc, {"schema", "kind", "ambient_dim", "maximal_cells", "provenance"}, path)
    n = _dim(doc, path)
    cells = []
    for i, c in enumerate(_list(doc.get("maximal_cells", []), f"{path}.maximal_cells")):
        p = f"{path}.maximal_cells[{i}]"
        if not isinstance(c, dict):
            raise SchemaError(f"{p}: expected an object")
        _check_keys(c, {"vertices", "rays", "lineality"}, p)
        cells.append((_qmatrix(c.get("vertices", []), f"{p}.vertices", n),
                      _zmatrix(c.get("rays", []), f"{p}.rays", n),
                      _zmatrix(c.get("lineality", []), f"{p}.lineality", n)))
    prov = doc.get("provenance", {})
    if not isinstance(prov, dict):
        raise SchemaError(f"{path}.provenance: expected an object")
    return ComplexDocument(n, tuple(cells), str(prov.get("operation", "")), str(prov.get("input_sha256", "")))


def report_document(report) -> dict:
    out = {"schema": SCHEMA, "kind": "report"}
    out.update(report.as_dict())
    plural = "" if report.instances == 1 else "s"
    out["summary"] = f"{report.status}, {report.instances} instance{plural}"
    return out


# --------------------------------------------------------------------------
# corpora


@dataclass(frozen=True)
class CorpusDocument:
    config: dict
    instances: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        items = []
        for inst in self.instances:
            d = inst.to_dict()
            del d["schema"]
            items.append(d)
        return {"schema": SCHEMA, "kind": "corpus", "config": dict(self.config), "instances": items}

    def dumps(self) -> str:
        return dumps(self.to_dict())


def corpus_from_dict(doc: dict, path: str = "document") -> CorpusDocument:
    _check_keys(doc, {"schema", "kind", "config", "instances"}, path)
    config = doc.get("config", {})
    if not isinstance(config, dict):
        raise SchemaError(f"{path}.config: expected an object")
    items = _list(doc.get("instances", []), f"{path}.instances")
    insts = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise SchemaError(f"{path}.instances[{i}]: expected an object")
        insts.append(instance_from_dict(item, f"{path}.instances[{i}]"))
    return CorpusDocument(config, tuple(insts))


def parse_document(text: Union[str, bytes]):
    """Parse any ``torfan/1`` document into its dataclass."""
    doc = load_json(text)
    kind = doc.get("kind", "instance")
    readers = {"instance": instance_from_dict, "fan": fan_from_dict,
               "complex": complex_from_dict, "corpus": corpus_from_dict}
    if kind not in readers:
        raise SchemaError(f"kind: unsupported document kind {kind!r}")
    return readers[kind](doc)
