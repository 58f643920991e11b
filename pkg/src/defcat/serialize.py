"""JSON documents for rings, categories, modules, deformations, cochains and spaces.

A document is either a single object ``{"schema_version": "1", "type": ..., ...}`` or a
workspace ``{"schema_version": "1", "objects": {name: object, ...}}``.  Inside a
workspace, fields that hold another object may name it instead of embedding it.
Field elements are integers over F_p and ``[numerator, denominator]`` pairs over Q.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

import numpy as np

from . import diagram as dg
from . import hochschild as hc
from .funmod import FpFunctorModule
from .linalg import Field
from .lincat import LinCategory, LinearDeformation, LinFunctor, Morphism
from .ring import BaseRing, FpModule, RingSurjection

SCHEMA_VERSION = "1"


class SchemaError(ValueError):
    """A schema violation, located by a JSON pointer."""

    def __init__(self, path: str, message: str):
        self.path = path or "/"
        super().__init__(f"{self.path}: {message}")


class UnsupportedVersion(SchemaError):
    pass


def _ptr(path: str, key) -> str:
    return f"{path}/{str(key).replace('~', '~0').replace('/', '~1')}"


# -- scalars and arrays ----------------------------------------------------------------------


def encode_scalar(field: Field, x):
    if field.characteristic:
        return int(x)
    q = Fraction(x)
    return [q.numerator, q.denominator]


def encode_array(field: Field, a) -> list:
    a = np.asarray(a)
    if a.ndim == 0:
        return encode_scalar(field, a.item() if field.characteristic else a[()])
    return [encode_array(field, a[i]) for i in range(a.shape[0])]


def decode_array(field: Field, data, ndim: int, path: str, shape=None) -> np.ndarray:
    """Parse a nested list of depth ``ndim`` with field-element leaves."""
    flat, dims = [], []

    def walk(node, depth, p):
        if depth == ndim:
            flat.append(_decode_scalar(field, node, p))
            return
        if not isinstance(node, list):
            raise SchemaError(p, f"expected an array nested {ndim} deep")
        if len(dims) <= depth:
            dims.append(len(node))
        elif dims[depth] != len(node):
            raise SchemaError(p, f"ragged array: length {len(node)}, expected {dims[depth]}")
        for i, child in enumerate(node):
            walk(child, depth + 1, _ptr(p, i))

    walk(data, 0, path)
    dims += [0] * (ndim - len(dims))
    if not flat:
        if shape is not None:
            dims = [g if w is None else w for g, w in zip(dims, shape)]
        return field.zeros(tuple(dims))
    if shape is not None:
        for axis, (got, want) in enumerate(zip(dims, shape)):
            if want is not None and got != want:
                raise SchemaError(path, f"axis {axis} has length {got}, expected {want}")
    return field.array(np.array(flat, dtype=object).reshape(dims))


def _decode_scalar(field: Field, node, path: str):
    if isinstance(node, bool):
        raise SchemaError(path, "booleans are not field elements")
    if isinstance(node, int):
        return field.scalar(node)
    if field.characteristic == 0 and isinstance(node, list) and len(node) == 2 \
            and all(isinstance(v, int) and not isinstance(v, bool) for v in node):
        if node[1] == 0:
            raise SchemaError(path, "zero denominator")
        return Fraction(node[0], node[1])
    expected = "an integer" if field.characteristic else "an integer or a [numerator, denominator] pair"
    raise SchemaError(path, f"expected {expected}")


# -- encoders ---------------------------------------------------------------------------------------


def _field_json(field: Field) -> dict:
    return {"characteristic": field.characteristic}


def encode_ring(R: BaseRing) -> dict:
    return {"type": "ring", "name": R.name, "field": _field_json(R.field), "labels": R.labels,
            "constants": encode_array(R.field, R.constants), "maximal_ideal": list(R.maximal_ideal)}


def encode_surjection(t: RingSurjection) -> dict:
    return {"type": "surjection", "source": encode_ring(t.source), "target": encode_ring(t.target),
            "matrix": encode_array(t.field, t.matrix)}


def encode_category(c: LinCategory) -> dict:
    n = c.n_objects
    f = c.field
    return {
        "type": "category", "name": c.name, "ring": encode_ring(c.ring), "objects": list(c.objects),
        "ranks": [[c.rank(x, y) for y in range(n)] for x in range(n)],
        "composition": [{"source": c.objects[x], "middle": c.objects[y], "target": c.objects[z],
                         "table": encode_array(f, t)} for (x, y, z), t in sorted(c.comp.items())],
        "identity": {c.objects[x]: encode_array(f, c.identity[x]) for x in range(n)},
        "hom_labels": [{"source": c.objects[x], "target": c.objects[y], "labels": list(v)}
                       for (x, y), v in sorted(c.hom_labels.items())],
    }


def encode_fpmodule(m: FpModule) -> dict:
    return {"type": "module", "ring": encode_ring(m.ring),
            "presentation": encode_array(m.ring.field, m.presentation),
            "shape": list(m.presentation.shape[:2])}


def encode_functor_module(F: FpFunctorModule) -> dict:
    c = F.category
    return {"type": "functor_module", "category": encode_category(c),
            "sources": [c.objects[a] for a in F.sources], "targets": [c.objects[b] for b in F.targets],
            "delta": [[encode_array(c.field, e) for e in row] for row in F.delta]}


def encode_functor(fun: LinFunctor) -> dict:
    s, t = fun.source, fun.target
    return {"objects": [t.objects[o] for o in fun.objects],
            "maps": [{"source": s.objects[x], "target": s.objects[y], "matrix": encode_array(t.field, m)}
                     for (x, y), m in sorted(fun.maps.items()) if m.size]}


def encode_deformation(d: LinearDeformation) -> dict:
    return {"type": "deformation", "name": d.name, "surjection": encode_surjection(d.theta),
            "total": encode_category(d.total), "reduced": encode_category(d.reduced),
            "functor": encode_functor(d.functor)}


def encode_morphism(m: Morphism) -> dict:
    c = m.category
    return {"type": "morphism", "category": encode_category(c), "source": c.objects[m.source],
            "target": c.objects[m.target], "coords": encode_array(c.field, m.coords)}


def encode_cochain(ch: hc.Cochain) -> dict:
    c = ch.category
    return {"type": "cochain", "category": encode_category(c), "degree": ch.degree,
            "blocks": [{"objects": [c.objects[i] for i in t], "table": encode_array(c.field, b)}
                       for t, b in sorted(ch.blocks.items()) if np.any(b != 0)]}


def encode_poset(P: dg.FinitePoset) -> dict:
    rel = sorted((P.labels[u], P.labels[v]) for (u, v) in P.leq if u != v)
    return {"type": "poset", "labels": list(P.labels), "relations": [list(r) for r in rel],
            "minimal_open": P.minimal_open}


def encode_presheaf(O: dg.StructurePresheaf) -> dict:
    P = O.poset
    return {"type": "presheaf", "poset": encode_poset(P), "algebras": [encode_category(a) for a in O.algebras],
            "restrictions": [{"sub": P.labels[u], "sup": P.labels[v], "matrix": encode_array(O.field, m)}
                             for (u, v), m in sorted(O.restrictions.items())]}


_ENCODERS = [
    (BaseRing, encode_ring), (RingSurjection, encode_surjection), (LinCategory, encode_category),
    (FpModule, encode_fpmodule), (FpFunctorModule, encode_functor_module), (LinearDeformation, encode_deformation),
    (Morphism, encode_morphism), (hc.Cochain, encode_cochain), (dg.FinitePoset, encode_poset),
    (dg.StructurePresheaf, encode_presheaf),
]


def encode(obj) -> dict:
    for cls, fn in _ENCODERS:
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def document(obj) -> dict:
    return {"schema_version": SCHEMA_VERSION, **encode(obj)}


def workspace_document(objects: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "objects": {k: encode(v) for k, v in objects.items()}}


def dumps(doc) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(*texts) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode("utf-8") if isinstance(t, str) else t)
        h.update(b"\0")
    return h.hexdigest()


# -- decoding ----------------------------------------------------------------------------------


class Workspace:
    """Named objects decoded from one document; references resolve lazily by name."""

    def __init__(self, raw: dict, path: str = ""):
        if not isinstance(raw, dict):
            raise SchemaError(path, "document must be a JSON object")
        version = raw.get("schema_version")
        if version is None:
            raise SchemaError(_ptr(path, "schema_version"), "missing schema_version")
        if version != SCHEMA_VERSION:
            raise UnsupportedVersion(_ptr(path, "schema_version"),
                                     f"unsupported schema version {version!r}; this build reads {SCHEMA_VERSION!r}")
        if "type" not in raw:
            objs = raw.get("objects")
            if not isinstance(objs, dict) or not objs:
                raise SchemaError(_ptr(path, "objects"), "objects must be a nonempty mapping")
            self.raw = dict(objs)
            self.base = _ptr(path, "objects")
        else:
            self.raw = {"main": {k: v for k, v in raw.items() if k != "schema_version"}}
            self.base = None
        self._cache = {}
        self._resolving = set()

    def _path(self, name):
        return _ptr(self.base, name) if self.base is not None else ""

    @property
    def names(self) -> list:
        return list(self.raw)

    def type_of(self, name) -> str:
        return self.raw[name].get("type", "")

    def get(self, name):
        if name not in self.raw:
            raise SchemaError("", f"dangling reference {name!r}")
        if name in self._cache:
            return self._cache[name]
        if name in self._resolving:
            raise SchemaError(self._path(name), "circular reference")
        self._resolving.add(name)
        try:
            obj = self.decode(self.raw[name], self._path(name))
        finally:
            self._resolving.discard(name)
        self._cache[name] = obj
        return obj

    def first(self, *types):
        for n in self.raw:
            if self.type_of(n) in types:
                return n
        raise SchemaError("", f"no object of type {' or '.join(types)} in the document")

    def all(self) -> dict:
        return {n: self.get(n) for n in self.raw}

    # -- generic -------------------------------------------------------------------------------

    def _ref(self, node, path, expected):
        if isinstance(node, str):
            if node not in self.raw:
                raise SchemaError(path, f"dangling reference {node!r}")
            obj = self.get(node)
        elif isinstance(node, dict):
            obj = self.decode(node, path)
        else:
            raise SchemaError(path, f"expected a {expected} object or a reference by name")
        want = {"ring": BaseRing, "category": LinCategory, "surjection": RingSurjection,
                "poset": dg.FinitePoset}[expected]
        if not isinstance(obj, want):
            raise SchemaError(path, f"expected a {expected}")
        return obj

    def decode(self, node, path):
        if not isinstance(node, dict):
            raise SchemaError(path, "expected an object")
        t = node.get("type")
        fn = getattr(self, f"_decode_{t}", None) if isinstance(t, str) else None
        if fn is None:
            raise SchemaError(_ptr(path, "type"), f"unknown type {t!r}")
        try:
            return fn(node, path)
        except SchemaError:
            raise
        except (KeyError,) as e:
            raise SchemaError(_ptr(path, e.args[0]), "missing field") from None
        except ValueError as e:
            raise SchemaError(path, str(e)) from None

    # -- per type ------------------------------------------------------------------------------

    def _field(self, node, path) -> Field:
        fld = node.get("field")
        if not isinstance(fld, dict) or not isinstance(fld.get("characteristic"), int):
            raise SchemaError(_ptr(path, "field"), "expected {\"characteristic\": p}")
        return Field(fld["characteristic"])

    def _decode_ring(self, node, path):
        f = self._field(node, path)
        c = decode_array(f, node["constants"], 3, _ptr(path, "constants"))
        if len(set(c.shape)) != 1 or c.shape[0] == 0:
            raise SchemaError(_ptr(path, "constants"), f"expected a nonempty d×d×d array, got shape {c.shape}")
        return BaseRing(f, c, node.get("labels"), node.get("maximal_ideal"), node.get("name", ""))

    def _decode_surjection(self, node, path):
        s = self._ref(node["source"], _ptr(path, "source"), "ring")
        t = self._ref(node["target"], _ptr(path, "target"), "ring")
        m = decode_array(s.field, node["matrix"], 2, _ptr(path, "matrix"), (t.dim, s.dim))
        return RingSurjection(s, t, m)

    def _decode_category(self, node, path):
        R = self._ref(node["ring"], _ptr(path, "ring"), "ring")
        f, d = R.field, R.dim
        objs = node["objects"]
        if not isinstance(objs, list) or not all(isinstance(o, str) for o in objs):
            raise SchemaError(_ptr(path, "objects"), "objects must be a list of labels")
        n = len(objs)
        idx = {o: i for i, o in enumerate(objs)}
        ranks_raw = node["ranks"]
        rp = _ptr(path, "ranks")
        if not isinstance(ranks_raw, list) or len(ranks_raw) != n or \
                any(not isinstance(r, list) or len(r) != n for r in ranks_raw):
            raise SchemaError(rp, f"ranks must be a {n}×{n} array")
        ranks = {}
        for x in range(n):
            for y in range(n):
                v = ranks_raw[x][y]
                if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                    raise SchemaError(_ptr(_ptr(rp, x), y), "rank must be a nonnegative integer")
                ranks[(x, y)] = v

        def obj(label, p):
            if label not in idx:
                raise SchemaError(p, f"unknown object {label!r}")
            return idx[label]

        comp = {}
        cp = _ptr(path, "composition")
        for i, entry in enumerate(node.get("composition", [])):
            ep = _ptr(cp, i)
            x = obj(entry.get("source"), _ptr(ep, "source"))
            y = obj(entry.get("middle"), _ptr(ep, "middle"))
            z = obj(entry.get("target"), _ptr(ep, "target"))
            shape = (ranks[(y, z)], ranks[(x, y)], ranks[(x, z)], d)
            comp[(x, y, z)] = decode_array(f, entry["table"], 4, _ptr(ep, "table"), shape)
        ident = {}
        ip = _ptr(path, "identity")
        raw_id = node["identity"]
        for label in objs:
            if label not in raw_id:
                raise SchemaError(_ptr(ip, label), "missing identity")
            x = idx[label]
            ident[x] = decode_array(f, raw_id[label], 2, _ptr(ip, label), (ranks[(x, x)], d))
        labels = {}
        for i, entry in enumerate(node.get("hom_labels", [])):
            ep = _ptr(_ptr(path, "hom_labels"), i)
            labels[(obj(entry.get("source"), ep), obj(entry.get("target"), ep))] = list(entry["labels"])
        return LinCategory(R, objs, ranks, comp, ident, labels or None, name=node.get("name", ""))

    def _decode_module(self, node, path):
        R = self._ref(node["ring"], _ptr(path, "ring"), "ring")
        shape = node.get("shape")
        pres = decode_array(R.field, node["presentation"], 3, _ptr(path, "presentation"),
                            (shape[0], shape[1], R.dim) if shape else (None, None, R.dim))
        return FpModule(R, pres)

    def _decode_functor_module(self, node, path):
        c = self._ref(node["category"], _ptr(path, "category"), "category")
        sources = [c.obj(a) for a in node.get("sources", [])]
        targets = [c.obj(b) for b in node["targets"]]
        dp = _ptr(path, "delta")
        raw = node.get("delta", [[] for _ in targets])
        if len(raw) != len(targets):
            raise SchemaError(dp, f"delta needs {len(targets)} rows")
        delta = []
        for j, row in enumerate(raw):
            if len(row) != len(sources):
                raise SchemaError(_ptr(dp, j), f"row needs {len(sources)} entries")
            delta.append([decode_array(c.field, e, 2, _ptr(_ptr(dp, j), i),
                                       (c.rank(targets[j], sources[i]), c.ring.dim)) for i, e in enumerate(row)])
        return FpFunctorModule(c, sources, targets, delta)

    def _decode_functor(self, node, path, source, target, ring_map):
        objs = [target.obj(o) for o in node["objects"]]
        maps = {}
        for i, entry in enumerate(node.get("maps", [])):
            ep = _ptr(_ptr(path, "maps"), i)
            x, y = source.obj(entry["source"]), source.obj(entry["target"])
            shape = (target.rank(objs[x], objs[y]), source.rank(x, y), target.ring.dim)
            maps[(x, y)] = decode_array(target.field, entry["matrix"], 3, _ptr(ep, "matrix"), shape)
        return LinFunctor(source, target, objs, maps, ring_map=ring_map)

    def _decode_deformation(self, node, path):
        from .lincat import reduction_functor
        theta = self._ref(node["surjection"], _ptr(path, "surjection"), "surjection")
        total = self._ref(node["total"], _ptr(path, "total"), "category")
        if "reduced" in node:
            reduced = self._ref(node["reduced"], _ptr(path, "reduced"), "category")
        else:
            from .lincat import base_change_category
            reduced = base_change_category(total, theta)
        if "functor" in node:
            fun = self._decode_functor(node["functor"], _ptr(path, "functor"), total, reduced, theta)
        else:
            fun = reduction_functor(total, theta, reduced)
        d = LinearDeformation(theta, total, reduced, fun, True, True, node.get("name", ""))
        d.strict = d.is_structurally_strict()
        return d

    def _decode_morphism(self, node, path):
        c = self._ref(node["category"], _ptr(path, "category"), "category")
        x, y = c.obj(node["source"]), c.obj(node["target"])
        coords = decode_array(c.field, node["coords"], 2, _ptr(path, "coords"), (c.rank(x, y), c.ring.dim))
        return Morphism(c, x, y, coords)

    def _decode_cochain(self, node, path):
        c = self._ref(node["category"], _ptr(path, "category"), "category")
        n = node["degree"]
        if not isinstance(n, int) or n < 0:
            raise SchemaError(_ptr(path, "degree"), "degree must be a nonnegative integer")
        ch = hc.Cochain.zero(c, n)
        lay = hc.layout(c, n)
        for i, entry in enumerate(node.get("blocks", [])):
            ep = _ptr(_ptr(path, "blocks"), i)
            t = tuple(c.obj(o) for o in entry["objects"])
            if len(t) != n + 1:
                raise SchemaError(_ptr(ep, "objects"), f"a degree {n} block needs {n + 1} objects")
            if t not in lay.shapes:
                raise SchemaError(_ptr(ep, "objects"), "block lies on a zero Hom-space")
            ch.blocks[t] = decode_array(c.field, entry["table"], n + 1, _ptr(ep, "table"), lay.shapes[t])
        return ch

    def _decode_poset(self, node, path):
        rel = node.get("relations", [])
        for i, r in enumerate(rel):
            if not isinstance(r, list) or len(r) != 2:
                raise SchemaError(_ptr(_ptr(path, "relations"), i), "a relation is a pair [U, V] with U ⊆ V")
        try:
            return dg.FinitePoset.from_relations(node["labels"], [tuple(r) for r in rel],
                                                 bool(node.get("minimal_open", True)))
        except dg.InvalidPoset as e:
            raise SchemaError(path, str(e)) from None

    def _decode_presheaf(self, node, path):
        P = self._ref(node["poset"], _ptr(path, "poset"), "poset")
        algs = [self._ref(a, _ptr(_ptr(path, "algebras"), i), "category") for i, a in enumerate(node["algebras"])]
        if len(algs) != len(P):
            raise SchemaError(_ptr(path, "algebras"), f"expected {len(P)} algebras")
        res = {}
        for i, entry in enumerate(node.get("restrictions", [])):
            ep = _ptr(_ptr(path, "restrictions"), i)
            u, v = P.index(entry["sub"]), P.index(entry["sup"])
            shape = (algs[u].rank(0, 0), algs[v].rank(0, 0))
            res[(u, v)] = decode_array(algs[0].field, entry["matrix"], 2, _ptr(ep, "matrix"), shape)
        try:
            return dg.StructurePresheaf(P, algs, res)
        except dg.InvalidPresheaf as e:
            raise SchemaError(path, str(e)) from None


def loads(text: str) -> Workspace:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("", f"malformed JSON: {e.msg} at line {e.lineno} column {e.colno}") from None
    return Workspace(raw)


def load(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def round_trip(obj):
    """Decode the canonical encoding of ``obj`` again."""
    return loads(dumps(document(obj))).get("main")
