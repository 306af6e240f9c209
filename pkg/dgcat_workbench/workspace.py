"""JSON workspace codec.

A workspace names a ground field together with dg-categories, dg-functors
and bimodules.  Field elements travel as strings (``"3/2"``, ``"1 mod 2"``)
and matrices as row-major arrays of them, so rationals round-trip exactly.
Composite keys such as ``(A, B)`` are written ``"A|B"``.

Shape::

    {
      "field": "q" | "fp:<p>",
      "categories": {
        "<name>": {"fixture": "Q2"}
                | {"tensor": [cat, cat]}
                | {"objects": [...], "identities": {"A": i},
                   "hom": {"A|B": {"degrees": [...], "d": [[...]]}},
                   "composition": {"A|B|C": [[i, j, k, "coeff"], ...]}}
      },
      "functors": {
        "<name>": {"source": cat, "target": cat, "objects": {"A": "FA"},
                   "maps": {"A|B": [[...]]}}
      },
      "modules": {
        "<name>": {"left": cat, "right": cat,
                   "components": {"B|A": complex},
                   "lact": {"A|A2|B": [[...]]}, "ract": {"B2|B|A": [[...]]},
                   "left_hprojective": false, "right_hprojective": false}
                | {"representable": {"category": cat, "object": "A", "side": "right"}}
                | {"diagonal": cat}
                | {"functor": F, "variance": "lower" | "upper"}
      }
    }

Every decoding error is a :class:`WorkspaceFormatError` whose ``path``
points at the offending entry.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from .complexes import Complex
from .dgcat import DgCategory, DgFunctor, tensor_dgcat, validate_dgcat, validate_functor
from .dgmod import (
    Bimodule, diagonal, from_functor, is_unit_category, make_bimodule, representable_left,
    representable_right, validate_module,
)
from .enums import Side
from .errors import DimensionMismatchError, UnknownObjectError, WorkspaceFormatError
from .exact_linalg import Field, Matrix
from .fixtures import fixture_categories

logger = logging.getLogger(__name__)

SEP = "|"


# ============================================================
# WORKSPACE
# ============================================================

@dataclass
class Workspace:
    field: Field
    categories: dict[str, DgCategory] = field(default_factory=dict)
    functors: dict[str, DgFunctor] = field(default_factory=dict)
    modules: dict[str, Bimodule] = field(default_factory=dict)

    def category(self, name: str) -> DgCategory:
        return _lookup(self.categories, name, "categories")

    def functor(self, name: str) -> DgFunctor:
        return _lookup(self.functors, name, "functors")

    def module(self, name: str) -> Bimodule:
        return _lookup(self.modules, name, "modules")


def _lookup(table: Mapping, name: str, section: str):
    try:
        return table[name]
    except KeyError:
        raise WorkspaceFormatError(f"{section}.{name}", "no such entry") from None


def split_key(key: str, n: int, path: str) -> tuple[str, ...]:
    parts = tuple(key.split(SEP))
    if len(parts) != n:
        raise WorkspaceFormatError(path, f"expected {n} '{SEP}'-separated names, got {key!r}")
    return parts


def join_key(parts) -> str:
    return SEP.join(parts)


# ============================================================
# DECODING
# ============================================================

def _require(obj: Mapping, name: str, path: str):
    if not isinstance(obj, Mapping):
        raise WorkspaceFormatError(path, "expected an object")
    if name not in obj:
        raise WorkspaceFormatError(f"{path}.{name}", "missing")
    return obj[name]


def decode_matrix(fld: Field, rows, shape: tuple[int, int], path: str) -> Matrix:
    nrows, ncols = shape
    if not isinstance(rows, list) or len(rows) != nrows:
        raise WorkspaceFormatError(path, f"expected {nrows} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ncols:
            raise WorkspaceFormatError(f"{path}[{i}]", f"expected {ncols} entries")
        out.append([fld.parse_element(str(x)) for x in row])
    if not out:
        return Matrix.zeros(fld, 0, ncols)
    return Matrix.from_rows(fld, out, ncols)


def decode_complex(fld: Field, data, path: str) -> Complex:
    degrees = _require(data, "degrees", path)
    if not isinstance(degrees, list) or not all(isinstance(n, int) for n in degrees):
        raise WorkspaceFormatError(f"{path}.degrees", "expected a list of integers")
    n = len(degrees)
    d = decode_matrix(fld, data.get("d", [[0] * n for _ in range(n)]), (n, n), f"{path}.d")
    try:
        return Complex(fld, tuple(degrees), d)
    except (DimensionMismatchError, ValueError) as exc:
        raise WorkspaceFormatError(path, str(exc)) from exc


def decode_category(ws: Workspace, name: str, data, path: str) -> DgCategory:
    fld = ws.field
    if isinstance(data, Mapping) and "tensor" in data:
        parts = data["tensor"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise WorkspaceFormatError(f"{path}.tensor", "expected two category names")
        return tensor_dgcat(ws.category(parts[0]), ws.category(parts[1]))
    if isinstance(data, Mapping) and "fixture" in data:
        shipped = fixture_categories(fld)
        key = data["fixture"]
        if key not in shipped:
            raise WorkspaceFormatError(f"{path}.fixture", f"unknown fixture {key!r}")
        return shipped[key]
    objects = _require(data, "objects", path)
    if not isinstance(objects, list) or len(set(objects)) != len(objects):
        raise WorkspaceFormatError(f"{path}.objects", "expected distinct object names")
    hom = {}
    for key, comp in _require(data, "hom", path).items():
        a, b = split_key(key, 2, f"{path}.hom")
        if a not in objects or b not in objects:
            raise WorkspaceFormatError(f"{path}.hom.{key}", "unknown object")
        hom[(a, b)] = decode_complex(fld, comp, f"{path}.hom.{key}")
    ident = _require(data, "identities", path)
    table: dict[tuple[str, str, str, int, int], dict[int, object]] = {}
    for key, triples in data.get("composition", {}).items():
        a, b, c = split_key(key, 3, f"{path}.composition")
        for pos, entry in enumerate(triples):
            where = f"{path}.composition.{key}[{pos}]"
            if not isinstance(entry, list) or len(entry) != 4:
                raise WorkspaceFormatError(where, "expected [i, j, k, coeff]")
            i, j, k, coeff = entry
            table.setdefault((a, b, c, i, j), {})[k] = fld.parse_element(str(coeff))
    try:
        cat = DgCategory.from_table(fld, objects, hom, table, ident, name)
    except (KeyError, IndexError, DimensionMismatchError) as exc:
        raise WorkspaceFormatError(path, f"inconsistent category data: {exc}") from exc
    validate_dgcat(cat).raise_for_failure()
    return cat


def decode_functor(ws: Workspace, name: str, data, path: str) -> DgFunctor:
    src = ws.category(_require(data, "source", path))
    tgt = ws.category(_require(data, "target", path))
    objs = _require(data, "objects", path)
    raw = data.get("maps", {})
    maps = {}
    for a, b in src.pairs():
        key = join_key((a, b))
        fa, fb = objs.get(a), objs.get(b)
        if fa not in tgt.objects or fb not in tgt.objects:
            raise WorkspaceFormatError(f"{path}.objects", f"{a!r} or {b!r} is not sent to an object")
        shape = (tgt.dim(fa, fb), src.dim(a, b))
        if key in raw:
            maps[(a, b)] = decode_matrix(ws.field, raw[key], shape, f"{path}.maps.{key}")
        elif 0 in shape:
            maps[(a, b)] = Matrix.zeros(ws.field, *shape)
        else:
            raise WorkspaceFormatError(f"{path}.maps.{key}", "missing")
    fun = DgFunctor(src, tgt, dict(objs), maps, name)
    validate_functor(fun).raise_for_failure()
    return fun


def decode_module(ws: Workspace, name: str, data, path: str) -> Bimodule:
    if "representable" in data:
        spec = data["representable"]
        cat = ws.category(_require(spec, "category", f"{path}.representable"))
        a = _require(spec, "object", f"{path}.representable")
        build = representable_left if spec.get("side", "right") == Side.LEFT.value else representable_right
        try:
            return build(cat, a)
        except UnknownObjectError as exc:
            raise WorkspaceFormatError(f"{path}.representable.object", str(exc)) from exc
    if "diagonal" in data:
        return diagonal(ws.category(data["diagonal"]))
    if "functor" in data:
        lower, upper = from_functor(ws.functor(data["functor"]))
        return upper if data.get("variance", "lower") == "upper" else lower
    left = ws.category(_require(data, "left", path))
    right = ws.category(_require(data, "right", path))
    fld = ws.field
    comp = {}
    raw = _require(data, "components", path)
    for b in right.objects:
        for a in left.objects:
            key = join_key((b, a))
            comp[(b, a)] = (decode_complex(fld, raw[key], f"{path}.components.{key}")
                            if key in raw else Complex.zero(fld))
    lact, ract = {}, {}
    raw_l, raw_r = data.get("lact", {}), data.get("ract", {})
    for b in right.objects:
        for a, a2 in left.pairs():
            key = join_key((a, a2, b))
            shape = (comp[(b, a2)].dim, left.dim(a, a2) * comp[(b, a)].dim)
            lact[(a, a2, b)] = _action(fld, raw_l, key, shape, f"{path}.lact", a == a2, left, a)
    for a in left.objects:
        for b2, b in right.pairs():
            key = join_key((b2, b, a))
            shape = (comp[(b2, a)].dim, comp[(b, a)].dim * right.dim(b2, b))
            ract[(b2, b, a)] = _action(fld, raw_r, key, shape, f"{path}.ract", b == b2, right, b)
    module = make_bimodule(left, right, comp, lact, ract, name,
                           bool(data.get("left_hprojective", False)),
                           bool(data.get("right_hprojective", False)))
    validate_module(module).raise_for_failure()
    return module


def _action(fld: Field, raw: Mapping, key: str, shape: tuple[int, int], path: str,
            diagonal_pair: bool, cat: DgCategory, obj: str) -> Matrix:
    """Decode one action matrix; empty and pure-identity actions may be omitted."""
    if key in raw:
        return decode_matrix(fld, raw[key], shape, f"{path}.{key}")
    nrows, ncols = shape
    if nrows == 0 or ncols == 0:
        return Matrix.zeros(fld, nrows, ncols)
    if diagonal_pair and cat.dim(obj, obj) == 1:
        return Matrix.identity(fld, nrows)
    raise WorkspaceFormatError(f"{path}.{key}", "missing; only identity actions may be omitted")


def load_workspace(data: Mapping, field_override: Field | None = None) -> Workspace:
    """Decode and validate *data*; *field_override* replaces the declared field."""
    if not isinstance(data, Mapping):
        raise WorkspaceFormatError("$", "expected a JSON object")
    fld = field_override or Field.parse(str(_require(data, "field", "$")))
    ws = Workspace(fld)
    for name, entry in data.get("categories", {}).items():
        ws.categories[name] = decode_category(ws, name, entry, f"categories.{name}")
    for name, entry in data.get("functors", {}).items():
        ws.functors[name] = decode_functor(ws, name, entry, f"functors.{name}")
    for name, entry in data.get("modules", {}).items():
        if not isinstance(entry, Mapping):
            raise WorkspaceFormatError(f"modules.{name}", "expected an object")
        ws.modules[name] = decode_module(ws, name, entry, f"modules.{name}")
    logger.debug("loaded workspace over %s: %d categories, %d functors, %d modules",
                 fld, len(ws.categories), len(ws.functors), len(ws.modules))
    return ws


def read_workspace(path: str | Path, field_override: Field | None = None) -> Workspace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise WorkspaceFormatError(str(path), f"cannot read: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceFormatError(f"$ (line {exc.lineno}, column {exc.colno})", exc.msg) from exc
    return load_workspace(data, field_override)


# ============================================================
# ENCODING
# ============================================================

def encode_matrix(m: Matrix) -> list[list[str]]:
    return m.to_strings()


def encode_complex(c: Complex) -> dict:
    return {"degrees": list(c.degrees), "d": encode_matrix(c.d)}


def encode_category(cat: DgCategory) -> dict:
    """Explicit form; composites with an identity are implied and left out."""
    fld = cat.field
    composition: dict[str, list] = {}
    for (a, b, c), m in cat.comp.items():
        n_ab = cat.dim(a, b)
        triples = []
        for k, col, v in m.nonzero_entries():
            i, j = divmod(col, n_ab)
            if (b == c and i == cat.identity_pivot(b)) or (a == b and j == cat.identity_pivot(a)):
                continue
            triples.append([i, j, k, fld.format_element(v)])
        if triples:
            composition[join_key((a, b, c))] = sorted(triples)
    return {
        "objects": list(cat.objects),
        "identities": {a: cat.identity_pivot(a) for a in cat.objects},
        "hom": {join_key(p): encode_complex(c) for p, c in cat.hom.items() if c.dim},
        "composition": composition,
    }


def encode_functor(fun: DgFunctor, name_of: Callable[[DgCategory], str]) -> dict:
    return {
        "source": name_of(fun.source),
        "target": name_of(fun.target),
        "objects": dict(fun.object_map),
        "maps": {join_key(p): encode_matrix(m) for p, m in fun.maps.items() if m.nrows and m.ncols},
    }


def encode_module(t: Bimodule, name_of: Callable[[DgCategory], str]) -> dict:
    return {
        "left": name_of(t.left),
        "right": name_of(t.right),
        "components": {join_key(k): encode_complex(c) for k, c in t.component.items() if c.dim},
        "lact": {join_key(k): encode_matrix(m) for k, m in t.lact.items() if m.nrows and m.ncols},
        "ract": {join_key(k): encode_matrix(m) for k, m in t.ract.items() if m.nrows and m.ncols},
        "left_hprojective": t.left_hprojective,
        "right_hprojective": t.right_hprojective,
    }


def dump_workspace(ws: Workspace) -> dict:
    """Explicit JSON form of *ws*; :func:`load_workspace` reads it back.

    A unit category that modules or functors use without it being named in
    the workspace is added under its own name.
    """
    categories = dict(ws.categories)

    def name_of(cat: DgCategory) -> str:
        for n, c in categories.items():
            if c is cat or c == cat:
                return n
        if not is_unit_category(cat):
            raise WorkspaceFormatError("categories", f"category {cat.name!r} is not part of the workspace")
        name = cat.name
        while name in categories:
            name += "'"
        categories[name] = cat
        return name

    functors = {n: encode_functor(f, name_of) for n, f in ws.functors.items()}
    modules = {n: encode_module(t, name_of) for n, t in ws.modules.items()}
    return {
        "field": ws.field.spec,
        "categories": {n: encode_category(c) for n, c in categories.items()},
        "functors": functors,
        "modules": modules,
    }


def write_workspace(ws: Workspace, path: str | Path) -> None:
    Path(path).write_text(json.dumps(dump_workspace(ws), indent=2, sort_keys=True) + "\n", encoding="utf-8")
