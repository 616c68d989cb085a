"""Line-oriented text format for categories, functors, bimodules and complexes.

A file is a sequence of bracketed sections::

    [category A]
    objects: Z4 Z2
    hom Z4 Z4: 4
    identity Z4: 1
    comp Z4 Z4 Z4 0 0: 1

    [functor F: A -> B]
    object Z4 -> X
    map Z4 Z4 0: 1

    [bimodule M over A]
    value Z4 Z4: 2
    left Z4 Z4 Z4 0 0: 1
    right Z4 Z4 Z4 0 0: 1

    [subcategory B of A]
    objects: Z2

    [complex C over A]
    term 1: Z4
    term 0: Z4
    diff 1 0 0: 2

Hom groups list their invariant factors (``0`` for a copy of Z).  Trivial hom
groups, zero identities and zero table entries are omitted.  ``comp X Y Z i j``
is the composite of generator i of hom(Y, Z) with generator j of hom(X, Y);
``diff n i j`` is entry (i, j) of ``d_n``.  Text after ``#`` is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .addcat import AddCat, AddFunctor, MatMorphism, validate_category
from .complexes import BoundedComplex
from .sqzero import Bimodule
from .zlin import FpAbGroup


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = f"{path or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.path = path


@dataclass
class Document:
    categories: dict[str, AddCat] = field(default_factory=dict)
    functors: dict[str, AddFunctor] = field(default_factory=dict)
    bimodules: dict[str, Bimodule] = field(default_factory=dict)
    subcategories: dict[str, tuple[str, tuple[str, ...]]] = field(default_factory=dict)
    complexes: dict[str, BoundedComplex] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)

    def category_name(self, cat: AddCat) -> str:
        for k, v in self.categories.items():
            if v is cat:
                return k
        raise KeyError("category is not part of this document")

    def add_category(self, name: str, cat: AddCat) -> None:
        self.categories[name] = cat
        self.order.append(("category", name))

    def add_functor(self, name: str, f: AddFunctor) -> None:
        self.functors[name] = f
        self.order.append(("functor", name))

    def add_bimodule(self, name: str, m: Bimodule) -> None:
        self.bimodules[name] = m
        self.order.append(("bimodule", name))

    def add_subcategory(self, name: str, parent: str, objects) -> None:
        self.subcategories[name] = (parent, tuple(objects))
        self.order.append(("subcategory", name))

    def add_complex(self, name: str, x: BoundedComplex) -> None:
        self.complexes[name] = x
        self.order.append(("complex", name))


_HEADER = re.compile(r"^\[(category|functor|bimodule|subcategory|complex)\s+([^\]]*)\]$")
_NAME = re.compile(r"^[A-Za-z0-9_.*+|/-]+$")


def _ints(text: str, line: int) -> list[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {text.strip()!r}", line) from None


def _split(body: str, line: int) -> tuple[list[str], str]:
    if ":" not in body:
        raise ParseError("missing ':'", line)
    head, _, tail = body.partition(":")
    return head.split(), tail


def _vector(group: FpAbGroup, coords: list[int], line: int, what: str) -> tuple[int, ...]:
    if len(coords) != group.ngens:
        raise ParseError(f"{what}: expected {group.ngens} coordinates, got {len(coords)}", line)
    return group.reduce(coords)


class _Section:
    def __init__(self, kind: str, header: str, line: int):
        self.kind, self.header, self.line = kind, header, line
        self.rows: list[tuple[int, str]] = []


def _sections(text: str) -> list[_Section]:
    out: list[_Section] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            out.append(_Section(m.group(1), m.group(2).strip(), no))
        elif line.startswith("["):
            raise ParseError(f"unknown section header {line!r}", no)
        elif not out:
            raise ParseError("content before the first section", no)
        else:
            out[-1].rows.append((no, line))
    return out


def _parse_category(sec: _Section) -> AddCat:
    name = sec.header
    objects: list[str] | None = None
    hom: dict[tuple[str, str], FpAbGroup] = {}
    identity: dict[str, tuple[int, ...]] = {}
    entries: list[tuple[int, tuple[str, str, str], int, int, list[int]]] = []
    for no, row in sec.rows:
        key, _, rest = row.partition(" ")
        if row.startswith("objects:"):
            objects = row[len("objects:"):].split()
            if len(set(objects)) != len(objects):
                raise ParseError("duplicate object labels", no)
            continue
        if objects is None:
            raise ParseError("'objects:' must come first", no)
        head, tail = _split(rest, no)
        known = set(objects)
        if any(h not in known for h in head[:3 if key == "comp" else 2 if key == "hom" else 1]):
            raise ParseError(f"unknown object in {row.split(':')[0]!r}", no)
        if key == "hom" and len(head) == 2:
            factors = _ints(tail, no)
            try:
                g = FpAbGroup(factors)
            except ValueError as exc:
                raise ParseError(f"hom {head[0]} {head[1]}: {exc}", no) from None
            hom[head[0], head[1]] = g
        elif key == "identity" and len(head) == 1:
            identity[head[0]] = tuple(_ints(tail, no))
        elif key == "comp" and len(head) == 5:
            i, j = _ints(" ".join(head[3:]), no)
            entries.append((no, (head[0], head[1], head[2]), i, j, _ints(tail, no)))
        else:
            raise ParseError(f"unrecognised line {row!r}", no)
    if objects is None:
        objects = []
    triv = FpAbGroup.trivial()
    for x, coords in identity.items():
        identity[x] = _vector(hom.get((x, x), triv), list(coords), sec.line, f"identity {x}")
    comp: dict[tuple[str, str, str], list[list[tuple[int, ...]]]] = {}
    for no, (x, y, z), i, j, coords in entries:
        hxy, hyz, hxz = (hom.get(k, triv) for k in ((x, y), (y, z), (x, z)))
        if not (0 <= i < hyz.ngens and 0 <= j < hxy.ngens):
            raise ParseError(f"generator index out of range in comp {x} {y} {z}", no)
        table = comp.setdefault((x, y, z), [[hxz.zero() for _ in range(hxy.ngens)] for _ in range(hyz.ngens)])
        table[i][j] = _vector(hxz, coords, no, f"comp {x} {y} {z} {i} {j}")
    return AddCat(objects, hom, comp, identity, name=name)


def _parse_functor(sec: _Section, doc: Document) -> AddFunctor:
    m = re.match(r"^(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", sec.header)
    if not m:
        raise ParseError("functor header must read 'functor NAME: SOURCE -> TARGET'", sec.line)
    name, s, t = m.groups()
    if s not in doc.categories or t not in doc.categories:
        raise ParseError(f"unknown category in functor {name}", sec.line)
    S, T = doc.categories[s], doc.categories[t]
    omap: dict[str, str] = {}
    images: dict[tuple[str, str], dict[int, list[int]]] = {}
    for no, row in sec.rows:
        if row.startswith("object "):
            parts = row.split()
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError("expected 'object X -> Y'", no)
            if parts[1] not in S.objects or parts[3] not in T.objects:
                raise ParseError(f"unknown object in {row!r}", no)
            omap[parts[1]] = parts[3]
        elif row.startswith("map "):
            head, tail = _split(row[4:], no)
            if len(head) != 3:
                raise ParseError("expected 'map X Y i: coords'", no)
            x, y, i = head[0], head[1], _ints(head[2], no)[0]
            images.setdefault((x, y), {})[i] = _ints(tail, no)
        else:
            raise ParseError(f"unrecognised line {row!r}", no)
    missing = [x for x in S.objects if x not in omap]
    if missing:
        raise ParseError(f"functor {name} does not map {missing}", sec.line)
    maps = {}
    for x, y in product(S.objects, repeat=2):
        src, tgt = S.hom(x, y), T.hom(omap[x], omap[y])
        given = images.get((x, y), {})
        if any(not 0 <= i < src.ngens for i in given):
            raise ParseError(f"generator index out of range in map {x} {y}", sec.line)
        maps[x, y] = [_vector(tgt, given[i], sec.line, f"map {x} {y} {i}") if i in given else tgt.zero()
                      for i in range(src.ngens)]
    return name, AddFunctor.from_images(S, T, omap, maps, name=name)


def _parse_bimodule(sec: _Section, doc: Document):
    m = re.match(r"^(\S+)\s+over\s+(\S+)$", sec.header)
    if not m:
        raise ParseError("bimodule header must read 'bimodule NAME over CATEGORY'", sec.line)
    name, base = m.groups()
    if base not in doc.categories:
        raise ParseError(f"unknown category {base}", sec.line)
    a = doc.categories[base]
    value: dict[tuple[str, str], FpAbGroup] = {}
    acts: list[tuple[int, str, tuple[str, str, str], int, int, list[int]]] = []
    for no, row in sec.rows:
        key, _, rest = row.partition(" ")
        head, tail = _split(rest, no)
        if any(h not in a.objects for h in head[:3 if key != "value" else 2]):
            raise ParseError(f"unknown object in {row.split(':')[0]!r}", no)
        if key == "value" and len(head) == 2:
            try:
                value[head[0], head[1]] = FpAbGroup(_ints(tail, no))
            except ValueError as exc:
                raise ParseError(f"value {head[0]} {head[1]}: {exc}", no) from None
        elif key in ("left", "right") and len(head) == 5:
            i, j = _ints(" ".join(head[3:]), no)
            acts.append((no, key, (head[0], head[1], head[2]), i, j, _ints(tail, no)))
        else:
            raise ParseError(f"unrecognised line {row!r}", no)
    triv = FpAbGroup.trivial()
    left: dict = {}
    right: dict = {}
    for no, key, (x, y, z), i, j, coords in acts:
        out = value.get((x, z), triv)
        if key == "left":
            rows_n, cols_n = a.hom(y, z).ngens, value.get((x, y), triv).ngens
            table = left.setdefault((x, y, z), [[out.zero()] * cols_n for _ in range(rows_n)])
        else:
            rows_n, cols_n = value.get((y, z), triv).ngens, a.hom(x, y).ngens
            table = right.setdefault((x, y, z), [[out.zero()] * cols_n for _ in range(rows_n)])
        if not (0 <= i < rows_n and 0 <= j < cols_n):
            raise ParseError(f"generator index out of range in {key} {x} {y} {z}", no)
        table[i][j] = _vector(out, coords, no, f"{key} {x} {y} {z} {i} {j}")
    return name, Bimodule(a, value, left, right, name=name)


def _parse_subcategory(sec: _Section, doc: Document):
    m = re.match(r"^(\S+)\s+of\s+(\S+)$", sec.header)
    if not m:
        raise ParseError("subcategory header must read 'subcategory NAME of CATEGORY'", sec.line)
    name, parent = m.groups()
    if parent not in doc.categories:
        raise ParseError(f"unknown category {parent}", sec.line)
    objects: list[str] = []
    for no, row in sec.rows:
        if not row.startswith("objects:"):
            raise ParseError(f"unrecognised line {row!r}", no)
        objects = row[len("objects:"):].split()
        bad = [o for o in objects if o not in doc.categories[parent].objects]
        if bad:
            raise ParseError(f"unknown objects {bad}", no)
    return name, parent, objects


def _parse_complex(sec: _Section, doc: Document):
    m = re.match(r"^(\S+)\s+over\s+(\S+)$", sec.header)
    if not m:
        raise ParseError("complex header must read 'complex NAME over CATEGORY'", sec.line)
    name, base = m.groups()
    if base not in doc.categories:
        raise ParseError(f"unknown category {base}", sec.line)
    a = doc.categories[base]
    terms: dict[int, tuple[str, ...]] = {}
    entries = []
    for no, row in sec.rows:
        key, _, rest = row.partition(" ")
        head, tail = _split(rest, no)
        if key == "term" and len(head) == 1:
            objs = tuple(tail.split())
            if any(o not in a.objects for o in objs):
                raise ParseError(f"unknown object in term {head[0]}", no)
            terms[_ints(head[0], no)[0]] = objs
        elif key == "diff" and len(head) == 3:
            n, i, j = _ints(" ".join(head), no)
            entries.append((no, n, i, j, _ints(tail, no)))
        else:
            raise ParseError(f"unrecognised line {row!r}", no)
    rows: dict[int, list[list[tuple[int, ...]]]] = {}
    for no, n, i, j, coords in entries:
        X, Y = terms.get(n, ()), terms.get(n - 1, ())
        if not (0 <= i < len(Y) and 0 <= j < len(X)):
            raise ParseError(f"entry out of range in diff {n}", no)
        mat = rows.setdefault(n, [[a.hom(x, y).zero() for x in X] for y in Y])
        mat[i][j] = _vector(a.hom(X[j], Y[i]), coords, no, f"diff {n} {i} {j}")
    diffs = {n: MatMorphism(terms.get(n, ()), terms.get(n - 1, ()), tuple(tuple(r) for r in mat))
             for n, mat in rows.items()}
    return name, BoundedComplex(a, terms, diffs)


def parse_text(text: str, path: str | None = None, validate: bool = True) -> Document:
    """Parse a document; with ``validate`` every category must pass validation."""
    doc = Document()
    try:
        for sec in _sections(text):
            if sec.kind == "category":
                if not _NAME.match(sec.header):
                    raise ParseError(f"bad category name {sec.header!r}", sec.line)
                cat = _parse_category(sec)
                if validate:
                    rep = validate_category(cat)
                    if not rep:
                        raise ParseError(f"category {sec.header} is invalid: {rep.axiom} {rep.witness} "
                                         f"{rep.message}", sec.line)
                doc.add_category(sec.header, cat)
            elif sec.kind == "functor":
                name, f = _parse_functor(sec, doc)
                doc.add_functor(name, f)
            elif sec.kind == "bimodule":
                name, m = _parse_bimodule(sec, doc)
                doc.add_bimodule(name, m)
            elif sec.kind == "subcategory":
                name, parent, objs = _parse_subcategory(sec, doc)
                doc.add_subcategory(name, parent, objs)
            else:
                name, x = _parse_complex(sec, doc)
                doc.add_complex(name, x)
    except ParseError as exc:
        if path and exc.path is None:
            raise ParseError(exc.message, exc.line, path) from None
        raise
    return doc


def parse_presentation(path: str | Path, validate: bool = True) -> Document:
    p = Path(path)
    return parse_text(p.read_text(), str(p), validate)


# ---------------------------------------------------------------------------
# serialization


def _fmt(v) -> str:
    return " ".join(str(c) for c in v)


def _category_lines(name: str, c: AddCat) -> list[str]:
    out = [f"[category {name}]", f"objects: {' '.join(c.objects)}".rstrip()]
    for x, y in product(c.objects, repeat=2):
        g = c.hom(x, y)
        if g.ngens:
            out.append(f"hom {x} {y}: {_fmt(g.invariant_factors)}")
    for x in c.objects:
        if any(c.hom(x, x).reduce(c.id(x))):
            out.append(f"identity {x}: {_fmt(c.hom(x, x).reduce(c.id(x)))}")
    for x, y, z in product(c.objects, repeat=3):
        table = c.comp.get((x, y, z))
        if not table:
            continue
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                v = c.hom(x, z).reduce(v)
                if any(v):
                    out.append(f"comp {x} {y} {z} {i} {j}: {_fmt(v)}")
    return out


def _functor_lines(name: str, f: AddFunctor, doc: Document) -> list[str]:
    out = [f"[functor {name}: {doc.category_name(f.source)} -> {doc.category_name(f.target)}]"]
    for x in f.source.objects:
        out.append(f"object {x} -> {f.object_map[x]}")
    for x, y in product(f.source.objects, repeat=2):
        m = f.hom_maps[x, y]
        for i, col in enumerate(m.matrix.columns()):
            col = m.target.reduce(col)
            if any(col):
                out.append(f"map {x} {y} {i}: {_fmt(col)}")
    return out


def _bimodule_lines(name: str, m: Bimodule, doc: Document) -> list[str]:
    out = [f"[bimodule {name} over {doc.category_name(m.base)}]"]
    obs = m.base.objects
    for x, y in product(obs, repeat=2):
        g = m.value(x, y)
        if g.ngens:
            out.append(f"value {x} {y}: {_fmt(g.invariant_factors)}")
    for key, tables in (("left", m.left), ("right", m.right)):
        for x, y, z in product(obs, repeat=3):
            table = tables.get((x, y, z))
            if not table:
                continue
            for i, row in enumerate(table):
                for j, v in enumerate(row):
                    v = m.value(x, z).reduce(v)
                    if any(v):
                        out.append(f"{key} {x} {y} {z} {i} {j}: {_fmt(v)}")
    return out


def _complex_lines(name: str, x: BoundedComplex, doc: Document) -> list[str]:
    out = [f"[complex {name} over {doc.category_name(x.category)}]"]
    for n in sorted(x.terms, reverse=True):
        out.append(f"term {n}: {' '.join(x.terms[n])}")
    for n in sorted(x.diffs, reverse=True):
        d = x.diffs[n]
        for i, row in enumerate(d.entries):
            for j, v in enumerate(row):
                v = x.category.hom(d.source[j], d.target[i]).reduce(v)
                if any(v):
                    out.append(f"diff {n} {i} {j}: {_fmt(v)}")
    return out


def serialize(doc: Document) -> str:
    blocks = []
    for kind, name in doc.order:
        if kind == "category":
            blocks.append(_category_lines(name, doc.categories[name]))
        elif kind == "functor":
            blocks.append(_functor_lines(name, doc.functors[name], doc))
        elif kind == "bimodule":
            blocks.append(_bimodule_lines(name, doc.bimodules[name], doc))
        elif kind == "subcategory":
            parent, objs = doc.subcategories[name]
            blocks.append([f"[subcategory {name} of {parent}]", f"objects: {' '.join(objs)}".rstrip()])
        else:
            blocks.append(_complex_lines(name, doc.complexes[name], doc))
    return "\n\n".join("\n".join(b) for b in blocks) + "\n" if blocks else ""
