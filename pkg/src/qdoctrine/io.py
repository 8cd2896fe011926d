"""Doctrine documents: a YAML description of a finite doctrine, parsed and emitted.

A document either names a builtin::

    builtin: powerset bound=2

or spells everything out::

    name: tiny
    base:
      objects: [A]
      arrows: {}
      compose: []          # [g, f, g o f] triples
      terminal: A
      products: [[A, A, A, idA, idA]]
    fibers:
      A: {elements: [no, yes], order: [[no, yes]], top: yes}
    reindex: {}            # arrow -> {element: element}

Identities default to ``id<object>``.  Orders are closed reflexively and
transitively unless the fiber says ``closed: false``.
"""

from __future__ import annotations

import re
from pathlib import Path

import yaml

from .builders import (
    frobenius_failing_doctrine,
    powerset_doctrine,
    setoid_powerset_doctrine,
    subobject_doctrine,
    two_point_doctrine,
    weak_subobject_doctrine,
)
from .category import Category, FiniteCategory, FinSet, check_category
from .doctrine import Doctrine, check_primary
from .order import FiniteSemilattice, check_semilattice
from .report import DoctrineError, MalformedInput, StructureReport


class ParseError(DoctrineError, ValueError):
    """Unreadable document: bad YAML or a section of the wrong shape."""


class ValidationError(DoctrineError, ValueError):
    """Well-formed document describing something that is not a primary doctrine."""

    def __init__(self, message, report: StructureReport | None = None):
        super().__init__(message)
        self.report = report


BUILTINS = {
    "powerset": lambda n: powerset_doctrine(FinSet(n)),
    "subobject": lambda n: subobject_doctrine(FinSet(n)),
    "weak-subobject": lambda n: weak_subobject_doctrine(FinSet(n)),
    "setoid-powerset": lambda n: setoid_powerset_doctrine(n),
    "two-point": lambda n: two_point_doctrine(),
    "frobenius-failing": lambda n: frobenius_failing_doctrine(),
}


def builtin_doctrine(spec: str, window: int | None = None) -> Doctrine:
    """``"powerset bound=2"`` style selector; ``window`` overrides the bound."""
    words = spec.split()
    if not words or words[0] not in BUILTINS:
        raise ParseError(f"unknown builtin {spec!r}; known: {', '.join(BUILTINS)}")
    bound = 2
    for w in words[1:]:
        m = re.fullmatch(r"bound=(\d+)", w)
        if not m:
            raise ParseError(f"bad builtin option {w!r}")
        bound = int(m.group(1))
    if window is not None:
        bound = window
    return BUILTINS[words[0]](bound)


# ---------------------------------------------------------------------------
# parsing


def _where(node) -> str:
    if node is None:
        return ""
    m = node.start_mark
    return f" (line {m.line + 1}, column {m.column + 1})"


def _child(node, key):
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            if k.value == key:
                return v
    if isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
        return node.value[key]
    return node


def _locate(root, *path) -> str:
    node = root
    for key in path:
        node = _child(node, key)
    return _where(node)


def _as(kind, value, what, root, *path):
    if not isinstance(value, kind):
        raise ParseError(f"{what} must be a {kind.__name__}{_locate(root, *path)}")
    return value


def parse_text(text: str, window: int | None = None, strict_products=False) -> Doctrine:
    try:
        root = yaml.compose(text)
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}") from None
    doc = _as(dict, doc, "document", root)
    if "builtin" in doc:
        P = builtin_doctrine(str(doc["builtin"]), window)
    else:
        P = _explicit(doc, root)
    if strict_products:
        c = P.base
        for a in c.objects():
            for b in c.objects():
                if not c.has_product(a, b):
                    raise ValidationError(f"no chosen product for {a!r} x {b!r} (strict products requested)")
    return P


def parse_doctrine(path, window: int | None = None, strict_products=False) -> Doctrine:
    """Read a document (or a ``builtin-<kind>-<bound>`` shorthand) into a doctrine."""
    m = re.fullmatch(r"builtin-([a-z-]+?)(?:-(\d+))?", str(path))
    if m and not Path(path).exists():
        spec = m.group(1) + (f" bound={m.group(2)}" if m.group(2) else "")
        return parse_text(f"builtin: {spec}", window, strict_products)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_text(text, window, strict_products)


def _explicit(doc, root) -> Doctrine:
    base = _as(dict, doc.get("base"), "base", root, "base")
    objects = [str(o) for o in _as(list, base.get("objects"), "base.objects", root, "base", "objects")]
    arrows = {}
    for name, ends in _as(dict, base.get("arrows") or {}, "base.arrows", root, "base", "arrows").items():
        ends = _as(list, ends, f"arrow {name}", root, "base", "arrows", name)
        if len(ends) != 2:
            raise ParseError(f"arrow {name} needs [source, target]{_locate(root, 'base', 'arrows', name)}")
        arrows[str(name)] = (str(ends[0]), str(ends[1]))
    ids = {o: f"id{o}" for o in objects}
    ids.update({str(k): str(v) for k, v in (base.get("identities") or {}).items()})
    table = {}
    for i, row in enumerate(_as(list, base.get("compose") or [], "base.compose", root, "base", "compose")):
        row = _as(list, row, "composition row", root, "base", "compose", i)
        if len(row) != 3:
            raise ParseError(f"composition rows are [g, f, g o f]{_locate(root, 'base', 'compose', i)}")
        table[(str(row[0]), str(row[1]))] = str(row[2])
    products = {}
    for i, row in enumerate(_as(list, base.get("products") or [], "base.products", root, "base", "products")):
        if not isinstance(row, list) or len(row) != 5:
            raise ParseError(f"product rows are [a, b, a x b, pr1, pr2]{_locate(root, 'base', 'products', i)}")
        a, b, p, p1, p2 = map(str, row)
        products[(a, b)] = (p, p1, p2)
    terminal = base.get("terminal")
    try:
        c = FiniteCategory(objects, arrows, ids, table, terminal=None if terminal is None else str(terminal),
                           products=products, name=str(doc.get("name", "document")))
    except (MalformedInput, KeyError) as exc:
        raise ValidationError(f"base category: {exc}{_locate(root, 'base')}") from None
    rep = check_category(c)
    if not rep:
        raise ValidationError(f"base category fails its laws: {rep.counterexample}{_locate(root, 'base')}", rep)

    fibers_doc = _as(dict, doc.get("fibers"), "fibers", root, "fibers")
    fibers = {}
    for o in objects:
        spec = fibers_doc.get(o)
        spec = _as(dict, spec, f"fiber over {o}", root, "fibers", o)
        els = [str(x) for x in spec.get("elements") or []]
        pairs = [(str(x), str(y)) for x, y in spec.get("order") or []]
        top = spec.get("top")
        top = None if top is None else str(top)
        meet = spec.get("meet")
        meet = None if meet is None else {(str(x), str(y)): str(z) for x, y, z in meet}
        close = bool(spec.get("closed", True))
        try:
            rep = check_semilattice(els, pairs, top, meet, close=close)
        except MalformedInput as exc:
            raise ValidationError(f"fiber over {o}: {exc}{_locate(root, 'fibers', o)}") from None
        if not rep:
            raise ValidationError(f"fiber over {o}: {rep.counterexample}{_locate(root, 'fibers', o)}", rep)
        fibers[o] = FiniteSemilattice.from_pairs(els, pairs, top, meet, close=close, name=o)

    tables = {}
    for name, mapping in _as(dict, doc.get("reindex") or {}, "reindex", root, "reindex").items():
        tables[str(name)] = {str(k): str(v) for k, v in
                             _as(dict, mapping, f"reindexing along {name}", root, "reindex", name).items()}
    for arr in c.arrows():
        if arr.data == c.identity(arr.source).data:
            continue
        tab = tables.get(arr.data)
        if tab is None:
            raise ValidationError(f"no reindexing given for arrow {arr.data}{_locate(root, 'reindex')}")
        src, tgt = fibers[arr.source], fibers[arr.target]
        for x in tgt.elements():
            if x not in tab or tab[x] not in src.elements():
                raise ValidationError(f"reindexing along {arr.data} is not a map {arr.target} -> {arr.source} "
                                      f"at element {x!r}{_locate(root, 'reindex', arr.data)}")

    def reindex(f, x):
        if f.data == c.identity(f.source).data:
            return x
        return tables[f.data][x]

    P = Doctrine(c, fibers.__getitem__, reindex, name=c.name)
    rep = check_primary(P)
    if not rep:
        raise ValidationError(f"not a primary doctrine: {rep.counterexample}", rep)
    return P


# ---------------------------------------------------------------------------
# emitting


def _namer(things, show):
    names, used = {}, set()
    for t in things:
        base = show(t)
        name, k = base, 1
        while name in used:
            k += 1
            name = f"{base}#{k}"
        used.add(name)
        names[t] = name
    return names


def _show_object(o) -> str:
    return str(o).replace(" ", "")


def _covers(fib, els):
    out = []
    for x in els:
        for y in els:
            if x == y or not fib.leq(x, y):
                continue
            if not any(z not in (x, y) and fib.leq(x, z) and fib.leq(z, y) for z in els):
                out.append((x, y))
    return out


def to_document(P: Doctrine) -> dict:
    """The window of ``P`` as a document; products outside the window are dropped."""
    c: Category = P.base
    objs = c.objects()
    oname = _namer(objs, _show_object)
    ids = {a: f"id{oname[a]}" for a in objs}
    arrows = [f for a in objs for b in objs for f in c.hom(a, b) if f != c.identity(a)]
    aname = _namer(arrows, lambda f: f"f{arrows.index(f)}")
    for a in objs:
        aname[c.identity(a)] = ids[a]
    compose = []
    for f in arrows:
        for g in arrows:
            if g.source == f.target:
                compose.append([aname[g], aname[f], aname[c.compose(g, f)]])
    products = []
    for a in objs:
        for b in objs:
            if not c.has_product(a, b):
                continue
            p, p1, p2 = c.product(a, b)
            if p in oname:
                products.append([oname[a], oname[b], oname[p], aname[p1], aname[p2]])
    fibers, enames = {}, {}
    for a in objs:
        fib = P.fiber(a)
        els = list(fib.elements())
        en = _namer(els, str)
        enames[a] = en
        fibers[oname[a]] = {"elements": [en[x] for x in els],
                            "order": [[en[x], en[y]] for x, y in _covers(fib, els)],
                            "top": en[fib.top]}
    reindex = {}
    for f in arrows:
        reindex[aname[f]] = {enames[f.target][x]: enames[f.source][P(f, x)]
                             for x in P.fiber(f.target).elements()}
    return {
        "name": P.name,
        "base": {"objects": [oname[a] for a in objs],
                 "identities": {oname[a]: ids[a] for a in objs},
                 "arrows": {aname[f]: [oname[f.source], oname[f.target]] for f in arrows},
                 "compose": compose,
                 "terminal": oname.get(c.terminal),
                 "products": products},
        "fibers": fibers,
        "reindex": reindex,
    }


def emit(P: Doctrine) -> str:
    return yaml.safe_dump(to_document(P), sort_keys=False, default_flow_style=None)
