"""Computable base categories with chosen finite products.

A category here is *locally finite*: every hom-set can be listed.  Its
object enumerator is a finite *window*; universal properties are checked
against competitors drawn from that window, and every report says so.

Three concrete kinds are provided:

* :class:`FiniteCategory` -- explicit objects, named arrows and a composition
  table;
* :class:`FinSet` -- finite sets ``{0..n-1}`` with all functions, windowed by
  cardinality; products ``n*m`` are formed on demand with the projections
  ``k -> k // m`` and ``k -> k % m``;
* :class:`SetoidCategory` -- finite sets carrying an equivalence relation and
  the functions that respect it (arrows are *not* quotiented).
"""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterator, Sequence
from dataclasses import dataclass

from .report import MalformedInput, NotFound, NoWeakEvaluation, StructureReport


@dataclass(frozen=True)
class Arrow:
    source: Hashable
    target: Hashable
    data: Hashable

    def __repr__(self):
        return f"{self.data}:{self.source}->{self.target}"


class Category:
    name = "category"

    # -- structure every subclass provides ---------------------------------

    def objects(self) -> list:
        """The declared window."""
        raise NotImplementedError

    def hom(self, a, b) -> Sequence[Arrow]:
        raise NotImplementedError

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        """``g o f``."""
        raise NotImplementedError

    def identity(self, a) -> Arrow:
        raise NotImplementedError

    terminal: Hashable = None

    def to_terminal(self, a) -> Arrow:
        (arrow,) = self.hom(a, self.terminal)
        return arrow

    def product(self, a, b):
        """Chosen product ``(a x b, pr1, pr2)``."""
        raise NotImplementedError

    def has_product(self, a, b) -> bool:
        return True

    def pair(self, f: Arrow, g: Arrow) -> Arrow:
        """The chosen pairing ``<f, g>``; default searches the hom-set."""
        p, pr1, pr2 = self.product(f.target, g.target)
        hits = [h for h in self.hom(f.source, p)
                if self.compose(pr1, h) == f and self.compose(pr2, h) == g]
        if len(hits) != 1:
            raise MalformedInput(f"pairing of {f} and {g} is not unique: {hits}")
        return hits[0]

    # -- derived -----------------------------------------------------------

    def window_note(self) -> str:
        return f"{self.name} window={self.objects()}"

    def candidate_objects(self, at_least=None) -> list:
        """Objects searched when looking for a universal arrow.

        Defaults to the window; :class:`FinSet` widens it so that a subset of
        a product object can still find its domain.
        """
        return self.objects()

    def evaluation_candidates(self) -> list:
        """Window objects followed by binary products of window objects."""
        seen, out = set(), []
        for a in self.objects():
            if a not in seen:
                seen.add(a)
                out.append(a)
        prods = []
        for a, b in itertools.product(self.objects(), repeat=2):
            p = self.product(a, b)[0]
            if p not in seen:
                seen.add(p)
                prods.append(p)
        return out + sorted(prods, key=self.object_size)

    def object_size(self, a) -> int:
        return 0

    def arrows(self) -> Iterator[Arrow]:
        for a in self.objects():
            for b in self.objects():
                yield from self.hom(a, b)

    def diagonal(self, a) -> Arrow:
        ida = self.identity(a)
        return self.pair(ida, ida)

    def times(self, f: Arrow, g: Arrow) -> Arrow:
        """``f x g = <f o pr1, g o pr2>``."""
        _, pr1, pr2 = self.product(f.source, g.source)
        return self.pair(self.compose(f, pr1), self.compose(g, pr2))

    def twist(self, a, b) -> Arrow:
        _, pr1, pr2 = self.product(a, b)
        return self.pair(pr2, pr1)

    def product_of(self, objs: Sequence):
        """Left-nested product ``((A1 x A2) x A3) ...`` with its projections."""
        objs = list(objs)
        if not objs:
            return self.terminal, []
        obj, projs = objs[0], [self.identity(objs[0])]
        for nxt in objs[1:]:
            p, pr1, pr2 = self.product(obj, nxt)
            projs = [self.compose(q, pr1) for q in projs] + [pr2]
            obj = p
        return obj, projs

    def tuple_of(self, source, arrows: Sequence[Arrow]) -> Arrow:
        if not arrows:
            return self.to_terminal(source)
        out = arrows[0]
        for nxt in arrows[1:]:
            out = self.pair(out, nxt)
        return out

    def factorizations(self, g: Arrow, h: Arrow) -> Iterator[Arrow]:
        """Every ``k`` with ``h o k = g``."""
        for k in self.hom(g.source, h.source):
            if self.compose(h, k) == g:
                yield k

    def factors(self, g: Arrow, h: Arrow) -> bool:
        return next(self.factorizations(g, h), None) is not None

    def chosen_pullback(self, f: Arrow, g: Arrow):
        """A chosen pullback ``(V, p, q)`` of ``f`` and ``g``; default searches."""
        return weak_pullback(self, f, g, require_strict=True)

    def inverse(self, f: Arrow):
        for k in self.hom(f.target, f.source):
            if (self.compose(k, f) == self.identity(f.source)
                    and self.compose(f, k) == self.identity(f.target)):
                return k
        return None

    def is_iso(self, f: Arrow) -> bool:
        return self.inverse(f) is not None


# ---------------------------------------------------------------------------
# explicit finite categories


class FiniteCategory(Category):
    """Objects, named arrows and a composition table.

    ``arrows`` maps a name to ``(source, target)``; ``identities`` maps each
    object to its identity's name; ``table`` maps ``(g, f)`` to the name of
    ``g o f`` (identity compositions are implied).  ``products`` maps an
    object pair to ``(product, pr1 name, pr2 name)``.
    """

    def __init__(self, objects, arrows, identities, table, terminal=None, products=None,
                 name="finite"):
        self._objects = list(objects)
        self.name = name
        self._arrows = {n: Arrow(s, t, n) for n, (s, t) in arrows.items()}
        for obj in self._objects:
            idn = identities.get(obj)
            if idn is None:
                raise MalformedInput(f"object {obj!r} has no identity")
            self._arrows.setdefault(idn, Arrow(obj, obj, idn))
        self._ids = dict(identities)
        for n, arr in self._arrows.items():
            if arr.source not in self._objects or arr.target not in self._objects:
                raise MalformedInput(f"arrow {n!r} has a dangling endpoint")
        self._table = {}
        for (g, f), h in table.items():
            for nm in (g, f, h):
                if nm not in self._arrows:
                    raise MalformedInput(f"composition table names unknown arrow {nm!r}")
            self._table[(g, f)] = h
        self._homs: dict = {}
        for arr in self._arrows.values():
            self._homs.setdefault((arr.source, arr.target), []).append(arr)
        self.terminal = terminal
        self._products = {}
        for (a, b), (p, n1, n2) in (products or {}).items():
            self._products[(a, b)] = (p, self._arrows[n1], self._arrows[n2])
        self._pair_cache: dict = {}

    def objects(self):
        return list(self._objects)

    def arrow(self, name) -> Arrow:
        return self._arrows[name]

    def arrow_names(self):
        return list(self._arrows)

    def hom(self, a, b):
        return self._homs.get((a, b), [])

    def identity(self, a):
        return self._arrows[self._ids[a]]

    def compose(self, g, f):
        if f.target != g.source:
            raise MalformedInput(f"cannot compose {g} after {f}")
        if f.data == self._ids[f.source]:
            return g
        if g.data == self._ids[g.source]:
            return f
        try:
            return self._arrows[self._table[(g.data, f.data)]]
        except KeyError:
            raise MalformedInput(f"composition table misses {g.data} o {f.data}") from None

    def raw_composite(self, g, f):
        """Table entry without the implied identity laws (used by checks)."""
        if f.data == self._ids[f.source]:
            return g
        if g.data == self._ids[g.source]:
            return f
        name = self._table.get((g.data, f.data))
        return None if name is None else self._arrows[name]

    def product(self, a, b):
        try:
            return self._products[(a, b)]
        except KeyError:
            raise MalformedInput(f"no chosen product for {a!r} x {b!r}") from None

    def has_product(self, a, b) -> bool:
        return (a, b) in self._products

    def has_products(self) -> bool:
        return bool(self._products) and self.terminal is not None

    def pair(self, f, g):
        key = (f, g)
        if key not in self._pair_cache:
            self._pair_cache[key] = super().pair(f, g)
        return self._pair_cache[key]

    def object_size(self, a):
        return self._objects.index(a)

    def table_entries(self):
        return dict(self._table)

    def identities(self):
        return dict(self._ids)


def poset_category(elements, leq_pairs, name="poset") -> FiniteCategory:
    """The thin category of a finite poset (meets as products are not chosen)."""
    els = list(elements)
    rel = {(a, a) for a in els} | set(leq_pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    arrows = {f"{a}<={b}": (a, b) for a, b in rel}
    ids = {a: f"{a}<={a}" for a in els}
    table = {}
    for (a, b), (c, d) in itertools.product(rel, repeat=2):
        if b == c:
            table[(f"{c}<={d}", f"{a}<={b}")] = f"{a}<={d}"
    return FiniteCategory(els, arrows, ids, table, name=name)


# ---------------------------------------------------------------------------
# finite sets


class FinSet(Category):
    """Finite sets ``{0..n-1}``; an object is its cardinality.

    ``bound`` caps the window; ``sizes`` (optional) restricts which
    cardinalities the category contains at all -- products of allowed sizes
    are always admitted.
    """

    terminal = 1

    def __init__(self, bound: int, sizes=None):
        self.bound = bound
        self.sizes = None if sizes is None else sorted(set(sizes))
        self.name = f"FinSet(bound={bound})" if sizes is None else f"FinSet(sizes={self.sizes})"

    def objects(self):
        if self.sizes is None:
            return list(range(self.bound + 1))
        return [n for n in self.sizes if n <= self.bound]

    def admits(self, n) -> bool:
        if self.sizes is None:
            return True
        if n in self.sizes:
            return True
        return any(n == a * b for a in self.sizes for b in self.sizes if a > 1 and b > 1)

    def candidate_objects(self, at_least=None):
        top = self.bound if at_least is None else max(self.bound, self.object_size(at_least))
        return [n for n in range(top + 1) if self.admits(n)]

    def object_size(self, a):
        return a

    def hom(self, a, b):
        return [Arrow(a, b, t) for t in itertools.product(range(b), repeat=a)]

    def identity(self, a):
        return Arrow(a, a, tuple(range(a)))

    def compose(self, g, f):
        if f.target != g.source:
            raise MalformedInput(f"cannot compose {g} after {f}")
        gd = g.data
        return Arrow(f.source, g.target, tuple(gd[i] for i in f.data))

    def to_terminal(self, a):
        return Arrow(a, 1, (0,) * a)

    def product(self, a, b):
        p = a * b
        return (p, Arrow(p, a, tuple(k // b for k in range(p))),
                Arrow(p, b, tuple(k % b for k in range(p))))

    def pair(self, f, g):
        if f.source != g.source:
            raise MalformedInput(f"cannot pair {f} and {g}")
        b = g.target
        return Arrow(f.source, f.target * b, tuple(x * b + y for x, y in zip(f.data, g.data)))

    def factorizations(self, g, h):
        # pointwise: k(y) ranges over the h-preimages of g(y)
        pre = {}
        for x, v in enumerate(h.data):
            pre.setdefault(v, []).append(x)
        choices = [pre.get(v, []) for v in g.data]
        for data in itertools.product(*choices):
            yield Arrow(g.source, h.source, data)

    def factors(self, g, h):
        return set(g.data) <= set(h.data)

    def chosen_pullback(self, f, g):
        pts = [(a, b) for a in range(f.source) for b in range(g.source) if f.data[a] == g.data[b]]
        v = len(pts)
        return (v, Arrow(v, f.source, tuple(a for a, _ in pts)),
                Arrow(v, g.source, tuple(b for _, b in pts)))

    def inverse(self, f):
        if f.source != f.target or len(set(f.data)) != f.source:
            return None
        inv = [0] * f.source
        for i, v in enumerate(f.data):
            inv[v] = i
        return Arrow(f.target, f.source, tuple(inv))

    def is_injective(self, f) -> bool:
        return len(set(f.data)) == len(f.data)


def fn(source: int, target: int, *values) -> Arrow:
    """Shorthand for a FinSet arrow."""
    if len(values) == 1 and isinstance(values[0], (tuple, list)):
        values = tuple(values[0])
    if len(values) != source or any(not 0 <= v < target for v in values):
        raise MalformedInput(f"{values} is not a function {source}->{target}")
    return Arrow(source, target, tuple(values))


# ---------------------------------------------------------------------------
# setoids


def canonical_labels(labels) -> tuple:
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def setoid(labels) -> tuple:
    """A setoid object: ``(cardinality, block label per point)``."""
    labels = canonical_labels(labels)
    return (len(labels), labels)


def _set_partitions(n):
    if n == 0:
        yield ()
        return
    for rest in _set_partitions(n - 1):
        blocks = max(rest, default=-1) + 1
        for b in range(blocks + 1):
            yield rest + (b,)


class SetoidCategory(Category):
    """Finite setoids and relation-respecting functions."""

    def __init__(self, bound: int):
        self.bound = bound
        self.terminal = setoid((0,))
        self.name = f"Setoid(bound={bound})"

    def objects(self):
        return [setoid(p) for n in range(self.bound + 1) for p in _set_partitions(n)]

    def object_size(self, a):
        return a[0]

    def candidate_objects(self, at_least=None):
        top = self.bound if at_least is None else max(self.bound, at_least[0])
        return [setoid(p) for n in range(top + 1) for p in _set_partitions(n)]

    def respects(self, a, b, data) -> bool:
        la, lb = a[1], b[1]
        seen = {}
        for i, v in enumerate(data):
            if seen.setdefault(la[i], lb[v]) != lb[v]:
                return False
        return True

    def hom(self, a, b):
        return [Arrow(a, b, t) for t in itertools.product(range(b[0]), repeat=a[0])
                if self.respects(a, b, t)]

    def identity(self, a):
        return Arrow(a, a, tuple(range(a[0])))

    def compose(self, g, f):
        if f.target != g.source:
            raise MalformedInput(f"cannot compose {g} after {f}")
        return Arrow(f.source, g.target, tuple(g.data[i] for i in f.data))

    def product(self, a, b):
        n, m = a[0], b[0]
        p = setoid([(a[1][k // m], b[1][k % m]) for k in range(n * m)])
        return (p, Arrow(p, a, tuple(k // m for k in range(n * m))),
                Arrow(p, b, tuple(k % m for k in range(n * m))))

    def pair(self, f, g):
        p = self.product(f.target, g.target)[0]
        m = g.target[0]
        return Arrow(f.source, p, tuple(x * m + y for x, y in zip(f.data, g.data)))

    def factorizations(self, g, h):
        pre = {}
        for x, v in enumerate(h.data):
            pre.setdefault(v, []).append(x)
        for data in itertools.product(*[pre.get(v, []) for v in g.data]):
            if self.respects(g.source, h.source, data):
                yield Arrow(g.source, h.source, data)

    def chosen_pullback(self, f, g):
        pts = [(a, b) for a in range(f.source[0]) for b in range(g.source[0])
               if f.data[a] == g.data[b]]
        v = setoid([(f.source[1][a], g.source[1][b]) for a, b in pts])
        return (v, Arrow(v, f.source, tuple(a for a, _ in pts)),
                Arrow(v, g.source, tuple(b for _, b in pts)))

    def forgetful(self) -> "FunctorData":
        """The underlying-set functor into :class:`FinSet`."""
        return FunctorData(self, FinSet(self.bound), lambda a: a[0],
                           lambda f: Arrow(f.source[0], f.target[0], f.data), name="U")


# ---------------------------------------------------------------------------
# functors


class FunctorData:
    """Object map plus arrow map between computable categories."""

    def __init__(self, source: Category, target: Category, on_objects, on_arrows, name="F"):
        self.source = source
        self.target = target
        self._obj = on_objects if callable(on_objects) else on_objects.__getitem__
        self._arr = on_arrows if callable(on_arrows) else on_arrows.__getitem__
        self.name = name

    def obj(self, a):
        return self._obj(a)

    def arr(self, f: Arrow) -> Arrow:
        return self._arr(f)

    def __call__(self, x):
        return self.arr(x) if isinstance(x, Arrow) else self.obj(x)


def identity_functor(c: Category) -> FunctorData:
    return FunctorData(c, c, lambda a: a, lambda f: f, name="id")


def check_functor(F: FunctorData) -> StructureReport:
    name = "functor"
    c, d = F.source, F.target
    checked = 0
    objs = c.objects()
    for a in objs:
        checked += 1
        if F(c.identity(a)) != d.identity(F(a)):
            return StructureReport.fail(name, {"clause": "identity", "object": a}, checked)
    for a, b in itertools.product(objs, repeat=2):
        for f in c.hom(a, b):
            img = F(f)
            if img.source != F(a) or img.target != F(b):
                return StructureReport.fail(name, {"clause": "typing", "arrow": f}, checked)
            for e in objs:
                for g in c.hom(b, e):
                    checked += 1
                    if F(c.compose(g, f)) != d.compose(F(g), img):
                        return StructureReport.fail(
                            name, {"clause": "composition", "arrows": (g, f)}, checked)
    return StructureReport.ok(name, checked, scope=c.window_note())


def preserves_products(F: FunctorData) -> StructureReport:
    """``<F pr1, F pr2> : F(A x B) -> FA x FB`` is an iso and ``F 1`` is terminal."""
    name = "preserves products"
    c, d = F.source, F.target
    checked = 0
    t = F(c.terminal)
    for x in d.objects():
        checked += 1
        if len(d.hom(x, t)) != 1:
            return StructureReport.fail(name, {"clause": "terminal", "object": x}, checked)
    for a, b in itertools.product(c.objects(), repeat=2):
        checked += 1
        p, pr1, pr2 = c.product(a, b)
        comparison = d.pair(F(pr1), F(pr2))
        if not d.is_iso(comparison):
            return StructureReport.fail(name, {"clause": "product", "objects": (a, b)}, checked)
    return StructureReport.ok(name, checked, scope=c.window_note())


# ---------------------------------------------------------------------------
# laws and searches


def check_category(c: Category) -> StructureReport:
    """Identity, associativity, terminal and chosen-product laws on the window."""
    name = "category"
    objs = c.objects()
    if not objs:
        raise MalformedInput("empty window")
    checked = 0
    homs = {(a, b): list(c.hom(a, b)) for a in objs for b in objs}
    compose = c.raw_composite if isinstance(c, FiniteCategory) else c.compose
    for (a, b), fs in homs.items():
        for f in fs:
            if f.source != a or f.target != b:
                return StructureReport.fail(name, {"clause": "typing", "arrow": f}, checked)
            checked += 1
            if c.compose(c.identity(b), f) != f or c.compose(f, c.identity(a)) != f:
                return StructureReport.fail(name, {"clause": "identity", "arrow": f}, checked)
    for a, b, e in itertools.product(objs, repeat=3):
        for f in homs[(a, b)]:
            for g in homs[(b, e)]:
                gf = compose(g, f)
                if gf is None:
                    return StructureReport.fail(name, {"clause": "missing composite", "arrows": (g, f)}, checked)
                if gf.source != a or gf.target != e:
                    return StructureReport.fail(name, {"clause": "composite typing", "arrows": (g, f), "composite": gf}, checked)
                for z in objs:
                    for h in homs[(e, z)]:
                        checked += 1
                        if c.compose(h, gf) != c.compose(c.compose(h, g), f):
                            return StructureReport.fail(
                                name, {"clause": "associativity", "arrows": (h, g, f)}, checked)
    if isinstance(c, FiniteCategory) and not c.has_products():
        return StructureReport.ok(name, checked, scope=c.window_note(), products=False)
    for x in objs:
        checked += 1
        if len(c.hom(x, c.terminal)) != 1:
            return StructureReport.fail(name, {"clause": "terminal", "object": x}, checked)
    skipped = 0
    for a, b in itertools.product(objs, repeat=2):
        if not c.has_product(a, b):
            skipped += 1
            continue
        p, pr1, pr2 = c.product(a, b)
        checked += 1
        if c.pair(pr1, pr2) != c.identity(p):
            return StructureReport.fail(name, {"clause": "<pr1,pr2> = id", "objects": (a, b)}, checked)
        for x in objs:
            for f in homs[(x, a)]:
                for g in homs[(x, b)]:
                    checked += 1
                    hits = [h for h in c.hom(x, p)
                            if c.compose(pr1, h) == f and c.compose(pr2, h) == g]
                    if len(hits) != 1 or hits[0] != c.pair(f, g):
                        return StructureReport.fail(
                            name, {"clause": "product universality", "arrows": (f, g),
                                   "mediators": hits}, checked)
    return StructureReport.ok(name, checked, skipped, scope=c.window_note())


def is_mono(c: Category, f: Arrow) -> bool:
    """``f o g = f o h`` implies ``g = h`` for all ``g, h`` out of window objects."""
    for y in c.objects():
        seen = {}
        for g in c.hom(y, f.source):
            key = c.compose(f, g)
            if key in seen and seen[key] != g:
                return False
            seen[key] = g
    return True


def weak_pullback(c: Category, f: Arrow, g: Arrow, require_strict=False):
    """Search a (weak) pullback span ``(V, p, q)`` of ``f: A -> C``, ``g: B -> C``.

    Candidates ``V`` come from the window in order; the first span through
    which every commuting window span factors (uniquely if
    ``require_strict``) is returned.  Raises :class:`NotFound` otherwise,
    carrying the last non-uniqueness witness seen.
    """
    if f.target != g.target:
        raise MalformedInput("cospan legs must share a codomain")
    a, b = f.source, g.source
    competitors = []
    for t in c.objects():
        for t1 in c.hom(t, a):
            ft1 = c.compose(f, t1)
            for t2 in c.hom(t, b):
                if ft1 == c.compose(g, t2):
                    competitors.append((t1, t2))
    witness = None
    for v in c.candidate_objects():
        for p in c.hom(v, a):
            fp = c.compose(f, p)
            for q in c.hom(v, b):
                if fp != c.compose(g, q):
                    continue
                ok = True
                for t1, t2 in competitors:
                    mediators = [u for u in c.hom(t1.source, v)
                                 if c.compose(p, u) == t1 and c.compose(q, u) == t2]
                    if not mediators or (require_strict and len(mediators) > 1):
                        ok = False
                        if mediators:
                            witness = {"span": (v, p, q), "competitor": (t1, t2),
                                       "mediators": mediators}
                        break
                if ok:
                    return v, p, q
    raise NotFound(f"no {'strict ' if require_strict else ''}pullback of {f}, {g} in window",
                   witness=witness)


def find_weak_evaluation(c: Category, a, b, candidates=None):
    """First ``(W, w: W x A -> B)`` through which every ``X x A -> B`` factors.

    ``X`` ranges over the window; ``W`` over window objects and then binary
    products of window objects (formed on demand).
    """
    comps = []
    for x in c.objects():
        xa = c.product(x, a)[0]
        comps.extend((x, f) for f in c.hom(xa, b))
    for w_obj in (candidates if candidates is not None else c.evaluation_candidates()):
        wa, _, _ = c.product(w_obj, a)
        ida = c.identity(a)
        for w in c.hom(wa, b):
            if all(_factors_through_eval(c, w, w_obj, x, f, ida) for x, f in comps):
                return w_obj, w
    raise NoWeakEvaluation(f"no weak evaluation from {a!r} to {b!r} in window",
                           witness={"window": c.window_note()})


def _factors_through_eval(c, w, w_obj, x, f, ida):
    if isinstance(c, FinSet):
        # pointwise: each row f(x, -) must be a row of w
        n = ida.source
        rows = {w.data[e * n:(e + 1) * n] for e in range(w_obj)}
        return all(f.data[i * n:(i + 1) * n] in rows for i in range(x))
    for h in c.hom(x, w_obj):
        if c.compose(w, c.times(h, ida)) == f:
            return True
    return False
